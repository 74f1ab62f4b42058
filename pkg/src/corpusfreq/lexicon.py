"""Category tallies against a four-way lexicon and reference-list overlap."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .errors import CorpusError
from .frequency import RankedList
from .normalizer import TransliterationTable, normalize


class UnknownCategory(CorpusError):
    pass


class ConflictingDuplicate(CorpusError):
    pass


class EmptyReference(CorpusError):
    pass


CATEGORIES = ("OPERATOR", "GENERAL", "DRAWABLE", "QUALITIES")


@dataclass(frozen=True)
class CategoryLexicon:
    entries: dict[str, str]

    def __len__(self):
        return len(self.entries)


def parse_lexicon(content: str, table: TransliterationTable | None = None) -> CategoryLexicon:
    """Load tab-separated lemma/category rows; lemmas are canonicalized."""
    entries: dict[str, str] = {}
    for lineno, line in enumerate(content.splitlines(), 1):
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.rstrip("\n").split("\t")
        if len(parts) != 2:
            raise CorpusError(f"lexicon line {lineno}: expected 2 tab-separated fields")
        lemma, category = normalize(parts[0], table).strip(), parts[1]
        if category not in CATEGORIES:
            raise UnknownCategory(
                f"line {lineno}: {category!r} is not one of {'/'.join(CATEGORIES)}"
            )
        if lemma in entries and entries[lemma] != category:
            raise ConflictingDuplicate(
                f"line {lineno}: {lemma!r} already listed as {entries[lemma]}"
            )
        entries[lemma] = category
    return CategoryLexicon(entries=entries)


def load_lexicon(path, table: TransliterationTable | None = None) -> CategoryLexicon:
    with open(path, encoding="utf-8") as handle:
        return parse_lexicon(handle.read(), table)


@dataclass(frozen=True)
class CategoryTally:
    counts: dict[str, int]
    uncategorized: tuple[str, ...]

    def total(self) -> int:
        return sum(self.counts.values()) + len(self.uncategorized)


def categorize(significant: Iterable[str], lexicon: CategoryLexicon) -> CategoryTally:
    """Tally lemmas into the four categories.

    Explicit lexicon entries always win; an unlisted lemma ending in MENTE
    counts as QUALITIES (the adverb suffix); everything else is reported
    uncategorized.
    """
    counts = {category: 0 for category in CATEGORIES}
    uncategorized = []
    for lemma in sorted(set(significant)):
        category = lexicon.entries.get(lemma)
        if category is None and lemma.endswith("MENTE"):
            category = "QUALITIES"
        if category is None:
            uncategorized.append(lemma)
        else:
            counts[category] += 1
    return CategoryTally(counts=counts, uncategorized=tuple(uncategorized))


@dataclass(frozen=True)
class ReferenceWordList:
    """Ordered canonical word list; duplicates collapsed at load time."""

    name: str
    words: tuple[str, ...]

    def __len__(self):
        return len(self.words)


def parse_reference_list(
    content: str, name: str = "reference", table: TransliterationTable | None = None
) -> ReferenceWordList:
    """One word per line; words are canonicalized so accents cannot mismatch."""
    seen = []
    have = set()
    for line in content.splitlines():
        word = normalize(line.strip(), table).strip()
        if not word or line.startswith("#"):
            continue
        if word not in have:
            have.add(word)
            seen.append(word)
    return ReferenceWordList(name=name, words=tuple(seen))


def load_reference_list(path, table: TransliterationTable | None = None) -> ReferenceWordList:
    with open(path, encoding="utf-8") as handle:
        return parse_reference_list(handle.read(), name=str(path), table=table)


@dataclass(frozen=True)
class OverlapReport:
    reference_name: str
    reference_size: int
    top_n: int
    matched: int
    percent: float


def overlap(reference: ReferenceWordList, ranked: RankedList, top_n: int) -> OverlapReport:
    """How much of the reference list appears among the top-N ranked lemmas."""
    if not reference.words:
        raise EmptyReference(f"reference list {reference.name!r} is empty")
    if top_n < 1:
        raise ValueError("top_n must be at least 1")
    top = {entry.lemma for entry in ranked.entries[:top_n]}
    matched = sum(1 for word in reference.words if word in top)
    return OverlapReport(
        reference_name=reference.name,
        reference_size=len(reference.words),
        top_n=top_n,
        matched=matched,
        percent=matched * 100.0 / len(reference.words),
    )


def format_overlap_report(report: OverlapReport) -> str:
    lines = [
        f"reference\t{report.reference_name}",
        f"reference_size\t{report.reference_size}",
        f"top_n\t{report.top_n}",
        f"matched\t{report.matched}",
        f"overlap_pct\t{report.percent!r}",
    ]
    return "\n".join(lines) + "\n"


def parse_overlap_report(content: str) -> OverlapReport:
    values = dict(line.split("\t", 1) for line in content.splitlines() if line.strip())
    return OverlapReport(
        reference_name=values["reference"],
        reference_size=int(values["reference_size"]),
        top_n=int(values["top_n"]),
        matched=int(values["matched"]),
        percent=float(values["overlap_pct"]),
    )
