"""Per-field frequency tables, value-like merging, deterministic rank listings."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import CorpusError
from .ingest import FIELD_CODES, FIELD_INDEX, UnknownFieldCode
from .lemmatizer import Token

N_FIELDS = len(FIELD_CODES)


class FrequencyTable:
    """lemma -> 15-dimensional field count vector, plus annotation tallies.

    A lemma's total is the sum of its vector, and corpus_total is the sum of
    all lemma totals; both hold by construction for tables built through
    count_sample and merge.
    """

    __slots__ = ("entries", "corpus_total", "sic_tokens", "foreign_tokens", "lemma_flags")

    def __init__(self):
        self.entries: dict[str, np.ndarray] = {}
        self.corpus_total: int = 0
        self.sic_tokens: int = 0
        self.foreign_tokens: Counter[str] = Counter()
        self.lemma_flags: dict[str, frozenset[str]] = {}

    def lemma_total(self, lemma: str) -> int:
        vec = self.entries.get(lemma)
        return int(vec.sum()) if vec is not None else 0

    def field_count(self, lemma: str, field: str) -> int:
        vec = self.entries.get(lemma)
        return int(vec[FIELD_INDEX[field]]) if vec is not None else 0

    def field_spread(self, lemma: str) -> int:
        vec = self.entries.get(lemma)
        return int(np.count_nonzero(vec)) if vec is not None else 0

    def distinct_lemmas(self) -> int:
        return len(self.entries)

    def check_consistency(self) -> None:
        total = sum(int(v.sum()) for v in self.entries.values())
        if total != self.corpus_total:
            raise CorpusError(
                f"corpus_total {self.corpus_total} != sum of entries {total}"
            )
        if any((v < 0).any() or v.shape != (N_FIELDS,) for v in self.entries.values()):
            raise CorpusError("negative count or wrong field arity in table")

    def __eq__(self, other):
        if not isinstance(other, FrequencyTable):
            return NotImplemented
        return (
            self.corpus_total == other.corpus_total
            and self.entries.keys() == other.entries.keys()
            and all(np.array_equal(v, other.entries[k]) for k, v in self.entries.items())
            and self.sic_tokens == other.sic_tokens
            and self.foreign_tokens == other.foreign_tokens
            and self.lemma_flags == other.lemma_flags
        )

    def __repr__(self):
        return f"FrequencyTable({len(self.entries)} lemmas, N={self.corpus_total})"


def count_sample(tokens: Sequence[Token], field: str) -> FrequencyTable:
    """Tally one sample's tokens into the given field's column."""
    if field not in FIELD_INDEX:
        raise UnknownFieldCode(f"field code {field!r} is not one of {'/'.join(FIELD_CODES)}")
    idx = FIELD_INDEX[field]
    table = FrequencyTable()
    counts = Counter(tok.lemma for tok in tokens)
    for lemma, n in counts.items():
        vec = np.zeros(N_FIELDS, dtype=np.int64)
        vec[idx] = n
        table.entries[lemma] = vec
    table.corpus_total = len(tokens)
    for tok in tokens:
        if tok.flags:
            if tok.is_sic:
                table.sic_tokens += 1
            tag = tok.foreign_tag
            if tag is not None:
                table.foreign_tokens[tag] += 1
            table.lemma_flags[tok.lemma] = (
                table.lemma_flags.get(tok.lemma, frozenset()) | tok.flags
            )
    return table


def _merge_into(acc: FrequencyTable, other: FrequencyTable) -> None:
    for lemma, vec in other.entries.items():
        if len(vec) != N_FIELDS:
            raise CorpusError(f"lemma {lemma!r} carries a {len(vec)}-field vector")
        existing = acc.entries.get(lemma)
        if existing is None:
            acc.entries[lemma] = vec.copy()
        else:
            existing += vec
    acc.corpus_total += other.corpus_total
    acc.sic_tokens += other.sic_tokens
    acc.foreign_tokens += other.foreign_tokens
    for lemma, flags in other.lemma_flags.items():
        acc.lemma_flags[lemma] = acc.lemma_flags.get(lemma, frozenset()) | flags


def merge(a: FrequencyTable, b: FrequencyTable) -> FrequencyTable:
    """Pointwise sum of two tables; commutative and associative."""
    out = FrequencyTable()
    _merge_into(out, a)
    _merge_into(out, b)
    return out


def merge_tables(tables: Iterable[FrequencyTable]) -> FrequencyTable:
    out = FrequencyTable()
    for table in tables:
        _merge_into(out, table)
    return out


@dataclass(frozen=True, slots=True)
class RankEntry:
    rank: int
    lemma: str
    count: int
    per_million: float


@dataclass(frozen=True)
class RankedList:
    entries: tuple[RankEntry, ...]
    corpus_total: int

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)


def rank(table: FrequencyTable) -> RankedList:
    """Order lemmas by count descending, ties by lemma ascending."""
    totals = [(lemma, int(vec.sum())) for lemma, vec in table.entries.items()]
    totals.sort(key=lambda item: (-item[1], item[0]))
    n = table.corpus_total
    entries = tuple(
        RankEntry(i, lemma, count, count * 1_000_000 / n if n else 0.0)
        for i, (lemma, count) in enumerate(totals, 1)
    )
    return RankedList(entries=entries, corpus_total=n)


def flags_column(table: FrequencyTable, lemma: str) -> str:
    flags = table.lemma_flags.get(lemma)
    return ";".join(sorted(flags)) if flags else "-"


LISTING_COLUMNS = ("rank", "lemma", "count", "per_million", "field_spread", "flags")


def format_listing(table: FrequencyTable, alphabetical: bool = False) -> str:
    """Rank or alphabetic listing with spread and annotation columns."""
    ranked = rank(table)
    rows = list(ranked.entries)
    if alphabetical:
        rows.sort(key=lambda e: e.lemma)
    lines = ["\t".join(LISTING_COLUMNS)]
    for entry in rows:
        lines.append(
            "\t".join(
                (
                    str(entry.rank),
                    entry.lemma,
                    str(entry.count),
                    f"{entry.per_million:.4f}",
                    str(table.field_spread(entry.lemma)),
                    flags_column(table, entry.lemma),
                )
            )
        )
    return "\n".join(lines) + "\n"


def parse_listing(content: str) -> list[dict]:
    lines = content.splitlines()
    if not lines or lines[0].split("\t") != list(LISTING_COLUMNS):
        raise CorpusError("unexpected listing header")
    rows = []
    for line in lines[1:]:
        if not line.strip():
            continue
        rank_s, lemma, count_s, pm_s, spread_s, flags = line.split("\t")
        rows.append(
            {
                "rank": int(rank_s),
                "lemma": lemma,
                "count": int(count_s),
                "per_million": float(pm_s),
                "field_spread": int(spread_s),
                "flags": frozenset() if flags == "-" else frozenset(flags.split(";")),
            }
        )
    return rows


def write_listing(table: FrequencyTable, path, alphabetical: bool = False) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(format_listing(table, alphabetical=alphabetical))


def read_listing(path) -> list[dict]:
    with open(path, encoding="utf-8") as handle:
        return parse_listing(handle.read())
