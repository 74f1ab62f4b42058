"""Coverage curves, Zipf constancy diagnostics, significance and dispersion."""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from typing import Iterable, Sequence

import numpy as np

from .errors import CorpusError
from .frequency import FrequencyTable, RankedList, flags_column
from .ingest import FIELD_CODES
from .lemmatizer import Token


class EmptyCorpus(CorpusError):
    pass


class ArityMismatch(CorpusError):
    pass


DEFAULT_CUTOFFS = (1000, 2000, 3000, 4000)


@dataclass(frozen=True)
class CoverageCurve:
    """Share of corpus tokens contributed by successive rank blocks."""

    cutoffs: tuple[int, ...]
    block_shares: tuple[float, ...]
    cumulative_shares: tuple[float, ...]
    block_tokens: tuple[float, ...]
    corpus_total: int

    @property
    def covered_tokens(self) -> float:
        return float(sum(self.block_tokens))


@dataclass(frozen=True)
class ReferenceCurve:
    name: str
    block_shares: tuple[float, ...]


DEFAULT_REFERENCE = ReferenceCurve("lewandowski", (80.0, 10.0, 3.0, 2.0))


def _check_cutoffs(cutoffs: Sequence[int]) -> tuple[int, ...]:
    cutoffs = tuple(int(c) for c in cutoffs)
    if not cutoffs or any(b <= a for a, b in zip(cutoffs, cutoffs[1:])) or cutoffs[0] < 1:
        raise ValueError("cutoffs must be positive and strictly ascending")
    return cutoffs


def coverage(ranked: RankedList, cutoffs: Sequence[int] = DEFAULT_CUTOFFS) -> CoverageCurve:
    """Block and cumulative token shares at the given rank cutoffs."""
    cutoffs = _check_cutoffs(cutoffs)
    if ranked.corpus_total <= 0:
        raise EmptyCorpus("coverage of an empty corpus is undefined")
    counts = np.array([e.count for e in ranked.entries], dtype=np.float64)
    cumsum = np.concatenate(([0.0], np.cumsum(counts)))
    cum_tokens = [float(cumsum[min(c, len(counts))]) for c in cutoffs]
    block_tokens = tuple(
        b - a for a, b in zip([0.0, *cum_tokens[:-1]], cum_tokens)
    )
    n = ranked.corpus_total
    return CoverageCurve(
        cutoffs=cutoffs,
        block_shares=tuple(t * 100.0 / n for t in block_tokens),
        cumulative_shares=tuple(t * 100.0 / n for t in cum_tokens),
        block_tokens=block_tokens,
        corpus_total=n,
    )


def curve_from_block_shares(
    block_shares: Sequence[float],
    corpus_total: int,
    cutoffs: Sequence[int] = DEFAULT_CUTOFFS,
) -> CoverageCurve:
    """Build a curve from raw percentage blocks, deriving tokens at the given N."""
    cutoffs = _check_cutoffs(cutoffs)
    if len(block_shares) != len(cutoffs):
        raise ArityMismatch(
            f"{len(block_shares)} block shares for {len(cutoffs)} cutoffs"
        )
    if corpus_total <= 0:
        raise EmptyCorpus("corpus_total must be positive")
    shares = tuple(float(s) for s in block_shares)
    cumulative = tuple(np.cumsum(shares).tolist())
    return CoverageCurve(
        cutoffs=cutoffs,
        block_shares=shares,
        cumulative_shares=cumulative,
        block_tokens=tuple(s * corpus_total / 100.0 for s in shares),
        corpus_total=corpus_total,
    )


def compare_reference(curve: CoverageCurve, reference: ReferenceCurve) -> tuple[float, ...]:
    """Signed per-block deviations, observed minus reference."""
    if len(curve.block_shares) != len(reference.block_shares):
        raise ArityMismatch(
            f"curve has {len(curve.block_shares)} blocks, "
            f"reference {reference.name!r} has {len(reference.block_shares)}"
        )
    return tuple(o - r for o, r in zip(curve.block_shares, reference.block_shares))


@dataclass(frozen=True)
class ZipfReport:
    """Per-rank constants c_n = n * Pn and their spread statistics."""

    constants: tuple[float, ...]
    geometric_mean: float
    cv: float
    top_k: int
    corpus_total: float


def zipf_constants(ranked: RankedList, top_k: int) -> ZipfReport:
    """c_n = n * count_n / N for the first top_k ranks, with geomean and CV."""
    if ranked.corpus_total <= 0:
        raise EmptyCorpus("Zipf constants of an empty corpus are undefined")
    if not 1 <= top_k <= len(ranked.entries):
        raise ValueError(
            f"top_k must lie in [1, {len(ranked.entries)}], got {top_k}"
        )
    counts = np.array([e.count for e in ranked.entries[:top_k]], dtype=np.float64)
    ranks = np.arange(1, top_k + 1, dtype=np.float64)
    constants = ranks * counts / float(ranked.corpus_total)
    positive = constants[constants > 0]
    geometric_mean = float(np.exp(np.mean(np.log(positive)))) if positive.size else 0.0
    mean = float(constants.mean())
    cv = float(constants.std() / mean) if mean > 0 else 0.0
    return ZipfReport(
        constants=tuple(constants.tolist()),
        geometric_mean=geometric_mean,
        cv=cv,
        top_k=top_k,
        corpus_total=float(ranked.corpus_total),
    )


@dataclass(frozen=True)
class SignificanceConfig:
    tau: float = 50.0
    skew_max_fields: int = 2
    exclude_skewed: bool = True

    def __post_init__(self):
        if self.tau <= 0:
            raise ValueError("tau must be positive")
        if not 1 <= self.skew_max_fields <= len(FIELD_CODES):
            raise ValueError("skew_max_fields must lie in [1, 15]")


def significance_threshold(config: SignificanceConfig, corpus_total: int) -> int:
    """Minimum absolute count for tau occurrences per million, rounded up."""
    return math.ceil(round(config.tau * corpus_total / 1_000_000, 9))


@dataclass(frozen=True)
class SignificanceResult:
    lemmas: frozenset[str]
    covered_tokens: int
    threshold_count: int
    candidates: frozenset[str]
    skew_flagged: frozenset[str]


def significance_set(
    ranked: RankedList,
    table: FrequencyTable,
    config: SignificanceConfig = SignificanceConfig(),
) -> SignificanceResult:
    """Lemmas at or above the relative-frequency threshold, minus skewed ones.

    The returned covered_tokens is the summed count of the included lemmas
    only; candidates and skew_flagged expose the pre-exclusion sets.
    """
    threshold = significance_threshold(config, ranked.corpus_total)
    candidate_counts = {
        e.lemma: e.count for e in ranked.entries if e.count >= threshold
    }
    flagged = frozenset(
        lemma
        for lemma in candidate_counts
        if table.field_spread(lemma) <= config.skew_max_fields
    )
    included = (
        frozenset(candidate_counts) - flagged
        if config.exclude_skewed
        else frozenset(candidate_counts)
    )
    covered = sum(candidate_counts[lemma] for lemma in included)
    return SignificanceResult(
        lemmas=included,
        covered_tokens=covered,
        threshold_count=threshold,
        candidates=frozenset(candidate_counts),
        skew_flagged=flagged,
    )


@dataclass(frozen=True)
class DispersionReport:
    """Field presence F and top-2-field concentration per lemma."""

    field_presence: dict[str, int] = dc_field(default_factory=dict)
    concentration: dict[str, float] = dc_field(default_factory=dict)


def dispersion(table: FrequencyTable) -> DispersionReport:
    presence: dict[str, int] = {}
    concentration: dict[str, float] = {}
    for lemma, vec in table.entries.items():
        presence[lemma] = int(np.count_nonzero(vec))
        total = int(vec.sum())
        if total > 0:
            top2 = np.sort(vec)[-2:]
            concentration[lemma] = float(top2.sum()) / total
        else:
            concentration[lemma] = 0.0
    return DispersionReport(field_presence=presence, concentration=concentration)


def skew_flags(
    report: DispersionReport,
    significant: frozenset[str] | set[str],
    config: SignificanceConfig = SignificanceConfig(),
) -> frozenset[str]:
    """Significant lemmas concentrated in at most skew_max_fields fields."""
    return frozenset(
        lemma
        for lemma in significant
        if report.field_presence.get(lemma, 0) <= config.skew_max_fields
    )


def foreign_share(source: FrequencyTable | Iterable[Token]) -> dict[str, float]:
    """Percentage of corpus tokens carrying each FOREIGN language tag."""
    if isinstance(source, FrequencyTable):
        totals = source.foreign_tokens
        n = source.corpus_total
    else:
        tokens = list(source)
        totals: dict[str, int] = {}
        for tok in tokens:
            tag = tok.foreign_tag
            if tag is not None:
                totals[tag] = totals.get(tag, 0) + 1
        n = len(tokens)
    if n == 0:
        return {}
    return {lang: count * 100.0 / n for lang, count in sorted(totals.items())}


def sic_shares(table: FrequencyTable) -> dict[str, float]:
    """Both readings of the SIC share: token-based and type-based percentages."""
    sic_types = sum(1 for flags in table.lemma_flags.values() if "SIC" in flags)
    return {
        "sic_tokens": float(table.sic_tokens),
        "sic_token_pct": (
            table.sic_tokens * 100.0 / table.corpus_total if table.corpus_total else 0.0
        ),
        "sic_types": float(sic_types),
        "sic_type_pct": (
            sic_types * 100.0 / len(table.entries) if table.entries else 0.0
        ),
    }


# ---------------------------------------------------------------------------
# report files

def format_coverage_csv(curve: CoverageCurve) -> str:
    lines = [
        f"# corpus_total={curve.corpus_total}",
        "cutoff,block_share,cumulative_share,block_tokens",
    ]
    for cutoff, share, cum, tokens in zip(
        curve.cutoffs, curve.block_shares, curve.cumulative_shares, curve.block_tokens
    ):
        lines.append(f"{cutoff},{share!r},{cum!r},{tokens!r}")
    return "\n".join(lines) + "\n"


def parse_coverage_csv(content: str) -> CoverageCurve:
    lines = content.splitlines()
    meta = {}
    rows = []
    for line in lines:
        if line.startswith("# "):
            key, _, value = line[2:].partition("=")
            meta[key] = value
        elif line and not line.startswith("cutoff,"):
            rows.append(line.split(","))
    return CoverageCurve(
        cutoffs=tuple(int(r[0]) for r in rows),
        block_shares=tuple(float(r[1]) for r in rows),
        cumulative_shares=tuple(float(r[2]) for r in rows),
        block_tokens=tuple(float(r[3]) for r in rows),
        corpus_total=int(meta["corpus_total"]),
    )


def format_zipf_csv(report: ZipfReport) -> str:
    lines = [
        f"# top_k={report.top_k}",
        f"# corpus_total={report.corpus_total!r}",
        f"# geometric_mean={report.geometric_mean!r}",
        f"# cv={report.cv!r}",
        "rank,constant",
    ]
    for n, c in enumerate(report.constants, 1):
        lines.append(f"{n},{c!r}")
    return "\n".join(lines) + "\n"


def parse_zipf_csv(content: str) -> ZipfReport:
    meta = {}
    constants = []
    for line in content.splitlines():
        if line.startswith("# "):
            key, _, value = line[2:].partition("=")
            meta[key] = value
        elif line and not line.startswith("rank,"):
            constants.append(float(line.split(",")[1]))
    return ZipfReport(
        constants=tuple(constants),
        geometric_mean=float(meta["geometric_mean"]),
        cv=float(meta["cv"]),
        top_k=int(meta["top_k"]),
        corpus_total=float(meta["corpus_total"]),
    )


DISPERSION_COLUMNS = ("lemma", "count", "field_spread", "top2_concentration")


def format_dispersion_tsv(report: DispersionReport, table: FrequencyTable) -> str:
    lines = ["\t".join(DISPERSION_COLUMNS)]
    for lemma in sorted(report.field_presence):
        lines.append(
            "\t".join(
                (
                    lemma,
                    str(table.lemma_total(lemma)),
                    str(report.field_presence[lemma]),
                    repr(report.concentration[lemma]),
                )
            )
        )
    return "\n".join(lines) + "\n"


def parse_dispersion_tsv(content: str) -> DispersionReport:
    lines = content.splitlines()
    if not lines or lines[0].split("\t") != list(DISPERSION_COLUMNS):
        raise CorpusError("unexpected dispersion header")
    presence = {}
    concentration = {}
    for line in lines[1:]:
        if not line.strip():
            continue
        lemma, _count, spread, conc = line.split("\t")
        presence[lemma] = int(spread)
        concentration[lemma] = float(conc)
    return DispersionReport(field_presence=presence, concentration=concentration)


def format_keyvalue(values: dict[str, object]) -> str:
    lines = [f"{key}\t{value!r}" if isinstance(value, float) else f"{key}\t{value}"
             for key, value in values.items()]
    return "\n".join(lines) + "\n"


def parse_keyvalue(content: str) -> dict[str, str]:
    return dict(
        line.split("\t", 1) for line in content.splitlines() if line.strip()
    )


SIGNIFICANCE_COLUMNS = ("rank", "lemma", "count", "per_million", "field_spread", "flags", "skew")


def format_significance_listing(
    result: SignificanceResult, ranked: RankedList, table: FrequencyTable
) -> str:
    """Rank-listing rows for every threshold candidate, with a SKEW column."""
    lines = ["\t".join(SIGNIFICANCE_COLUMNS)]
    for entry in ranked.entries:
        if entry.lemma not in result.candidates:
            continue
        lines.append(
            "\t".join(
                (
                    str(entry.rank),
                    entry.lemma,
                    str(entry.count),
                    f"{entry.per_million:.4f}",
                    str(table.field_spread(entry.lemma)),
                    flags_column(table, entry.lemma),
                    "SKEW" if entry.lemma in result.skew_flagged else "-",
                )
            )
        )
    return "\n".join(lines) + "\n"


def parse_significance_listing(content: str) -> list[dict]:
    lines = content.splitlines()
    if not lines or lines[0].split("\t") != list(SIGNIFICANCE_COLUMNS):
        raise CorpusError("unexpected significance listing header")
    rows = []
    for line in lines[1:]:
        if not line.strip():
            continue
        rank_s, lemma, count_s, pm_s, spread_s, flags, skew = line.split("\t")
        rows.append(
            {
                "rank": int(rank_s),
                "lemma": lemma,
                "count": int(count_s),
                "per_million": float(pm_s),
                "field_spread": int(spread_s),
                "flags": frozenset() if flags == "-" else frozenset(flags.split(";")),
                "skew": skew == "SKEW",
            }
        )
    return rows
