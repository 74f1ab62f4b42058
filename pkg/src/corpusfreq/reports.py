"""Source-design matrices and the monospace coverage chart."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import CorpusError
from .ingest import FIELD_CODES, SampleCatalog, catalog_city_rows
from .stats import ArityMismatch, CoverageCurve, ReferenceCurve

CHART_WIDTH = 50  # one character per two percentage points


@dataclass(frozen=True)
class SourcesMatrix:
    """Samples per (city, field) cell versus the ideal of one per cell."""

    cities: tuple[str, ...]
    field_codes: tuple[str, ...]
    counts: dict[tuple[str, str], int]
    column_totals: tuple[int, ...]
    grand_total: int
    deficits: dict[tuple[str, str], int]


def sources_matrix(catalog: SampleCatalog) -> SourcesMatrix:
    cities = catalog_city_rows(catalog)
    counts = {
        (city, field): catalog.cell_counts.get((city, field), 0)
        for city in cities
        for field in FIELD_CODES
    }
    column_totals = tuple(
        sum(counts[(city, field)] for city in cities) for field in FIELD_CODES
    )
    deficits = {cell: max(0, 1 - n) for cell, n in counts.items()}
    return SourcesMatrix(
        cities=cities,
        field_codes=FIELD_CODES,
        counts=counts,
        column_totals=column_totals,
        grand_total=sum(column_totals),
        deficits=deficits,
    )


def _format_matrix(
    cities, field_codes, cells: dict[tuple[str, str], int]
) -> str:
    rows = [["CITY", *field_codes]]
    totals = [0] * len(field_codes)
    for city in cities:
        values = [cells[(city, field)] for field in field_codes]
        for i, n in enumerate(values):
            totals[i] += n
        rows.append([city, *map(str, values)])
    rows.append(["TOTAL", *map(str, totals)])
    return "\n".join("\t".join(row) for row in rows) + "\n"


def format_sources_matrix(matrix: SourcesMatrix) -> str:
    return _format_matrix(matrix.cities, matrix.field_codes, matrix.counts)


def format_deficit_matrix(matrix: SourcesMatrix) -> str:
    return _format_matrix(matrix.cities, matrix.field_codes, matrix.deficits)


def render_coverage_chart(curve: CoverageCurve, reference: ReferenceCurve) -> str:
    """Monospace bar chart: '#' bars for observed blocks, 'L' reference marks."""
    if len(curve.block_shares) != len(reference.block_shares):
        raise ArityMismatch(
            f"curve has {len(curve.block_shares)} blocks, "
            f"reference {reference.name!r} has {len(reference.block_shares)}"
        )
    lines = [
        "token share per rank block (% of corpus)",
        f"bars: observed   L: {reference.name}   scale: 1 char = 2%",
        "",
    ]
    for cutoff, observed, ref in zip(
        curve.cutoffs, curve.block_shares, reference.block_shares
    ):
        cells = [" "] * CHART_WIDTH
        bar = min(CHART_WIDTH, int(round(observed / 2.0)))
        for i in range(bar):
            cells[i] = "#"
        mark = min(CHART_WIDTH - 1, max(0, int(round(ref / 2.0))))
        cells[mark] = "L"
        lines.append(
            f"rank<={cutoff:>6} |{''.join(cells)}| {observed:6.2f} (ref {ref:.2f})"
        )
    lines.append("")
    lines.append(
        f"cumulative at rank {curve.cutoffs[-1]}: {curve.cumulative_shares[-1]:.2f}%"
    )
    return "\n".join(lines) + "\n"


def format_chart_data(curve: CoverageCurve, reference: ReferenceCurve) -> str:
    """Machine-readable companion to the chart; floats round-trip exactly."""
    if len(curve.block_shares) != len(reference.block_shares):
        raise ArityMismatch("curve and reference disagree on block count")
    lines = ["cutoff,observed_block,observed_cumulative,reference_block"]
    for cutoff, observed, cumulative, ref in zip(
        curve.cutoffs, curve.block_shares, curve.cumulative_shares, reference.block_shares
    ):
        lines.append(f"{cutoff},{observed!r},{cumulative!r},{ref!r}")
    return "\n".join(lines) + "\n"


def parse_chart_data(
    content: str,
) -> tuple[tuple[int, ...], tuple[float, ...], tuple[float, ...], tuple[float, ...]]:
    lines = [l for l in content.splitlines() if l.strip()]
    if lines[0] != "cutoff,observed_block,observed_cumulative,reference_block":
        raise CorpusError("unexpected chart data header")
    rows = [line.split(",") for line in lines[1:]]
    return (
        tuple(int(r[0]) for r in rows),
        tuple(float(r[1]) for r in rows),
        tuple(float(r[2]) for r in rows),
        tuple(float(r[3]) for r in rows),
    )
