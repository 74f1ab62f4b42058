"""Batch driver for the whole pipeline.

Subcommands: ingest, analyze, significance, categories, compare, report.
Exit status 0 on success, 1 when input fails validation, 2 on usage errors.
Outputs are staged in a temporary directory and renamed into place only
after every file of a run has been written, so a failed run never leaves
partial results behind.
"""

from __future__ import annotations

import argparse
import os
import shutil
import sys
import tempfile
from concurrent.futures import ProcessPoolExecutor
from contextlib import contextmanager
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .errors import CorpusError
from .frequency import FrequencyTable, count_sample, format_listing, merge_tables, rank
from .ingest import (
    DEFAULT_CITIES,
    DEFAULT_WINDOW,
    RawSample,
    build_catalog,
    format_catalog_matrix,
    parse_sample,
    validate_sample_size,
    validate_city_code,
)
from .lemmatizer import DEFAULT_FOREIGN_TAGS, DEFAULT_RULES, RuleSet, apply_rules, load_rules, tokenize
from .lexicon import format_overlap_report, load_lexicon, load_reference_list, overlap
from .normalizer import DEFAULT_TABLE, TransliterationTable, load_table, normalize
from .reports import (
    format_chart_data,
    format_deficit_matrix,
    format_sources_matrix,
    render_coverage_chart,
    sources_matrix,
)
from .stats import (
    DEFAULT_CUTOFFS,
    DEFAULT_REFERENCE,
    ReferenceCurve,
    SignificanceConfig,
    coverage,
    dispersion,
    foreign_share,
    format_coverage_csv,
    format_dispersion_tsv,
    format_keyvalue,
    format_significance_listing,
    format_zipf_csv,
    sic_shares,
    significance_set,
    zipf_constants,
)

SUBCOMMANDS = ("ingest", "analyze", "significance", "categories", "compare", "report")


@dataclass
class RunConfig:
    """Everything a run needs; CLI flags mirror these fields."""

    inputs: tuple[str, ...]
    out_dir: str = "corpusfreq-out"
    threshold_per_million: float = 50.0
    cutoffs: tuple[int, ...] = DEFAULT_CUTOFFS
    reference_curve: tuple[float, ...] = DEFAULT_REFERENCE.block_shares
    reference_name: str = DEFAULT_REFERENCE.name
    skew_max_fields: int = 2
    include_skewed: bool = False
    size_tolerance: float = 0.02
    table_path: str | None = None
    rules_path: str | None = None
    lexicon_path: str | None = None
    reference_list_path: str | None = None
    top_n: int = 2000
    zipf_top_k: int = 1000
    jobs: int = 1
    window: tuple[int, int] = DEFAULT_WINDOW
    register_cities: tuple[str, ...] = ()

    def cities(self) -> tuple[str, ...]:
        extras = tuple(validate_city_code(c) for c in self.register_cities)
        return DEFAULT_CITIES + tuple(c for c in extras if c not in DEFAULT_CITIES)

    def transliteration(self) -> TransliterationTable:
        return load_table(self.table_path) if self.table_path else DEFAULT_TABLE

    def rules(self) -> RuleSet:
        return load_rules(self.rules_path) if self.rules_path else DEFAULT_RULES

    def significance(self) -> SignificanceConfig:
        return SignificanceConfig(
            tau=self.threshold_per_million,
            skew_max_fields=self.skew_max_fields,
            exclude_skewed=not self.include_skewed,
        )

    def reference(self) -> ReferenceCurve:
        return ReferenceCurve(self.reference_name, self.reference_curve)


def sample_paths(inputs: Sequence[str]) -> list[Path]:
    """Expand files and directories into a deterministic sample file list."""
    paths: list[Path] = []
    for item in inputs:
        p = Path(item)
        if p.is_dir():
            paths.extend(q for q in p.rglob("*.txt") if q.is_file())
        elif p.is_file():
            paths.append(p)
        else:
            raise CorpusError(f"input path {item!r} does not exist")
    paths = sorted(set(paths), key=str)
    if not paths:
        raise CorpusError("no sample files found under the given inputs")
    return paths


def _load_sample(path: Path, config: RunConfig) -> RawSample:
    try:
        return parse_sample(
            path.read_bytes(), cities=config.cities(), window=config.window
        )
    except CorpusError as err:
        raise type(err)(f"{path}: {err}") from None


def _count_one(args) -> tuple[str, str, FrequencyTable]:
    """Worker: one sample file to (sample id, field, frequency table)."""
    path_str, table, rules, foreign_tags, cities, window = args
    path = Path(path_str)
    try:
        sample = parse_sample(path.read_bytes(), cities=cities, window=window)
        canonical = normalize(sample.body, table)
        tokens = apply_rules(tokenize(canonical, foreign_tags), rules)
    except CorpusError as err:
        raise type(err)(f"{path}: {err}") from None
    return sample.metadata.id, sample.metadata.field, count_sample(tokens, sample.metadata.field)


def build_corpus_table(paths: list[Path], config: RunConfig) -> FrequencyTable:
    """Tokenize and count every sample, optionally across processes.

    Results are merged in sorted-path order, so parallel and serial runs
    produce identical tables.
    """
    table = config.transliteration()
    rules = config.rules()
    args = [
        (str(p), table, rules, DEFAULT_FOREIGN_TAGS, config.cities(), config.window)
        for p in paths
    ]
    if config.jobs <= 1:
        results = map(_count_one, args)
        return merge_tables(t for _, _, t in results)
    with ProcessPoolExecutor(max_workers=config.jobs) as pool:
        chunk = max(1, len(args) // (config.jobs * 4))
        results = pool.map(_count_one, args, chunksize=chunk)
        return merge_tables(t for _, _, t in results)


@contextmanager
def staged_outputs(out_dir: str | Path):
    """Write into a stage directory; publish files only if the block succeeds."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    stage = Path(tempfile.mkdtemp(prefix=".stage-", dir=out))
    try:
        yield stage
    except BaseException:
        shutil.rmtree(stage, ignore_errors=True)
        raise
    for item in sorted(stage.iterdir()):
        os.replace(item, out / item.name)
    stage.rmdir()


def _write(stage: Path, name: str, content: str) -> None:
    (stage / name).write_text(content, encoding="utf-8")


def _cmd_ingest(config: RunConfig) -> int:
    paths = sample_paths(config.inputs)
    table = config.transliteration()
    rules = config.rules()
    samples: list[RawSample] = []
    rows = []
    rejected = []
    for path in paths:
        sample = _load_sample(path, config)
        canonical = normalize(sample.body, table)
        try:
            tokens = apply_rules(tokenize(canonical), rules)
        except CorpusError as err:
            raise type(err)(f"{path}: {err}") from None
        verdict = validate_sample_size(len(tokens), config.size_tolerance)
        if verdict == "REJECT":
            rejected.append(f"{path}: {len(tokens)} tokens is outside the size tolerance")
        elif verdict == "WARN":
            print(f"warning: {path}: {len(tokens)} tokens is marginal", file=sys.stderr)
        samples.append(sample)
        meta = sample.metadata
        rows.append((meta.id, meta.city, meta.field, meta.area, meta.year, len(tokens), verdict))
    if rejected:
        for line in rejected:
            print(f"error: {line}", file=sys.stderr)
        return 1
    catalog = build_catalog(samples, cities=config.cities())
    rows.sort()
    listing = ["\t".join(("id", "city", "field", "area", "year", "tokens", "size"))]
    listing.extend("\t".join(map(str, row)) for row in rows)
    with staged_outputs(config.out_dir) as stage:
        _write(stage, "catalog.tsv", format_catalog_matrix(catalog))
        _write(stage, "catalog_samples.tsv", "\n".join(listing) + "\n")
    return 0


def _cmd_analyze(config: RunConfig) -> int:
    paths = sample_paths(config.inputs)
    table = build_corpus_table(paths, config)
    ranked = rank(table)
    curve = coverage(ranked, config.cutoffs)
    zipf = zipf_constants(ranked, min(config.zipf_top_k, len(ranked.entries)))
    spread = dispersion(table)
    with staged_outputs(config.out_dir) as stage:
        _write(stage, "rank_listing.tsv", format_listing(table))
        _write(stage, "alphabetical_listing.tsv", format_listing(table, alphabetical=True))
        _write(stage, "coverage.csv", format_coverage_csv(curve))
        _write(stage, "zipf.csv", format_zipf_csv(zipf))
        _write(stage, "dispersion.tsv", format_dispersion_tsv(spread, table))
        _write(stage, "foreign_shares.tsv", format_keyvalue(foreign_share(table)))
        _write(stage, "sic_share.tsv", format_keyvalue(sic_shares(table)))
    return 0


def _cmd_significance(config: RunConfig) -> int:
    paths = sample_paths(config.inputs)
    table = build_corpus_table(paths, config)
    ranked = rank(table)
    result = significance_set(ranked, table, config.significance())
    summary = {
        "corpus_total": table.corpus_total,
        "tau_per_million": config.threshold_per_million,
        "threshold_count": result.threshold_count,
        "candidates": len(result.candidates),
        "skew_flagged": len(result.skew_flagged),
        "included": len(result.lemmas),
        "covered_tokens": result.covered_tokens,
    }
    with staged_outputs(config.out_dir) as stage:
        _write(stage, "significant.tsv", format_significance_listing(result, ranked, table))
        _write(stage, "significance_summary.tsv", format_keyvalue(summary))
    return 0


def _cmd_categories(config: RunConfig) -> int:
    from .lexicon import categorize

    paths = sample_paths(config.inputs)
    lexicon = load_lexicon(config.lexicon_path, config.transliteration())
    table = build_corpus_table(paths, config)
    ranked = rank(table)
    result = significance_set(ranked, table, config.significance())
    tally = categorize(result.lemmas, lexicon)
    rows = {category: count for category, count in tally.counts.items()}
    rows["UNCATEGORIZED"] = len(tally.uncategorized)
    with staged_outputs(config.out_dir) as stage:
        _write(stage, "category_tally.tsv", format_keyvalue(rows))
        _write(stage, "uncategorized.tsv", "".join(f"{w}\n" for w in tally.uncategorized))
    return 0


def _cmd_compare(config: RunConfig) -> int:
    paths = sample_paths(config.inputs)
    reference = load_reference_list(config.reference_list_path, config.transliteration())
    table = build_corpus_table(paths, config)
    ranked = rank(table)
    report = overlap(reference, ranked, config.top_n)
    with staged_outputs(config.out_dir) as stage:
        _write(stage, "overlap.txt", format_overlap_report(report))
    return 0


def _cmd_report(config: RunConfig) -> int:
    paths = sample_paths(config.inputs)
    samples = [_load_sample(p, config) for p in paths]
    catalog = build_catalog(samples, cities=config.cities())
    matrix = sources_matrix(catalog)
    table = build_corpus_table(paths, config)
    curve = coverage(rank(table), config.cutoffs)
    reference = config.reference()
    with staged_outputs(config.out_dir) as stage:
        _write(stage, "sources_matrix.tsv", format_sources_matrix(matrix))
        _write(stage, "sources_deficit.tsv", format_deficit_matrix(matrix))
        _write(stage, "coverage_chart.txt", render_coverage_chart(curve, reference))
        _write(stage, "chart_data.csv", format_chart_data(curve, reference))
    return 0


_COMMANDS = {
    "ingest": _cmd_ingest,
    "analyze": _cmd_analyze,
    "significance": _cmd_significance,
    "categories": _cmd_categories,
    "compare": _cmd_compare,
    "report": _cmd_report,
}


def run(config: RunConfig, subcommand: str) -> int:
    """Run one subcommand; returns the process exit status."""
    handler = _COMMANDS.get(subcommand)
    if handler is None:
        print(
            f"error: unknown subcommand {subcommand!r}; choose from {', '.join(SUBCOMMANDS)}",
            file=sys.stderr,
        )
        return 2
    try:
        return handler(config)
    except (CorpusError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


def _int_pair(text: str) -> tuple[int, int]:
    lo, _, hi = text.partition(":")
    return int(lo), int(hi)


def _int_list(text: str) -> tuple[int, ...]:
    return tuple(int(x) for x in text.split(","))


def _float_list(text: str) -> tuple[float, ...]:
    return tuple(float(x) for x in text.split(","))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="corpusfreq",
        description="Frequency listings, coverage and dispersion for balanced corpora.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("inputs", nargs="+", help="sample files or directories of *.txt")
    common.add_argument("-o", "--out-dir", default="corpusfreq-out")
    common.add_argument("--table", dest="table_path", help="transliteration table file")
    common.add_argument("--rules", dest="rules_path", help="disambiguation rule file")
    common.add_argument("--size-tolerance", type=float, default=0.02)
    common.add_argument("--threshold-per-million", type=float, default=50.0)
    common.add_argument("--cutoffs", type=_int_list, default=DEFAULT_CUTOFFS)
    common.add_argument(
        "--reference-curve", type=_float_list, default=DEFAULT_REFERENCE.block_shares
    )
    common.add_argument("--reference-name", default=DEFAULT_REFERENCE.name)
    common.add_argument("--skew-max-fields", type=int, default=2)
    common.add_argument("--include-skewed", action="store_true")
    common.add_argument("--top-n", type=int, default=2000)
    common.add_argument("--zipf-top-k", type=int, default=1000)
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--window", type=_int_pair, default=DEFAULT_WINDOW,
                        help="synchronic year window, e.g. 1979:1989")
    common.add_argument("--register-city", action="append", default=[],
                        dest="register_cities", metavar="CODE")

    sub.add_parser("ingest", parents=[common], help="validate samples, write the catalog")
    sub.add_parser("analyze", parents=[common], help="listings, coverage, Zipf, dispersion")
    sub.add_parser("significance", parents=[common], help="threshold + skew filtered set")
    p_cat = sub.add_parser("categories", parents=[common], help="four-way category tally")
    p_cat.add_argument("--lexicon", dest="lexicon_path", required=True)
    p_cmp = sub.add_parser("compare", parents=[common], help="reference-list overlap")
    p_cmp.add_argument("--reference-list", dest="reference_list_path", required=True)
    sub.add_parser("report", parents=[common], help="sources matrix and coverage chart")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        inputs=tuple(args.inputs),
        out_dir=args.out_dir,
        threshold_per_million=args.threshold_per_million,
        cutoffs=args.cutoffs,
        reference_curve=args.reference_curve,
        reference_name=args.reference_name,
        skew_max_fields=args.skew_max_fields,
        include_skewed=args.include_skewed,
        size_tolerance=args.size_tolerance,
        table_path=args.table_path,
        rules_path=args.rules_path,
        lexicon_path=getattr(args, "lexicon_path", None),
        reference_list_path=getattr(args, "reference_list_path", None),
        top_n=args.top_n,
        zipf_top_k=args.zipf_top_k,
        jobs=args.jobs,
        window=args.window,
        register_cities=tuple(args.register_cities),
    )


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return run(config_from_args(args), args.subcommand)


if __name__ == "__main__":
    sys.exit(main())
