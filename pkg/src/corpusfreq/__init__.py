"""corpusfreq: frequency lists, coverage and dispersion for balanced corpora.

The pipeline runs sample files through transliteration (normalizer),
annotation-aware tokenization and lemma rules (lemmatizer), per-field
counting (frequency), and the derived statistics (stats, lexicon).  ingest
validates the sampling design; reports and cli drive batch runs.
"""

from .errors import CorpusError
from .frequency import (
    FrequencyTable,
    RankedList,
    RankEntry,
    count_sample,
    merge,
    merge_tables,
    rank,
)
from .ingest import (
    DEFAULT_CITIES,
    DEFAULT_WINDOW,
    FIELD_CODES,
    RawSample,
    SampleCatalog,
    SampleMetadata,
    build_catalog,
    parse_sample,
    validate_sample_size,
)
from .lemmatizer import (
    DEFAULT_RULES,
    DisambiguationRule,
    RuleSet,
    Token,
    apply_rules,
    count_words,
    tokenize,
)
from .lexicon import (
    CategoryLexicon,
    CategoryTally,
    OverlapReport,
    ReferenceWordList,
    categorize,
    overlap,
)
from .normalizer import (
    DEFAULT_TABLE,
    TransliterationTable,
    is_canonical,
    normalize,
)
from .reports import SourcesMatrix, render_coverage_chart, sources_matrix
from .stats import (
    CoverageCurve,
    DispersionReport,
    ReferenceCurve,
    SignificanceConfig,
    SignificanceResult,
    ZipfReport,
    compare_reference,
    coverage,
    curve_from_block_shares,
    dispersion,
    foreign_share,
    significance_set,
    skew_flags,
    zipf_constants,
)

__version__ = "0.1.0"

__all__ = [
    "CorpusError",
    "FrequencyTable", "RankedList", "RankEntry",
    "count_sample", "merge", "merge_tables", "rank",
    "DEFAULT_CITIES", "DEFAULT_WINDOW", "FIELD_CODES",
    "RawSample", "SampleCatalog", "SampleMetadata",
    "build_catalog", "parse_sample", "validate_sample_size",
    "DEFAULT_RULES", "DisambiguationRule", "RuleSet", "Token",
    "apply_rules", "count_words", "tokenize",
    "CategoryLexicon", "CategoryTally", "OverlapReport", "ReferenceWordList",
    "categorize", "overlap",
    "DEFAULT_TABLE", "TransliterationTable", "is_canonical", "normalize",
    "SourcesMatrix", "render_coverage_chart", "sources_matrix",
    "CoverageCurve", "DispersionReport", "ReferenceCurve",
    "SignificanceConfig", "SignificanceResult", "ZipfReport",
    "compare_reference", "coverage", "curve_from_block_shares", "dispersion",
    "foreign_share", "significance_set", "skew_flags", "zipf_constants",
    "__version__",
]
