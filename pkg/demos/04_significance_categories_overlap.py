"""Significance filtering, skew flags, category tallies and list overlap.

A word enters the significance set when it reaches the per-million
threshold; a significant word concentrated in very few fields is flagged
as skewed and (by default) excluded.  The surviving set is tallied into
the four classical categories and compared against a reference word list.
"""

import numpy as np

from corpusfreq import rank
from corpusfreq.frequency import FrequencyTable
from corpusfreq.ingest import FIELD_CODES
from corpusfreq.lexicon import categorize, overlap, parse_lexicon, parse_reference_list
from corpusfreq.stats import SignificanceConfig, dispersion, significance_set

rng = np.random.default_rng(21)

# a corpus where common words spread across fields and one technical term
# (VENTRI-CULO) reaches the threshold inside just two fields
COMMON = ["EL", "LA", "DE", "CASA", "PERRO", "ROJO", "SOL", "RAPIDAMENTE", "MAR", "PAN"]
table = FrequencyTable()
for i, lemma in enumerate(COMMON):
    vec = rng.integers(20, 60, size=15)
    table.entries[lemma] = vec.astype(np.int64)
vec = np.zeros(15, dtype=np.int64)
vec[FIELD_CODES.index("A13")] = 30
vec[FIELD_CODES.index("A11")] = 24
table.entries["VENTRI-CULO"] = vec
for i in range(300):  # low-frequency tail
    vec = np.zeros(15, dtype=np.int64)
    vec[rng.integers(0, 15)] = 1
    table.entries[f"RARA{i:03d}"] = vec
table.corpus_total = int(sum(int(v.sum()) for v in table.entries.values()))
print(f"corpus of {table.corpus_total:,} tokens, {len(table.entries)} lemmas")

ranked = rank(table)
config = SignificanceConfig(tau=50.0, skew_max_fields=2, exclude_skewed=True)
result = significance_set(ranked, table, config)
print(f"\nthreshold: {result.threshold_count} occurrences "
      f"({config.tau}/million at this corpus size)")
print(f"candidates over the threshold: {sorted(result.candidates)}")
print(f"flagged as skewed (<= {config.skew_max_fields} fields): {sorted(result.skew_flagged)}")
print(f"included after exclusion: {sorted(result.lemmas)}")
print(f"tokens covered by the included set: {result.covered_tokens:,}")

spread = dispersion(table)
print(f"\nVENTRI-CULO field presence: {spread.field_presence['VENTRI-CULO']} of 15, "
      f"top-2 concentration {spread.concentration['VENTRI-CULO']:.2f}")

lexicon = parse_lexicon(
    "EL\tOPERATOR\nLA\tOPERATOR\nDE\tOPERATOR\n"
    "CASA\tGENERAL\nMAR\tGENERAL\nPAN\tGENERAL\n"
    "PERRO\tDRAWABLE\nSOL\tDRAWABLE\n"
    "ROJO\tQUALITIES\n"
)
tally = categorize(result.lemmas, lexicon)
print("\ncategory tally of the significance set:")
for category, count in tally.counts.items():
    print(f"  {category:10} {count}")
print(f"  uncategorized: {list(tally.uncategorized)}")
print("(RAPIDAMENTE lands in QUALITIES through the -MENTE suffix rule)")

reference = parse_reference_list("el\nla\ncasa\nperro\ngato\nluna\n")
report = overlap(reference, ranked, top_n=100)
print(f"\noverlap with a {report.reference_size}-word reference list, top {report.top_n}: "
      f"{report.matched} matched = {report.percent:.1f}%")
