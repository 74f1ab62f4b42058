"""Frequency tables, rank listings, coverage blocks and Zipf constants.

Builds a synthetic corpus whose word probabilities follow 1/rank, counts
it per field, and compares its coverage curve against the classical
expectation that the first thousand types carry ~80% of the tokens.
"""

import numpy as np

from corpusfreq import count_sample, merge_tables, rank, zipf_constants
from corpusfreq.ingest import FIELD_CODES
from corpusfreq.lemmatizer import Token
from corpusfreq.reports import render_coverage_chart
from corpusfreq.stats import DEFAULT_REFERENCE, compare_reference, coverage

rng = np.random.default_rng(7)
VOCAB = np.array([f"PALABRA{i:04d}" for i in range(6000)])
weights = 1.0 / np.arange(1, len(VOCAB) + 1)
probabilities = weights / weights.sum()

print("counting 40 samples of 5000 tokens each...")
tables = []
for i in range(40):
    words = VOCAB[rng.choice(len(VOCAB), size=5000, p=probabilities)]
    tokens = [Token(w, j) for j, w in enumerate(words)]
    tables.append(count_sample(tokens, FIELD_CODES[i % 15]))
table = merge_tables(tables)
print(f"corpus: {table.corpus_total:,} tokens, {table.distinct_lemmas():,} distinct lemmas")

ranked = rank(table)
print("\ntop of the rank listing:")
for entry in ranked.entries[:8]:
    print(f"  {entry.rank:>3}  {entry.lemma:12} {entry.count:>6}  {entry.per_million:>10.1f}/M")

curve = coverage(ranked, (1000, 2000, 3000, 4000))
deviations = compare_reference(curve, DEFAULT_REFERENCE)
print("\ncoverage blocks vs the reference profile:")
for cutoff, share, dev in zip(curve.cutoffs, curve.block_shares, deviations):
    print(f"  first {cutoff:>5} ranks: {share:6.2f}%  (deviation {dev:+.2f})")
print(f"  cumulative at 4000: {curve.cumulative_shares[-1]:.2f}%")

print()
print(render_coverage_chart(curve, DEFAULT_REFERENCE))

report = zipf_constants(ranked, top_k=500)
print("rank x probability should be roughly constant on such a corpus:")
print(f"  geometric mean of the constants: {report.geometric_mean:.5f}")
print(f"  coefficient of variation:        {report.cv:.4f}")
