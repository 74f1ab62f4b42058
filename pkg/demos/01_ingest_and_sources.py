"""Ingesting metadata-tagged samples and checking the sampling design.

Builds a handful of sample files on disk, parses and validates them, and
prints the city-by-field sources matrix with its deficits against the
ideal of one sample per cell.
"""

import tempfile
from pathlib import Path

from corpusfreq import build_catalog, parse_sample, validate_sample_size
from corpusfreq.ingest import YearOutOfWindow
from corpusfreq.reports import format_deficit_matrix, format_sources_matrix, sources_matrix

workdir = Path(tempfile.mkdtemp(prefix="corpusfreq-demo-"))
print(f"writing sample files under {workdir}\n")

SAMPLES = [
    ("MTREY", "A09", 1985, "EL MAR Y EL SOL DE LA COSTA"),
    ("MTREY", "A13", 1988, "EL CORAZON LATE Y LATE"),
    ("MADRI", "A09", 1983, "UNA NOVELA CORTA DEL VERANO"),
    ("MEXIC", "n02", 1986, "DOS Y DOS SON CUATRO"),
    ("BAIRE", "a05", 1987, "QUERIDA AMIGA TE ESCRIBO HOY"),
]

for i, (city, field, year, body) in enumerate(SAMPLES):
    text = f"#ID: demo-{i}\n#CITY: {city}\n#FIELD: {field}\n#YEAR: {year}\n\n{body}\n"
    (workdir / f"demo-{i}.txt").write_text(text, encoding="utf-8")

samples = []
for path in sorted(workdir.glob("*.txt")):
    sample = parse_sample(path.read_bytes())
    meta = sample.metadata
    print(f"  {meta.id}: city={meta.city} field={meta.field} area={meta.area} year={meta.year}")
    samples.append(sample)

# the year window is enforced unless a re-edition waiver is present
try:
    parse_sample("#CITY: MTREY\n#FIELD: A09\n#YEAR: 1959\n\nUN CLASICO\n")
except YearOutOfWindow as err:
    print(f"\nrejected as expected: {err}")
waived = parse_sample(
    "#WAIVER: classic re-edition\n#CITY: MTREY\n#FIELD: A09\n#YEAR: 1959\n\nUN CLASICO\n"
)
print(f"accepted with waiver: year={waived.metadata.year}")

# nominal sample size is 2000 tokens with a configurable tolerance band
for count in (2000, 2040, 2070, 1500):
    print(f"size verdict for {count} tokens: {validate_sample_size(count, 0.02)}")

catalog = build_catalog(samples)
matrix = sources_matrix(catalog)
print(f"\nsources matrix ({matrix.grand_total} samples):")
for line in format_sources_matrix(matrix).splitlines():
    cells = line.split("\t")
    if cells[0] in {"CITY", "TOTAL"} or any(c not in {"0"} for c in cells[1:]):
        print("  " + "  ".join(f"{c:>5}" for c in cells))

missing = sum(matrix.deficits.values())
print(f"\ncells still missing their first sample: {missing} of {len(matrix.deficits)}")
print("(deficit matrix available via format_deficit_matrix)")
assert format_deficit_matrix(matrix).startswith("CITY\t")
