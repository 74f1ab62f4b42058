from pathlib import Path

import pytest

from corpusfreq.ingest import parse_catalog_matrix

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def table1():
    """(cities, cell counts) of the 34x15 source-design fixture, 500 samples."""
    content = (DATA_DIR / "table1_sources.tsv").read_text(encoding="utf-8")
    return parse_catalog_matrix(content)


@pytest.fixture(scope="session")
def golden_normalization():
    rows = []
    content = (DATA_DIR / "normalization_golden.tsv").read_text(encoding="utf-8")
    for line in content.split("\n"):
        if not line:
            continue
        source, expected = line.split("\t")
        rows.append((source, expected))
    return rows


def sample_text(city="MTREY", field="A09", year=1985, body="UNA CASA BLANCA", **extra):
    """Build a sample file's text with the given header values."""
    lines = []
    for key in ("ID", "AREA", "WAIVER", "NOTE"):
        if key in extra:
            lines.append(f"#{key}: {extra[key]}")
    lines += [f"#CITY: {city}", f"#FIELD: {field}", f"#YEAR: {year}"]
    return "\n".join(lines) + "\n\n" + body + "\n"
