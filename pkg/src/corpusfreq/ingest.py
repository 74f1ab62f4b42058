"""Sample files, their design metadata, and the corpus catalog.

A sample file is UTF-8: a header block of ``#KEY: value`` lines, one blank
line, then the body.  CITY, FIELD and YEAR are required; ID, AREA, WAIVER
and NOTE are optional.  A missing ID is derived deterministically from the
metadata and a body digest, so re-parsing a serialized sample is stable.
"""

from __future__ import annotations

import hashlib
import re
from collections import Counter
from dataclasses import dataclass, field as dc_field
from typing import Iterable, Sequence

from .errors import CorpusError


class HeaderSyntaxError(CorpusError):
    """A header line that is not a well-formed ``#KEY: value`` entry."""


class MissingHeaderKey(CorpusError):
    pass


class UnknownCityCode(CorpusError):
    pass


class UnknownFieldCode(CorpusError):
    pass


class YearOutOfWindow(CorpusError):
    pass


class EmptyBody(CorpusError):
    pass


class DuplicateSampleId(CorpusError):
    pass


FIELD_CODES = (
    "n01", "n02", "n03",
    "a04", "a05", "a06",
    "A07", "A08", "A09", "A10", "A11", "A12", "A13", "A14", "A15",
)
FIELD_INDEX = {code: i for i, code in enumerate(FIELD_CODES)}

AREAS = ("CHILD", "ADOLESCENT", "ADULT")
_AREA_BY_PREFIX = {"n": "CHILD", "a": "ADOLESCENT", "A": "ADULT"}

# The 34-city registry; row order is alphabetical by full city name,
# hence BARCE < BOGOT < BAIRE (codes are truncations).
DEFAULT_CITIES = (
    "ASUNC", "BARCE", "BOGOT", "BAIRE", "CALI", "CARAC", "CORDO", "GUADA",
    "GUATE", "JUARE", "LAHAB", "LAPAZ", "LEON", "LIMA", "LOSAN", "MADRI",
    "MANAG", "MARAC", "MEDEL", "MEXIC", "MTREY", "MTVDO", "PANAM", "PUEBL",
    "QUITO", "SDOMI", "SJOSE", "SJUAN", "SSALV", "STIAG", "SEVIL", "TEGUC",
    "TIJUA", "VALEN",
)

DEFAULT_WINDOW = (1979, 1989)
TARGET_SAMPLE_TOKENS = 2000

_CITY_CODE_RE = re.compile(r"[A-Z]{1,5}\Z")
_HEADER_LINE_RE = re.compile(r"#([A-Z]+):[ ]?(.*)\Z")
_KNOWN_KEYS = {"ID", "CITY", "FIELD", "YEAR", "AREA", "WAIVER", "NOTE"}


def area_for_field(code: str) -> str:
    """CHILD / ADOLESCENT / ADULT from the field-code prefix."""
    return _AREA_BY_PREFIX[code[0]]


def validate_city_code(code: str) -> str:
    if not _CITY_CODE_RE.match(code):
        raise UnknownCityCode(f"city code {code!r} is not 1-5 uppercase letters")
    return code


@dataclass(frozen=True)
class SampleMetadata:
    id: str
    city: str
    field: str
    area: str
    year: int
    note: str = ""
    waiver: str | None = None


@dataclass(frozen=True)
class RawSample:
    metadata: SampleMetadata
    body: str


def derive_sample_id(city: str, field: str, year: int, body: str) -> str:
    digest = hashlib.sha1(body.encode("utf-8")).hexdigest()[:8]
    return f"{city}-{field}-{year}-{digest}"


def parse_sample(
    content: bytes | str,
    cities: Sequence[str] = DEFAULT_CITIES,
    window: tuple[int, int] = DEFAULT_WINDOW,
) -> RawSample:
    """Parse one sample file and validate it against the sampling design."""
    text = content.decode("utf-8") if isinstance(content, bytes) else content
    lines = text.replace("\r\n", "\n").split("\n")
    header: dict[str, str] = {}
    body_start = None
    for i, line in enumerate(lines):
        if line.strip() == "":
            body_start = i + 1
            break
        match = _HEADER_LINE_RE.match(line)
        if not match:
            raise HeaderSyntaxError(f"bad header line {i + 1}: {line!r}")
        key, value = match.groups()
        if key not in _KNOWN_KEYS:
            raise HeaderSyntaxError(f"unknown header key {key!r} on line {i + 1}")
        if key in header:
            raise HeaderSyntaxError(f"repeated header key {key!r} on line {i + 1}")
        header[key] = value

    for required in ("CITY", "FIELD", "YEAR"):
        if required not in header:
            raise MissingHeaderKey(f"header lacks #{required}:")

    city = header["CITY"]
    if city not in cities:
        raise UnknownCityCode(f"city code {city!r} is not in the registry")
    field = header["FIELD"]
    if field not in FIELD_INDEX:
        raise UnknownFieldCode(f"field code {field!r} is not one of {'/'.join(FIELD_CODES)}")
    try:
        year = int(header["YEAR"])
    except ValueError:
        raise HeaderSyntaxError(f"#YEAR: is not an integer: {header['YEAR']!r}") from None

    waiver = header.get("WAIVER")
    lo, hi = window
    if not lo <= year <= hi and waiver is None:
        raise YearOutOfWindow(
            f"year {year} outside synchronic window {lo}-{hi} and no #WAIVER: given"
        )

    area = header.get("AREA", area_for_field(field))
    if area not in AREAS:
        raise HeaderSyntaxError(f"#AREA: must be one of {'/'.join(AREAS)}, got {area!r}")

    body = "\n".join(lines[body_start:]) if body_start is not None else ""
    if not body.strip():
        raise EmptyBody("sample body is empty")

    sample_id = header.get("ID") or derive_sample_id(city, field, year, body)
    metadata = SampleMetadata(
        id=sample_id,
        city=city,
        field=field,
        area=area,
        year=year,
        note=header.get("NOTE", ""),
        waiver=waiver,
    )
    return RawSample(metadata=metadata, body=body)


def format_sample(sample: RawSample) -> str:
    """Serialize a sample so that parse_sample reads back identical metadata."""
    meta = sample.metadata
    lines = [f"#ID: {meta.id}", f"#CITY: {meta.city}", f"#FIELD: {meta.field}"]
    if meta.area != area_for_field(meta.field):
        lines.append(f"#AREA: {meta.area}")
    lines.append(f"#YEAR: {meta.year}")
    if meta.waiver is not None:
        lines.append(f"#WAIVER: {meta.waiver}")
    if meta.note:
        lines.append(f"#NOTE: {meta.note}")
    return "\n".join(lines) + "\n\n" + sample.body


def validate_sample_size(token_count: int, tolerance: float = 0.02) -> str:
    """OK / WARN / REJECT against the nominal 2000-token sample size.

    OK within ``tolerance`` of the target, WARN within twice that band,
    REJECT beyond.  Total: never raises for a non-negative count.
    """
    if not 0.0 <= tolerance <= 0.5:
        raise ValueError("tolerance must lie in [0, 0.5]")
    deviation = abs(token_count - TARGET_SAMPLE_TOKENS)
    if deviation <= TARGET_SAMPLE_TOKENS * tolerance:
        return "OK"
    if deviation <= TARGET_SAMPLE_TOKENS * 2 * tolerance:
        return "WARN"
    return "REJECT"


@dataclass
class SampleCatalog:
    samples: dict[str, RawSample] = dc_field(default_factory=dict)
    cell_counts: dict[tuple[str, str], int] = dc_field(default_factory=dict)
    cities: tuple[str, ...] = DEFAULT_CITIES

    def total_samples(self) -> int:
        return len(self.samples)


def build_catalog(
    samples: Iterable[RawSample],
    cities: Sequence[str] = DEFAULT_CITIES,
) -> SampleCatalog:
    """Index samples by id and tally the (city, field) design grid.

    Order-independent: any permutation of the same samples yields an equal
    catalog.  Duplicate ids are rejected.
    """
    catalog = SampleCatalog(cities=tuple(cities))
    cells: Counter[tuple[str, str]] = Counter()
    for sample in samples:
        meta = sample.metadata
        if meta.id in catalog.samples:
            raise DuplicateSampleId(f"sample id {meta.id!r} appears more than once")
        catalog.samples[meta.id] = sample
        cells[(meta.city, meta.field)] += 1
    catalog.cell_counts = dict(cells)
    return catalog


def catalog_city_rows(catalog: SampleCatalog) -> tuple[str, ...]:
    """Registry cities in registry order, then any unregistered extras sorted."""
    extras = sorted(
        {city for city, _ in catalog.cell_counts} - set(catalog.cities)
    )
    return catalog.cities + tuple(extras)


def format_catalog_matrix(catalog: SampleCatalog) -> str:
    """Tab-separated counts matrix: cities as rows, fields as columns."""
    rows = [["CITY", *FIELD_CODES]]
    totals = [0] * len(FIELD_CODES)
    for city in catalog_city_rows(catalog):
        cells = [catalog.cell_counts.get((city, f), 0) for f in FIELD_CODES]
        for i, n in enumerate(cells):
            totals[i] += n
        rows.append([city, *map(str, cells)])
    rows.append(["TOTAL", *map(str, totals)])
    return "\n".join("\t".join(row) for row in rows) + "\n"


def parse_catalog_matrix(content: str) -> tuple[tuple[str, ...], dict[tuple[str, str], int]]:
    """Read back a counts matrix; validates the TOTAL row."""
    lines = [l for l in content.splitlines() if l.strip()]
    header = lines[0].split("\t")
    if header != ["CITY", *FIELD_CODES]:
        raise CorpusError(f"unexpected matrix header: {header!r}")
    cities = []
    counts: dict[tuple[str, str], int] = {}
    totals = [0] * len(FIELD_CODES)
    for line in lines[1:]:
        parts = line.split("\t")
        name, cells = parts[0], [int(x) for x in parts[1:]]
        if len(cells) != len(FIELD_CODES):
            raise CorpusError(f"row {name!r} has {len(cells)} cells, expected 15")
        if name == "TOTAL":
            if cells != totals:
                raise CorpusError("TOTAL row does not match column sums")
            continue
        cities.append(name)
        for field_code, n in zip(FIELD_CODES, cells):
            if n:
                counts[(name, field_code)] = n
            totals[FIELD_INDEX[field_code]] += n
    return tuple(cities), counts


def write_catalog_matrix(catalog: SampleCatalog, path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(format_catalog_matrix(catalog))


def read_catalog_matrix(path) -> tuple[tuple[str, ...], dict[tuple[str, str], int]]:
    with open(path, encoding="utf-8") as handle:
        return parse_catalog_matrix(handle.read())
