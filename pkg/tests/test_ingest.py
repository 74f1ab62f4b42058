import random

import pytest
from hypothesis import given, strategies as st

from corpusfreq.ingest import (
    DEFAULT_CITIES,
    FIELD_CODES,
    DuplicateSampleId,
    EmptyBody,
    HeaderSyntaxError,
    MissingHeaderKey,
    RawSample,
    SampleMetadata,
    UnknownCityCode,
    UnknownFieldCode,
    YearOutOfWindow,
    area_for_field,
    build_catalog,
    format_catalog_matrix,
    format_sample,
    parse_catalog_matrix,
    parse_sample,
    validate_sample_size,
)

from conftest import sample_text


class TestParseSample:
    def test_valid_header_derives_adult_area(self):
        sample = parse_sample(sample_text(city="MTREY", field="A09", year=1985).encode())
        assert sample.metadata.city == "MTREY"
        assert sample.metadata.field == "A09"
        assert sample.metadata.area == "ADULT"
        assert sample.metadata.year == 1985
        assert sample.body.strip() == "UNA CASA BLANCA"

    def test_child_and_adolescent_prefixes(self):
        assert parse_sample(sample_text(field="n02")).metadata.area == "CHILD"
        assert parse_sample(sample_text(field="a05")).metadata.area == "ADOLESCENT"

    def test_year_out_of_window(self):
        with pytest.raises(YearOutOfWindow):
            parse_sample(sample_text(year=1970))

    def test_waiver_allows_old_year(self):
        sample = parse_sample(sample_text(year=1970, WAIVER="classic re-edition"))
        assert sample.metadata.year == 1970
        assert sample.metadata.waiver == "classic re-edition"

    def test_custom_window(self):
        assert parse_sample(sample_text(year=1970), window=(1960, 1989)).metadata.year == 1970

    def test_empty_body(self):
        with pytest.raises(EmptyBody):
            parse_sample(sample_text(body="  \n "))

    def test_missing_required_key(self):
        with pytest.raises(MissingHeaderKey):
            parse_sample("#CITY: MTREY\n#FIELD: A09\n\nbody")

    def test_unknown_city(self):
        with pytest.raises(UnknownCityCode):
            parse_sample(sample_text(city="NADIE"))

    def test_registered_extra_city_accepted(self):
        sample = parse_sample(
            sample_text(city="NYORK"), cities=DEFAULT_CITIES + ("NYORK",)
        )
        assert sample.metadata.city == "NYORK"

    def test_unknown_field(self):
        with pytest.raises(UnknownFieldCode):
            parse_sample(sample_text(field="A16"))
        with pytest.raises(UnknownFieldCode):
            parse_sample(sample_text(field="a07"))  # prefix case is meaningful

    def test_header_syntax_errors(self):
        with pytest.raises(HeaderSyntaxError):
            parse_sample("CITY: MTREY\n\nbody")
        with pytest.raises(HeaderSyntaxError):
            parse_sample("#CTIY: MTREY\n\nbody")
        with pytest.raises(HeaderSyntaxError):
            parse_sample(sample_text(year="MCMLXXX"))
        with pytest.raises(HeaderSyntaxError):
            parse_sample(sample_text(AREA="ELDER"))

    def test_area_override(self):
        sample = parse_sample(sample_text(field="A09", AREA="CHILD"))
        assert sample.metadata.area == "CHILD"

    def test_id_derivation_is_deterministic(self):
        a = parse_sample(sample_text())
        b = parse_sample(sample_text())
        assert a.metadata.id == b.metadata.id
        c = parse_sample(sample_text(body="OTRA COSA"))
        assert c.metadata.id != a.metadata.id

    def test_round_trip(self):
        original = parse_sample(
            sample_text(year=1970, WAIVER="reissue", NOTE="hand checked", AREA="CHILD")
        )
        again = parse_sample(format_sample(original))
        assert again.metadata == original.metadata
        assert again.body == original.body


def test_area_is_pure_function_of_prefix():
    for code in FIELD_CODES:
        expected = {"n": "CHILD", "a": "ADOLESCENT", "A": "ADULT"}[code[0]]
        assert area_for_field(code) == expected


class TestValidateSampleSize:
    @pytest.mark.parametrize(
        "count,tolerance,verdict",
        [
            (2000, 0.02, "OK"),
            (2040, 0.02, "OK"),     # boundary: 2000 * 1.02
            (1960, 0.02, "OK"),
            (2041, 0.02, "WARN"),
            (2080, 0.02, "WARN"),   # boundary: 2000 * 1.04
            (2081, 0.02, "REJECT"),
            (1500, 0.02, "REJECT"),
            (0, 0.0, "REJECT"),
            (2000, 0.0, "OK"),
        ],
    )
    def test_verdicts(self, count, tolerance, verdict):
        assert validate_sample_size(count, tolerance) == verdict

    def test_tolerance_range(self):
        with pytest.raises(ValueError):
            validate_sample_size(2000, 0.6)
        with pytest.raises(ValueError):
            validate_sample_size(2000, -0.1)


def samples_from_matrix(counts, body_prefix="CUERPO"):
    """One RawSample per unit of each (city, field) cell."""
    samples = []
    for (city, field), n in sorted(counts.items()):
        for i in range(n):
            meta = SampleMetadata(
                id=f"{city}-{field}-{i}",
                city=city,
                field=field,
                area=area_for_field(field),
                year=1985,
            )
            samples.append(RawSample(metadata=meta, body=f"{body_prefix} {i}"))
    return samples


class TestBuildCatalog:
    def test_table1_fixture_totals(self, table1):
        cities, counts = table1
        catalog = build_catalog(samples_from_matrix(counts))
        assert catalog.total_samples() == 500
        field_totals = [
            sum(n for (c, f), n in catalog.cell_counts.items() if f == field)
            for field in FIELD_CODES
        ]
        assert field_totals == [18, 13, 12, 5, 28, 27, 35, 43, 70, 23, 21, 47, 8, 88, 62]

    def test_empty_input(self):
        catalog = build_catalog([])
        assert catalog.total_samples() == 0
        assert catalog.cell_counts == {}

    def test_duplicate_ids_rejected(self):
        sample = parse_sample(sample_text(ID="dup-1"))
        with pytest.raises(DuplicateSampleId):
            build_catalog([sample, sample])

    def test_order_independence(self, table1):
        _, counts = table1
        samples = samples_from_matrix(counts)
        shuffled = samples[:]
        random.Random(7).shuffle(shuffled)
        assert build_catalog(shuffled) == build_catalog(samples)

    @given(st.lists(st.tuples(st.sampled_from(DEFAULT_CITIES),
                              st.sampled_from(FIELD_CODES)), max_size=40))
    def test_cell_counts_sum_to_sample_count(self, cells):
        samples = [
            RawSample(
                SampleMetadata(str(i), city, field, area_for_field(field), 1985),
                body="X",
            )
            for i, (city, field) in enumerate(cells)
        ]
        catalog = build_catalog(samples)
        assert sum(catalog.cell_counts.values()) == len(samples)


class TestCatalogMatrix:
    def test_round_trip(self, table1):
        _, counts = table1
        catalog = build_catalog(samples_from_matrix(counts))
        cities, parsed = parse_catalog_matrix(format_catalog_matrix(catalog))
        assert parsed == counts
        assert cities == DEFAULT_CITIES

    def test_total_row_is_validated(self):
        catalog = build_catalog([parse_sample(sample_text())])
        bad = format_catalog_matrix(catalog).replace("TOTAL\t0", "TOTAL\t9", 1)
        with pytest.raises(Exception):
            parse_catalog_matrix(bad)

    def test_zero_rows_present_for_idle_cities(self):
        catalog = build_catalog([parse_sample(sample_text())])
        text = format_catalog_matrix(catalog)
        assert "\nTIJUA\t0\t" in text
