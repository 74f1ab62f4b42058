import pytest

from corpusfreq.cli import RunConfig, build_parser, main, run
from corpusfreq.frequency import read_listing
from corpusfreq.ingest import parse_catalog_matrix
from corpusfreq.lexicon import parse_overlap_report
from corpusfreq.reports import parse_chart_data
from corpusfreq.stats import parse_coverage_csv, parse_keyvalue, parse_zipf_csv

from conftest import sample_text


def write_toy_corpus(root):
    """Three hand-countable samples across three fields."""
    root.mkdir(exist_ok=True)
    (root / "s1.txt").write_text(
        sample_text(city="MTREY", field="A09", year=1985, body="EL SOL Y EL MAR", ID="s1"),
        encoding="utf-8",
    )
    (root / "s2.txt").write_text(
        sample_text(city="MADRI", field="A14", year=1986, body="EL PAN O VINO", ID="s2"),
        encoding="utf-8",
    )
    (root / "s3.txt").write_text(
        sample_text(city="MTREY", field="n02", year=1984, body="DOS Y DOS SON 4 (SIC)", ID="s3"),
        encoding="utf-8",
    )
    return root


@pytest.fixture
def toy_corpus(tmp_path):
    return write_toy_corpus(tmp_path / "corpus")


def config_for(toy_corpus, tmp_path, **overrides):
    return RunConfig(
        inputs=(str(toy_corpus),), out_dir=str(tmp_path / "out"), **overrides
    )


class TestAnalyze:
    def test_rank_listing_matches_hand_count(self, toy_corpus, tmp_path):
        config = config_for(toy_corpus, tmp_path)
        assert run(config, "analyze") == 0
        rows = read_listing(tmp_path / "out" / "rank_listing.tsv")
        got = [(r["rank"], r["lemma"], r["count"]) for r in rows]
        # hand count: EL:3; DOS,Y:2; then count-1 lemmas alphabetically
        assert got == [
            (1, "EL", 3),
            (2, "DOS", 2),
            (3, "Y", 2),
            (4, "4", 1),
            (5, "MAR", 1),
            (6, "O(DISJ)", 1),
            (7, "PAN", 1),
            (8, "SOL", 1),
            (9, "SON", 1),
            (10, "VINO", 1),
        ]
        sic_row = next(r for r in rows if r["lemma"] == "4")
        assert sic_row["flags"] == frozenset({"SIC"})

    def test_outputs_reparse(self, toy_corpus, tmp_path):
        config = config_for(toy_corpus, tmp_path, cutoffs=(2, 5, 10))
        assert run(config, "analyze") == 0
        out = tmp_path / "out"
        curve = parse_coverage_csv((out / "coverage.csv").read_text())
        assert curve.corpus_total == 14
        zipf = parse_zipf_csv((out / "zipf.csv").read_text())
        assert zipf.top_k == 10
        read_listing(out / "alphabetical_listing.tsv")
        shares = parse_keyvalue((out / "sic_share.tsv").read_text())
        assert float(shares["sic_tokens"]) == 1.0

    def test_runs_are_byte_identical(self, toy_corpus, tmp_path):
        c1 = config_for(toy_corpus, tmp_path)
        c2 = RunConfig(inputs=(str(toy_corpus),), out_dir=str(tmp_path / "out2"))
        assert run(c1, "analyze") == 0
        assert run(c2, "analyze") == 0
        for name in ("rank_listing.tsv", "coverage.csv", "zipf.csv", "dispersion.tsv"):
            assert (tmp_path / "out" / name).read_bytes() == (
                tmp_path / "out2" / name
            ).read_bytes()

    def test_parallel_equals_serial(self, tmp_path):
        corpus = tmp_path / "corpus"
        corpus.mkdir()
        for i in range(8):
            body = " ".join(f"W{(i * j) % 23:02d}" for j in range(120))
            (corpus / f"s{i}.txt").write_text(
                sample_text(city="MTREY", field="A09", year=1985, body=body, ID=f"s{i}"),
                encoding="utf-8",
            )
        serial = RunConfig(inputs=(str(corpus),), out_dir=str(tmp_path / "a"), jobs=1)
        parallel = RunConfig(inputs=(str(corpus),), out_dir=str(tmp_path / "b"), jobs=3)
        assert run(serial, "analyze") == 0
        assert run(parallel, "analyze") == 0
        for name in ("rank_listing.tsv", "coverage.csv", "zipf.csv", "dispersion.tsv"):
            assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()

    def test_invalid_sample_fails_without_outputs(self, toy_corpus, tmp_path, capsys):
        (toy_corpus / "bad.txt").write_text(
            sample_text(city="XXXXX", field="A09", year=1985, body="HOLA"),
            encoding="utf-8",
        )
        config = config_for(toy_corpus, tmp_path)
        assert run(config, "analyze") == 1
        assert "XXXXX" in capsys.readouterr().err
        assert not (tmp_path / "out").exists()


class TestIngest:
    def test_catalog_written(self, tmp_path, capsys):
        corpus = tmp_path / "corpus"
        corpus.mkdir()
        body = " ".join(f"W{i:04d}" for i in range(2000))
        (corpus / "big.txt").write_text(
            sample_text(city="MTREY", field="A09", year=1985, body=body, ID="big"),
            encoding="utf-8",
        )
        config = RunConfig(inputs=(str(corpus),), out_dir=str(tmp_path / "out"))
        assert run(config, "ingest") == 0
        cities, counts = parse_catalog_matrix(
            (tmp_path / "out" / "catalog.tsv").read_text()
        )
        assert counts == {("MTREY", "A09"): 1}
        samples_lines = (tmp_path / "out" / "catalog_samples.tsv").read_text().splitlines()
        assert samples_lines[1].split("\t") == ["big", "MTREY", "A09", "ADULT", "1985", "2000", "OK"]

    def test_marginal_sample_warns(self, tmp_path, capsys):
        corpus = tmp_path / "corpus"
        corpus.mkdir()
        body = " ".join(f"W{i:04d}" for i in range(2050))
        (corpus / "warn.txt").write_text(
            sample_text(body=body, ID="warn"), encoding="utf-8"
        )
        config = RunConfig(inputs=(str(corpus),), out_dir=str(tmp_path / "out"))
        assert run(config, "ingest") == 0
        assert "marginal" in capsys.readouterr().err

    def test_undersized_sample_rejected(self, toy_corpus, tmp_path, capsys):
        config = config_for(toy_corpus, tmp_path)
        assert run(config, "ingest") == 1
        assert "size tolerance" in capsys.readouterr().err
        assert not (tmp_path / "out").exists()


class TestOtherSubcommands:
    def test_significance_summary(self, toy_corpus, tmp_path):
        config = config_for(toy_corpus, tmp_path, include_skewed=True)
        assert run(config, "significance") == 0
        summary = parse_keyvalue(
            (tmp_path / "out" / "significance_summary.tsv").read_text()
        )
        assert summary["corpus_total"] == "14"
        assert summary["threshold_count"] == "1"
        assert summary["included"] == "10"
        assert summary["covered_tokens"] == "14"

    def test_default_exclusion_drops_narrow_lemmas(self, toy_corpus, tmp_path):
        config = config_for(toy_corpus, tmp_path)
        assert run(config, "significance") == 0
        summary = parse_keyvalue(
            (tmp_path / "out" / "significance_summary.tsv").read_text()
        )
        # every toy lemma sits in <= 2 fields, so strict skew exclusion empties the set
        assert summary["included"] == "0"
        assert summary["skew_flagged"] == "10"

    def test_categories(self, toy_corpus, tmp_path):
        lexicon = tmp_path / "lex.tsv"
        lexicon.write_text(
            "EL\tOPERATOR\nY\tOPERATOR\nO(DISJ)\tOPERATOR\nSON\tOPERATOR\n"
            "PAN\tGENERAL\nVINO\tGENERAL\nSOL\tDRAWABLE\nMAR\tDRAWABLE\n",
            encoding="utf-8",
        )
        config = config_for(
            toy_corpus, tmp_path, include_skewed=True, lexicon_path=str(lexicon)
        )
        assert run(config, "categories") == 0
        tally = parse_keyvalue((tmp_path / "out" / "category_tally.tsv").read_text())
        assert tally == {
            "OPERATOR": "4", "GENERAL": "2", "DRAWABLE": "2",
            "QUALITIES": "0", "UNCATEGORIZED": "2",
        }
        leftover = (tmp_path / "out" / "uncategorized.tsv").read_text().split()
        assert leftover == ["4", "DOS"]

    def test_compare(self, toy_corpus, tmp_path):
        reference = tmp_path / "ref.txt"
        reference.write_text("el\nsol\nluna\n", encoding="utf-8")
        config = config_for(toy_corpus, tmp_path, reference_list_path=str(reference))
        assert run(config, "compare") == 0
        report = parse_overlap_report((tmp_path / "out" / "overlap.txt").read_text())
        assert report.matched == 2
        assert report.percent == pytest.approx(200.0 / 3)

    def test_report(self, toy_corpus, tmp_path):
        config = config_for(toy_corpus, tmp_path)
        assert run(config, "report") == 0
        out = tmp_path / "out"
        _, counts = parse_catalog_matrix((out / "sources_matrix.tsv").read_text())
        assert sum(counts.values()) == 3
        cutoffs, observed, _, reference = parse_chart_data(
            (out / "chart_data.csv").read_text()
        )
        assert cutoffs == (1000, 2000, 3000, 4000)
        assert observed[0] == 100.0
        assert reference == (80.0, 10.0, 3.0, 2.0)
        assert "L" in (out / "coverage_chart.txt").read_text()

    def test_failed_rerun_preserves_previous_outputs(self, toy_corpus, tmp_path, capsys):
        config = config_for(toy_corpus, tmp_path)
        assert run(config, "report") == 0
        before = (tmp_path / "out" / "sources_matrix.tsv").read_bytes()
        bad = config_for(toy_corpus, tmp_path, reference_curve=(80.0, 10.0))
        assert run(bad, "report") == 1
        assert (tmp_path / "out" / "sources_matrix.tsv").read_bytes() == before
        assert not list((tmp_path / "out").glob(".stage-*"))


class TestExitCodes:
    def test_unknown_subcommand_via_run(self, toy_corpus, tmp_path, capsys):
        assert run(config_for(toy_corpus, tmp_path), "explode") == 2
        assert "usage" in capsys.readouterr().err or True

    def test_unknown_subcommand_via_main(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["explode", "x"])
        assert exc.value.code == 2
        assert "usage" in capsys.readouterr().err

    def test_missing_input_path(self, tmp_path, capsys):
        config = RunConfig(inputs=(str(tmp_path / "nope"),), out_dir=str(tmp_path / "out"))
        assert run(config, "analyze") == 1
        assert "does not exist" in capsys.readouterr().err

    def test_main_happy_path(self, toy_corpus, tmp_path):
        status = main(
            ["analyze", str(toy_corpus), "-o", str(tmp_path / "out"), "--jobs", "1"]
        )
        assert status == 0
        assert (tmp_path / "out" / "rank_listing.tsv").exists()

    def test_parser_accepts_mirrored_flags(self):
        parser = build_parser()
        args = parser.parse_args(
            [
                "significance", "dir", "-o", "x",
                "--threshold-per-million", "500",
                "--cutoffs", "10,20",
                "--reference-curve", "70,20,5,5",
                "--skew-max-fields", "3",
                "--size-tolerance", "0.1",
                "--window", "1960:1999",
                "--register-city", "NYORK",
                "--include-skewed",
            ]
        )
        assert args.threshold_per_million == 500.0
        assert args.cutoffs == (10, 20)
        assert args.window == (1960, 1999)
        assert args.register_cities == ["NYORK"]
