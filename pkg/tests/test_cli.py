"""CLI subcommands, exit codes, and file outputs."""

import csv
import io

import pytest

from snpsim import Format, SortInstance, gen_sort, parse_model, storage_elements
from snpsim.bench import CSV_HEADER
from snpsim.cli import main


def run_cli(*argv):
    return main(list(argv))


class TestGenerate:
    def test_sort_model_file(self, tmp_path, capsys):
        path = tmp_path / "sort3.snp"
        assert run_cli("generate", "--family", "sort", "-n", "3", "-o", str(path)) == 0
        system = parse_model(path.read_text())
        stats = system.stats()
        assert (stats.q, stats.m, stats.max_out_degree) == (9, 12, 3)
        assert "q=9 m=12" in capsys.readouterr().out

    def test_subsetsum_round_trips(self, tmp_path):
        path = tmp_path / "ss.snp"
        assert run_cli("generate", "--family", "subsetsum", "-n", "10",
                       "--seed", "1", "-o", str(path)) == 0
        system = parse_model(path.read_text())
        assert system.is_validated
        assert system.output_neuron == system.neuron_count - 1

    def test_random_family(self, tmp_path):
        path = tmp_path / "rnd.snp"
        assert run_cli("generate", "--family", "random", "-n", "20",
                       "--seed", "5", "-o", str(path)) == 0
        assert parse_model(path.read_text()).neuron_count >= 1

    def test_sort_n_zero_is_usage_error(self, tmp_path, capsys):
        path = tmp_path / "x.snp"
        assert run_cli("generate", "--family", "sort", "-n", "0", "-o", str(path)) == 1
        assert not path.exists()
        assert capsys.readouterr().err

    def test_missing_family_is_usage_error(self, tmp_path):
        assert run_cli("generate", "-o", str(tmp_path / "x.snp")) == 1


class TestRun:
    def test_family_run_prints_summary_and_decodes(self, capsys):
        assert run_cli("run", "--family", "sort", "-n", "3",
                       "--format", "compressed") == 0
        out = capsys.readouterr().out
        assert "halt=no_applicable_rules" in out
        assert "sorted=[1, 2, 3]" in out

    def test_trace_files_identical_across_formats(self, tmp_path):
        model = tmp_path / "m.snp"
        run_cli("generate", "--family", "sort", "-n", "4", "-o", str(model))
        blobs = []
        for fmt in ("sparse", "ell", "compressed", "oracle"):
            trace = tmp_path / f"{fmt}.trace"
            assert run_cli("run", "--model", str(model), "--format", fmt,
                           "--steps", "50", "--seed", "9",
                           "--trace-out", str(trace)) == 0
            blobs.append(trace.read_bytes())
        assert blobs[0] == blobs[1] == blobs[2] == blobs[3]

    def test_step_limit_trace_has_two_lines(self, tmp_path):
        trace = tmp_path / "t.trace"
        run_cli("run", "--family", "sort", "-n", "3", "--format", "sparse",
                "--steps", "1", "--trace-out", str(trace))
        assert len(trace.read_text().splitlines()) == 2

    def test_unknown_format_is_usage_error(self, capsys):
        assert run_cli("run", "--family", "sort", "-n", "3",
                       "--format", "dense") == 1
        err = capsys.readouterr().err
        assert "sparse" in err and "ell" in err and "compressed" in err and "oracle" in err

    def test_missing_model_file(self, capsys):
        assert run_cli("run", "--model", "/nonexistent.snp", "--format", "sparse") == 1

    def test_invalid_model_file_is_validation_error(self, tmp_path, capsys):
        bad = tmp_path / "bad.snp"
        bad.write_text("snp 1\nneurons 1\nspikes 0\nsynapse 1 1\n")
        assert run_cli("run", "--model", str(bad), "--format", "sparse") == 2
        assert "model error" in capsys.readouterr().err

    def test_runtime_error_exit_code(self, tmp_path, capsys):
        # condition below consumption: applying it drives the count negative
        bad = tmp_path / "neg.snp"
        bad.write_text("snp 1\nneurons 1\nspikes 1\nrule 1 ge 1 2 1 0\n")
        assert run_cli("run", "--model", str(bad), "--format", "ell") == 3
        assert "simulation error" in capsys.readouterr().err

    def test_workers_flag(self, tmp_path):
        a = tmp_path / "a.trace"
        b = tmp_path / "b.trace"
        run_cli("run", "--family", "sort", "-n", "10", "--format", "ell",
                "--workers", "1", "--trace-out", str(a))
        run_cli("run", "--family", "sort", "-n", "10", "--format", "ell",
                "--workers", "4", "--trace-out", str(b))
        assert a.read_bytes() == b.read_bytes()


class TestBench:
    def test_csv_shape_and_values(self, tmp_path, capsys):
        out = tmp_path / "bench.csv"
        assert run_cli("bench", "--family", "sort", "--sizes", "3,5",
                       "--formats", "sparse,ell,compressed", "--reps", "3",
                       "--csv-out", str(out)) == 0
        text = out.read_text()
        lines = text.splitlines()
        assert lines[0] == CSV_HEADER
        assert len(lines) == 1 + 2 * 3 * 3  # sizes x formats x reps
        rows = list(csv.DictReader(io.StringIO(text)))
        for row in rows:
            size = int(row["size"])
            fmt = Format(row["format"])
            system = gen_sort(SortInstance(size))
            assert int(row["elements"]) == storage_elements(fmt, system)
            assert row["halt"] == "no_applicable_rules"
            assert float(row["wall_ms"]) >= 0.0
            assert int(row["rep"]) in (1, 2, 3)
        assert "build_ms" in capsys.readouterr().out

    def test_bench_to_stdout(self, capsys):
        assert run_cli("bench", "--family", "subsetsum", "--sizes", "3",
                       "--formats", "compressed", "--reps", "1") == 0
        out = capsys.readouterr().out
        assert CSV_HEADER in out

    def test_bad_reps(self):
        assert run_cli("bench", "--family", "sort", "--sizes", "3",
                       "--reps", "0") == 1

    def test_bad_format_list(self):
        assert run_cli("bench", "--family", "sort", "--sizes", "3",
                       "--formats", "oracle") == 1


class TestSize:
    def test_sort_100_reference_counts(self, capsys):
        assert run_cli("size", "--family", "sort", "-n", "100") == 0
        out = capsys.readouterr().out
        assert "ell elements=2071101" in out
        assert "compressed elements=71301" in out

    def test_single_format(self, capsys):
        assert run_cli("size", "--family", "sort", "-n", "100",
                       "--format", "compressed") == 0
        out = capsys.readouterr().out
        assert out.strip().startswith("compressed elements=71301")

    def test_empty_model_formula_constant(self, tmp_path, capsys):
        empty = tmp_path / "empty.snp"
        empty.write_text("snp 1\nneurons 0\nspikes\n")
        assert run_cli("size", "--model", str(empty)) == 0
        for line in capsys.readouterr().out.splitlines():
            assert "elements=1 " in line


class TestTopLevel:
    def test_no_command_prints_help(self, capsys):
        assert run_cli() == 1
        assert "generate" in capsys.readouterr().out
