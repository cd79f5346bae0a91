import numpy as np
import pytest

from gaids import synth
from gaids.cli import EXIT_CONFIG, EXIT_MODEL, EXIT_OK, EXIT_PARSE, main
from gaids.ingest import read_records
from gaids.model import load_model
from gaids.synth import generate_lines

from conftest import REAL_LINES


@pytest.fixture
def workspace(tmp_path):
    train = tmp_path / "train.kdd"
    test = tmp_path / "test.kdd"
    train.write_text("\n".join(generate_lines(3, 40, 0.5, 0.02, seed=1)) + "\n")
    test.write_text("\n".join(generate_lines(3, 15, 0.5, 0.02, seed=2)) + "\n")
    return tmp_path, train, test


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestSynthCommand:
    def test_writes_shape_valid_lines(self, tmp_path, capsys):
        out = tmp_path / "synth.kdd"
        code, stdout, _ = run_cli(
            capsys, "synth", "--clusters", "5", "--points-per-cluster", "100",
            "--output", str(out),
        )
        assert code == EXIT_OK
        lines = out.read_text().splitlines()
        assert len(lines) == 500
        assert all(len(line.split(",")) == 42 for line in lines)
        assert "wrote 500 records" in stdout

    def test_roundtrips_through_ingest(self, tmp_path, capsys):
        out = tmp_path / "synth.kdd"
        run_cli(capsys, "synth", "--output", str(out), "--points-per-cluster", "20")
        records, skipped = read_records(out.read_text().splitlines())
        assert skipped == 0
        assert len(records) == 100

    def test_invalid_params_exit_config(self, tmp_path, capsys):
        code, _, err = run_cli(
            capsys, "synth", "--clusters", "5", "--separation", "2.0",
            "--output", str(tmp_path / "x.kdd"),
        )
        assert code == EXIT_CONFIG
        assert "error:" in err

    def test_zero_separation_centers_coincide(self):
        centers = synth.make_centers(2, 0.0)
        assert np.array_equal(centers[0], centers[1])

    def test_separation_guarantee(self):
        centers = synth.make_centers(5, 0.5)
        for i in range(5):
            for j in range(i + 1, 5):
                d = np.sqrt(((centers[i] - centers[j]) ** 2).sum() / centers.shape[1])
                assert d >= 0.5 - 1e-12


class TestTrainCommand:
    def test_trains_and_reports(self, workspace, capsys):
        tmp, train, _ = workspace
        model_path = tmp / "m.model"
        code, stdout, _ = run_cli(
            capsys, "train", "--train-file", str(train), "--model", str(model_path),
        )
        assert code == EXIT_OK
        assert model_path.exists()
        assert "groups=3" in stdout
        assert "total=120" in stdout
        m = load_model(model_path)
        assert m.training_size == 120

    def test_single_record_training_file(self, tmp_path, capsys):
        train = tmp_path / "one.kdd"
        train.write_text(REAL_LINES[0] + "\n")
        model_path = tmp_path / "m.model"
        code, stdout, _ = run_cli(
            capsys, "train", "--train-file", str(train), "--model", str(model_path),
        )
        assert code == EXIT_OK
        m = load_model(model_path)
        assert len(m.groups) == 1
        assert m.groups[0].chromosomes[0].member_count == 1
        assert "chromosomes=1" in stdout

    def test_deterministic_model_files(self, workspace, capsys):
        tmp, train, _ = workspace
        p1, p2 = tmp / "m1.model", tmp / "m2.model"
        run_cli(capsys, "train", "--train-file", str(train), "--model", str(p1))
        run_cli(capsys, "train", "--train-file", str(train), "--model", str(p2))
        assert p1.read_bytes() == p2.read_bytes()

    def test_missing_file_exit_config(self, tmp_path, capsys):
        code, _, err = run_cli(
            capsys, "train", "--train-file", str(tmp_path / "nope.kdd"),
            "--model", str(tmp_path / "m.model"),
        )
        assert code == EXIT_CONFIG

    def test_malformed_strict_exit_parse(self, tmp_path, capsys):
        bad = tmp_path / "bad.kdd"
        bad.write_text(REAL_LINES[0] + "\n1,2,3\n")
        code, _, err = run_cli(
            capsys, "train", "--train-file", str(bad), "--model", str(tmp_path / "m.model"),
        )
        assert code == EXIT_PARSE
        assert "bad.kdd:2" in err

    def test_malformed_lenient_skips(self, tmp_path, capsys):
        bad = tmp_path / "bad.kdd"
        bad.write_text(REAL_LINES[0] + "\n1,2,3\n" + REAL_LINES[2] + "\n")
        code, stdout, _ = run_cli(
            capsys, "train", "--lenient", "--train-file", str(bad),
            "--model", str(tmp_path / "m.model"),
        )
        assert code == EXIT_OK
        assert "skipped=1" in stdout
        assert "groups=2" in stdout


class TestDetectCommand:
    def test_rows_and_determinism(self, workspace, capsys):
        tmp, train, test = workspace
        model_path = tmp / "m.model"
        run_cli(capsys, "train", "--train-file", str(train), "--model", str(model_path))
        argv = ["detect", "--model", str(model_path), "--test-file", str(test), "--seed", "9"]
        code, out1, _ = run_cli(capsys, *argv)
        assert code == EXIT_OK
        rows = out1.strip().splitlines()
        assert len(rows) == 45
        first = rows[0].split(",")
        assert first[0] == "0"
        assert first[1] in ("normal", "smurf", "nmap")
        assert first[2] in ("normal", "dos", "probe")
        int(first[4])
        _, out2, _ = run_cli(capsys, *argv)
        assert out1 == out2

    def test_parallel_rows_identical(self, workspace, capsys):
        tmp, train, test = workspace
        model_path = tmp / "m.model"
        run_cli(capsys, "train", "--train-file", str(train), "--model", str(model_path))
        base = ["detect", "--model", str(model_path), "--test-file", str(test)]
        _, serial, _ = run_cli(capsys, *base, "--workers", "1")
        _, parallel, _ = run_cli(capsys, *base, "--workers", "3")
        assert serial == parallel

    def test_unlabeled_input_accepted(self, workspace, capsys):
        tmp, train, test = workspace
        model_path = tmp / "m.model"
        run_cli(capsys, "train", "--train-file", str(train), "--model", str(model_path))
        unlabeled = tmp / "unlabeled.kdd"
        unlabeled.write_text(
            "\n".join(",".join(line.split(",")[:-1]) for line in test.read_text().splitlines())
            + "\n"
        )
        code, stdout, _ = run_cli(
            capsys, "detect", "--model", str(model_path), "--test-file", str(unlabeled),
        )
        assert code == EXIT_OK
        assert len(stdout.strip().splitlines()) == 45

    def test_empty_input_empty_output(self, workspace, capsys):
        tmp, train, _ = workspace
        model_path = tmp / "m.model"
        run_cli(capsys, "train", "--train-file", str(train), "--model", str(model_path))
        empty = tmp / "empty.kdd"
        empty.write_text("")
        code, stdout, _ = run_cli(
            capsys, "detect", "--model", str(model_path), "--test-file", str(empty),
        )
        assert code == EXIT_OK
        assert stdout == ""

    def test_centroid_record_degenerate_params(self, tmp_path, capsys):
        train = tmp_path / "train.kdd"
        train.write_text(REAL_LINES[0] + "\n" + REAL_LINES[2] + "\n")
        model_path = tmp_path / "m.model"
        run_cli(capsys, "train", "--train-file", str(train), "--model", str(model_path))
        code, stdout, _ = run_cli(
            capsys, "detect", "--model", str(model_path), "--test-file", str(train),
            "--population-size", "1", "--mutation-rate", "0", "--crossover-rate", "0",
        )
        assert code == EXIT_OK
        rows = [r.split(",") for r in stdout.strip().splitlines()]
        assert rows[0][1] == "normal" and rows[0][3] == "0.0"
        assert rows[1][1] == "smurf" and rows[1][3] == "0.0"

    def test_bad_model_exit_model(self, workspace, capsys):
        tmp, _, test = workspace
        junk = tmp / "junk.model"
        junk.write_text("gaids-model 42 0.125 0 38\n")
        code, _, err = run_cli(
            capsys, "detect", "--model", str(junk), "--test-file", str(test),
        )
        assert code == EXIT_MODEL


class TestEvaluateCommand:
    def test_reports_and_parallel_equivalence(self, workspace, capsys):
        tmp, train, test = workspace
        model_path = tmp / "m.model"
        run_cli(capsys, "train", "--train-file", str(train), "--model", str(model_path))
        base = ["evaluate", "--model", str(model_path), "--test-file", str(test), "--seed", "5"]
        code, table1, _ = run_cli(capsys, *base, "--workers", "1")
        assert code == EXIT_OK
        assert "Confusion matrix" in table1
        assert "detection_rate=" in table1
        _, table2, _ = run_cli(capsys, *base, "--workers", "4")
        assert table1 == table2

    def test_self_evaluation_full_recall_with_zero_range(self, workspace, capsys):
        # Range 0: every distinct training record seeds its own chromosome, so
        # re-detecting the training file with the degenerate search must land
        # every record on its own zero-distance prototype.
        tmp, train, _ = workspace
        model_path = tmp / "m.model"
        run_cli(capsys, "train", "--train-file", str(train), "--model", str(model_path), "--range", "0")
        code, stdout, _ = run_cli(
            capsys, "evaluate", "--model", str(model_path), "--test-file", str(train),
            "--population-size", "1", "--mutation-rate", "0", "--crossover-rate", "0",
            "--report", "kv",
        )
        assert code == EXIT_OK
        cells = {}
        for line in stdout.splitlines():
            if line.startswith("cell,"):
                _, actual, predicted, count = line.split(",")
                cells[(actual, predicted)] = int(count)
        for (actual, predicted), count in cells.items():
            if count:
                assert actual == predicted
        assert sum(cells.values()) == 120

    def test_kv_report_selected(self, workspace, capsys):
        tmp, train, test = workspace
        model_path = tmp / "m.model"
        run_cli(capsys, "train", "--train-file", str(train), "--model", str(model_path))
        code, stdout, _ = run_cli(
            capsys, "evaluate", "--model", str(model_path), "--test-file", str(test),
            "--report", "kv",
        )
        assert code == EXIT_OK
        assert stdout.startswith("cell,normal,normal,")
        assert "true_positive=" in stdout


class TestConfigFile:
    def test_config_value_applies(self, workspace, capsys):
        tmp, train, test = workspace
        model_path = tmp / "m.model"
        run_cli(capsys, "train", "--train-file", str(train), "--model", str(model_path))
        config = tmp / "run.conf"
        config.write_text(
            f"model={model_path}\ntest-file={test}\npopulation-size=1\n"
            "mutation-rate=0\ncrossover-rate=0\n# comment line\n"
        )
        code, stdout, _ = run_cli(capsys, "detect", "--config", str(config))
        assert code == EXIT_OK
        # population 1 with no variation stops after a single generation
        assert all(row.split(",")[4] == "1" for row in stdout.strip().splitlines())

    def test_cli_overrides_config(self, workspace, capsys):
        tmp, train, test = workspace
        model_path = tmp / "m.model"
        run_cli(capsys, "train", "--train-file", str(train), "--model", str(model_path))
        config = tmp / "run.conf"
        config.write_text(f"model={model_path}\ntest-file={test}\npopulation-size=1\n")
        code, stdout, _ = run_cli(
            capsys, "detect", "--config", str(config), "--population-size", "32",
        )
        assert code == EXIT_OK
        assert all(row.split(",")[4] == "13" for row in stdout.strip().splitlines())

    def test_unknown_key_exit_config(self, tmp_path, capsys):
        config = tmp_path / "run.conf"
        config.write_text("warp-speed=9\n")
        code, _, err = run_cli(capsys, "detect", "--config", str(config))
        assert code == EXIT_CONFIG
        assert "unknown key" in err

    def test_bad_value_exit_config(self, tmp_path, capsys):
        config = tmp_path / "run.conf"
        config.write_text("population-size=lots\n")
        code, _, _ = run_cli(capsys, "detect", "--config", str(config))
        assert code == EXIT_CONFIG

    def test_invalid_ga_params_exit_config(self, workspace, capsys):
        tmp, train, _ = workspace
        code, _, err = run_cli(
            capsys, "train", "--train-file", str(train), "--model", str(tmp / "m.model"),
            "--removal-fraction", "1.5",
        )
        assert code == EXIT_CONFIG
