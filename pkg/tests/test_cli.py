""" The ``geoproto.cli`` package tests. """

from argparse import Namespace
from pathlib import Path

from pandas import read_csv

from pytest import CaptureFixture, MonkeyPatch, fixture

from yaml import safe_load

from geoproto.base.exception import InternalInvariantError
from geoproto.cli import cli
from geoproto.cli.cli import main


SMALL_CONFIG = (
    "graph:\n"
    "  k: 6\n"
    "diffusion:\n"
    "  t: 2\n"
    "  L: 6\n"
    "landmarks:\n"
    "  selection: random\n"
    "  count: 40\n"
    "  update_every: 0\n"
    "prototypes:\n"
    "  m: 2\n"
)


@fixture
def workspace(
        tmp_path: Path
) -> Path:
    """ Get a directory with a synthetic circles feature file and a small fit configuration. """

    (tmp_path / "config.yaml").write_text(SMALL_CONFIG, encoding="utf-8")

    assert main([
        "synth", "--generator", "circles", "--n", "120", "--noise", "0.02", "--seed", "3",
        "--out", str(tmp_path / "circles.csv"),
    ]) == 0

    return tmp_path


def _fit(
        workspace: Path,
        threads: int,
        model_name: str = "model.gpro"
) -> Path:
    """ Fit a model on the circles of a workspace and return its path. """

    assert main([
        "--threads", str(threads), "fit",
        "--features", str(workspace / "circles.csv"),
        "--config", str(workspace / "config.yaml"),
        "--out", str(workspace / model_name),
        "--report", str(workspace / "{model_name:s}.yaml".format(model_name=model_name)),
    ]) == 0

    return workspace / model_name


def test_synth_writes_features_and_intrinsic(
        workspace: Path
) -> None:
    """ Test that the synth command writes the feature file and its intrinsic coordinate sidecar. """

    assert (workspace / "circles.csv").read_text(encoding="utf-8").startswith("label,f0,f1\n")
    assert (workspace / "circles.intrinsic.csv").read_text(encoding="utf-8").startswith("radius,theta\n")


def test_fit_classify_bench(
        workspace: Path,
        capsys: CaptureFixture
) -> None:
    """ Test the fit, classify and bench commands end to end. """

    model_path = _fit(workspace, threads=1)

    fit_report = safe_load((workspace / "model.gpro.yaml").read_text(encoding="utf-8"))

    assert sorted(fit_report["classes"].keys()) == [1, 2]
    assert fit_report["classes"][1]["landmarks"] == 40
    assert fit_report["classes"][1]["n_c"] == 60
    assert fit_report["classes"][1]["effective_L"] == 6
    assert model_path.read_bytes()[:4] == b"GPRO"

    capsys.readouterr()

    assert main([
        "classify", "--model", str(model_path),
        "--features", str(workspace / "circles.csv"),
        "--out", str(workspace / "classified.csv"),
    ]) == 0

    table = read_csv(workspace / "classified.csv")

    assert list(table.columns) == [
        "query_index", "predicted_class", "score_1", "score_2",
        "nearest_prototype_class", "nearest_prototype_index", "nearest_prototype_distance",
    ]

    assert len(table) == 120
    assert set(table["predicted_class"]) <= {1, 2}

    assert main([
        "bench", "--model", str(model_path),
        "--queries", str(workspace / "circles.csv"),
        "--repeat", "2",
        "--pairs", "200",
        "--report", str(workspace / "bench.yaml"),
    ]) == 0

    bench_report = safe_load(capsys.readouterr().out)

    assert bench_report == safe_load((workspace / "bench.yaml").read_text(encoding="utf-8"))
    assert bench_report["queries"] == 120
    assert bench_report["repeat"] == 2
    assert 0.0 <= bench_report["accuracy"] <= 1.0
    assert 0.0 <= bench_report["ece"] <= 1.0
    assert bench_report["latency_ms_median"] <= bench_report["latency_ms_p95"]
    assert {"spearman_diffusion", "spearman_euclidean", "spearman_gain", } <= set(bench_report.keys())


def test_outputs_do_not_depend_on_threads(
        workspace: Path
) -> None:
    """ Test that the model and the classification files are byte-identical for one and several threads. """

    single_thread_model = _fit(workspace, threads=1, model_name="single.gpro")
    multi_thread_model = _fit(workspace, threads=4, model_name="multi.gpro")

    assert single_thread_model.read_bytes() == multi_thread_model.read_bytes()

    for threads in (1, 4, ):
        assert main([
            "--threads", str(threads), "classify", "--model", str(single_thread_model),
            "--features", str(workspace / "circles.csv"),
            "--out", str(workspace / "classified_{threads:d}.csv".format(threads=threads)),
        ]) == 0

    assert (workspace / "classified_1.csv").read_bytes() == (workspace / "classified_4.csv").read_bytes()


def test_bench_quality_fields_do_not_depend_on_repeats(
        workspace: Path,
        capsys: CaptureFixture
) -> None:
    """ Test that the non-timing benchmark fields are identical across repeat counts. """

    model_path = _fit(workspace, threads=1)

    reports = list()

    for repeat in (1, 3, ):
        capsys.readouterr()

        assert main([
            "bench", "--model", str(model_path),
            "--queries", str(workspace / "circles.csv"),
            "--repeat", str(repeat),
            "--pairs", "100",
        ]) == 0

        report = safe_load(capsys.readouterr().out)

        reports.append({
            key: value
            for key, value in report.items()
            if not key.startswith("latency") and key != "repeat"
        })

    assert reports[0] == reports[1]


def test_fractional_diffusion_time_exit_code(
        workspace: Path,
        capsys: CaptureFixture
) -> None:
    """ Test that a fractional diffusion time exits with code 1 and names the field. """

    (workspace / "config.yaml").write_text("diffusion:\n  t: 2.5\n", encoding="utf-8")

    capsys.readouterr()

    assert main([
        "fit", "--features", str(workspace / "circles.csv"),
        "--config", str(workspace / "config.yaml"),
        "--out", str(workspace / "model.gpro"),
    ]) == 1

    assert "t must be a positive integer" in capsys.readouterr().err
    assert not (workspace / "model.gpro").exists()


def test_missing_file_exit_code(
        tmp_path: Path,
        capsys: CaptureFixture
) -> None:
    """ Test that a missing feature file exits with code 1. """

    assert main([
        "fit", "--features", str(tmp_path / "missing.csv"),
        "--out", str(tmp_path / "model.gpro"),
    ]) == 1

    assert capsys.readouterr().err.startswith("geoproto: error:")


def test_dimension_mismatch_exit_code(
        workspace: Path
) -> None:
    """ Test that queries with an extra column exit with code 1. """

    model_path = _fit(workspace, threads=1)

    (workspace / "wide.csv").write_text("label,f0,f1,f2\n1,0.5,0.5,0.5\n", encoding="utf-8")

    assert main([
        "classify", "--model", str(model_path),
        "--features", str(workspace / "wide.csv"),
        "--out", str(workspace / "classified.csv"),
    ]) == 1


def test_corrupted_model_exit_code(
        workspace: Path
) -> None:
    """ Test that a corrupted model file exits with code 1. """

    model_path = _fit(workspace, threads=1)

    data = bytearray(model_path.read_bytes())
    data[-20] ^= 0xFF
    model_path.write_bytes(bytes(data))

    assert main([
        "classify", "--model", str(model_path),
        "--features", str(workspace / "circles.csv"),
        "--out", str(workspace / "classified.csv"),
    ]) == 1


def test_internal_error_exit_code(
        tmp_path: Path,
        monkeypatch: MonkeyPatch,
        capsys: CaptureFixture
) -> None:
    """ Test that an internal invariant violation exits with code 2. """

    def failing_command(
            arguments: Namespace
    ) -> int:
        raise InternalInvariantError("The invariant has been violated.")

    monkeypatch.setitem(cli.COMMANDS, "synth", failing_command)

    assert main([
        "synth", "--generator", "circles", "--n", "10", "--out", str(tmp_path / "circles.csv"),
    ]) == 2

    assert "internal error" in capsys.readouterr().err


def test_usage_errors(
        capsys: CaptureFixture
) -> None:
    """ Test that an unknown command and a missing argument exit with the user error code. """

    assert main(["transform"]) == 1
    assert main(["fit", "--features", "features.csv"]) == 1
    assert "usage" in capsys.readouterr().err

    assert main(["--help"]) == 0
