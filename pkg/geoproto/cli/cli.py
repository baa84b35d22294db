""" The ``geoproto.cli`` package ``cli`` module. """

from argparse import ArgumentParser, Namespace
from logging import basicConfig, getLogger
from pathlib import Path
import sys
from typing import Any, Mapping, Optional, Sequence

from yaml import safe_dump

from geoproto.base.exception import GeoProtoError, InternalInvariantError
from geoproto.config.config import FitConfig
from geoproto.features.utility.parsing import FeatureSetParsingUtility
from geoproto.features.utility.serialization import ModelSerializationUtility
from geoproto.pipeline.pipeline import GeoProtoPipeline
from geoproto.synth.synth import SyntheticDataUtility


def _build_argument_parser(
) -> ArgumentParser:
    """
    Build the argument parser.

    :returns: The argument parser.
    """

    argument_parser = ArgumentParser(
        prog="geoproto",
        description="Class-conditional diffusion geometry prototype matching."
    )

    argument_parser.add_argument(
        "--threads",
        type=int,
        default=None,
        help="The number of worker threads. Defaults to the available parallelism."
    )

    argument_parser.add_argument(
        "--log-level",
        default="WARNING",
        choices=["DEBUG", "INFO", "WARNING", "ERROR", ],
        help="The level of the log messages written to standard error."
    )

    subparsers = argument_parser.add_subparsers(
        dest="command",
        required=True
    )

    fit_parser = subparsers.add_parser(
        "fit",
        help="Fit the class manifolds and the prototypes."
    )

    fit_parser.add_argument("--features", required=True, help="The training feature file.")
    fit_parser.add_argument("--format", default=None, choices=FeatureSetParsingUtility.SUPPORTED_FORMATS)
    fit_parser.add_argument("--config", default=None, help="The YAML fit configuration file.")
    fit_parser.add_argument("--candidates", default=None, help="The prototype candidate feature file.")
    fit_parser.add_argument("--out", required=True, help="The model file.")
    fit_parser.add_argument("--report", default=None, help="The YAML fit report file.")
    fit_parser.add_argument("--progress", action="store_true", help="Show the per-epoch progress line.")

    classify_parser = subparsers.add_parser(
        "classify",
        help="Classify queries and explain every prediction by its nearest prototype."
    )

    classify_parser.add_argument("--model", required=True, help="The model file.")
    classify_parser.add_argument("--features", required=True, help="The query feature file.")
    classify_parser.add_argument("--format", default=None, choices=FeatureSetParsingUtility.SUPPORTED_FORMATS)
    classify_parser.add_argument("--out", required=True, help="The CSV classification file.")

    bench_parser = subparsers.add_parser(
        "bench",
        help="Measure the latency, the accuracy and the geodesic agreement of a model."
    )

    bench_parser.add_argument("--model", required=True, help="The model file.")
    bench_parser.add_argument("--queries", required=True, help="The labelled query feature file.")
    bench_parser.add_argument("--format", default=None, choices=FeatureSetParsingUtility.SUPPORTED_FORMATS)
    bench_parser.add_argument("--repeat", type=int, default=1, help="The number of timed passes.")
    bench_parser.add_argument("--intrinsic", default=None, help="The intrinsic coordinate file of the queries.")
    bench_parser.add_argument("--pairs", type=int, default=2000, help="The number of geodesic agreement pairs.")
    bench_parser.add_argument("--seed", type=int, default=0, help="The seed of the pair sampling.")
    bench_parser.add_argument("--report", default=None, help="The YAML benchmark report file.")

    synth_parser = subparsers.add_parser(
        "synth",
        help="Generate a synthetic manifold feature file with its intrinsic coordinates."
    )

    synth_parser.add_argument("--generator", required=True, choices=sorted(SyntheticDataUtility.INTRINSIC_NAMES))
    synth_parser.add_argument("--n", type=int, required=True, help="The number of samples.")
    synth_parser.add_argument("--noise", type=float, default=0.0, help="The standard deviation of the noise.")
    synth_parser.add_argument("--radii", type=float, nargs=2, default=[1.0, 1.3], help="The radii of the circles.")
    synth_parser.add_argument("--seed", type=int, default=0, help="The seed of the sampling.")
    synth_parser.add_argument("--out", required=True, help="The feature CSV file.")

    return argument_parser


def _write_report(
        report: Mapping[str, Any],
        file_path: Optional[str] = None
) -> None:
    """
    Write a report as YAML to standard output and optionally to a file.

    :parameter report: The report.
    :parameter file_path: The path to the report file. The value `None` indicates that no file should be written.
    """

    report_text = safe_dump(dict(report), sort_keys=True)

    sys.stdout.write(report_text)

    if file_path is not None:
        Path(file_path).write_text(report_text, encoding="utf-8")


def run_fit(
        arguments: Namespace
) -> int:
    """
    Run the `fit` command.

    :parameter arguments: The parsed arguments.

    :returns: The exit code.
    """

    config = FitConfig() if arguments.config is None else FitConfig.from_yaml(
        file_path=arguments.config
    )

    feature_set = FeatureSetParsingUtility.load_feature_set(
        file_path=arguments.features,
        file_format=arguments.format
    )

    candidates = None if arguments.candidates is None else FeatureSetParsingUtility.load_feature_set(
        file_path=arguments.candidates
    )

    bundle, report = GeoProtoPipeline(
        config=config,
        number_of_threads=arguments.threads,
        show_progress=arguments.progress,
        logger=getLogger("geoproto")
    ).fit(
        feature_set=feature_set,
        candidates=candidates
    )

    ModelSerializationUtility.save_model(
        bundle=bundle,
        file_path=arguments.out
    )

    _write_report(
        report=report,
        file_path=arguments.report
    )

    return 0


def run_classify(
        arguments: Namespace
) -> int:
    """
    Run the `classify` command.

    :parameter arguments: The parsed arguments.

    :returns: The exit code.
    """

    bundle = ModelSerializationUtility.load_model(
        file_path=arguments.model
    )

    query_set = FeatureSetParsingUtility.load_feature_set(
        file_path=arguments.features,
        file_format=arguments.format
    )

    explanations = GeoProtoPipeline(
        config=bundle.config,
        number_of_threads=arguments.threads,
        logger=getLogger("geoproto")
    ).classify(
        bundle=bundle,
        queries=query_set.features
    )

    GeoProtoPipeline.explanation_table(
        explanations=explanations
    ).to_csv(
        path_or_buf=arguments.out,
        index=False,
        encoding="utf-8",
        lineterminator="\n"
    )

    return 0


def run_bench(
        arguments: Namespace
) -> int:
    """
    Run the `bench` command.

    :parameter arguments: The parsed arguments.

    :returns: The exit code.
    """

    bundle = ModelSerializationUtility.load_model(
        file_path=arguments.model
    )

    query_set = FeatureSetParsingUtility.load_feature_set(
        file_path=arguments.queries,
        file_format=arguments.format
    )

    intrinsic_path = arguments.intrinsic

    if intrinsic_path is None:
        sidecar_path = SyntheticDataUtility.intrinsic_path_for(
            feature_file_path=arguments.queries
        )

        if sidecar_path.is_file():
            intrinsic_path = sidecar_path

    intrinsic = None if intrinsic_path is None else SyntheticDataUtility.load_intrinsic(
        file_path=intrinsic_path
    )

    report = GeoProtoPipeline(
        config=bundle.config,
        number_of_threads=arguments.threads,
        logger=getLogger("geoproto")
    ).benchmark(
        bundle=bundle,
        query_set=query_set,
        repeat=arguments.repeat,
        intrinsic=intrinsic,
        pair_count=arguments.pairs,
        seed=arguments.seed
    )

    _write_report(
        report=report,
        file_path=arguments.report
    )

    return 0


def run_synth(
        arguments: Namespace
) -> int:
    """
    Run the `synth` command.

    :parameter arguments: The parsed arguments.

    :returns: The exit code.
    """

    if arguments.generator == "swiss_roll":
        synthetic_set = SyntheticDataUtility.gen_swiss_roll(
            n=arguments.n,
            noise=arguments.noise,
            seed=arguments.seed
        )

    else:
        synthetic_set = SyntheticDataUtility.gen_circles(
            n=arguments.n,
            radii=arguments.radii,
            noise=arguments.noise,
            seed=arguments.seed
        )

    FeatureSetParsingUtility.save_feature_set(
        feature_set=synthetic_set.to_feature_set(),
        file_path=arguments.out
    )

    SyntheticDataUtility.save_intrinsic(
        synthetic_set=synthetic_set,
        file_path=SyntheticDataUtility.intrinsic_path_for(
            feature_file_path=arguments.out
        )
    )

    return 0


COMMANDS = {
    "fit": run_fit,
    "classify": run_classify,
    "bench": run_bench,
    "synth": run_synth,
}


def main(
        argv: Optional[Sequence[str]] = None
) -> int:
    """
    Run the command-line interface.

    :parameter argv: The command-line arguments. The value `None` indicates the arguments of the process.

    :returns: The exit code, 0 on success, 1 on a user or data error and 2 on an internal invariant violation.
    """

    try:
        arguments = _build_argument_parser().parse_args(argv)

    except SystemExit as exception_handle:
        # Usage errors are user errors.
        return 0 if exception_handle.code in (0, None, ) else 1

    basicConfig(
        level=arguments.log_level,
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s"
    )

    try:
        return COMMANDS[arguments.command](arguments)

    except (GeoProtoError, OSError, ) as exception_handle:
        sys.stderr.write("geoproto: error: {message}\n".format(
            message=exception_handle
        ))

        return 1

    except InternalInvariantError as exception_handle:
        sys.stderr.write("geoproto: internal error: {message}\n".format(
            message=exception_handle
        ))

        return 2
