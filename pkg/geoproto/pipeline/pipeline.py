""" The ``geoproto.pipeline`` package ``pipeline`` module. """

from logging import Logger
from time import perf_counter
from typing import Any, Dict, List, Optional, Tuple

from numpy import asarray, float64, median, ndarray, percentile, sqrt

from pandas import DataFrame

from geoproto.base.base import BaseGeoProtoComponent
from geoproto.base.exception import ConfigurationError
from geoproto.base.utility.parallel import BaseParallelUtility
from geoproto.config.config import FitConfig
from geoproto.features.features import FeatureSet
from geoproto.features.utility.serialization import ModelBundle
from geoproto.graph.graph import ClassGraphUtility
from geoproto.nystrom.nystrom import NystromUtility
from geoproto.proto.proto import Explanation, PrototypeUtility
from geoproto.proto.utility.training import PrototypeTrainer
from geoproto.synth.synth import SyntheticDataUtility
from geoproto.synth.utility.metrics import EvaluationMetricsUtility


class GeoProtoPipeline(BaseGeoProtoComponent):
    """ The fit, classification and benchmark pipeline class. """

    BATCH_SIZE = 256

    def __init__(
            self,
            config: Optional[FitConfig] = None,
            number_of_threads: Optional[int] = None,
            show_progress: bool = False,
            logger: Optional[Logger] = None
    ) -> None:
        """
        The constructor method of the class.

        :parameter config: The fit configuration. The value `None` indicates the default configuration.
        :parameter number_of_threads: The number of worker threads. The value `None` indicates that the available
            parallelism should be utilized.
        :parameter show_progress: The indicator of whether the per-epoch progress line should be shown.
        :parameter logger: The logger. The value `None` indicates that the logger should not be utilized.
        """

        super().__init__(
            logger=logger
        )

        self.config = FitConfig() if config is None else config
        self.number_of_threads = number_of_threads
        self.show_progress = show_progress

    def fit(
            self,
            feature_set: FeatureSet,
            candidates: Optional[FeatureSet] = None
    ) -> Tuple[ModelBundle, Dict[str, Any]]:
        """
        Fit the class manifolds and the prototypes.

        :parameter feature_set: The training feature set.
        :parameter candidates: The candidate feature set. The value `None` indicates that the class features should be
            utilized.

        :returns: The model bundle and the fit report.
        """

        try:
            self._log_info(
                message="The fitting of the model has been started."
            )

            trainer = PrototypeTrainer(
                graph_config=self.config.graph,
                diffusion_config=self.config.diffusion,
                landmark_config=self.config.landmarks,
                prototype_config=self.config.prototypes,
                training_config=self.config.training,
                nystrom_mode=self.config.nystrom_mode,
                seed=self.config.seed,
                number_of_threads=self.number_of_threads,
                show_progress=self.show_progress,
                logger=self.logger
            )

            training_result = trainer.train_prototypes(
                feature_set=feature_set,
                pool=PrototypeUtility.candidate_pool_for(
                    feature_set=feature_set,
                    candidates=candidates
                )
            )

            bundle = ModelBundle(
                manifolds=dict(training_result.manifolds),
                prototypes=training_result.bank,
                config=self.config
            )

            report = {
                "classes": {},
                "loss_trace": [float(loss) for loss in training_result.loss_trace],
                "warnings": list(training_result.warnings),
            }

            for class_id in sorted(bundle.manifolds.keys()):
                manifold = bundle.manifolds[class_id]

                diagnostics = ClassGraphUtility.graph_diagnostics(
                    graph=manifold.graph
                )

                report["classes"][int(class_id)] = {
                    "n_c": int(feature_set.class_indices(class_id).size),
                    "landmarks": int(manifold.number_of_landmarks),
                    "components": int(diagnostics.components),
                    "avg_path_length": float(diagnostics.avg_path_length),
                    "effective_L": int(manifold.basis.L),
                    "warnings": list(manifold.warnings),
                }

            self._log_info(
                message="The fitting of the model has been completed."
            )

            return bundle, report

        except Exception as exception_handle:
            self._log_exception(
                exception_handle=exception_handle
            )

            raise

    def classify(
            self,
            bundle: ModelBundle,
            queries: ndarray
    ) -> List[Explanation]:
        """
        Classify a batch of query vectors on the worker pool.

        :parameter bundle: The model bundle.
        :parameter queries: The q x D query matrix.

        :returns: The explanations in query order.
        """

        try:
            self._log_info(
                message="The classification of the queries has been started."
            )

            queries = asarray(queries, dtype=float64)

            batches = [
                queries[batch_start:batch_start + self.BATCH_SIZE]
                for batch_start in range(0, queries.shape[0], self.BATCH_SIZE)
            ]

            explanations = [
                explanation
                for batch_explanations in BaseParallelUtility.map_in_order(
                    function=lambda batch: PrototypeUtility.classify_many(
                        queries=batch,
                        manifolds=bundle.manifolds,
                        bank=bundle.prototypes
                    ),
                    arguments=batches,
                    number_of_threads=self.number_of_threads,
                    description="Classifying the queries"
                )
                for explanation in batch_explanations
            ]

            self._log_info(
                message="The classification of the queries has been completed."
            )

            return explanations

        except Exception as exception_handle:
            self._log_exception(
                exception_handle=exception_handle
            )

            raise

    @staticmethod
    def explanation_table(
            explanations: List[Explanation]
    ) -> DataFrame:
        """
        Tabulate explanations with one row per query.

        :parameter explanations: The explanations in query order.

        :returns: The table of the query index, the predicted class, the class scores and the nearest prototype.
        """

        rows = list()

        for query_index, explanation in enumerate(explanations):
            nearest_class_id, nearest_prototype_index, nearest_distance = PrototypeUtility.nearest_prototype(
                explanation=explanation
            )

            row = {
                "query_index": query_index,
                "predicted_class": explanation.predicted_class,
            }

            for class_id, score in zip(explanation.class_ids, explanation.scores):
                row["score_{class_id:d}".format(class_id=class_id)] = float(score)

            row["nearest_prototype_class"] = nearest_class_id
            row["nearest_prototype_index"] = nearest_prototype_index
            row["nearest_prototype_distance"] = nearest_distance

            rows.append(row)

        return DataFrame(rows)

    def benchmark(
            self,
            bundle: ModelBundle,
            query_set: FeatureSet,
            repeat: int = 1,
            intrinsic: Optional[Tuple[str, ndarray]] = None,
            pair_count: int = 2000,
            seed: int = 0
    ) -> Dict[str, Any]:
        """
        Measure the per-query latency and the quality of a model on a labelled query set.

        :parameter bundle: The model bundle.
        :parameter query_set: The labelled query set.
        :parameter repeat: The number of timed passes over the queries.
        :parameter intrinsic: The generator and the intrinsic coordinates of the queries. The value `None` indicates
            that the geodesic agreement should not be reported.
        :parameter pair_count: The number of same-class pairs of the geodesic agreement.
        :parameter seed: The seed of the pair sampling.

        :returns: The benchmark report.
        """

        if isinstance(repeat, bool) or not isinstance(repeat, int) or repeat < 1:
            self._raise_and_log_exception(
                exception_class=ConfigurationError,
                exception_message="repeat must be a positive integer."
            )

        try:
            self._log_info(
                message="The benchmark of the model has been started."
            )

            latencies = list()

            for _ in range(repeat):
                for query in query_set.features:
                    start_time = perf_counter()

                    PrototypeUtility.classify(
                        query=query,
                        manifolds=bundle.manifolds,
                        bank=bundle.prototypes
                    )

                    latencies.append(1000.0 * (perf_counter() - start_time))

            explanations = self.classify(
                bundle=bundle,
                queries=query_set.features
            )

            predicted = asarray([explanation.predicted_class for explanation in explanations])
            correct = predicted == query_set.labels

            report = {
                "queries": int(query_set.number_of_samples),
                "repeat": int(repeat),
                "latency_ms_median": float(median(latencies)),
                "latency_ms_p95": float(percentile(latencies, 95.0)),
                "accuracy": EvaluationMetricsUtility.accuracy(
                    predicted=predicted,
                    labels=query_set.labels
                ),
                "ece": EvaluationMetricsUtility.ece(
                    confidences=EvaluationMetricsUtility.softmax_confidences(
                        scores=asarray([explanation.scores for explanation in explanations])
                    ),
                    correct=correct
                ),
            }

            if intrinsic is not None:
                report.update(self.geodesic_agreement(
                    bundle=bundle,
                    query_set=query_set,
                    intrinsic=intrinsic,
                    pair_count=pair_count,
                    seed=seed
                ))

            self._log_info(
                message="The benchmark of the model has been completed."
            )

            return report

        except Exception as exception_handle:
            self._log_exception(
                exception_handle=exception_handle
            )

            raise

    @staticmethod
    def geodesic_agreement(
            bundle: ModelBundle,
            query_set: FeatureSet,
            intrinsic: Tuple[str, ndarray],
            pair_count: int = 2000,
            seed: int = 0
    ) -> Dict[str, float]:
        """
        Compare the rank agreement of the diffusion and the Euclidean distances with the exact geodesic distances over
        random same-class query pairs.

        :parameter bundle: The model bundle.
        :parameter query_set: The labelled query set.
        :parameter intrinsic: The generator and the n x 2 intrinsic coordinates of the queries.
        :parameter pair_count: The number of pairs.
        :parameter seed: The seed of the pair sampling.

        :returns: The rank correlations of both distances with the geodesic distances and their difference.
        """

        generator, intrinsic_coords = intrinsic[0], asarray(intrinsic[1], dtype=float64)

        if intrinsic_coords.shape[0] != query_set.number_of_samples:
            raise ConfigurationError(
                "The intrinsic coordinates must have one row per query."
            )

        first, second = EvaluationMetricsUtility.sample_same_class_pairs(
            labels=query_set.labels,
            count=pair_count,
            seed=seed
        )

        diffusion_coords = dict()

        for class_id in bundle.prototypes.class_ids:
            class_indices = query_set.class_indices(class_id)

            if class_indices.size > 0:
                diffusion_coords[class_id] = dict(zip(
                    class_indices.tolist(),
                    NystromUtility.extend_many(
                        manifold=bundle.manifolds[class_id],
                        queries=query_set.features[class_indices],
                        mode=bundle.prototypes.mode
                    ).diffusion_coords
                ))

        diffusion_distances = asarray([
            sqrt(((
                diffusion_coords[int(query_set.labels[i])][i] - diffusion_coords[int(query_set.labels[j])][j]
            ) ** 2).sum())
            for i, j in zip(first.tolist(), second.tolist())
        ])

        return EvaluationMetricsUtility.geodesic_agreement(
            diffusion_distances=diffusion_distances,
            euclidean_distances=sqrt(((query_set.features[first] - query_set.features[second]) ** 2).sum(axis=1)),
            geodesic_distances=SyntheticDataUtility.geodesic_from_intrinsic(
                generator=generator,
                first=intrinsic_coords[first],
                second=intrinsic_coords[second]
            )
        )
