""" The ``geoproto.proto.utility`` package ``training`` module. """

from dataclasses import dataclass, field, replace
from logging import Logger
from typing import Dict, List, Mapping, Optional, Tuple

from numpy import arange, asarray, isfinite, log, maximum, ndarray, zeros

from scipy.special import log_softmax, softmax
from scipy.spatial.distance import cdist

from tqdm import tqdm

from geoproto.base.base import BaseGeoProtoComponent
from geoproto.base.exception import ConfigurationError, NonFiniteLossError
from geoproto.features.features import FeatureSet
from geoproto.graph.graph import GraphConfig
from geoproto.landmarks.landmarks import LandmarkConfig, LandmarkManifoldRefresher, LandmarkSet, LandmarkUtility
from geoproto.nystrom.nystrom import ClassManifold
from geoproto.proto.proto import CandidatePool, PrototypeBank, PrototypeConfig, PrototypeUtility
from geoproto.proto.utility.metric import MatchingMetricUtility
from geoproto.spectral.spectral import DiffusionConfig


@dataclass(frozen=True)
class TrainingConfig:
    """ The prototype training configuration class. """

    epochs: int = 0
    step_size: float = 0.1
    head_step_size: float = 0.01

    def __post_init__(
            self
    ) -> None:
        """ Validate the configuration. """

        if isinstance(self.epochs, bool) or not isinstance(self.epochs, int) or self.epochs < 0:
            raise ConfigurationError(
                "epochs must be a nonnegative integer."
            )

        for name in ("step_size", "head_step_size", ):
            value = getattr(self, name)

            if isinstance(value, bool) or not isinstance(value, (int, float, )) or not value >= 0.0:
                raise ConfigurationError(
                    "{name:s} must be a nonnegative number.".format(
                        name=name
                    )
                )


@dataclass(frozen=True, eq=False)
class TrainingResult:
    """ The prototype training result class. """

    bank: PrototypeBank
    loss_trace: List[float]
    manifolds: Mapping[int, ClassManifold]
    landmark_set: LandmarkSet
    warnings: Tuple[str, ...] = field(default_factory=tuple)


class PrototypeTrainingUtility:
    """ The prototype training loss utility class. """

    @staticmethod
    def loss_and_gradients(
            manifolds: Mapping[int, ClassManifold],
            bank: PrototypeBank,
            query_embeddings: Mapping[int, ndarray],
            labels: ndarray,
            bandwidths: Optional[Mapping[int, ndarray]] = None
    ) -> Tuple[float, Dict[int, ndarray], Dict[int, ndarray]]:
        """
        Compute the mean softmax cross-entropy of the relaxed prototypes and its gradients.

        :parameter manifolds: The class manifolds.
        :parameter bank: The prototype bank whose `prototypes` are the relaxed prototypes.
        :parameter query_embeddings: The N x L matching space coordinates of the training samples per class.
        :parameter labels: The N class labels of the training samples.
        :parameter bandwidths: The m fixed prototype bandwidths per class. The value `None` indicates that the
            k-nearest-neighbor bandwidths should be utilized.

        :returns: The loss, the m x D prototype gradients per class and the m head weight gradients per class.
        """

        class_ids = bank.class_ids
        labels = asarray(labels)

        squared_distances, similarities, prototype_coords = dict(), dict(), dict()

        for class_id in class_ids:
            prototype_coords[class_id], _ = MatchingMetricUtility.embed(
                manifold=manifolds[class_id],
                queries=bank.prototypes[class_id],
                metric=bank.metric,
                mode=bank.mode,
                bandwidths=None if bandwidths is None else bandwidths[class_id]
            )

            squared_distances[class_id] = cdist(query_embeddings[class_id], prototype_coords[class_id],
                                                metric="sqeuclidean")

            similarities[class_id] = log((squared_distances[class_id] + 1.0) /
                                         (squared_distances[class_id] + bank.epsilon_sim))

        scores = asarray([similarities[class_id] @ bank.head_weights[class_id] for class_id in class_ids]).T

        targets = asarray([class_ids.index(int(label)) for label in labels])
        number_of_samples = labels.size

        loss = float(-log_softmax(scores, axis=1)[arange(number_of_samples), targets].mean())

        score_gradients = softmax(scores, axis=1)
        score_gradients[arange(number_of_samples), targets] -= 1.0
        score_gradients /= number_of_samples

        prototype_gradients, head_gradients = dict(), dict()

        for column, class_id in enumerate(class_ids):
            class_score_gradients = score_gradients[:, column]

            head_gradients[class_id] = class_score_gradients @ similarities[class_id]

            similarity_slopes = 1.0 / (squared_distances[class_id] + 1.0) - \
                1.0 / (squared_distances[class_id] + bank.epsilon_sim)

            weights = class_score_gradients[:, None] * similarity_slopes * bank.head_weights[class_id][None, :]

            class_prototype_gradients = zeros(bank.prototypes[class_id].shape)

            for prototype_index in range(bank.m):
                coords_gradient = -2.0 * (
                    weights[:, prototype_index] @ (query_embeddings[class_id] - prototype_coords[class_id][prototype_index])
                )

                class_prototype_gradients[prototype_index] = MatchingMetricUtility.jacobian(
                    manifold=manifolds[class_id],
                    query=bank.prototypes[class_id][prototype_index],
                    metric=bank.metric,
                    mode=bank.mode,
                    bandwidth=None if bandwidths is None else float(bandwidths[class_id][prototype_index])
                ).T @ coords_gradient

            prototype_gradients[class_id] = class_prototype_gradients

        return loss, prototype_gradients, head_gradients


class PrototypeTrainer(BaseGeoProtoComponent):
    """ The prototype trainer class. """

    def __init__(
            self,
            graph_config: GraphConfig,
            diffusion_config: DiffusionConfig,
            landmark_config: LandmarkConfig,
            prototype_config: PrototypeConfig,
            training_config: TrainingConfig,
            nystrom_mode: str = "row",
            seed: int = 0,
            number_of_threads: Optional[int] = None,
            show_progress: bool = False,
            logger: Optional[Logger] = None
    ) -> None:
        """
        The constructor method of the class.

        :parameter graph_config: The graph construction configuration.
        :parameter diffusion_config: The diffusion configuration.
        :parameter landmark_config: The landmark configuration.
        :parameter prototype_config: The prototype configuration.
        :parameter training_config: The training configuration.
        :parameter nystrom_mode: The Nystrom extension mode.
        :parameter seed: The seed of the prototype initialization.
        :parameter number_of_threads: The number of worker threads. The value `None` indicates that the available
            parallelism should be utilized.
        :parameter show_progress: The indicator of whether the per-epoch progress line should be shown.
        :parameter logger: The logger. The value `None` indicates that the logger should not be utilized.
        """

        super().__init__(
            logger=logger
        )

        self.prototype_config = prototype_config
        self.training_config = training_config
        self.nystrom_mode = nystrom_mode
        self.seed = seed
        self.show_progress = show_progress

        self.refresher = LandmarkManifoldRefresher(
            config=landmark_config,
            graph_config=graph_config,
            diffusion_config=diffusion_config,
            number_of_threads=number_of_threads,
            logger=logger
        )

    def _project(
            self,
            bank: PrototypeBank,
            manifolds: Mapping[int, ClassManifold],
            pool: CandidatePool,
            warnings: List[str]
    ) -> PrototypeBank:
        """
        Project the prototypes and log the off-manifold warnings.

        :parameter bank: The prototype bank.
        :parameter manifolds: The class manifolds.
        :parameter pool: The candidate pool.
        :parameter warnings: The warnings recorded so far, extended in place.

        :returns: The projected prototype bank.
        """

        bank, projection_warnings = PrototypeUtility.project_prototypes(
            bank=bank,
            manifolds=manifolds,
            pool=pool
        )

        for warning in projection_warnings:
            self._log_warning(
                message=warning
            )

        warnings.extend(projection_warnings)

        return bank

    def train_prototypes(
            self,
            feature_set: FeatureSet,
            pool: Optional[CandidatePool] = None
    ) -> TrainingResult:
        """
        Fit the class manifolds and train the prototypes by full-batch gradient descent.

        :parameter feature_set: The training feature set.
        :parameter pool: The candidate pool. The value `None` indicates that the class features should be utilized.

        :returns: The training result with the projected prototype bank.
        """

        try:
            self._log_info(
                message="The training of the prototypes has been started."
            )

            if pool is None:
                pool = CandidatePool.from_feature_set(
                    feature_set=feature_set
                )

            manifolds = self.refresher.refresh(
                feature_set=feature_set,
                epoch=0
            )

            warnings = list(self.refresher.landmark_set.warnings) + [
                warning
                for class_id in sorted(manifolds.keys())
                for warning in manifolds[class_id].warnings
            ]

            bank = PrototypeUtility.initialize_bank(
                pool=pool,
                config=self.prototype_config,
                seed=self.seed,
                mode=self.nystrom_mode
            )

            query_embeddings = PrototypeUtility.embed_queries(
                queries=feature_set.features,
                manifolds=manifolds,
                bank=bank
            )

            loss_trace = list()

            for epoch in tqdm(
                iterable=range(1, self.training_config.epochs + 1),
                desc="Training the prototypes",
                ncols=120,
                disable=not self.show_progress
            ):
                loss, prototype_gradients, head_gradients = PrototypeTrainingUtility.loss_and_gradients(
                    manifolds=manifolds,
                    bank=bank,
                    query_embeddings=query_embeddings,
                    labels=feature_set.labels
                )

                if not isfinite(loss) or not all(
                    isfinite(gradient).all()
                    for gradient in list(prototype_gradients.values()) + list(head_gradients.values())
                ):
                    raise NonFiniteLossError(
                        "The training loss became non-finite at the epoch {epoch:d}.".format(
                            epoch=epoch
                        ),
                        loss_trace=loss_trace + [loss, ]
                    )

                loss_trace.append(loss)

                self._log_info(
                    message="The epoch {epoch:d} has been completed with the loss {loss:.6f}.".format(
                        epoch=epoch,
                        loss=loss
                    )
                )

                bank = replace(
                    bank,
                    prototypes={
                        class_id: bank.prototypes[class_id] - self.training_config.step_size * prototype_gradients[class_id]
                        for class_id in bank.class_ids
                    },
                    head_weights={
                        class_id: maximum(
                            bank.head_weights[class_id] - self.training_config.head_step_size * head_gradients[class_id],
                            0.0
                        ) if self.prototype_config.head_trainable else bank.head_weights[class_id]
                        for class_id in bank.class_ids
                    }
                )

                if LandmarkUtility.should_refresh(
                    epoch=epoch,
                    config=self.refresher.config
                ):
                    manifolds = self.refresher.refresh(
                        feature_set=feature_set,
                        epoch=epoch
                    )

                    query_embeddings = PrototypeUtility.embed_queries(
                        queries=feature_set.features,
                        manifolds=manifolds,
                        bank=bank
                    )

                    bank = self._project(
                        bank=bank,
                        manifolds=manifolds,
                        pool=pool,
                        warnings=warnings
                    )

            bank = self._project(
                bank=bank,
                manifolds=manifolds,
                pool=pool,
                warnings=warnings
            )

            self._log_info(
                message="The training of the prototypes has been completed."
            )

            return TrainingResult(
                bank=bank,
                loss_trace=loss_trace,
                manifolds=manifolds,
                landmark_set=self.refresher.landmark_set,
                warnings=tuple(warnings)
            )

        except Exception as exception_handle:
            self._log_exception(
                exception_handle=exception_handle
            )

            raise
