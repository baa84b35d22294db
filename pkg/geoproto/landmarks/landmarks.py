""" The ``geoproto.landmarks`` package ``landmarks`` module. """

from dataclasses import dataclass, field
from logging import Logger
from threading import Lock
from types import MappingProxyType
from typing import Dict, List, Mapping, Optional, Tuple

from numpy import arange, int64, isin, ndarray, sort

from numpy.random import default_rng

from geoproto.base.base import BaseGeoProtoComponent
from geoproto.base.exception import ConfigurationError, CountTooSmallError
from geoproto.base.utility.parallel import BaseParallelUtility
from geoproto.features.features import FeatureSet
from geoproto.graph.graph import GraphConfig
from geoproto.landmarks.utility.kmeans import KMeansLandmarkUtility
from geoproto.nystrom.nystrom import ClassManifold, NystromUtility
from geoproto.spectral.spectral import DiffusionConfig


@dataclass(frozen=True)
class LandmarkConfig:
    """ The landmark selection and refresh configuration class. """

    selection: str = "kmeans"
    pool: str = "per_class"
    count: int = 768
    update_every: int = 20
    seed: int = 0
    kmeans_max_iters: int = 100

    def __post_init__(
            self
    ) -> None:
        """ Validate the configuration. """

        if self.selection not in ("random", "kmeans", ):
            raise ConfigurationError(
                "The landmark selection must be 'random' or 'kmeans', got '{selection}'.".format(
                    selection=self.selection
                )
            )

        if self.pool not in ("per_class", "global", ):
            raise ConfigurationError(
                "The landmark pool must be 'per_class' or 'global', got '{pool}'.".format(
                    pool=self.pool
                )
            )

        for name, minimum in (("count", 1, ), ("update_every", 0, ), ("kmeans_max_iters", 1, ), ):
            value = getattr(self, name)

            if isinstance(value, bool) or not isinstance(value, int) or value < minimum:
                raise ConfigurationError(
                    "{name:s} must be an integer of at least {minimum:d}.".format(
                        name=name,
                        minimum=minimum
                    )
                )

        if isinstance(self.seed, bool) or not isinstance(self.seed, int):
            raise ConfigurationError(
                "The landmark seed must be an integer."
            )


@dataclass(frozen=True, eq=False)
class LandmarkSet:
    """ The per-class landmark row indices class. """

    indices: Dict[int, ndarray]
    epoch_fitted: int = 0
    warnings: Tuple[str, ...] = field(default_factory=tuple)
    wcss_traces: Dict[int, List[float]] = field(default_factory=dict)


class LandmarkUtility:
    """ The landmark selection utility class. """

    @staticmethod
    def _select_rows(
            features: ndarray,
            count: int,
            config: LandmarkConfig,
            seed: int
    ) -> Tuple[ndarray, List[float]]:
        """
        Select `count` rows of a feature matrix.

        :parameter features: The n x D feature matrix.
        :parameter count: The number of rows, at most `n`.
        :parameter config: The landmark configuration.
        :parameter seed: The seed of the selection.

        :returns: The selected row indices in ascending order and the k-means objective trace.
        """

        if count >= features.shape[0]:
            return arange(features.shape[0], dtype=int64), list()

        if config.selection == "random":
            return sort(default_rng(seed).choice(features.shape[0], size=count, replace=False)).astype(int64), list()

        return KMeansLandmarkUtility.select_rows(
            features=features,
            count=count,
            seed=seed,
            max_iters=config.kmeans_max_iters
        )

    @staticmethod
    def select_landmarks(
            feature_set: FeatureSet,
            config: LandmarkConfig,
            minimum_count: int = 1,
            epoch: int = 0
    ) -> LandmarkSet:
        """
        Select the landmarks of every class.

        :parameter feature_set: The feature set.
        :parameter config: The landmark configuration.
        :parameter minimum_count: The smallest number of landmarks a class graph can be built on, `k + 1`.
        :parameter epoch: The epoch the selection is made at.

        :returns: The landmark set.
        """

        indices, warnings, wcss_traces = dict(), list(), dict()

        if config.pool == "per_class":
            for class_id in feature_set.class_ids:
                class_indices = feature_set.class_indices(class_id)

                if config.count > class_indices.size:
                    warnings.append(
                        "The landmark count {count:d} exceeds the {n:d} samples of the class {class_id:d}, all of "
                        "which are used.".format(
                            count=config.count,
                            n=class_indices.size,
                            class_id=class_id
                        )
                    )

                selected_rows, wcss_trace = LandmarkUtility._select_rows(
                    features=feature_set.features[class_indices],
                    count=config.count,
                    config=config,
                    seed=config.seed + class_id
                )

                indices[class_id] = class_indices[selected_rows]

                if len(wcss_trace) > 0:
                    wcss_traces[class_id] = wcss_trace

        else:
            if config.count > feature_set.number_of_samples:
                warnings.append(
                    "The landmark count {count:d} exceeds the {n:d} samples, all of which are used.".format(
                        count=config.count,
                        n=feature_set.number_of_samples
                    )
                )

            selected_rows, wcss_trace = LandmarkUtility._select_rows(
                features=feature_set.features,
                count=config.count,
                config=config,
                seed=config.seed
            )

            if len(wcss_trace) > 0:
                wcss_traces[0] = wcss_trace

            for class_id in feature_set.class_ids:
                indices[class_id] = selected_rows[isin(selected_rows, feature_set.class_indices(class_id))]

        for class_id, class_landmarks in indices.items():
            if class_landmarks.size == 0:
                raise CountTooSmallError(
                    "The class {class_id:d} did not receive any landmarks.".format(
                        class_id=class_id
                    )
                )

            if class_landmarks.size < minimum_count and class_landmarks.size < feature_set.class_indices(class_id).size:
                raise CountTooSmallError(
                    "The class {class_id:d} received {count:d} landmarks, but its graph needs at least {minimum:d}.".format(
                        class_id=class_id,
                        count=class_landmarks.size,
                        minimum=minimum_count
                    )
                )

        return LandmarkSet(
            indices=indices,
            epoch_fitted=epoch,
            warnings=tuple(warnings),
            wcss_traces=wcss_traces
        )

    @staticmethod
    def should_refresh(
            epoch: int,
            config: LandmarkConfig
    ) -> bool:
        """
        Check whether the manifolds are due for a refresh at the end of an epoch.

        :parameter epoch: The 1-based epoch.
        :parameter config: The landmark configuration.

        :returns: The indicator of whether the manifolds should be refreshed.
        """

        return config.update_every > 0 and epoch % config.update_every == 0

    @staticmethod
    def refresh_manifolds(
            feature_set: FeatureSet,
            config: LandmarkConfig,
            graph_config: GraphConfig,
            diffusion_config: DiffusionConfig,
            number_of_threads: Optional[int] = None,
            epoch: int = 0
    ) -> Tuple[Dict[int, ClassManifold], LandmarkSet]:
        """
        Select the landmarks and refit the manifold of every class.

        :parameter feature_set: The feature set.
        :parameter config: The landmark configuration.
        :parameter graph_config: The graph construction configuration.
        :parameter diffusion_config: The diffusion configuration.
        :parameter number_of_threads: The number of worker threads. The value `None` indicates that the available
            parallelism should be utilized.
        :parameter epoch: The epoch the refresh is made at.

        :returns: The class manifolds and the landmark set. Any class failure aborts the whole refresh.
        """

        landmark_set = LandmarkUtility.select_landmarks(
            feature_set=feature_set,
            config=config,
            minimum_count=graph_config.k + 1,
            epoch=epoch
        )

        class_ids = sorted(landmark_set.indices.keys())

        manifolds = BaseParallelUtility.map_in_order(
            function=lambda class_id: NystromUtility.fit_class_manifold(
                features=feature_set.features[landmark_set.indices[class_id]],
                graph_config=graph_config,
                diffusion_config=diffusion_config,
                class_id=class_id,
                landmark_indices=landmark_set.indices[class_id]
            ),
            arguments=class_ids,
            number_of_threads=number_of_threads,
            description="Fitting the class manifolds"
        )

        return dict(zip(class_ids, manifolds)), landmark_set


class ManifoldRegistry:
    """ The atomically swappable class manifold map class. """

    def __init__(
            self,
            manifolds: Optional[Mapping[int, ClassManifold]] = None
    ) -> None:
        """
        The constructor method of the class.

        :parameter manifolds: The initial class manifolds.
        """

        self.__lock = Lock()
        self.__manifolds = MappingProxyType(dict(manifolds or dict()))

    def snapshot(
            self
    ) -> Mapping[int, ClassManifold]:
        """
        Get the current read-only class manifold map.

        :returns: The class manifolds.
        """

        with self.__lock:
            return self.__manifolds

    def swap(
            self,
            manifolds: Mapping[int, ClassManifold]
    ) -> Mapping[int, ClassManifold]:
        """
        Replace the class manifold map.

        :parameter manifolds: The new class manifolds.

        :returns: The previous class manifolds.
        """

        replacement = MappingProxyType(dict(manifolds))

        with self.__lock:
            previous, self.__manifolds = self.__manifolds, replacement

        return previous


class LandmarkManifoldRefresher(BaseGeoProtoComponent):
    """ The class manifold refresher class. """

    def __init__(
            self,
            config: LandmarkConfig,
            graph_config: GraphConfig,
            diffusion_config: DiffusionConfig,
            number_of_threads: Optional[int] = None,
            logger: Optional[Logger] = None
    ) -> None:
        """
        The constructor method of the class.

        :parameter config: The landmark configuration.
        :parameter graph_config: The graph construction configuration.
        :parameter diffusion_config: The diffusion configuration.
        :parameter number_of_threads: The number of worker threads. The value `None` indicates that the available
            parallelism should be utilized.
        :parameter logger: The logger. The value `None` indicates that the logger should not be utilized.
        """

        super().__init__(
            logger=logger
        )

        self.config = config
        self.graph_config = graph_config
        self.diffusion_config = diffusion_config
        self.number_of_threads = number_of_threads
        self.registry = ManifoldRegistry()
        self.landmark_set: Optional[LandmarkSet] = None

    def refresh(
            self,
            feature_set: FeatureSet,
            epoch: int = 0
    ) -> Mapping[int, ClassManifold]:
        """
        Refit the class manifolds and swap them into the registry.

        :parameter feature_set: The feature set.
        :parameter epoch: The epoch the refresh is made at.

        :returns: The new class manifolds.
        """

        try:
            self._log_info(
                message="The refresh of the class manifolds at the epoch {epoch:d} has been started.".format(
                    epoch=epoch
                )
            )

            manifolds, landmark_set = LandmarkUtility.refresh_manifolds(
                feature_set=feature_set,
                config=self.config,
                graph_config=self.graph_config,
                diffusion_config=self.diffusion_config,
                number_of_threads=self.number_of_threads,
                epoch=epoch
            )

            for warning in landmark_set.warnings + tuple(
                warning
                for class_id in sorted(manifolds.keys())
                for warning in manifolds[class_id].warnings
            ):
                self._log_warning(
                    message=warning
                )

            self.registry.swap(
                manifolds=manifolds
            )

            self.landmark_set = landmark_set

            self._log_info(
                message="The refresh of the class manifolds at the epoch {epoch:d} has been completed.".format(
                    epoch=epoch
                )
            )

            return self.registry.snapshot()

        except Exception as exception_handle:
            self._log_exception(
                exception_handle=exception_handle
            )

            raise
