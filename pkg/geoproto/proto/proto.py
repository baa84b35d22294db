""" The ``geoproto.proto`` package ``proto`` module. """

from dataclasses import dataclass, replace
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from numpy import argmax, argmin, asarray, float64, int64, isfinite, log, ndarray, ones

from numpy.random import default_rng

from scipy.spatial.distance import cdist

from geoproto.base.exception import ConfigurationError, DimensionMismatchError, NonFiniteValueError
from geoproto.features.features import FeatureSet
from geoproto.nystrom.nystrom import ClassManifold
from geoproto.proto.utility.metric import MatchingMetricUtility


@dataclass(frozen=True)
class PrototypeConfig:
    """ The prototype bank configuration class. """

    m: int = 10
    epsilon_sim: float = 1e-4
    head_trainable: bool = False
    metric: str = "diffusion"

    def __post_init__(
            self
    ) -> None:
        """ Validate the configuration. """

        if isinstance(self.m, bool) or not isinstance(self.m, int) or self.m < 1:
            raise ConfigurationError(
                "m must be a positive integer."
            )

        if not 0.0 < float(self.epsilon_sim) < 1.0:
            raise ConfigurationError(
                "epsilon_sim must lie in (0, 1)."
            )

        if not isinstance(self.head_trainable, bool):
            raise ConfigurationError(
                "head_trainable must be a boolean."
            )

        MatchingMetricUtility.validate_metric(
            metric=self.metric
        )


@dataclass(frozen=True, eq=False)
class CandidatePool:
    """ The per-class prototype anchor candidates class. """

    candidates: Dict[int, ndarray]

    def __post_init__(
            self
    ) -> None:
        """ Validate the candidate pool invariants. """

        for class_id, class_candidates in self.candidates.items():
            class_candidates = asarray(class_candidates, dtype=float64)

            if class_candidates.ndim != 2 or class_candidates.shape[0] == 0:
                raise ConfigurationError(
                    "The candidate pool of the class {class_id:d} must be a non-empty matrix.".format(
                        class_id=class_id
                    )
                )

            if not isfinite(class_candidates).all():
                raise NonFiniteValueError(
                    "The candidate pool of the class {class_id:d} contains non-finite values.".format(
                        class_id=class_id
                    )
                )

    @classmethod
    def from_feature_set(
            cls,
            feature_set: FeatureSet
    ) -> "CandidatePool":
        """
        Create the candidate pool made of the feature rows of every class.

        :parameter feature_set: The feature set.

        :returns: The candidate pool.
        """

        return cls(
            candidates=feature_set.split_by_class()
        )


@dataclass(frozen=True, eq=False)
class PrototypeBank:
    """
    The prototype bank class.

    Prototype `i` of class `c` contributes only to the score of class `c`.
    """

    prototypes: Dict[int, ndarray]
    projected: Dict[int, ndarray]
    anchor_indices: Dict[int, ndarray]
    anchor_coords: Dict[int, ndarray]
    head_weights: Dict[int, ndarray]
    m: int
    epsilon_sim: float = 1e-4
    metric: str = "diffusion"
    mode: str = "row"

    @property
    def class_ids(
            self
    ) -> List[int]:
        """
        Get the class identifiers in ascending order.

        :returns: The class identifiers.
        """

        return sorted(self.prototypes.keys())


@dataclass(frozen=True)
class PrototypeMatch:
    """ The prototype match record class. """

    prototype_index: int
    anchor_index: int
    distance: float
    similarity: float


@dataclass(frozen=True, eq=False)
class Explanation:
    """ The classification explanation class. """

    matches: Dict[int, List[PrototypeMatch]]
    predicted_class: int
    scores: ndarray
    class_ids: Tuple[int, ...]


class PrototypeUtility:
    """ The prototype projection, matching and scoring utility class. """

    @staticmethod
    def initialize_bank(
            pool: CandidatePool,
            config: PrototypeConfig,
            seed: int = 0,
            mode: str = "row"
    ) -> PrototypeBank:
        """
        Initialize the prototypes of every class from seeded random candidate rows.

        :parameter pool: The candidate pool.
        :parameter config: The prototype configuration.
        :parameter seed: The seed of the initialization.
        :parameter mode: The Nystrom extension mode.

        :returns: The unprojected prototype bank with unit head weights.
        """

        prototypes = dict()

        for class_id in sorted(pool.candidates.keys()):
            class_candidates = asarray(pool.candidates[class_id], dtype=float64)

            rows = default_rng(seed + class_id).choice(
                class_candidates.shape[0],
                size=config.m,
                replace=config.m > class_candidates.shape[0]
            )

            prototypes[class_id] = class_candidates[rows].copy()

        return PrototypeBank(
            prototypes=prototypes,
            projected={class_id: class_prototypes.copy() for class_id, class_prototypes in prototypes.items()},
            anchor_indices={class_id: -ones(config.m, dtype=int64) for class_id in prototypes.keys()},
            anchor_coords=dict(),
            head_weights={class_id: ones(config.m) for class_id in prototypes.keys()},
            m=config.m,
            epsilon_sim=config.epsilon_sim,
            metric=config.metric,
            mode=mode
        )

    @staticmethod
    def project_prototypes(
            bank: PrototypeBank,
            manifolds: Mapping[int, ClassManifold],
            pool: CandidatePool
    ) -> Tuple[PrototypeBank, List[str]]:
        """
        Anchor every prototype to the candidate of its class nearest in the matching space of the class.

        :parameter bank: The prototype bank.
        :parameter manifolds: The class manifolds.
        :parameter pool: The candidate pool.

        :returns: The projected prototype bank, whose prototypes are the anchors, and the off-manifold warnings.
        """

        projected, anchor_indices, anchor_coords, warnings = dict(), dict(), dict(), list()

        for class_id in bank.class_ids:
            if class_id not in manifolds:
                raise ConfigurationError(
                    "The class {class_id:d} does not have a fitted manifold.".format(
                        class_id=class_id
                    )
                )

            class_candidates = asarray(pool.candidates[class_id], dtype=float64)

            candidate_coords, _ = MatchingMetricUtility.embed(
                manifold=manifolds[class_id],
                queries=class_candidates,
                metric=bank.metric,
                mode=bank.mode
            )

            prototype_coords, off_manifold = MatchingMetricUtility.embed(
                manifold=manifolds[class_id],
                queries=bank.prototypes[class_id],
                metric=bank.metric,
                mode=bank.mode
            )

            for prototype_index in off_manifold.nonzero()[0]:
                warnings.append(
                    "The prototype {prototype_index:d} of the class {class_id:d} is off the class manifold.".format(
                        prototype_index=int(prototype_index),
                        class_id=class_id
                    )
                )

            class_anchor_indices = argmin(cdist(prototype_coords, candidate_coords), axis=1).astype(int64)

            projected[class_id] = class_candidates[class_anchor_indices].copy()
            anchor_indices[class_id] = class_anchor_indices
            anchor_coords[class_id] = candidate_coords[class_anchor_indices].copy()

        return replace(
            bank,
            prototypes={class_id: class_projected.copy() for class_id, class_projected in projected.items()},
            projected=projected,
            anchor_indices=anchor_indices,
            anchor_coords=anchor_coords
        ), warnings

    @staticmethod
    def similarity(
            distances: ndarray,
            epsilon_sim: float
    ) -> ndarray:
        """
        Transform distances into similarities, `log((d^2 + 1) / (d^2 + epsilon_sim))`.

        :parameter distances: The distances.
        :parameter epsilon_sim: The similarity transform constant.

        :returns: The similarities.
        """

        squared_distances = asarray(distances, dtype=float64) ** 2

        return log((squared_distances + 1.0) / (squared_distances + epsilon_sim))

    @staticmethod
    def embed_queries(
            queries: ndarray,
            manifolds: Mapping[int, ClassManifold],
            bank: PrototypeBank
    ) -> Dict[int, ndarray]:
        """
        Map queries into the matching space of every class.

        :parameter queries: The q x D query matrix.
        :parameter manifolds: The class manifolds.
        :parameter bank: The prototype bank.

        :returns: The q x L matching space coordinates per class.
        """

        queries = asarray(queries, dtype=float64)

        embeddings = dict()

        for class_id in bank.class_ids:
            if queries.ndim != 2 or queries.shape[1] != manifolds[class_id].dimension:
                raise DimensionMismatchError(
                    "The queries have the dimension {dimension}, but the model expects {expected:d}.".format(
                        dimension=queries.shape[-1] if queries.ndim > 0 else 0,
                        expected=manifolds[class_id].dimension
                    )
                )

            embeddings[class_id], _ = MatchingMetricUtility.embed(
                manifold=manifolds[class_id],
                queries=queries,
                metric=bank.metric,
                mode=bank.mode
            )

        return embeddings

    @staticmethod
    def prototype_distances(
            query_embeddings: Mapping[int, ndarray],
            bank: PrototypeBank
    ) -> Dict[int, ndarray]:
        """
        Compute the distances between embedded queries and the anchored prototypes of the same class.

        :parameter query_embeddings: The L or q x L matching space coordinates per class.
        :parameter bank: The projected prototype bank.

        :returns: The m or q x m distances per class.
        """

        distances = dict()

        for class_id in bank.class_ids:
            class_embeddings = asarray(query_embeddings[class_id], dtype=float64)

            class_distances = cdist(class_embeddings.reshape(-1, bank.anchor_coords[class_id].shape[1]),
                                    bank.anchor_coords[class_id])

            distances[class_id] = class_distances[0] if class_embeddings.ndim == 1 else class_distances

        return distances

    @staticmethod
    def class_scores(
            distances: Mapping[int, ndarray],
            bank: PrototypeBank,
            patches: bool = False
    ) -> ndarray:
        """
        Aggregate prototype similarities into class scores.

        :parameter distances: The m distances per class, or the p x m patch distances per class.
        :parameter bank: The prototype bank.
        :parameter patches: The indicator of whether the first axis of the distances enumerates the patches of one
            query, over which the similarity of every prototype is max-pooled.

        :returns: The scores in ascending class order, one per class or one row per query.
        """

        scores = list()

        for class_id in bank.class_ids:
            similarities = PrototypeUtility.similarity(
                distances=distances[class_id],
                epsilon_sim=bank.epsilon_sim
            )

            if patches:
                similarities = similarities.max(axis=0)

            scores.append(similarities @ bank.head_weights[class_id])

        return asarray(scores, dtype=float64).T

    @staticmethod
    def classify(
            query: ndarray,
            manifolds: Mapping[int, ClassManifold],
            bank: PrototypeBank
    ) -> Explanation:
        """
        Classify one query vector or one patch set.

        :parameter query: The D query vector or the p x D patch matrix.
        :parameter manifolds: The class manifolds.
        :parameter bank: The projected prototype bank.

        :returns: The explanation.
        """

        query = asarray(query, dtype=float64)
        patches = query.ndim == 2

        distances = PrototypeUtility.prototype_distances(
            query_embeddings=PrototypeUtility.embed_queries(
                queries=query.reshape(-1, query.shape[-1]),
                manifolds=manifolds,
                bank=bank
            ),
            bank=bank
        )

        scores = PrototypeUtility.class_scores(
            distances=distances,
            bank=bank,
            patches=True
        )

        return PrototypeUtility._explain(
            distances={
                class_id: class_distances.min(axis=0)
                for class_id, class_distances in distances.items()
            },
            scores=scores,
            bank=bank
        ) if patches else PrototypeUtility._explain(
            distances={
                class_id: class_distances[0]
                for class_id, class_distances in distances.items()
            },
            scores=scores,
            bank=bank
        )

    @staticmethod
    def classify_many(
            queries: ndarray,
            manifolds: Mapping[int, ClassManifold],
            bank: PrototypeBank
    ) -> List[Explanation]:
        """
        Classify a batch of query vectors.

        :parameter queries: The q x D query matrix.
        :parameter manifolds: The class manifolds.
        :parameter bank: The projected prototype bank.

        :returns: The explanations in query order.
        """

        distances = PrototypeUtility.prototype_distances(
            query_embeddings=PrototypeUtility.embed_queries(
                queries=queries,
                manifolds=manifolds,
                bank=bank
            ),
            bank=bank
        )

        scores = PrototypeUtility.class_scores(
            distances=distances,
            bank=bank
        )

        return [
            PrototypeUtility._explain(
                distances={
                    class_id: class_distances[query_index]
                    for class_id, class_distances in distances.items()
                },
                scores=scores[query_index],
                bank=bank
            )
            for query_index in range(scores.shape[0])
        ]

    @staticmethod
    def _explain(
            distances: Mapping[int, ndarray],
            scores: ndarray,
            bank: PrototypeBank
    ) -> Explanation:
        """
        Build the explanation of one query.

        :parameter distances: The m prototype distances per class.
        :parameter scores: The class scores in ascending class order.
        :parameter bank: The projected prototype bank.

        :returns: The explanation.
        """

        class_ids = tuple(bank.class_ids)

        matches = {
            class_id: [
                PrototypeMatch(
                    prototype_index=prototype_index,
                    anchor_index=int(bank.anchor_indices[class_id][prototype_index]),
                    distance=float(distances[class_id][prototype_index]),
                    similarity=float(PrototypeUtility.similarity(
                        distances=distances[class_id][prototype_index],
                        epsilon_sim=bank.epsilon_sim
                    ))
                )
                for prototype_index in range(bank.m)
            ]
            for class_id in class_ids
        }

        return Explanation(
            matches=matches,
            predicted_class=class_ids[int(argmax(scores))],
            scores=asarray(scores, dtype=float64),
            class_ids=class_ids
        )

    @staticmethod
    def nearest_prototype(
            explanation: Explanation
    ) -> Tuple[int, int, float]:
        """
        Find the prototype with the smallest distance over all classes, ties toward the lowest class and index.

        :parameter explanation: The explanation.

        :returns: The class identifier, the prototype index and the distance.
        """

        class_id, match = min(
            (
                (class_id, match)
                for class_id in explanation.class_ids
                for match in explanation.matches[class_id]
            ),
            key=lambda pair: (pair[1].distance, pair[0], pair[1].prototype_index, )
        )

        return class_id, match.prototype_index, match.distance

    @staticmethod
    def candidate_pool_for(
            feature_set: FeatureSet,
            candidates: Optional[FeatureSet] = None
    ) -> CandidatePool:
        """
        Build the candidate pool from a candidate feature set, or from the training features when none is given.

        :parameter feature_set: The training feature set.
        :parameter candidates: The candidate feature set.

        :returns: The candidate pool.
        """

        pool = CandidatePool.from_feature_set(
            feature_set=feature_set if candidates is None else candidates
        )

        missing_class_ids: Sequence[int] = sorted(set(feature_set.class_ids) - set(pool.candidates.keys()))

        if len(missing_class_ids) > 0:
            raise ConfigurationError(
                "The candidate pool does not contain any candidates of the class {class_id:d}.".format(
                    class_id=missing_class_ids[0]
                )
            )

        return pool
