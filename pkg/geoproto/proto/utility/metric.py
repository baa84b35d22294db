""" The ``geoproto.proto.utility`` package ``metric`` module. """

from typing import Optional, Tuple

from numpy import asarray, diag, eye, float64, maximum, ndarray, outer, sqrt, zeros

from geoproto.base.exception import ConfigurationError
from geoproto.nystrom.nystrom import ClassManifold, NystromUtility


class MatchingMetricUtility:
    """
    The prototype matching space utility class.

    Every metric maps feature vectors of a class into a space where prototype distances are Euclidean.
    """

    SUPPORTED_METRICS = ("diffusion", "euclidean", "cosine", "diag_mahalanobis", )

    MINIMUM_NORM = 1e-12

    @staticmethod
    def validate_metric(
            metric: str
    ) -> None:
        """
        Validate a matching metric name.

        :parameter metric: The matching metric.
        """

        if metric not in MatchingMetricUtility.SUPPORTED_METRICS:
            raise ConfigurationError(
                "The matching metric must be one of {metrics}, got '{metric}'.".format(
                    metrics=", ".join(MatchingMetricUtility.SUPPORTED_METRICS),
                    metric=metric
                )
            )

    @staticmethod
    def _feature_scales(
            manifold: ClassManifold
    ) -> ndarray:
        """
        Get the per-feature standard deviations of the class landmarks.

        :parameter manifold: The class manifold.

        :returns: The D standard deviations.
        """

        return maximum(manifold.graph.node_features.std(axis=0), MatchingMetricUtility.MINIMUM_NORM)

    @staticmethod
    def embed(
            manifold: ClassManifold,
            queries: ndarray,
            metric: str = "diffusion",
            mode: str = "row",
            bandwidths: Optional[ndarray] = None
    ) -> Tuple[ndarray, ndarray]:
        """
        Map queries into the matching space of a class.

        :parameter manifold: The class manifold.
        :parameter queries: The q x D query matrix.
        :parameter metric: The matching metric.
        :parameter mode: The Nystrom extension mode.
        :parameter bandwidths: The q fixed query bandwidths of the diffusion metric. The value `None` indicates that
            the k-nearest-neighbor bandwidths should be utilized.

        :returns: The q x L matching space coordinates and the q off-manifold flags.
        """

        MatchingMetricUtility.validate_metric(
            metric=metric
        )

        queries = asarray(queries, dtype=float64)

        if metric == "diffusion":
            if bandwidths is None:
                batch = NystromUtility.extend_many(
                    manifold=manifold,
                    queries=queries,
                    mode=mode
                )

                return batch.coords, batch.off_manifold

            embeddings = [
                NystromUtility.extend(
                    manifold=manifold,
                    query=query,
                    mode=mode,
                    bandwidth=float(bandwidth)
                )
                for query, bandwidth in zip(queries, bandwidths)
            ]

            return asarray([embedding.coords for embedding in embeddings]).reshape(queries.shape[0], -1), \
                asarray([embedding.off_manifold for embedding in embeddings], dtype=bool)

        off_manifold = zeros(queries.shape[0], dtype=bool)

        if metric == "euclidean":
            return queries.copy(), off_manifold

        if metric == "cosine":
            return queries / maximum(sqrt((queries ** 2).sum(axis=1)), MatchingMetricUtility.MINIMUM_NORM)[:, None], \
                off_manifold

        return queries / MatchingMetricUtility._feature_scales(manifold)[None, :], off_manifold

    @staticmethod
    def jacobian(
            manifold: ClassManifold,
            query: ndarray,
            metric: str = "diffusion",
            mode: str = "row",
            bandwidth: Optional[float] = None
    ) -> ndarray:
        """
        Compute the derivative of the matching space coordinates of one query.

        :parameter manifold: The class manifold.
        :parameter query: The D query vector.
        :parameter metric: The matching metric.
        :parameter mode: The Nystrom extension mode.
        :parameter bandwidth: The fixed query bandwidth of the diffusion metric.

        :returns: The L x D Jacobian matrix.
        """

        MatchingMetricUtility.validate_metric(
            metric=metric
        )

        query = asarray(query, dtype=float64)

        if metric == "diffusion":
            return NystromUtility.extend_jacobian(
                manifold=manifold,
                query=query,
                mode=mode,
                bandwidth=bandwidth
            )

        if metric == "euclidean":
            return eye(query.size)

        if metric == "cosine":
            norm = max(float(sqrt((query ** 2).sum())), MatchingMetricUtility.MINIMUM_NORM)
            direction = query / norm

            return (eye(query.size) - outer(direction, direction)) / norm

        return diag(1.0 / MatchingMetricUtility._feature_scales(manifold))
