""" The ``geoproto.nystrom.utility`` package ``kernel`` module. """

from typing import Optional, Tuple

from numpy import argmin, asarray, float64, full, maximum, ndarray, partition, where

from geoproto.graph.graph import ClassGraph
from geoproto.graph.utility.neighbors import GraphNeighborsUtility


class NystromKernelUtility:
    """
    The out-of-sample kernel utility class.

    A query is connected to the landmarks adjacent to its nearest landmark, and its bandwidth is the distance to its
    `k_oos`-th nearest landmark not counting the nearest one. At a landmark both reduce to the affinity row and the
    bandwidth of that landmark.
    """

    @staticmethod
    def nearest_landmarks(
            distances: ndarray
    ) -> ndarray:
        """
        Find the nearest landmark of every query. Ties break toward the lower landmark index.

        :parameter distances: The q x n query-to-landmark distance matrix.

        :returns: The q nearest landmark indices.
        """

        return argmin(distances, axis=1)

    @staticmethod
    def kernel_support(
            distances: ndarray,
            graph: ClassGraph
    ) -> ndarray:
        """
        Compute the landmarks every query is connected to, the graph neighbors of its nearest landmark.

        :parameter distances: The q x n query-to-landmark distance matrix.
        :parameter graph: The class graph over the landmarks.

        :returns: The q x n boolean support mask.
        """

        nearest_landmarks = NystromKernelUtility.nearest_landmarks(
            distances=distances
        )

        return graph.affinity[nearest_landmarks].toarray() > 0.0

    @staticmethod
    def query_bandwidths(
            distances: ndarray,
            graph: ClassGraph,
            k_oos: int
    ) -> ndarray:
        """
        Compute the bandwidth of every query.

        :parameter distances: The q x n query-to-landmark distance matrix.
        :parameter graph: The class graph over the landmarks.
        :parameter k_oos: The neighbor count. It is clamped to the number of landmarks minus one.

        :returns: The q bandwidths, clamped below by the minimum bandwidth of the graph. Without local scaling, the
            shared bandwidth of the graph.
        """

        if not graph.local_scaling:
            return full(distances.shape[0], float(graph.scales[0]))

        neighbor_rank = min(int(k_oos), distances.shape[1] - 1)

        return maximum(partition(distances, neighbor_rank, axis=1)[:, neighbor_rank], graph.sigma_floor)

    @staticmethod
    def kernel_rows(
            queries: ndarray,
            graph: ClassGraph,
            k_oos: int,
            bandwidth: Optional[float] = None
    ) -> Tuple[ndarray, ndarray]:
        """
        Evaluate the locally scaled kernel between queries and landmarks.

        :parameter queries: The q x D query matrix.
        :parameter graph: The class graph over the landmarks.
        :parameter k_oos: The neighbor count of the query bandwidth.
        :parameter bandwidth: The fixed query bandwidth. The value `None` indicates that the k-nearest-neighbor
            bandwidth should be utilized.

        :returns: The q x n kernel matrix and the q query bandwidths.
        """

        queries = asarray(queries, dtype=float64)

        distances = GraphNeighborsUtility.distances_to(
            query=queries,
            features=graph.node_features
        )

        if bandwidth is None:
            bandwidths = NystromKernelUtility.query_bandwidths(
                distances=distances,
                graph=graph,
                k_oos=k_oos
            )

        else:
            bandwidths = full(queries.shape[0], float(bandwidth))

        kernel = GraphNeighborsUtility.gaussian_affinity(
            squared_distances=distances ** 2,
            scales_product=bandwidths[:, None] * graph.scales[None, :]
        )

        support = NystromKernelUtility.kernel_support(
            distances=distances,
            graph=graph
        )

        return where(support, kernel, 0.0), bandwidths

    @staticmethod
    def kernel_row_gradient(
            query: ndarray,
            graph: ClassGraph,
            bandwidth: float
    ) -> Tuple[ndarray, ndarray]:
        """
        Evaluate the kernel row of one query and its derivative with a fixed query bandwidth and a fixed support.

        :parameter query: The D query vector.
        :parameter graph: The class graph over the landmarks.
        :parameter bandwidth: The query bandwidth, held constant.

        :returns: The n kernel values and the n x D derivative of the kernel values with respect to the query.
        """

        query = asarray(query, dtype=float64)

        differences = query[None, :] - graph.node_features
        scales_product = bandwidth * graph.scales

        support = NystromKernelUtility.kernel_support(
            distances=GraphNeighborsUtility.distances_to(
                query=query[None, :],
                features=graph.node_features
            ),
            graph=graph
        )[0]

        kernel = where(support, GraphNeighborsUtility.gaussian_affinity(
            squared_distances=(differences ** 2).sum(axis=1),
            scales_product=scales_product
        ), 0.0)

        # Floored entries have a zero derivative.
        slope = where(kernel > GraphNeighborsUtility.MINIMUM_EDGE_WEIGHT, kernel * (-2.0 / scales_product), 0.0)

        return kernel, slope[:, None] * differences
