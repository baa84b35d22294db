""" The ``geoproto.graph.utility`` package ``neighbors`` module. """

from typing import Tuple

from numpy import arange, argsort, exp, finfo, float64, fill_diagonal, full_like, inf, maximum, median, ndarray

from scipy.spatial.distance import cdist


class GraphNeighborsUtility:
    """ The exact k-nearest-neighbor and local scaling utility class. """

    MINIMUM_EDGE_WEIGHT = finfo(float64).tiny

    @staticmethod
    def pairwise_distances(
            features: ndarray
    ) -> ndarray:
        """
        Compute the dense Euclidean distance matrix.

        :parameter features: The n x D feature matrix.

        :returns: The n x n Euclidean distance matrix.
        """

        return cdist(features, features, metric="euclidean")

    @staticmethod
    def sigma_floor(
            distances: ndarray,
            epsilon_sigma: float
    ) -> float:
        """
        Compute the lower bound of the bandwidths.

        :parameter distances: The n x n Euclidean distance matrix.
        :parameter epsilon_sigma: The relative minimum bandwidth.

        :returns: The minimum bandwidth, `epsilon_sigma` times the diameter, or `epsilon_sigma` for a zero diameter.
        """

        diameter = float(distances.max()) if distances.size > 0 else 0.0

        return float(epsilon_sigma) * (diameter if diameter > 0.0 else 1.0)

    @staticmethod
    def k_nearest_neighbors(
            distances: ndarray,
            k: int
    ) -> Tuple[ndarray, ndarray]:
        """
        Find the k nearest other nodes of every node. Ties break toward the lower node index.

        :parameter distances: The n x n Euclidean distance matrix.
        :parameter k: The number of neighbors.

        :returns: The n x k neighbor indices and the n x k neighbor distances, nearest first.
        """

        masked_distances = distances.copy()

        fill_diagonal(masked_distances, inf)

        neighbor_indices = argsort(masked_distances, axis=1, kind="stable")[:, :k]
        neighbor_distances = masked_distances[arange(distances.shape[0])[:, None], neighbor_indices]

        return neighbor_indices, neighbor_distances

    @staticmethod
    def local_scales(
            neighbor_distances: ndarray,
            local_scaling: bool,
            sigma_floor: float
    ) -> ndarray:
        """
        Compute the per-node bandwidths.

        :parameter neighbor_distances: The n x k neighbor distances, nearest first.
        :parameter local_scaling: The indicator of whether the k-th neighbor distance of every node should be utilized.
            Otherwise, the median k-th neighbor distance is shared by all nodes.
        :parameter sigma_floor: The minimum bandwidth.

        :returns: The n bandwidths.
        """

        kth_distances = neighbor_distances[:, -1]

        if not local_scaling:
            kth_distances = full_like(kth_distances, float(median(kth_distances)))

        return maximum(kth_distances, sigma_floor)

    @staticmethod
    def gaussian_affinity(
            squared_distances: ndarray,
            scales_product: ndarray
    ) -> ndarray:
        """
        Evaluate the locally scaled Gaussian kernel, floored at the smallest positive normal float.

        :parameter squared_distances: The squared Euclidean distances.
        :parameter scales_product: The products of the bandwidths of the endpoints.

        :returns: The affinities.
        """

        return maximum(exp(-squared_distances / scales_product), GraphNeighborsUtility.MINIMUM_EDGE_WEIGHT)

    @staticmethod
    def distances_to(
            query: ndarray,
            features: ndarray
    ) -> ndarray:
        """
        Compute the Euclidean distances from every query to every feature row.

        :parameter query: The q x D query matrix.
        :parameter features: The n x D feature matrix.

        :returns: The q x n Euclidean distance matrix.
        """

        return cdist(query, features, metric="euclidean")
