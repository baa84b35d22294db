""" The ``geoproto.landmarks.utility`` package ``kmeans`` module. """

from typing import List, Tuple

from numpy import arange, argmin, argsort, asarray, bincount, float64, int64, ndarray, zeros

from scipy.spatial.distance import cdist

from sklearn.cluster import kmeans_plusplus

from geoproto.base.exception import InternalInvariantError


class KMeansLandmarkUtility:
    """ The k-means landmark selection utility class. """

    WCSS_TOLERANCE = 1e-9

    @staticmethod
    def _assign(
            features: ndarray,
            centroids: ndarray
    ) -> Tuple[ndarray, ndarray]:
        """
        Assign every row to its nearest centroid, ties toward the lower centroid index.

        :parameter features: The n x D feature matrix.
        :parameter centroids: The m x D centroid matrix.

        :returns: The n cluster labels and the n squared distances to the assigned centroids.
        """

        squared_distances = cdist(features, centroids, metric="sqeuclidean")
        labels = argmin(squared_distances, axis=1)

        return labels, squared_distances[arange(features.shape[0]), labels]

    @staticmethod
    def _repair_empty_clusters(
            labels: ndarray,
            squared_distances: ndarray,
            count: int
    ) -> ndarray:
        """
        Move the farthest rows into the empty clusters.

        :parameter labels: The n cluster labels.
        :parameter squared_distances: The n squared distances to the assigned centroids.
        :parameter count: The number of clusters.

        :returns: The repaired cluster labels.
        """

        labels = labels.copy()
        squared_distances = squared_distances.copy()

        for empty_cluster in (bincount(labels, minlength=count) == 0).nonzero()[0]:
            cluster_sizes = bincount(labels, minlength=count)

            candidates = squared_distances.copy()
            candidates[cluster_sizes[labels] <= 1] = -1.0

            farthest_row = int(candidates.argmax())

            labels[farthest_row] = int(empty_cluster)
            squared_distances[farthest_row] = 0.0

        return labels

    @staticmethod
    def _update(
            features: ndarray,
            labels: ndarray,
            count: int
    ) -> ndarray:
        """
        Move every centroid to the mean of its cluster.

        :parameter features: The n x D feature matrix.
        :parameter labels: The n cluster labels, every cluster non-empty.
        :parameter count: The number of clusters.

        :returns: The m x D centroid matrix.
        """

        centroids = zeros((count, features.shape[1]))

        for cluster in range(count):
            centroids[cluster] = features[labels == cluster].mean(axis=0)

        return centroids

    @staticmethod
    def lloyd(
            features: ndarray,
            count: int,
            seed: int,
            max_iters: int
    ) -> Tuple[ndarray, List[float]]:
        """
        Cluster the rows with k-means++ seeding followed by Lloyd iterations.

        :parameter features: The n x D feature matrix.
        :parameter count: The number of clusters, at most `n`.
        :parameter seed: The seed of the k-means++ initialization.
        :parameter max_iters: The maximum number of Lloyd iterations.

        :returns: The m x D centroid matrix and the within-cluster sum of squares after every iteration.
        """

        features = asarray(features, dtype=float64)

        centroids, _ = kmeans_plusplus(
            features,
            n_clusters=count,
            random_state=seed
        )

        wcss_trace = list()
        labels = None

        for _ in range(max_iters):
            new_labels, squared_distances = KMeansLandmarkUtility._assign(
                features=features,
                centroids=centroids
            )

            new_labels = KMeansLandmarkUtility._repair_empty_clusters(
                labels=new_labels,
                squared_distances=squared_distances,
                count=count
            )

            centroids = KMeansLandmarkUtility._update(
                features=features,
                labels=new_labels,
                count=count
            )

            wcss = float(((features - centroids[new_labels]) ** 2).sum())

            if len(wcss_trace) > 0 and wcss > wcss_trace[-1] * (1.0 + KMeansLandmarkUtility.WCSS_TOLERANCE) + \
                    KMeansLandmarkUtility.WCSS_TOLERANCE:
                raise InternalInvariantError(
                    "The within-cluster sum of squares increased from {previous:.12g} to {current:.12g}.".format(
                        previous=wcss_trace[-1],
                        current=wcss
                    )
                )

            wcss_trace.append(wcss)

            if labels is not None and (labels == new_labels).all():
                break

            labels = new_labels

        return centroids, wcss_trace

    @staticmethod
    def snap_to_rows(
            features: ndarray,
            centroids: ndarray
    ) -> ndarray:
        """
        Replace every centroid by its nearest row not taken by a previous centroid.

        :parameter features: The n x D feature matrix.
        :parameter centroids: The m x D centroid matrix, `m <= n`.

        :returns: The m distinct row indices in ascending order.
        """

        neighbor_order = argsort(cdist(centroids, features, metric="sqeuclidean"), axis=1, kind="stable")

        taken = set()

        for centroid_neighbors in neighbor_order:
            for row in centroid_neighbors:
                if int(row) not in taken:
                    taken.add(int(row))

                    break

        return asarray(sorted(taken), dtype=int64)

    @staticmethod
    def select_rows(
            features: ndarray,
            count: int,
            seed: int,
            max_iters: int
    ) -> Tuple[ndarray, List[float]]:
        """
        Select landmark rows by k-means with centroid snapping.

        :parameter features: The n x D feature matrix.
        :parameter count: The number of landmarks, at most `n`.
        :parameter seed: The seed of the k-means++ initialization.
        :parameter max_iters: The maximum number of Lloyd iterations.

        :returns: The selected row indices in ascending order and the within-cluster sum of squares trace.
        """

        centroids, wcss_trace = KMeansLandmarkUtility.lloyd(
            features=features,
            count=count,
            seed=seed,
            max_iters=max_iters
        )

        return KMeansLandmarkUtility.snap_to_rows(
            features=features,
            centroids=centroids
        ), wcss_trace
