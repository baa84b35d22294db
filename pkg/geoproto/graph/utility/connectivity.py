""" The ``geoproto.graph.utility`` package ``connectivity`` module. """

from typing import List, Tuple

from numpy import argmin, bincount, flatnonzero, inf, ndarray, triu_indices, unravel_index, where

from scipy.sparse import csr_matrix, spmatrix
from scipy.sparse.csgraph import connected_components, shortest_path


class GraphConnectivityUtility:
    """ The graph connectivity utility class. """

    @staticmethod
    def off_diagonal_structure(
            affinity: spmatrix
    ) -> csr_matrix:
        """
        Get the unweighted off-diagonal edge structure of an affinity matrix.

        :parameter affinity: The n x n sparse affinity matrix.

        :returns: The n x n sparse 0/1 adjacency matrix without self-loops.
        """

        structure = csr_matrix(affinity, copy=True)

        structure.setdiag(0)
        structure.eliminate_zeros()

        structure.data[:] = 1.0

        return structure

    @staticmethod
    def component_labels(
            affinity: spmatrix
    ) -> Tuple[int, ndarray]:
        """
        Label the connected components of the off-diagonal edge set.

        :parameter affinity: The n x n sparse affinity matrix.

        :returns: The number of components and the component label of every node.
        """

        number_of_components, labels = connected_components(
            csgraph=GraphConnectivityUtility.off_diagonal_structure(
                affinity=affinity
            ),
            directed=False
        )

        return int(number_of_components), labels

    @staticmethod
    def bridging_edges(
            distances: ndarray,
            labels: ndarray
    ) -> List[Tuple[int, int]]:
        """
        Find the edges that connect all components, each the shortest remaining cross-component edge.

        :parameter distances: The n x n Euclidean distance matrix.
        :parameter labels: The component label of every node.

        :returns: The bridging edges in insertion order.
        """

        labels = labels.copy()
        edges = list()

        while bincount(labels).astype(bool).sum() > 1:
            cross_distances = where(labels[:, None] != labels[None, :], distances, inf)

            row, column = [
                int(index)
                for index in unravel_index(argmin(cross_distances), cross_distances.shape)
            ]

            edges.append((min(row, column), max(row, column), ))

            labels[labels == labels[column]] = labels[row]

        return edges

    @staticmethod
    def average_path_length(
            affinity: spmatrix
    ) -> float:
        """
        Compute the mean unweighted shortest-path length over the node pairs of the largest component.

        :parameter affinity: The n x n sparse affinity matrix.

        :returns: The average path length, zero for a single-node component.
        """

        _, labels = GraphConnectivityUtility.component_labels(
            affinity=affinity
        )

        component_nodes = flatnonzero(labels == int(bincount(labels).argmax()))

        if component_nodes.size < 2:
            return 0.0

        structure = GraphConnectivityUtility.off_diagonal_structure(
            affinity=affinity
        )[component_nodes][:, component_nodes]

        path_lengths = shortest_path(
            csgraph=structure,
            method="D",
            directed=False,
            unweighted=True
        )

        return float(path_lengths[triu_indices(component_nodes.size, k=1)].mean())
