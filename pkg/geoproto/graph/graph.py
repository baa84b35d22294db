""" The ``geoproto.graph`` package ``graph`` module. """

from dataclasses import dataclass

from numpy import abs as absolute, arange, asarray, float64, ndarray, repeat

from scipy.sparse import coo_matrix, csr_matrix, diags

from geoproto.base.exception import ConfigurationError, DegenerateScaleError, KTooLargeError, TooFewSamplesError
from geoproto.graph.utility.connectivity import GraphConnectivityUtility
from geoproto.graph.utility.neighbors import GraphNeighborsUtility


@dataclass(frozen=True)
class GraphConfig:
    """ The class graph construction configuration class. """

    k: int = 20
    local_scaling: bool = True
    epsilon_sigma: float = 1e-12
    connect_components: bool = True

    def __post_init__(
            self
    ) -> None:
        """ Validate the configuration. """

        if isinstance(self.k, bool) or not isinstance(self.k, int) or self.k < 1:
            raise ConfigurationError(
                "k must be a positive integer."
            )

        if not float(self.epsilon_sigma) > 0.0:
            raise DegenerateScaleError(
                "epsilon_sigma must be positive."
            )


@dataclass(frozen=True, eq=False)
class ClassGraph:
    """
    The class graph class.

    The affinity matrix is symmetric with a unit diagonal, the transition matrix is its row normalization.
    """

    affinity: csr_matrix
    degrees: ndarray
    transition: csr_matrix
    scales: ndarray
    node_features: ndarray
    k: int
    sigma_floor: float
    local_scaling: bool = True

    @property
    def number_of_nodes(
            self
    ) -> int:
        """
        Get the number of nodes.

        :returns: The number of nodes.
        """

        return int(self.node_features.shape[0])


@dataclass(frozen=True)
class GraphDiagnostics:
    """ The class graph diagnostics class. """

    components: int
    avg_path_length: float


class ClassGraphUtility:
    """ The class graph utility class. """

    @staticmethod
    def build_class_graph(
            features: ndarray,
            config: GraphConfig
    ) -> ClassGraph:
        """
        Build the locally scaled k-nearest-neighbor affinity graph of a class.

        :parameter features: The n x D feature matrix of the class.
        :parameter config: The graph construction configuration.

        :returns: The class graph.
        """

        features = asarray(features, dtype=float64)
        number_of_nodes = features.shape[0]

        if number_of_nodes < 2:
            raise TooFewSamplesError(
                "A class graph needs at least 2 nodes, got {n:d}.".format(
                    n=number_of_nodes
                )
            )

        if config.k > number_of_nodes - 1:
            raise KTooLargeError(
                "k = {k:d} exceeds the number of other nodes ({others:d}).".format(
                    k=config.k,
                    others=number_of_nodes - 1
                )
            )

        distances = GraphNeighborsUtility.pairwise_distances(
            features=features
        )

        sigma_floor = GraphNeighborsUtility.sigma_floor(
            distances=distances,
            epsilon_sigma=config.epsilon_sigma
        )

        neighbor_indices, neighbor_distances = GraphNeighborsUtility.k_nearest_neighbors(
            distances=distances,
            k=config.k
        )

        scales = GraphNeighborsUtility.local_scales(
            neighbor_distances=neighbor_distances,
            local_scaling=config.local_scaling,
            sigma_floor=sigma_floor
        )

        rows = repeat(arange(number_of_nodes), config.k)
        columns = neighbor_indices.ravel()

        weights = GraphNeighborsUtility.gaussian_affinity(
            squared_distances=distances[rows, columns] ** 2,
            scales_product=scales[rows] * scales[columns]
        )

        directed_affinity = coo_matrix(
            (weights, (rows, columns, )),
            shape=(number_of_nodes, number_of_nodes)
        ).tocsr()

        affinity = directed_affinity.maximum(directed_affinity.T).tolil()

        if config.connect_components:
            number_of_components, labels = GraphConnectivityUtility.component_labels(
                affinity=affinity.tocsr()
            )

            if number_of_components > 1:
                for row, column in GraphConnectivityUtility.bridging_edges(
                    distances=distances,
                    labels=labels
                ):
                    weight = float(GraphNeighborsUtility.gaussian_affinity(
                        squared_distances=asarray([distances[row, column] ** 2, ]),
                        scales_product=asarray([scales[row] * scales[column], ])
                    )[0])

                    affinity[row, column] = weight
                    affinity[column, row] = weight

        affinity.setdiag(1.0)

        affinity = affinity.tocsr()
        affinity.sort_indices()

        degrees = asarray(affinity.sum(axis=1), dtype=float64).ravel()

        transition = csr_matrix(diags(1.0 / degrees) @ affinity)
        transition.sort_indices()

        return ClassGraph(
            affinity=affinity,
            degrees=degrees,
            transition=transition,
            scales=scales,
            node_features=features.copy(),
            k=config.k,
            sigma_floor=sigma_floor,
            local_scaling=config.local_scaling
        )

    @staticmethod
    def transition_rows_check(
            graph: ClassGraph
    ) -> float:
        """
        Compute the largest deviation of a transition matrix row sum from one.

        :parameter graph: The class graph.

        :returns: The maximum absolute row-sum deviation.
        """

        return float(absolute(asarray(graph.transition.sum(axis=1)).ravel() - 1.0).max())

    @staticmethod
    def edge_count(
            graph: ClassGraph
    ) -> int:
        """
        Count the undirected off-diagonal edges.

        :parameter graph: The class graph.

        :returns: The number of edges.
        """

        return int(GraphConnectivityUtility.off_diagonal_structure(
            affinity=graph.affinity
        ).nnz // 2)

    @staticmethod
    def graph_diagnostics(
            graph: ClassGraph
    ) -> GraphDiagnostics:
        """
        Compute the number of connected components and the average path length of the largest component.

        :parameter graph: The class graph.

        :returns: The graph diagnostics.
        """

        number_of_components, _ = GraphConnectivityUtility.component_labels(
            affinity=graph.affinity
        )

        return GraphDiagnostics(
            components=number_of_components,
            avg_path_length=GraphConnectivityUtility.average_path_length(
                affinity=graph.affinity
            )
        )
