""" The shared helpers of the ``geoproto`` test suite. """

from numpy import asarray, concatenate, float64, ndarray, ones
from numpy.random import Generator

from scipy.sparse import csr_matrix, diags, identity

from geoproto.graph.graph import ClassGraph, GraphConfig
from geoproto.graph.utility.connectivity import GraphConnectivityUtility
from geoproto.nystrom.nystrom import ClassManifold, NystromUtility
from geoproto.spectral.spectral import DiffusionConfig


def fit_random_manifold(
        random_number_generator: Generator,
        n: int = 60,
        dimension: int = 4,
        k: int = 6,
        t: int = 2,
        L: int = 6,
        normalization: str = "zca"
) -> ClassManifold:
    """
    Fit a class manifold on Gaussian features.

    :parameter random_number_generator: The random number generator.
    :parameter n: The number of landmarks.
    :parameter dimension: The feature dimension.
    :parameter k: The number of neighbors.
    :parameter t: The diffusion time.
    :parameter L: The number of coordinates.
    :parameter normalization: The coordinate normalization.

    :returns: The class manifold.
    """

    return NystromUtility.fit_class_manifold(
        features=random_number_generator.standard_normal(size=(n, dimension)),
        graph_config=GraphConfig(
            k=k
        ),
        diffusion_config=DiffusionConfig(
            t=t,
            L=L,
            normalization=normalization
        )
    )


def graph_from_affinity(
        affinity: csr_matrix,
        node_features: ndarray,
        scales: ndarray,
        k: int = 1,
        sigma_floor: float = 1e-12
) -> ClassGraph:
    """
    Build a class graph from a precomputed symmetric affinity matrix.

    :parameter affinity: The n x n symmetric sparse affinity matrix with a unit diagonal.
    :parameter node_features: The n x D node feature matrix.
    :parameter scales: The n node bandwidths.
    :parameter k: The neighbor count.
    :parameter sigma_floor: The minimum bandwidth.

    :returns: The class graph.
    """

    affinity = csr_matrix(affinity, dtype=float64)
    affinity.sort_indices()

    degrees = asarray(affinity.sum(axis=1), dtype=float64).ravel()

    transition = csr_matrix(diags(1.0 / degrees) @ affinity)
    transition.sort_indices()

    return ClassGraph(
        affinity=affinity,
        degrees=degrees,
        transition=transition,
        scales=asarray(scales, dtype=float64),
        node_features=asarray(node_features, dtype=float64),
        k=k,
        sigma_floor=sigma_floor
    )


def identity_graph(
        node_features: ndarray
) -> ClassGraph:
    """
    Build the graph of isolated self-loops over a set of nodes.

    :parameter node_features: The n x D node feature matrix.

    :returns: The class graph.
    """

    number_of_nodes = asarray(node_features).shape[0]

    return graph_from_affinity(
        affinity=csr_matrix(identity(number_of_nodes, dtype=float64)),
        node_features=node_features,
        scales=ones(number_of_nodes)
    )


def edge_list(
        graph: ClassGraph
) -> ndarray:
    """
    List the undirected off-diagonal edges as node index pairs with the lower index first.

    :parameter graph: The class graph.

    :returns: The m x 2 edge array.
    """

    structure = GraphConnectivityUtility.off_diagonal_structure(
        affinity=graph.affinity
    ).tocoo()

    upper = structure.row < structure.col

    return concatenate([structure.row[upper][:, None], structure.col[upper][:, None]], axis=1)
