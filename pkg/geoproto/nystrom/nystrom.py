""" The ``geoproto.nystrom`` package ``nystrom`` module. """

from dataclasses import dataclass, field, replace
from typing import Optional, Tuple

from numpy import abs as absolute, arange, asarray, float64, maximum, ndarray

from geoproto.base.exception import ConfigurationError, DimensionMismatchError
from geoproto.graph.graph import ClassGraph, ClassGraphUtility, GraphConfig
from geoproto.graph.utility.neighbors import GraphNeighborsUtility
from geoproto.nystrom.utility.kernel import NystromKernelUtility
from geoproto.spectral.spectral import DiffusionConfig, SpectralBasis, SpectralUtility
from geoproto.spectral.utility.normalization import NormState


@dataclass(frozen=True, eq=False)
class ClassManifold:
    """ The fitted class-conditional diffusion manifold class. """

    class_id: int
    graph: ClassGraph
    basis: SpectralBasis
    config: DiffusionConfig
    norm_state: NormState
    landmark_coords: ndarray
    landmark_diffusion_coords: ndarray
    landmark_indices: ndarray
    k_oos: int
    warnings: Tuple[str, ...] = field(default_factory=tuple)

    @property
    def dimension(
            self
    ) -> int:
        """
        Get the feature dimension of the landmarks.

        :returns: The feature dimension.
        """

        return int(self.graph.node_features.shape[1])

    @property
    def number_of_landmarks(
            self
    ) -> int:
        """
        Get the number of landmarks.

        :returns: The number of landmarks.
        """

        return self.graph.number_of_nodes


@dataclass(frozen=True, eq=False)
class Embedding:
    """ The out-of-sample embedding class. """

    coords: ndarray
    diffusion_coords: ndarray
    total_affinity: float
    off_manifold: bool
    bandwidth: float


@dataclass(frozen=True, eq=False)
class EmbeddingBatch:
    """ The batch out-of-sample embedding class. """

    coords: ndarray
    diffusion_coords: ndarray
    total_affinity: ndarray
    off_manifold: ndarray
    bandwidth: ndarray

    def __getitem__(
            self,
            index: int
    ) -> Embedding:
        """
        Get the embedding of one query.

        :parameter index: The query index.

        :returns: The embedding.
        """

        return Embedding(
            coords=self.coords[index],
            diffusion_coords=self.diffusion_coords[index],
            total_affinity=float(self.total_affinity[index]),
            off_manifold=bool(self.off_manifold[index]),
            bandwidth=float(self.bandwidth[index])
        )

    def __len__(
            self
    ) -> int:
        """
        Get the number of queries.

        :returns: The number of queries.
        """

        return int(self.coords.shape[0])


class NystromUtility:
    """ The Nystrom out-of-sample extension utility class. """

    SUPPORTED_MODES = ("row", "paper", "degree", )

    OFF_MANIFOLD_THRESHOLD = 1e-12
    NULL_EIGENVALUE_THRESHOLD = 1e-10

    @staticmethod
    def fit_class_manifold(
            features: ndarray,
            graph_config: GraphConfig,
            diffusion_config: DiffusionConfig,
            class_id: int = 1,
            landmark_indices: Optional[ndarray] = None,
            k_oos: Optional[int] = None
    ) -> ClassManifold:
        """
        Fit the diffusion manifold of one class over its landmark features.

        :parameter features: The n x D landmark feature matrix.
        :parameter graph_config: The graph construction configuration.
        :parameter diffusion_config: The diffusion configuration. Its `L` is clamped to `n - 1`.
        :parameter class_id: The class identifier.
        :parameter landmark_indices: The row indices of the landmarks in the source feature set. The value `None`
            indicates the positions `0, ..., n - 1`.
        :parameter k_oos: The neighbor count of the query bandwidth. The value `None` indicates the graph `k`.

        :returns: The class manifold.
        """

        graph = ClassGraphUtility.build_class_graph(
            features=features,
            config=graph_config
        )

        basis = SpectralUtility.fit_spectral_basis(
            graph=graph,
            L=diffusion_config.L
        )

        return NystromUtility.manifold_from_basis(
            graph=graph,
            basis=basis,
            diffusion_config=replace(diffusion_config, L=basis.L),
            class_id=class_id,
            landmark_indices=landmark_indices,
            k_oos=graph_config.k if k_oos is None else k_oos
        )

    @staticmethod
    def manifold_from_basis(
            graph: ClassGraph,
            basis: SpectralBasis,
            diffusion_config: DiffusionConfig,
            class_id: int = 1,
            landmark_indices: Optional[ndarray] = None,
            k_oos: Optional[int] = None
    ) -> ClassManifold:
        """
        Assemble a class manifold from a graph and its spectral basis.

        :parameter graph: The class graph over the landmarks.
        :parameter basis: The spectral basis of the graph.
        :parameter diffusion_config: The diffusion configuration with `L` not exceeding the `L` of the basis.
        :parameter class_id: The class identifier.
        :parameter landmark_indices: The row indices of the landmarks in the source feature set.
        :parameter k_oos: The neighbor count of the query bandwidth. The value `None` indicates the graph `k`.

        :returns: The class manifold.
        """

        landmark_coords, norm_state = SpectralUtility.normalized_diffusion_coords(
            basis=basis,
            config=diffusion_config
        )

        return ClassManifold(
            class_id=int(class_id),
            graph=graph,
            basis=basis,
            config=diffusion_config,
            norm_state=norm_state,
            landmark_coords=landmark_coords,
            landmark_diffusion_coords=SpectralUtility.raw_diffusion_coords(
                basis=basis,
                t=diffusion_config.t,
                L=diffusion_config.L
            ),
            landmark_indices=arange(graph.number_of_nodes) if landmark_indices is None else asarray(landmark_indices),
            k_oos=graph.k if k_oos is None else int(k_oos),
            warnings=basis.warnings
        )

    @staticmethod
    def _combination_matrix(
            manifold: ClassManifold
    ) -> ndarray:
        """
        Get the n x L matrix that maps normalized kernel rows to raw diffusion coordinates.

        :parameter manifold: The class manifold.

        :returns: The combination matrix.
        """

        eigenvalues = manifold.basis.eigenvalues[1:manifold.config.L + 1]

        combination = manifold.basis.eigenvectors[:, 1:manifold.config.L + 1] * eigenvalues ** (manifold.config.t - 1)
        combination[:, absolute(eigenvalues) <= NystromUtility.NULL_EIGENVALUE_THRESHOLD] = 0.0

        return combination

    @staticmethod
    def _validate_queries(
            manifold: ClassManifold,
            queries: ndarray,
            mode: str
    ) -> ndarray:
        """
        Validate a query matrix and the extension mode.

        :parameter manifold: The class manifold.
        :parameter queries: The q x D query matrix.
        :parameter mode: The extension mode.

        :returns: The query matrix.
        """

        if mode not in NystromUtility.SUPPORTED_MODES:
            raise ConfigurationError(
                "The Nystrom mode must be 'row', 'paper' or 'degree', got '{mode}'.".format(
                    mode=mode
                )
            )

        queries = asarray(queries, dtype=float64)

        if queries.ndim != 2 or queries.shape[1] != manifold.dimension:
            raise DimensionMismatchError(
                "The queries have the dimension {dimension}, but the manifold of class {class_id:d} has {expected:d}.".format(
                    dimension=queries.shape[-1] if queries.ndim > 0 else 0,
                    class_id=manifold.class_id,
                    expected=manifold.dimension
                )
            )

        return queries

    @staticmethod
    def extend_many(
            manifold: ClassManifold,
            queries: ndarray,
            mode: str = "row",
            bandwidth: Optional[float] = None
    ) -> EmbeddingBatch:
        """
        Embed a batch of queries into a class manifold.

        :parameter manifold: The class manifold.
        :parameter queries: The q x D query matrix.
        :parameter mode: The extension mode. The `row` mode normalizes every kernel row by its sum, and the `paper`
            mode divides every kernel entry by the training degree of its landmark. The `degree` mode is an alias of
            the `paper` mode.
        :parameter bandwidth: The fixed query bandwidth. The value `None` indicates that the k-nearest-neighbor
            bandwidth should be utilized.

        :returns: The batch embedding.
        """

        queries = NystromUtility._validate_queries(
            manifold=manifold,
            queries=queries,
            mode=mode
        )

        kernel, bandwidths = NystromKernelUtility.kernel_rows(
            queries=queries,
            graph=manifold.graph,
            k_oos=manifold.k_oos,
            bandwidth=bandwidth
        )

        total_affinity = kernel.sum(axis=1)

        if mode == "row":
            weights = kernel / maximum(total_affinity, NystromUtility.OFF_MANIFOLD_THRESHOLD)[:, None]

        else:
            weights = kernel / manifold.basis.degrees[None, :]

        diffusion_coords = weights @ NystromUtility._combination_matrix(
            manifold=manifold
        )

        return EmbeddingBatch(
            coords=manifold.norm_state.apply(diffusion_coords),
            diffusion_coords=diffusion_coords,
            total_affinity=total_affinity,
            off_manifold=total_affinity < NystromUtility.OFF_MANIFOLD_THRESHOLD,
            bandwidth=bandwidths
        )

    @staticmethod
    def extend(
            manifold: ClassManifold,
            query: ndarray,
            mode: str = "row",
            bandwidth: Optional[float] = None
    ) -> Embedding:
        """
        Embed one query into a class manifold.

        :parameter manifold: The class manifold.
        :parameter query: The D query vector.
        :parameter mode: The extension mode, `row` or `paper`.
        :parameter bandwidth: The fixed query bandwidth. The value `None` indicates that the k-nearest-neighbor
            bandwidth should be utilized.

        :returns: The embedding.
        """

        return NystromUtility.extend_many(
            manifold=manifold,
            queries=asarray(query, dtype=float64).reshape(1, -1),
            mode=mode,
            bandwidth=bandwidth
        )[0]

    @staticmethod
    def extend_jacobian(
            manifold: ClassManifold,
            query: ndarray,
            mode: str = "row",
            bandwidth: Optional[float] = None
    ) -> ndarray:
        """
        Compute the derivative of the embedding with respect to the query, holding the query bandwidth constant.

        :parameter manifold: The class manifold.
        :parameter query: The D query vector.
        :parameter mode: The extension mode, `row` or `paper`.
        :parameter bandwidth: The fixed query bandwidth. The value `None` indicates that the k-nearest-neighbor
            bandwidth at the query should be utilized.

        :returns: The L x D Jacobian matrix.
        """

        query = NystromUtility._validate_queries(
            manifold=manifold,
            queries=asarray(query, dtype=float64).reshape(1, -1),
            mode=mode
        )[0]

        if bandwidth is None:
            bandwidth = float(NystromKernelUtility.query_bandwidths(
                distances=GraphNeighborsUtility.distances_to(
                    query=query[None, :],
                    features=manifold.graph.node_features
                ),
                graph=manifold.graph,
                k_oos=manifold.k_oos
            )[0])

        kernel, kernel_gradient = NystromKernelUtility.kernel_row_gradient(
            query=query,
            graph=manifold.graph,
            bandwidth=bandwidth
        )

        if mode == "row":
            total_affinity = float(kernel.sum())

            if total_affinity < NystromUtility.OFF_MANIFOLD_THRESHOLD:
                weights_gradient = kernel_gradient / NystromUtility.OFF_MANIFOLD_THRESHOLD

            else:
                weights_gradient = (
                    kernel_gradient - (kernel / total_affinity)[:, None] * kernel_gradient.sum(axis=0)[None, :]
                ) / total_affinity

        else:
            weights_gradient = kernel_gradient / manifold.basis.degrees[:, None]

        return manifold.norm_state.jacobian @ (NystromUtility._combination_matrix(
            manifold=manifold
        ).T @ weights_gradient)
