""" The ``geoproto.spectral`` package ``spectral`` module. """

from dataclasses import dataclass, field
from typing import Tuple

from numpy import abs as absolute, argmax, arange, asarray, float64, ndarray, sqrt

from scipy.linalg import eigh
from scipy.sparse import diags
from scipy.sparse.linalg import ArpackNoConvergence, eigsh

from geoproto.base.exception import ConfigurationError, NoConvergenceError
from geoproto.graph.graph import ClassGraph
from geoproto.spectral.utility.normalization import CoordinateNormalizationUtility, NormState


@dataclass(frozen=True)
class DiffusionConfig:
    """ The diffusion map configuration class. """

    t: int = 4
    L: int = 32
    normalization: str = "zca"
    zca_epsilon: float = 1e-6

    def __post_init__(
            self
    ) -> None:
        """ Validate the configuration. """

        if isinstance(self.t, bool) or not isinstance(self.t, int) or self.t < 1:
            raise ConfigurationError(
                "t must be a positive integer."
            )

        if isinstance(self.L, bool) or not isinstance(self.L, int) or self.L < 1:
            raise ConfigurationError(
                "L must be a positive integer."
            )

        if self.normalization not in CoordinateNormalizationUtility.SUPPORTED_MODES:
            raise ConfigurationError(
                "The normalization must be one of {modes}, got '{normalization}'.".format(
                    modes=", ".join(CoordinateNormalizationUtility.SUPPORTED_MODES),
                    normalization=self.normalization
                )
            )

        if not float(self.zca_epsilon) > 0.0:
            raise ConfigurationError(
                "zca_epsilon must be positive."
            )


@dataclass(frozen=True, eq=False)
class SpectralBasis:
    """
    The spectral basis class.

    The eigenvalues are sorted by descending value and the eigenvectors are the right eigenvectors of the
    transition matrix, normalized as ``psi.T @ diag(degrees) @ psi = I``. Column 0 is the trivial eigenvector.
    """

    eigenvalues: ndarray
    eigenvectors: ndarray
    L: int
    degrees: ndarray
    requested_L: int
    warnings: Tuple[str, ...] = field(default_factory=tuple)


class SpectralUtility:
    """ The spectral decomposition and diffusion map utility class. """

    DENSE_SOLVER_LIMIT = 2048

    @staticmethod
    def fit_spectral_basis(
            graph: ClassGraph,
            L: int
    ) -> SpectralBasis:
        """
        Eigendecompose the transition matrix of a class graph through its symmetric conjugate.

        :parameter graph: The class graph.
        :parameter L: The requested number of non-trivial coordinates. It is clamped to `n - 1` with a recorded warning.

        :returns: The spectral basis with `L + 1` eigenpairs.
        """

        number_of_nodes = graph.number_of_nodes
        warnings = list()

        effective_L = int(L)

        if effective_L > number_of_nodes - 1:
            effective_L = number_of_nodes - 1

            warnings.append(
                "L = {L:d} exceeds n - 1 = {maximum:d} and has been clamped.".format(
                    L=int(L),
                    maximum=effective_L
                )
            )

        inverse_sqrt_degrees = 1.0 / sqrt(graph.degrees)

        symmetric_operator = diags(inverse_sqrt_degrees) @ graph.affinity @ diags(inverse_sqrt_degrees)

        if number_of_nodes <= SpectralUtility.DENSE_SOLVER_LIMIT:
            dense_operator = symmetric_operator.toarray()

            eigenvalues, eigenvectors = eigh(
                (dense_operator + dense_operator.T) / 2.0,
                subset_by_index=[number_of_nodes - effective_L - 1, number_of_nodes - 1]
            )

        else:
            try:
                eigenvalues, eigenvectors = eigsh(
                    symmetric_operator,
                    k=effective_L + 1,
                    which="LA"
                )

            except ArpackNoConvergence as exception_handle:
                raise NoConvergenceError(
                    "The iterative eigensolver did not converge for n = {n:d}, L = {L:d}.".format(
                        n=number_of_nodes,
                        L=effective_L
                    )
                ) from exception_handle

        order = eigenvalues.argsort(kind="stable")[::-1]

        eigenvalues = asarray(eigenvalues[order], dtype=float64)
        eigenvectors = inverse_sqrt_degrees[:, None] * eigenvectors[:, order]

        largest_entries = eigenvectors[argmax(absolute(eigenvectors), axis=0), arange(eigenvectors.shape[1])]
        eigenvectors[:, largest_entries < 0.0] *= -1.0

        return SpectralBasis(
            eigenvalues=eigenvalues,
            eigenvectors=eigenvectors,
            L=effective_L,
            degrees=graph.degrees.copy(),
            requested_L=int(L),
            warnings=tuple(warnings)
        )

    @staticmethod
    def raw_diffusion_coords(
            basis: SpectralBasis,
            t: int,
            L: int
    ) -> ndarray:
        """
        Compute the unnormalized diffusion map coordinates, excluding the trivial eigenvector.

        :parameter basis: The spectral basis.
        :parameter t: The diffusion time.
        :parameter L: The number of coordinates.

        :returns: The n x L coordinate matrix.
        """

        return basis.eigenvectors[:, 1:L + 1] * basis.eigenvalues[1:L + 1] ** t

    @staticmethod
    def diffusion_coords(
            basis: SpectralBasis,
            config: DiffusionConfig
    ) -> ndarray:
        """
        Compute the normalized diffusion map coordinates.

        :parameter basis: The spectral basis.
        :parameter config: The diffusion configuration. Its `L` must not exceed the `L` of the basis.

        :returns: The n x L coordinate matrix.
        """

        return SpectralUtility.normalized_diffusion_coords(
            basis=basis,
            config=config
        )[0]

    @staticmethod
    def normalized_diffusion_coords(
            basis: SpectralBasis,
            config: DiffusionConfig
    ) -> Tuple[ndarray, NormState]:
        """
        Compute the normalized diffusion map coordinates and the fitted normalization.

        :parameter basis: The spectral basis.
        :parameter config: The diffusion configuration. Its `L` must not exceed the `L` of the basis.

        :returns: The n x L coordinate matrix and the normalization state.
        """

        if config.L > basis.L:
            raise ConfigurationError(
                "The diffusion configuration requests L = {L:d}, but the basis holds only {available:d}.".format(
                    L=config.L,
                    available=basis.L
                )
            )

        return CoordinateNormalizationUtility.normalize_coords(
            coords=SpectralUtility.raw_diffusion_coords(
                basis=basis,
                t=config.t,
                L=config.L
            ),
            mode=config.normalization,
            zca_epsilon=config.zca_epsilon
        )

    @staticmethod
    def diffusion_distance(
            basis: SpectralBasis,
            i: int,
            j: int,
            config: DiffusionConfig
    ) -> float:
        """
        Compute the diffusion distance between two nodes.

        :parameter basis: The spectral basis.
        :parameter i: The index of the first node.
        :parameter j: The index of the second node.
        :parameter config: The diffusion configuration.

        :returns: The diffusion distance.
        """

        eigenvalues = basis.eigenvalues[1:config.L + 1]
        differences = basis.eigenvectors[i, 1:config.L + 1] - basis.eigenvectors[j, 1:config.L + 1]

        return float(sqrt((eigenvalues ** (2 * config.t) * differences ** 2).sum()))

    @staticmethod
    def eigen_residuals(
            basis: SpectralBasis,
            graph: ClassGraph
    ) -> ndarray:
        """
        Compute the eigen-equation residual of every retained eigenpair.

        :parameter basis: The spectral basis.
        :parameter graph: The class graph the basis was fitted on.

        :returns: The `L + 1` residuals, each scaled by the larger of one and the largest eigenvector entry.
        """

        residuals = absolute(graph.transition @ basis.eigenvectors - basis.eigenvectors * basis.eigenvalues).max(axis=0)
        scales = absolute(basis.eigenvectors).max(axis=0)
        scales[scales < 1.0] = 1.0

        return residuals / scales
