""" The ``geoproto.spectral.utility`` package ``normalization`` module. """

from dataclasses import dataclass
from typing import Tuple

from numpy import asarray, clip, diag, eye, float64, ndarray, sqrt, where, zeros

from scipy.linalg import eigh

from geoproto.base.exception import ConfigurationError


@dataclass(frozen=True, eq=False)
class NormState:
    """
    The fitted coordinate normalization class.

    Normalized coordinates are ``(coords - mean) @ transform``.
    """

    mode: str
    mean: ndarray
    transform: ndarray

    def apply(
            self,
            coords: ndarray
    ) -> ndarray:
        """
        Apply the stored normalization to coordinate rows.

        :parameter coords: The L coordinates or the n x L coordinate matrix.

        :returns: The normalized coordinates of the same shape.
        """

        if self.mode == "none":
            return asarray(coords, dtype=float64).copy()

        return (asarray(coords, dtype=float64) - self.mean) @ self.transform

    @property
    def jacobian(
            self
    ) -> ndarray:
        """
        Get the L x L derivative of the normalized coordinates with respect to the raw coordinates.

        :returns: The derivative matrix.
        """

        return self.transform.T


class CoordinateNormalizationUtility:
    """ The diffusion coordinate normalization utility class. """

    SUPPORTED_MODES = ("none", "energy", "zca", )

    NULL_EIGENVALUE_THRESHOLD = 1e-12

    @staticmethod
    def normalize_coords(
            coords: ndarray,
            mode: str,
            zca_epsilon: float = 1e-6
    ) -> Tuple[ndarray, NormState]:
        """
        Fit a coordinate normalization and apply it.

        :parameter coords: The n x L coordinate matrix.
        :parameter mode: The normalization mode, one of `none`, `energy` or `zca`.
        :parameter zca_epsilon: The ZCA regularization relative to the variance of every principal direction, and
            relative to the mean variance for the null directions.

        :returns: The normalized coordinates and the normalization state.
        """

        coords = asarray(coords, dtype=float64)
        dimension = coords.shape[1]

        if mode == "none":
            state = NormState(
                mode=mode,
                mean=zeros(dimension),
                transform=eye(dimension)
            )

            return coords.copy(), state

        if mode == "energy":
            column_norms = sqrt((coords ** 2).sum(axis=0))
            column_norms[column_norms == 0.0] = 1.0

            state = NormState(
                mode=mode,
                mean=zeros(dimension),
                transform=diag(1.0 / column_norms)
            )

            return state.apply(coords), state

        if mode == "zca":
            mean = coords.mean(axis=0)
            centered_coords = coords - mean

            eigenvalues, eigenvectors = eigh((centered_coords.T @ centered_coords) / coords.shape[0])
            eigenvalues = clip(eigenvalues, 0.0, None)

            mean_eigenvalue = float(eigenvalues.mean())
            null_directions = eigenvalues <= CoordinateNormalizationUtility.NULL_EIGENVALUE_THRESHOLD * eigenvalues.max()

            # Null directions fall back to the mean variance.
            variances = where(
                null_directions,
                float(zca_epsilon) * (mean_eigenvalue if mean_eigenvalue > 0.0 else 1.0),
                (1.0 + float(zca_epsilon)) * eigenvalues
            )

            transform = (eigenvectors / sqrt(variances)) @ eigenvectors.T

            state = NormState(
                mode=mode,
                mean=mean,
                transform=(transform + transform.T) / 2.0
            )

            return state.apply(coords), state

        raise ConfigurationError(
            "The normalization mode '{mode:s}' is not supported.".format(
                mode=str(mode)
            )
        )
