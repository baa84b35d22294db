""" The ``geoproto.spectral`` package initialization module. """

from geoproto.spectral.spectral import DiffusionConfig, SpectralBasis, SpectralUtility
