""" The ``geoproto.spectral.utility`` package initialization module. """

from geoproto.spectral.utility.normalization import CoordinateNormalizationUtility, NormState
