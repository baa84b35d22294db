""" The ``geoproto.landmarks`` package initialization module. """

from geoproto.landmarks.landmarks import (
    LandmarkConfig,
    LandmarkManifoldRefresher,
    LandmarkSet,
    LandmarkUtility,
    ManifoldRegistry,
)
