""" The ``geoproto.features`` package initialization module. """

from geoproto.features.features import FeatureSet
