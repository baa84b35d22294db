""" The ``geoproto.features.utility`` package initialization module. """

from geoproto.features.utility.parsing import FeatureSetParsingUtility
