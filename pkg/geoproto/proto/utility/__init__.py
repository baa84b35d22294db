""" The ``geoproto.proto.utility`` package initialization module. """

from geoproto.proto.utility.metric import MatchingMetricUtility
