""" The ``geoproto.synth.utility`` package initialization module. """

from geoproto.synth.utility.metrics import EvaluationMetricsUtility
