""" The ``geoproto.synth`` package initialization module. """

from geoproto.synth.synth import SyntheticDataUtility, SyntheticSet
