""" The ``geoproto.config`` package initialization module. """

from geoproto.config.config import FitConfig
