""" The ``geoproto.pipeline`` package initialization module. """

from geoproto.pipeline.pipeline import GeoProtoPipeline
