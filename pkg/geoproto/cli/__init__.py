""" The ``geoproto.cli`` package initialization module. """

from geoproto.cli.cli import main
