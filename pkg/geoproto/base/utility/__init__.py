""" The ``geoproto.base.utility`` package initialization module. """

from geoproto.base.utility.parallel import BaseParallelUtility
