""" The ``geoproto.nystrom.utility`` package initialization module. """

from geoproto.nystrom.utility.kernel import NystromKernelUtility
