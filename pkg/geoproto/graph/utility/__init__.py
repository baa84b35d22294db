""" The ``geoproto.graph.utility`` package initialization module. """

from geoproto.graph.utility.connectivity import GraphConnectivityUtility
from geoproto.graph.utility.neighbors import GraphNeighborsUtility
