""" The ``geoproto.graph`` package initialization module. """

from geoproto.graph.graph import ClassGraph, ClassGraphUtility, GraphConfig, GraphDiagnostics
