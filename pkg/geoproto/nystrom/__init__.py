""" The ``geoproto.nystrom`` package initialization module. """

from geoproto.nystrom.nystrom import ClassManifold, Embedding, EmbeddingBatch, NystromUtility
