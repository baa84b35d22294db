""" The shared fixtures of the ``geoproto`` test suite. """

from numpy.random import Generator, default_rng

from pytest import fixture

from scipy.sparse import csr_matrix

from geoproto.config.config import FitConfig
from geoproto.features.features import FeatureSet
from geoproto.graph.graph import ClassGraph, ClassGraphUtility, GraphConfig
from geoproto.landmarks.landmarks import LandmarkConfig
from geoproto.proto.proto import PrototypeConfig
from geoproto.spectral.spectral import DiffusionConfig
from geoproto.synth.synth import SyntheticDataUtility, SyntheticSet

from helpers import graph_from_affinity


@fixture
def random_number_generator(
) -> Generator:
    """ Get a seeded random number generator. """

    return default_rng(12345)


@fixture
def two_node_graph(
) -> ClassGraph:
    """ Get the two-node graph with the off-diagonal affinity exp(-1) and unit self-loops. """

    return ClassGraphUtility.build_class_graph(
        features=[[0.0, 0.0], [2.0, 0.0]],
        config=GraphConfig(
            k=1
        )
    )


@fixture
def complete_graph(
) -> ClassGraph:
    """ Get the complete four-node graph with unit affinities. """

    return graph_from_affinity(
        affinity=csr_matrix([[1.0] * 4] * 4),
        node_features=[[0.0], [1.0], [2.0], [3.0]],
        scales=[1.0] * 4
    )


@fixture
def circles(
) -> SyntheticSet:
    """ Get a small two-circles synthetic set. """

    return SyntheticDataUtility.gen_circles(
        n=120,
        radii=(1.0, 1.3, ),
        noise=0.02,
        seed=7
    )


@fixture
def circles_feature_set(
        circles: SyntheticSet
) -> FeatureSet:
    """ Get the feature set of the small two-circles synthetic set. """

    return circles.to_feature_set()


@fixture
def small_fit_config(
) -> FitConfig:
    """ Get a fit configuration sized for the small test sets. """

    return FitConfig(
        graph=GraphConfig(
            k=6
        ),
        diffusion=DiffusionConfig(
            t=2,
            L=6
        ),
        landmarks=LandmarkConfig(
            selection="random",
            count=40,
            update_every=0
        ),
        prototypes=PrototypeConfig(
            m=2
        )
    )
