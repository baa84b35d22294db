""" The ``geoproto.landmarks`` package tests. """

from threading import Thread

from numpy import array, array_equal, concatenate, full
from numpy.random import Generator
from numpy.testing import assert_array_equal

from pytest import mark, raises

from geoproto.base.exception import ConfigurationError, CountTooSmallError, KTooLargeError
from geoproto.features.features import FeatureSet
from geoproto.graph.graph import GraphConfig
from geoproto.landmarks.landmarks import (
    LandmarkConfig,
    LandmarkManifoldRefresher,
    LandmarkUtility,
    ManifoldRegistry,
)

from geoproto.landmarks.utility.kmeans import KMeansLandmarkUtility
from geoproto.spectral.spectral import DiffusionConfig


def _three_class_feature_set(
        random_number_generator: Generator
) -> FeatureSet:
    """ Get three Gaussian classes of 50 samples each. """

    return FeatureSet.from_arrays(
        features=concatenate([
            random_number_generator.standard_normal(size=(50, 3)) + offset
            for offset in (0.0, 10.0, 20.0, )
        ]),
        labels=concatenate([full(50, class_id) for class_id in (1, 2, 3, )])
    )


def test_default_config(
) -> None:
    """ Test the default landmark configuration. """

    config = LandmarkConfig()

    assert (config.selection, config.pool, config.count, config.update_every, ) == ("kmeans", "per_class", 768, 20, )


@mark.parametrize(
    argnames="selection",
    argvalues=["random", "kmeans", ]
)
def test_count_equal_to_class_size(
        random_number_generator: Generator,
        selection: str
) -> None:
    """ Test that a count equal to the class size selects every row of the class. """

    feature_set = _three_class_feature_set(random_number_generator)

    landmark_set = LandmarkUtility.select_landmarks(
        feature_set=feature_set,
        config=LandmarkConfig(
            selection=selection,
            count=50
        )
    )

    for class_id in (1, 2, 3, ):
        assert_array_equal(landmark_set.indices[class_id], feature_set.class_indices(class_id))

    assert len(landmark_set.warnings) == 0


def test_kmeans_separates_clusters(
) -> None:
    """ Test that k-means places one landmark in each of two well-separated clusters. """

    features = array([[0.0, 0.0], [0.0, 1.0], [100.0, 0.0], [100.0, 1.0]])

    for seed in range(5):
        indices, wcss_trace = KMeansLandmarkUtility.select_rows(
            features=features,
            count=2,
            seed=seed,
            max_iters=100
        )

        assert sorted(int(index) // 2 for index in indices) == [0, 1]
        assert all(current <= previous for previous, current in zip(wcss_trace, wcss_trace[1:]))


def test_kmeans_objective_is_monotone(
        random_number_generator: Generator
) -> None:
    """ Test that the within-cluster sum of squares never increases. """

    _, wcss_trace = KMeansLandmarkUtility.lloyd(
        features=random_number_generator.standard_normal(size=(300, 5)),
        count=20,
        seed=3,
        max_iters=100
    )

    assert len(wcss_trace) >= 1
    assert all(current <= previous * (1.0 + 1e-12) for previous, current in zip(wcss_trace, wcss_trace[1:]))


def test_global_pool(
        random_number_generator: Generator
) -> None:
    """ Test that a global selection is partitioned by label. """

    feature_set = _three_class_feature_set(random_number_generator)

    landmark_set = LandmarkUtility.select_landmarks(
        feature_set=feature_set,
        config=LandmarkConfig(
            selection="random",
            pool="global",
            count=90
        )
    )

    assert sum(class_indices.size for class_indices in landmark_set.indices.values()) == 90

    for class_id, class_indices in landmark_set.indices.items():
        assert (feature_set.labels[class_indices] == class_id).all()


def test_count_larger_than_class(
        random_number_generator: Generator
) -> None:
    """ Test that a count larger than a class uses every row with a warning. """

    landmark_set = LandmarkUtility.select_landmarks(
        feature_set=_three_class_feature_set(random_number_generator),
        config=LandmarkConfig(
            count=80
        )
    )

    assert len(landmark_set.warnings) == 3
    assert all(class_indices.size == 50 for class_indices in landmark_set.indices.values())


def test_count_too_small(
        random_number_generator: Generator
) -> None:
    """ Test that fewer landmarks than a class graph needs are rejected. """

    with raises(CountTooSmallError):
        LandmarkUtility.select_landmarks(
            feature_set=_three_class_feature_set(random_number_generator),
            config=LandmarkConfig(
                selection="random",
                count=5
            ),
            minimum_count=7
        )


@mark.parametrize(
    argnames="epoch, update_every, expected",
    argvalues=[
        (20, 20, True, ),
        (19, 20, False, ),
        (40, 0, False, ),
    ]
)
def test_should_refresh(
        epoch: int,
        update_every: int,
        expected: bool
) -> None:
    """ Test the refresh schedule. """

    assert LandmarkUtility.should_refresh(
        epoch=epoch,
        config=LandmarkConfig(
            update_every=update_every
        )
    ) == expected


def test_refresh_manifolds(
        random_number_generator: Generator
) -> None:
    """ Test that a refresh fits one manifold per class and is deterministic. """

    feature_set = _three_class_feature_set(random_number_generator)

    arguments = {
        "feature_set": feature_set,
        "config": LandmarkConfig(
            count=32
        ),
        "graph_config": GraphConfig(
            k=5
        ),
        "diffusion_config": DiffusionConfig(
            L=8
        ),
    }

    manifolds, landmark_set = LandmarkUtility.refresh_manifolds(number_of_threads=3, **arguments)
    repeated_manifolds, _ = LandmarkUtility.refresh_manifolds(number_of_threads=1, **arguments)

    assert sorted(manifolds.keys()) == [1, 2, 3]

    for class_id, manifold in manifolds.items():
        assert manifold.number_of_landmarks == 32
        assert array_equal(manifold.landmark_indices, landmark_set.indices[class_id])
        assert manifold.basis.eigenvectors.tobytes() == repeated_manifolds[class_id].basis.eigenvectors.tobytes()
        assert manifold.landmark_coords.tobytes() == repeated_manifolds[class_id].landmark_coords.tobytes()


def test_refresh_translation_invariance(
        random_number_generator: Generator
) -> None:
    """ Test that translating one class leaves its affinities unchanged. """

    feature_set = _three_class_feature_set(random_number_generator)

    translated_features = feature_set.features.copy()
    translated_features[feature_set.class_indices(2)] += [3.0, -1.0, 0.5]

    arguments = {
        "config": LandmarkConfig(
            selection="random",
            count=50
        ),
        "graph_config": GraphConfig(
            k=5
        ),
        "diffusion_config": DiffusionConfig(
            L=4
        ),
        "number_of_threads": 1,
    }

    manifolds, _ = LandmarkUtility.refresh_manifolds(feature_set=feature_set, **arguments)

    translated_manifolds, _ = LandmarkUtility.refresh_manifolds(
        feature_set=FeatureSet.from_arrays(
            features=translated_features,
            labels=feature_set.labels
        ),
        **arguments
    )

    assert (abs(manifolds[2].graph.affinity - translated_manifolds[2].graph.affinity)).max() <= 1e-12


def test_refresh_is_all_or_nothing(
        random_number_generator: Generator
) -> None:
    """ Test that a failing class aborts the refresh and keeps the previous manifolds. """

    feature_set = _three_class_feature_set(random_number_generator)

    refresher = LandmarkManifoldRefresher(
        config=LandmarkConfig(
            selection="random",
            count=50
        ),
        graph_config=GraphConfig(
            k=5
        ),
        diffusion_config=DiffusionConfig(
            L=4
        ),
        number_of_threads=2
    )

    manifolds = refresher.refresh(
        feature_set=feature_set
    )

    small_feature_set = FeatureSet.from_arrays(
        features=concatenate([feature_set.features, [[50.0, 50.0, 50.0]] * 3]),
        labels=concatenate([feature_set.labels, [4, 4, 4]])
    )

    with raises(KTooLargeError):
        refresher.refresh(
            feature_set=small_feature_set,
            epoch=20
        )

    assert refresher.registry.snapshot() is manifolds


def test_registry_swap(
) -> None:
    """ Test that concurrent readers always see a complete manifold map. """

    registry = ManifoldRegistry(
        manifolds={1: "first", 2: "first"}
    )

    observed = list()

    def read() -> None:
        for _ in range(1000):
            snapshot = registry.snapshot()
            observed.append(len({snapshot[1], snapshot[2]}))

    reader = Thread(target=read)
    reader.start()

    for index in range(100):
        registry.swap({1: index, 2: index})

    reader.join()

    assert set(observed) == {1}

    with raises(TypeError):
        registry.snapshot()[1] = "mutated"


@mark.parametrize(
    argnames="configuration",
    argvalues=[
        {"selection": "greedy", },
        {"pool": "shared", },
        {"count": 0, },
        {"update_every": -1, },
    ]
)
def test_landmark_config_errors(
        configuration: dict
) -> None:
    """ Test the rejection of invalid landmark configurations. """

    with raises(ConfigurationError):
        LandmarkConfig(**configuration)
