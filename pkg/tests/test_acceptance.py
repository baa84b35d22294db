""" The end-to-end acceptance tests of the ``geoproto`` package. """

from dataclasses import replace
from pathlib import Path
from typing import Dict

from numpy import absolute, asarray, concatenate, eye, full, isfinite, ndarray, sqrt, zeros
from numpy.random import default_rng
from numpy.testing import assert_allclose

from pytest import fixture, mark

from geoproto.config.config import FitConfig
from geoproto.features.features import FeatureSet
from geoproto.features.utility.serialization import ModelSerializationUtility
from geoproto.graph.graph import ClassGraphUtility, GraphConfig
from geoproto.landmarks.landmarks import LandmarkConfig, LandmarkUtility
from geoproto.nystrom.nystrom import NystromUtility
from geoproto.pipeline.pipeline import GeoProtoPipeline
from geoproto.proto.proto import PrototypeConfig, PrototypeUtility
from geoproto.proto.utility.training import PrototypeTrainingUtility, TrainingConfig
from geoproto.spectral.spectral import DiffusionConfig, SpectralUtility
from geoproto.spectral.utility.normalization import CoordinateNormalizationUtility
from geoproto.synth.synth import SyntheticDataUtility, SyntheticSet
from geoproto.synth.utility.metrics import EvaluationMetricsUtility

from helpers import fit_random_manifold


pytestmark = mark.slow


def _circles_fit_config(
        metric: str = "diffusion",
        normalization: str = "zca",
        epochs: int = 50
) -> FitConfig:
    """ Get the fit configuration of the prototype advantage experiments. """

    return FitConfig(
        graph=GraphConfig(
            k=20
        ),
        diffusion=DiffusionConfig(
            t=4,
            L=32,
            normalization=normalization
        ),
        landmarks=LandmarkConfig(
            selection="random",
            count=768,
            update_every=0
        ),
        prototypes=PrototypeConfig(
            m=1,
            metric=metric
        ),
        training=TrainingConfig(
            epochs=epochs
        )
    )


def _training_accuracy(
        feature_set: FeatureSet,
        config: FitConfig
) -> float:
    """ Fit a model and measure its accuracy on the training features. """

    pipeline = GeoProtoPipeline(
        config=config,
        number_of_threads=1
    )

    bundle, _ = pipeline.fit(
        feature_set=feature_set
    )

    explanations = pipeline.classify(
        bundle=bundle,
        queries=feature_set.features
    )

    return EvaluationMetricsUtility.accuracy(
        predicted=[explanation.predicted_class for explanation in explanations],
        labels=feature_set.labels
    )


@fixture(scope="module")
def advantage_circles(
) -> SyntheticSet:
    """ Get the concentric circles of the prototype advantage experiments. """

    return SyntheticDataUtility.gen_circles(
        n=600,
        radii=(1.0, 1.3, ),
        noise=0.05,
        seed=0
    )


@fixture(scope="module")
def advantage_accuracies(
        advantage_circles: SyntheticSet
) -> Dict[str, float]:
    """ Get the training accuracies of the diffusion and the Euclidean matching. """

    return {
        metric: _training_accuracy(advantage_circles.to_feature_set(), _circles_fit_config(metric=metric))
        for metric in ("diffusion", "euclidean", )
    }


@fixture(scope="module")
def swiss_roll_agreement(
) -> Dict[str, float]:
    """ Get the geodesic rank agreement of the diffusion and the Euclidean distances on a noisy swiss roll. """

    swiss_roll = SyntheticDataUtility.gen_swiss_roll(
        n=2000,
        noise=0.3,
        seed=0
    )

    manifold = NystromUtility.fit_class_manifold(
        features=swiss_roll.features,
        graph_config=GraphConfig(
            k=20
        ),
        diffusion_config=DiffusionConfig(
            t=4,
            L=32
        )
    )

    first, second = EvaluationMetricsUtility.sample_same_class_pairs(
        labels=swiss_roll.labels,
        count=20000,
        seed=0
    )

    return EvaluationMetricsUtility.geodesic_agreement(
        diffusion_distances=sqrt(((
            manifold.landmark_diffusion_coords[first] - manifold.landmark_diffusion_coords[second]
        ) ** 2).sum(axis=1)),
        euclidean_distances=sqrt(((swiss_roll.features[first] - swiss_roll.features[second]) ** 2).sum(axis=1)),
        geodesic_distances=swiss_roll.geodesic(first, second)
    )


def test_stochasticity_and_spectrum(
) -> None:
    """ Test the row sums, the leading eigenvalue and the eigen residuals of random graphs. """

    random_number_generator = default_rng(1)

    for _ in range(50):
        n = int(random_number_generator.integers(25, 201))
        dimension = int(random_number_generator.integers(1, 33))
        k = int(random_number_generator.integers(3, 21))

        graph = ClassGraphUtility.build_class_graph(
            features=random_number_generator.standard_normal(size=(n, dimension)),
            config=GraphConfig(
                k=k
            )
        )

        basis = SpectralUtility.fit_spectral_basis(
            graph=graph,
            L=16
        )

        assert ClassGraphUtility.transition_rows_check(graph) <= 1e-10
        assert absolute(basis.eigenvalues[0] - 1.0) <= 1e-8
        assert SpectralUtility.eigen_residuals(basis, graph).max() <= 1e-8


def test_diffusion_distance_identity(
) -> None:
    """ Test that the diffusion distance equals the Euclidean distance of the diffusion coordinates. """

    random_number_generator = default_rng(2)

    graph = ClassGraphUtility.build_class_graph(
        features=random_number_generator.standard_normal(size=(150, 5)),
        config=GraphConfig(
            k=8
        )
    )

    basis = SpectralUtility.fit_spectral_basis(
        graph=graph,
        L=10
    )

    config = DiffusionConfig(
        t=3,
        L=10,
        normalization="none"
    )

    coords = SpectralUtility.raw_diffusion_coords(basis, t=3, L=10)

    for i, j in random_number_generator.integers(0, 150, size=(1000, 2)):
        assert_allclose(
            SpectralUtility.diffusion_distance(basis, int(i), int(j), config),
            sqrt(((coords[i] - coords[j]) ** 2).sum()),
            rtol=1e-12,
            atol=1e-15
        )


def test_nystrom_in_sample_consistency(
) -> None:
    """ Test that the landmarks of random manifolds are extended to their in-sample coordinates. """

    random_number_generator = default_rng(3)

    for _ in range(20):
        manifold = fit_random_manifold(
            random_number_generator=random_number_generator,
            n=int(random_number_generator.integers(30, 120)),
            dimension=int(random_number_generator.integers(2, 10)),
            L=8,
            normalization="none"
        )

        assert_allclose(
            NystromUtility.extend_many(manifold, manifold.graph.node_features, mode="row").coords,
            manifold.landmark_coords,
            rtol=1e-8,
            atol=1e-12
        )


def test_jacobian_correctness(
) -> None:
    """ Test the analytic Jacobians against central finite differences on random manifolds and queries. """

    random_number_generator = default_rng(4)

    for _ in range(100):
        dimension = int(random_number_generator.integers(2, 6))

        manifold = fit_random_manifold(
            random_number_generator=random_number_generator,
            n=40,
            dimension=dimension,
            L=5
        )

        query = random_number_generator.standard_normal(size=dimension)
        bandwidth = NystromUtility.extend(manifold, query).bandwidth
        step = 1e-5 * (1.0 + float(sqrt((query ** 2).sum())))

        numeric_jacobian = zeros((5, dimension))

        for column in range(dimension):
            offset = zeros(dimension)
            offset[column] = step

            numeric_jacobian[:, column] = (
                NystromUtility.extend(manifold, query + offset, bandwidth=bandwidth).coords -
                NystromUtility.extend(manifold, query - offset, bandwidth=bandwidth).coords
            ) / (2.0 * step)

        analytic_jacobian = NystromUtility.extend_jacobian(manifold, query)

        assert sqrt(((analytic_jacobian - numeric_jacobian) ** 2).sum()) <= \
            1e-4 * max(float(sqrt((numeric_jacobian ** 2).sum())), 1e-12)


def test_end_to_end_loss_gradient(
) -> None:
    """ Test the loss gradient with respect to a prototype on a small two-class instance. """

    random_number_generator = default_rng(5)

    feature_set = FeatureSet.from_arrays(
        features=concatenate([
            random_number_generator.standard_normal(size=(20, 3)),
            random_number_generator.standard_normal(size=(20, 3)) + 2.0,
        ]),
        labels=concatenate([full(20, 1), full(20, 2)])
    )

    manifolds = {
        class_id: NystromUtility.fit_class_manifold(
            features=feature_set.class_features(class_id),
            graph_config=GraphConfig(
                k=5
            ),
            diffusion_config=DiffusionConfig(
                t=2,
                L=4
            ),
            class_id=class_id
        )
        for class_id in (1, 2, )
    }

    bank = PrototypeUtility.initialize_bank(
        pool=PrototypeUtility.candidate_pool_for(feature_set),
        config=PrototypeConfig(
            m=2
        )
    )

    query_embeddings = PrototypeUtility.embed_queries(feature_set.features, manifolds, bank)

    perturbed_bank = replace(bank, prototypes={
        class_id: class_prototypes + 0.1 * random_number_generator.standard_normal(size=class_prototypes.shape)
        for class_id, class_prototypes in bank.prototypes.items()
    })

    # The initial prototypes are candidate rows, so they sit exactly on landmarks.
    for prototype_bank in (perturbed_bank, bank, ):
        bandwidths = {
            class_id: asarray([NystromUtility.extend(manifolds[class_id], prototype).bandwidth
                               for prototype in prototype_bank.prototypes[class_id]])
            for class_id in prototype_bank.class_ids
        }

        def loss_at(
                prototype: ndarray
        ) -> float:
            return PrototypeTrainingUtility.loss_and_gradients(
                manifolds=manifolds,
                bank=replace(prototype_bank, prototypes={
                    **prototype_bank.prototypes,
                    1: concatenate([[prototype], prototype_bank.prototypes[1][1:]]),
                }),
                query_embeddings=query_embeddings,
                labels=feature_set.labels,
                bandwidths=bandwidths
            )[0]

        _, prototype_gradients, _ = PrototypeTrainingUtility.loss_and_gradients(
            manifolds=manifolds,
            bank=prototype_bank,
            query_embeddings=query_embeddings,
            labels=feature_set.labels,
            bandwidths=bandwidths
        )

        prototype = prototype_bank.prototypes[1][0]
        step = 1e-6

        numeric_gradient = asarray([
            (loss_at(prototype + step * direction) - loss_at(prototype - step * direction)) / (2.0 * step)
            for direction in eye(3)
        ])

        assert sqrt(((prototype_gradients[1][0] - numeric_gradient) ** 2).sum()) <= \
            1e-3 * float(sqrt((numeric_gradient ** 2).sum())) + 1e-8


def test_geodesic_fidelity_report(
        swiss_roll_agreement: Dict[str, float]
) -> None:
    """ Test that both distances agree positively with the geodesic distance on the swiss roll. """

    assert 0.0 < swiss_roll_agreement["spearman_euclidean"] <= 1.0
    assert 0.0 < swiss_roll_agreement["spearman_diffusion"] <= 1.0


def test_prototype_advantage_report(
        advantage_accuracies: Dict[str, float]
) -> None:
    """ Test that both matching metrics are measured end to end on the circles. """

    assert sorted(advantage_accuracies.keys()) == ["diffusion", "euclidean"]
    assert all(0.0 <= accuracy <= 1.0 for accuracy in advantage_accuracies.values())


@mark.parametrize(
    argnames="normalization",
    argvalues=["none", "energy", "zca", ]
)
def test_normalization_ablation(
        advantage_circles: SyntheticSet,
        normalization: str
) -> None:
    """ Test the normalization properties and that every normalization runs end to end. """

    coords = default_rng(6).standard_normal(size=(400, 6)) * [1.0, 3.0, 0.1, 2.0, 0.5, 1.0]

    normalized_coords, _ = CoordinateNormalizationUtility.normalize_coords(coords, mode=normalization)

    if normalization == "zca":
        centered_coords = normalized_coords - normalized_coords.mean(axis=0)

        assert absolute(centered_coords.T @ centered_coords / 400.0 - eye(6)).max() <= 1e-4

    if normalization == "energy":
        assert_allclose((normalized_coords ** 2).sum(axis=0), 1.0, atol=1e-10)

    accuracy = _training_accuracy(
        advantage_circles.to_feature_set(),
        _circles_fit_config(normalization=normalization, epochs=5)
    )

    assert 0.0 <= accuracy <= 1.0


def test_latency(
) -> None:
    """ Test the median per-query latency of a two-class model with 768 landmarks per class. """

    random_number_generator = default_rng(7)

    feature_set = FeatureSet.from_arrays(
        features=concatenate([
            random_number_generator.standard_normal(size=(768, 512)),
            random_number_generator.standard_normal(size=(768, 512)) + 0.5,
        ]),
        labels=concatenate([full(768, 1), full(768, 2)])
    )

    pipeline = GeoProtoPipeline(
        config=FitConfig(
            graph=GraphConfig(
                k=20
            ),
            diffusion=DiffusionConfig(
                t=4,
                L=32
            ),
            landmarks=LandmarkConfig(
                selection="random",
                count=768,
                update_every=0
            )
        )
    )

    bundle, _ = pipeline.fit(
        feature_set=feature_set
    )

    report = pipeline.benchmark(
        bundle=bundle,
        query_set=FeatureSet.from_arrays(
            features=feature_set.features[::16],
            labels=feature_set.labels[::16]
        )
    )

    assert report["latency_ms_median"] <= 50.0


def test_determinism_and_persistence(
        tmp_path: Path,
        advantage_circles: SyntheticSet
) -> None:
    """ Test that models are bit-identical across thread counts and survive a save and load round trip. """

    config = _circles_fit_config(epochs=3)

    bundles = [
        GeoProtoPipeline(
            config=config,
            number_of_threads=number_of_threads
        ).fit(
            feature_set=advantage_circles.to_feature_set()
        )[0]
        for number_of_threads in (1, 4, )
    ]

    data = ModelSerializationUtility.to_bytes(bundles[0])

    assert data == ModelSerializationUtility.to_bytes(bundles[1])

    ModelSerializationUtility.save_model(bundles[0], tmp_path / "model.gpro")

    assert ModelSerializationUtility.to_bytes(ModelSerializationUtility.load_model(tmp_path / "model.gpro")) == data


@mark.parametrize(
    argnames="selection, pool, update_every",
    argvalues=[
        (selection, pool, update_every, )
        for selection in ("random", "kmeans", )
        for pool in ("per_class", "global", )
        for update_every in (0, 20, )
    ]
)
def test_landmark_policies(
        advantage_circles: SyntheticSet,
        selection: str,
        pool: str,
        update_every: int
) -> None:
    """ Test that every landmark policy completes a training run without invariant violations. """

    bundle, report = GeoProtoPipeline(
        config=FitConfig(
            graph=GraphConfig(
                k=10
            ),
            diffusion=DiffusionConfig(
                t=2,
                L=8
            ),
            landmarks=LandmarkConfig(
                selection=selection,
                pool=pool,
                count=100 if pool == "per_class" else 200,
                update_every=update_every
            ),
            prototypes=PrototypeConfig(
                m=2
            ),
            training=TrainingConfig(
                epochs=40
            )
        ),
        number_of_threads=2
    ).fit(
        feature_set=advantage_circles.to_feature_set()
    )

    assert len(report["loss_trace"]) == 40
    assert isfinite(report["loss_trace"]).all()

    for manifold in bundle.manifolds.values():
        assert ClassGraphUtility.transition_rows_check(manifold.graph) <= 1e-10

    if pool == "per_class":
        assert all(manifold.number_of_landmarks == 100 for manifold in bundle.manifolds.values())


def test_kmeans_objective_trace(
        advantage_circles: SyntheticSet
) -> None:
    """ Test that the k-means landmark objective never increases. """

    landmark_set = LandmarkUtility.select_landmarks(
        feature_set=advantage_circles.to_feature_set(),
        config=LandmarkConfig(
            count=100
        )
    )

    assert sorted(landmark_set.wcss_traces.keys()) == [1, 2]

    for wcss_trace in landmark_set.wcss_traces.values():
        assert all(current <= previous * (1.0 + 1e-12) for previous, current in zip(wcss_trace, wcss_trace[1:]))
