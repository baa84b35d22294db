""" The ``geoproto.synth.utility`` package ``metrics`` module. """

from typing import Dict, Tuple

from numpy import asarray, bool_, float64, floor, minimum, ndarray, ptp, unique

from numpy.random import default_rng

from scipy.special import softmax
from scipy.stats import spearmanr

from geoproto.base.exception import ConfigurationError, ConstantInputError


class EvaluationMetricsUtility:
    """ The evaluation metrics utility class. """

    @staticmethod
    def spearman(
            a: ndarray,
            b: ndarray
    ) -> float:
        """
        Compute the Spearman rank correlation with average ranks for ties.

        :parameter a: The first n values.
        :parameter b: The second n values.

        :returns: The rank correlation.
        """

        a, b = asarray(a, dtype=float64).ravel(), asarray(b, dtype=float64).ravel()

        if a.size != b.size or a.size < 2:
            raise ConfigurationError(
                "The rank correlation needs two vectors of the same length of at least 2."
            )

        if ptp(a) == 0.0 or ptp(b) == 0.0:
            raise ConstantInputError(
                "The rank correlation of a constant vector is undefined."
            )

        return float(spearmanr(a, b)[0])

    @staticmethod
    def ece(
            confidences: ndarray,
            correct: ndarray,
            bins: int = 15
    ) -> float:
        """
        Compute the expected calibration error over equal-width confidence bins. Empty bins are skipped.

        :parameter confidences: The n confidences in [0, 1].
        :parameter correct: The n correctness flags.
        :parameter bins: The number of bins.

        :returns: The expected calibration error.
        """

        confidences = asarray(confidences, dtype=float64).ravel()
        correct = asarray(correct, dtype=bool_).ravel().astype(float64)

        if bins < 1:
            raise ConfigurationError(
                "The number of bins must be positive."
            )

        if confidences.size != correct.size or confidences.size == 0:
            raise ConfigurationError(
                "The confidences and the correctness flags must be non-empty and of the same length."
            )

        if confidences.min() < 0.0 or confidences.max() > 1.0:
            raise ConfigurationError(
                "The confidences must lie in [0, 1]."
            )

        bin_indices = minimum(floor(confidences * bins).astype(int), bins - 1)

        calibration_error = 0.0

        for bin_index in range(bins):
            in_bin = bin_indices == bin_index

            if in_bin.any():
                calibration_error += in_bin.mean() * abs(float(correct[in_bin].mean() - confidences[in_bin].mean()))

        return float(calibration_error)

    @staticmethod
    def accuracy(
            predicted: ndarray,
            labels: ndarray
    ) -> float:
        """
        Compute the fraction of correct predictions.

        :parameter predicted: The n predicted class labels.
        :parameter labels: The n true class labels.

        :returns: The accuracy.
        """

        predicted, labels = asarray(predicted).ravel(), asarray(labels).ravel()

        if predicted.size != labels.size or predicted.size == 0:
            raise ConfigurationError(
                "The predictions and the labels must be non-empty and of the same length."
            )

        return float((predicted == labels).mean())

    @staticmethod
    def softmax_confidences(
            scores: ndarray
    ) -> ndarray:
        """
        Compute the confidence of every prediction as the largest class probability of a temperature 1 softmax.

        :parameter scores: The q x C class scores.

        :returns: The q confidences.
        """

        return softmax(asarray(scores, dtype=float64), axis=1).max(axis=1)

    @staticmethod
    def sample_same_class_pairs(
            labels: ndarray,
            count: int,
            seed: int = 0
    ) -> Tuple[ndarray, ndarray]:
        """
        Sample random pairs of distinct samples of the same class.

        :parameter labels: The n class labels.
        :parameter count: The number of pairs.
        :parameter seed: The seed of the sampling.

        :returns: The first and the second sample indices of every pair.
        """

        labels = asarray(labels).ravel()

        if unique(labels, return_counts=True)[1].max(initial=0) < 2:
            raise ConfigurationError(
                "No class holds two samples to pair."
            )

        random_number_generator = default_rng(seed)

        first_indices, second_indices = list(), list()

        while len(first_indices) < count:
            first = random_number_generator.integers(0, labels.size, size=count)
            second = random_number_generator.integers(0, labels.size, size=count)

            valid = (first != second) & (labels[first] == labels[second])

            first_indices.extend(first[valid].tolist())
            second_indices.extend(second[valid].tolist())

        return asarray(first_indices[:count]), asarray(second_indices[:count])

    @staticmethod
    def geodesic_agreement(
            diffusion_distances: ndarray,
            euclidean_distances: ndarray,
            geodesic_distances: ndarray
    ) -> Dict[str, float]:
        """
        Compare the rank agreement of diffusion and Euclidean distances with the geodesic distances.

        :parameter diffusion_distances: The diffusion distances of the pairs.
        :parameter euclidean_distances: The Euclidean distances of the pairs.
        :parameter geodesic_distances: The geodesic distances of the pairs.

        :returns: The rank correlations of both distances with the geodesic distances and their difference.
        """

        spearman_diffusion = EvaluationMetricsUtility.spearman(
            a=diffusion_distances,
            b=geodesic_distances
        )

        spearman_euclidean = EvaluationMetricsUtility.spearman(
            a=euclidean_distances,
            b=geodesic_distances
        )

        return {
            "spearman_diffusion": spearman_diffusion,
            "spearman_euclidean": spearman_euclidean,
            "spearman_gain": spearman_diffusion - spearman_euclidean,
        }
