""" The ``geoproto.features`` package ``features`` module. """

from dataclasses import dataclass
from typing import Dict, List

from numpy import array, asarray, bincount, float64, flatnonzero, int64, isfinite, ndarray, unique

from geoproto.base.exception import EmptyClassError, MalformedFileError, NonFiniteValueError


@dataclass(frozen=True, eq=False)
class FeatureSet:
    """ The labeled feature matrix class. Class identifiers are 1-based. """

    features: ndarray
    labels: ndarray
    class_count: int

    def __post_init__(
            self
    ) -> None:
        """ Validate the feature set invariants. """

        features = array(self.features, dtype=float64)
        labels = array(self.labels, dtype=int64)

        if features.ndim != 2 or features.shape[0] < 1 or features.shape[1] < 1:
            raise MalformedFileError(
                "The feature matrix must have at least one row and one column, got the shape {shape}.".format(
                    shape=features.shape
                )
            )

        if labels.ndim != 1 or labels.shape[0] != features.shape[0]:
            raise MalformedFileError(
                "The number of labels ({labels:d}) does not match the number of feature rows ({rows:d}).".format(
                    labels=labels.size,
                    rows=features.shape[0]
                )
            )

        finite_mask = isfinite(features)

        if not finite_mask.all():
            row, column = [int(value) for value in divmod(int(flatnonzero(~finite_mask.ravel())[0]), features.shape[1])]

            raise NonFiniteValueError(
                "The feature value at row {row:d}, column {column:d} is not finite.".format(
                    row=row,
                    column=column
                ),
                row=row,
                column=column
            )

        if labels.min() < 1 or labels.max() > self.class_count:
            raise MalformedFileError(
                "The class labels must lie in {{1, ..., {class_count:d}}}.".format(
                    class_count=self.class_count
                )
            )

        empty_class_ids = flatnonzero(bincount(labels, minlength=self.class_count + 1)[1:] == 0) + 1

        if empty_class_ids.size > 0:
            raise EmptyClassError(
                "The class {class_id:d} does not have any samples.".format(
                    class_id=int(empty_class_ids[0])
                )
            )

        features.setflags(write=False)
        labels.setflags(write=False)

        object.__setattr__(self, "features", features)
        object.__setattr__(self, "labels", labels)

    @classmethod
    def from_arrays(
            cls,
            features: ndarray,
            labels: ndarray
    ) -> "FeatureSet":
        """
        Create a feature set with the class count inferred as the largest label.

        :parameter features: The N x D feature matrix.
        :parameter labels: The N 1-based class labels.

        :returns: The feature set.
        """

        labels = asarray(labels, dtype=int64)

        return cls(
            features=features,
            labels=labels,
            class_count=int(labels.max()) if labels.size > 0 else 0
        )

    @property
    def number_of_samples(
            self
    ) -> int:
        """
        Get the number of samples.

        :returns: The number of samples.
        """

        return int(self.features.shape[0])

    @property
    def dimension(
            self
    ) -> int:
        """
        Get the feature dimension.

        :returns: The feature dimension.
        """

        return int(self.features.shape[1])

    @property
    def class_ids(
            self
    ) -> List[int]:
        """
        Get the class identifiers in ascending order.

        :returns: The class identifiers.
        """

        return [int(class_id) for class_id in unique(self.labels)]

    def class_indices(
            self,
            class_id: int
    ) -> ndarray:
        """
        Get the row indices of a class in file order.

        :parameter class_id: The class identifier.

        :returns: The row indices.
        """

        return flatnonzero(self.labels == class_id)

    def class_features(
            self,
            class_id: int
    ) -> ndarray:
        """
        Get the feature rows of a class in file order.

        :parameter class_id: The class identifier.

        :returns: The feature rows.
        """

        return self.features[self.class_indices(class_id)]

    def split_by_class(
            self
    ) -> Dict[int, ndarray]:
        """
        Split the feature rows by class.

        :returns: The feature rows of every class.
        """

        return {
            class_id: self.class_features(class_id)
            for class_id in self.class_ids
        }
