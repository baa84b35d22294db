""" The ``geoproto.synth`` package ``synth`` module. """

from dataclasses import dataclass
from os import PathLike
from pathlib import Path
from typing import Sequence, Tuple, Union

from numpy import (
    abs as absolute,
    arcsinh,
    asarray,
    column_stack,
    concatenate,
    cos,
    float64,
    full,
    int64,
    minimum,
    ndarray,
    pi,
    sin,
    sqrt,
)

from numpy.random import default_rng

from pandas import DataFrame, read_csv
from pandas.errors import EmptyDataError, ParserError

from geoproto.base.exception import ConfigurationError, MalformedFileError
from geoproto.features.features import FeatureSet


@dataclass(frozen=True, eq=False)
class SyntheticSet:
    """
    The synthetic manifold sample class.

    The intrinsic coordinates are `(s, h)` for the swiss roll and `(radius, theta)` for the circles.
    """

    features: ndarray
    labels: ndarray
    intrinsic: ndarray
    generator: str
    seed: int

    @property
    def intrinsic_names(
            self
    ) -> Tuple[str, str]:
        """
        Get the names of the intrinsic coordinates.

        :returns: The names of the intrinsic coordinates.
        """

        return SyntheticDataUtility.INTRINSIC_NAMES[self.generator]

    def to_feature_set(
            self
    ) -> FeatureSet:
        """
        Convert the synthetic set to a feature set.

        :returns: The feature set.
        """

        return FeatureSet.from_arrays(
            features=self.features,
            labels=self.labels
        )

    def geodesic(
            self,
            i: ndarray,
            j: ndarray
    ) -> ndarray:
        """
        Compute the exact geodesic distances between same-class samples.

        :parameter i: The first sample indices.
        :parameter j: The second sample indices.

        :returns: The geodesic distances.
        """

        i, j = asarray(i), asarray(j)

        if (self.labels[i] != self.labels[j]).any():
            raise ConfigurationError(
                "The geodesic distance is only defined between samples of the same class."
            )

        return SyntheticDataUtility.geodesic_from_intrinsic(
            generator=self.generator,
            first=self.intrinsic[i],
            second=self.intrinsic[j]
        )


class SyntheticDataUtility:
    """ The synthetic manifold generator utility class. """

    INTRINSIC_NAMES = {
        "swiss_roll": ("s", "h", ),
        "circles": ("radius", "theta", ),
    }

    SWISS_ROLL_TURNS = (1.5 * pi, 4.5 * pi, )
    SWISS_ROLL_HEIGHT = 21.0

    @staticmethod
    def arclength(
            s: ndarray
    ) -> ndarray:
        """
        Compute the arc length of the spiral `(s cos s, s sin s)` from the origin.

        :parameter s: The spiral parameters.

        :returns: The arc lengths.
        """

        s = asarray(s, dtype=float64)

        return (s * sqrt(1.0 + s ** 2) + arcsinh(s)) / 2.0

    @staticmethod
    def gen_swiss_roll(
            n: int,
            noise: float = 0.0,
            seed: int = 0
    ) -> SyntheticSet:
        """
        Sample a single-class swiss roll `(s cos s, h, s sin s)` with isotropic Gaussian noise.

        :parameter n: The number of samples, at least 10.
        :parameter noise: The standard deviation of the noise.
        :parameter seed: The seed of the sampling.

        :returns: The synthetic set.
        """

        if n < 10 or noise < 0.0:
            raise ConfigurationError(
                "The swiss roll needs n >= 10 and noise >= 0."
            )

        random_number_generator = default_rng(seed)

        s = random_number_generator.uniform(*SyntheticDataUtility.SWISS_ROLL_TURNS, size=n)
        h = random_number_generator.uniform(0.0, SyntheticDataUtility.SWISS_ROLL_HEIGHT, size=n)

        features = column_stack([s * cos(s), h, s * sin(s)]) + \
            noise * random_number_generator.standard_normal(size=(n, 3))

        return SyntheticSet(
            features=features,
            labels=full(n, 1, dtype=int64),
            intrinsic=column_stack([s, h]),
            generator="swiss_roll",
            seed=seed
        )

    @staticmethod
    def gen_circles(
            n: int,
            radii: Sequence[float] = (1.0, 1.3, ),
            noise: float = 0.0,
            seed: int = 0
    ) -> SyntheticSet:
        """
        Sample two concentric circles, class 1 on the inner radius and class 2 on the outer radius.

        :parameter n: The even number of samples, half per class.
        :parameter radii: The inner and the outer radius.
        :parameter noise: The standard deviation of the isotropic Gaussian noise.
        :parameter seed: The seed of the sampling.

        :returns: The synthetic set.
        """

        inner_radius, outer_radius = [float(radius) for radius in radii]

        if n < 2 or n % 2 != 0 or not 0.0 < inner_radius < outer_radius or noise < 0.0:
            raise ConfigurationError(
                "The circles need an even n, 0 < r1 < r2 and noise >= 0."
            )

        random_number_generator = default_rng(seed)

        theta = random_number_generator.uniform(0.0, 2.0 * pi, size=n)
        radius = concatenate([full(n // 2, inner_radius), full(n // 2, outer_radius)])

        features = column_stack([radius * cos(theta), radius * sin(theta)]) + \
            noise * random_number_generator.standard_normal(size=(n, 2))

        return SyntheticSet(
            features=features,
            labels=concatenate([full(n // 2, 1, dtype=int64), full(n // 2, 2, dtype=int64)]),
            intrinsic=column_stack([radius, theta]),
            generator="circles",
            seed=seed
        )

    @staticmethod
    def geodesic_from_intrinsic(
            generator: str,
            first: ndarray,
            second: ndarray
    ) -> ndarray:
        """
        Compute the geodesic distances between intrinsic coordinates of the same class.

        :parameter generator: The generator, `swiss_roll` or `circles`.
        :parameter first: The first k x 2 intrinsic coordinates.
        :parameter second: The second k x 2 intrinsic coordinates.

        :returns: The k geodesic distances.
        """

        first, second = asarray(first, dtype=float64).reshape(-1, 2), asarray(second, dtype=float64).reshape(-1, 2)

        if generator == "swiss_roll":
            return sqrt(
                (SyntheticDataUtility.arclength(first[:, 0]) - SyntheticDataUtility.arclength(second[:, 0])) ** 2 +
                (first[:, 1] - second[:, 1]) ** 2
            )

        if generator == "circles":
            angle_differences = absolute(first[:, 1] - second[:, 1]) % (2.0 * pi)

            return first[:, 0] * minimum(angle_differences, 2.0 * pi - angle_differences)

        raise ConfigurationError(
            "The generator '{generator}' is not supported.".format(
                generator=generator
            )
        )

    @staticmethod
    def save_intrinsic(
            synthetic_set: SyntheticSet,
            file_path: Union[str, PathLike[str]]
    ) -> None:
        """
        Save the intrinsic coordinates to a CSV file.

        :parameter synthetic_set: The synthetic set.
        :parameter file_path: The path to the CSV file.
        """

        DataFrame(
            data=synthetic_set.intrinsic,
            columns=list(synthetic_set.intrinsic_names)
        ).to_csv(
            path_or_buf=file_path,
            index=False,
            encoding="utf-8",
            lineterminator="\n"
        )

    @staticmethod
    def load_intrinsic(
            file_path: Union[str, PathLike[str]]
    ) -> Tuple[str, ndarray]:
        """
        Load intrinsic coordinates from a CSV file, detecting the generator from the header.

        :parameter file_path: The path to the CSV file.

        :returns: The generator and the n x 2 intrinsic coordinates.
        """

        try:
            dataframe = read_csv(
                filepath_or_buffer=file_path,
                float_precision="round_trip",
                encoding="utf-8"
            )

        except (EmptyDataError, ParserError) as exception_handle:
            raise MalformedFileError(
                "The intrinsic coordinate file '{file_path:s}' is malformed.".format(
                    file_path=Path(file_path).as_posix()
                )
            ) from exception_handle

        for generator, names in SyntheticDataUtility.INTRINSIC_NAMES.items():
            if tuple(dataframe.columns) == names:
                return generator, dataframe.to_numpy(dtype=float64)

        raise MalformedFileError(
            "The intrinsic coordinate file '{file_path:s}' must have the header 's,h' or 'radius,theta'.".format(
                file_path=Path(file_path).as_posix()
            )
        )

    @staticmethod
    def intrinsic_path_for(
            feature_file_path: Union[str, PathLike[str]]
    ) -> Path:
        """
        Get the path of the intrinsic coordinate sidecar of a feature file.

        :parameter feature_file_path: The path to the feature file.

        :returns: The path to `<stem>.intrinsic.csv` next to the feature file.
        """

        feature_file_path = Path(feature_file_path)

        return feature_file_path.with_name("{stem:s}.intrinsic.csv".format(
            stem=feature_file_path.stem
        ))
