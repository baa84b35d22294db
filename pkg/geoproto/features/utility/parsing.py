""" The ``geoproto.features.utility`` package ``parsing`` module. """

from os import PathLike
from pathlib import Path
from typing import Optional, Union

from numpy import asarray, float64, fromfile, int64, ndarray

from pandas import DataFrame, read_csv
from pandas.errors import EmptyDataError, ParserError

from yaml import YAMLError, safe_load

from geoproto.base.exception import MalformedFileError
from geoproto.features.features import FeatureSet


class FeatureSetParsingUtility:
    """ The feature set parsing utility class. """

    SUPPORTED_FORMATS = ("csv", "raw-f32", )

    @staticmethod
    def infer_format(
            file_path: Union[str, PathLike[str]]
    ) -> str:
        """
        Infer the format of a feature file from its suffix.

        :parameter file_path: The path to the feature file.

        :returns: The format of the feature file.
        """

        if Path(file_path).suffix.lower() in (".f32", ".meta", ):
            return "raw-f32"

        return "csv"

    @staticmethod
    def load_feature_set(
            file_path: Union[str, PathLike[str]],
            file_format: Optional[str] = None
    ) -> FeatureSet:
        """
        Load a feature set from a file.

        :parameter file_path: The path to the feature file. For the `raw-f32` format, either the `.f32` file or its
            `.meta` sidecar.
        :parameter file_format: The format of the feature file. The value `None` indicates that the format should be
            inferred from the file suffix.

        :returns: The feature set with the row order of the file.
        """

        if file_format is None:
            file_format = FeatureSetParsingUtility.infer_format(
                file_path=file_path
            )

        if file_format == "csv":
            return FeatureSetParsingUtility._load_csv(
                file_path=Path(file_path)
            )

        if file_format == "raw-f32":
            return FeatureSetParsingUtility._load_raw_f32(
                file_path=Path(file_path)
            )

        raise MalformedFileError(
            "The feature file format '{file_format:s}' is not supported.".format(
                file_format=file_format
            )
        )

    @staticmethod
    def _parse_float_matrix(
            values: ndarray
    ) -> ndarray:
        """
        Parse a matrix of decimal strings into finite floats.

        :parameter values: The matrix of decimal strings.

        :returns: The matrix of floats.
        """

        try:
            features = asarray(values, dtype=str).astype(float64)

        except ValueError as exception_handle:
            raise MalformedFileError(
                "The feature values could not be parsed as decimal floats: {reason}".format(
                    reason=exception_handle
                )
            ) from exception_handle

        return features

    @staticmethod
    def _load_csv(
            file_path: Path
    ) -> FeatureSet:
        """
        Load a feature set from a CSV file with the `label,f0,...,f{D-1}` header.

        :parameter file_path: The path to the CSV file.

        :returns: The feature set.
        """

        try:
            dataframe = read_csv(
                filepath_or_buffer=file_path,
                header=None,
                dtype=str,
                keep_default_na=False,
                na_filter=True,
                skip_blank_lines=True,
                encoding="utf-8"
            )

        except (EmptyDataError, ParserError, UnicodeDecodeError) as exception_handle:
            raise MalformedFileError(
                "The feature file '{file_path:s}' is malformed: {reason}".format(
                    file_path=file_path.as_posix(),
                    reason=exception_handle
                )
            ) from exception_handle

        header = [str(value).strip() for value in dataframe.iloc[0].tolist()]

        expected_header = ["label", ] + [
            "f{index:d}".format(
                index=index
            )
            for index in range(len(header) - 1)
        ]

        if len(header) < 2 or header != expected_header:
            raise MalformedFileError(
                "The feature file '{file_path:s}' must start with the header 'label,f0,f1,...'.".format(
                    file_path=file_path.as_posix()
                )
            )

        body = dataframe.iloc[1:]

        if body.shape[0] == 0:
            raise MalformedFileError(
                "The feature file '{file_path:s}' does not contain any data rows.".format(
                    file_path=file_path.as_posix()
                )
            )

        if body.isna().to_numpy().any() or (body.to_numpy() == "").any():
            raise MalformedFileError(
                "The feature file '{file_path:s}' contains ragged rows.".format(
                    file_path=file_path.as_posix()
                )
            )

        try:
            labels = body.iloc[:, 0].to_numpy(dtype=str).astype(int64)

        except ValueError as exception_handle:
            raise MalformedFileError(
                "The labels in the feature file '{file_path:s}' must be 1-based integers.".format(
                    file_path=file_path.as_posix()
                )
            ) from exception_handle

        features = FeatureSetParsingUtility._parse_float_matrix(
            values=body.iloc[:, 1:].to_numpy(dtype=str)
        )

        return FeatureSetParsingUtility._build_feature_set(
            features=features,
            labels=labels
        )

    @staticmethod
    def _load_raw_f32(
            file_path: Path
    ) -> FeatureSet:
        """
        Load a feature set from a little-endian row-major `.f32` file and its `.meta` sidecar.

        :parameter file_path: The path to the `.f32` file or its `.meta` sidecar.

        :returns: The feature set.
        """

        data_file_path = file_path.with_suffix(".f32")
        meta_file_path = file_path.with_suffix(".meta")

        try:
            with meta_file_path.open(
                mode="r",
                encoding="utf-8"
            ) as meta_file_handle:
                descriptor = safe_load(meta_file_handle)

        except YAMLError as exception_handle:
            raise MalformedFileError(
                "The sidecar descriptor '{file_path:s}' is malformed.".format(
                    file_path=meta_file_path.as_posix()
                )
            ) from exception_handle

        if not isinstance(descriptor, dict) or set(descriptor.keys()) != {"n", "d", "labels_path", }:
            raise MalformedFileError(
                "The sidecar descriptor '{file_path:s}' must define exactly the keys n, d and labels_path.".format(
                    file_path=meta_file_path.as_posix()
                )
            )

        number_of_samples, dimension = descriptor["n"], descriptor["d"]

        if not all(isinstance(value, int) and not isinstance(value, bool) and value >= 1 for value in (
            number_of_samples,
            dimension,
        )):
            raise MalformedFileError(
                "The sidecar descriptor '{file_path:s}' must define positive integers n and d.".format(
                    file_path=meta_file_path.as_posix()
                )
            )

        values = fromfile(
            file=data_file_path,
            dtype="<f4"
        )

        if values.size != number_of_samples * dimension:
            raise MalformedFileError(
                "The raw feature file '{file_path:s}' holds {size:d} values, expected n x d = {expected:d}.".format(
                    file_path=data_file_path.as_posix(),
                    size=values.size,
                    expected=number_of_samples * dimension
                )
            )

        labels_file_path = meta_file_path.parent / str(descriptor["labels_path"])

        try:
            labels_dataframe = read_csv(
                filepath_or_buffer=labels_file_path,
                header=None,
                dtype=str,
                keep_default_na=False
            )

            labels = labels_dataframe.iloc[:, 0].to_numpy(dtype=str).astype(int64)

        except (EmptyDataError, ParserError, ValueError) as exception_handle:
            raise MalformedFileError(
                "The label file '{file_path:s}' must hold one 1-based integer label per line.".format(
                    file_path=labels_file_path.as_posix()
                )
            ) from exception_handle

        if labels_dataframe.shape[1] != 1 or labels.size != number_of_samples:
            raise MalformedFileError(
                "The label file '{file_path:s}' must hold exactly n = {n:d} labels.".format(
                    file_path=labels_file_path.as_posix(),
                    n=number_of_samples
                )
            )

        return FeatureSetParsingUtility._build_feature_set(
            features=values.reshape(number_of_samples, dimension).astype(float64),
            labels=labels
        )

    @staticmethod
    def _build_feature_set(
            features: ndarray,
            labels: ndarray
    ) -> FeatureSet:
        """
        Build a feature set from parsed arrays.

        :parameter features: The N x D feature matrix.
        :parameter labels: The N 1-based class labels.

        :returns: The feature set.
        """

        if labels.min() < 1:
            raise MalformedFileError(
                "The class labels must be 1-based positive integers."
            )

        return FeatureSet.from_arrays(
            features=features,
            labels=labels
        )

    @staticmethod
    def save_feature_set(
            feature_set: FeatureSet,
            file_path: Union[str, PathLike[str]]
    ) -> None:
        """
        Save a feature set to a CSV file with the `label,f0,...,f{D-1}` header.

        :parameter feature_set: The feature set.
        :parameter file_path: The path to the CSV file.
        """

        dataframe = DataFrame(
            data=feature_set.features,
            columns=[
                "f{index:d}".format(
                    index=index
                )
                for index in range(feature_set.dimension)
            ]
        )

        dataframe.insert(
            loc=0,
            column="label",
            value=feature_set.labels
        )

        dataframe.to_csv(
            path_or_buf=file_path,
            index=False,
            encoding="utf-8",
            lineterminator="\n"
        )
