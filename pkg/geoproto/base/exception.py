""" The ``geoproto.base`` package ``exception`` module. """

from typing import List, Optional


class GeoProtoError(Exception):
    """ The base class of the user and data errors. """


class InternalInvariantError(Exception):
    """ The internal invariant violation error class. """


class ConfigurationError(GeoProtoError, ValueError):
    """ The invalid configuration error class. """


class MalformedFileError(GeoProtoError, ValueError):
    """ The malformed input file error class. """


class NonFiniteValueError(GeoProtoError, ValueError):
    """ The non-finite feature value error class. """

    def __init__(
            self,
            message: str,
            row: Optional[int] = None,
            column: Optional[int] = None
    ) -> None:
        """
        The constructor method of the class.

        :parameter message: The message of the exception.
        :parameter row: The zero-based data row of the offending value.
        :parameter column: The zero-based feature column of the offending value.
        """

        super().__init__(message)

        self.row = row
        self.column = column


class EmptyClassError(GeoProtoError, ValueError):
    """ The class without samples error class. """


class VersionMismatchError(GeoProtoError):
    """ The unsupported model file magic or version error class. """


class ChecksumFailureError(GeoProtoError):
    """ The model file checksum mismatch error class. """


class TooFewSamplesError(GeoProtoError, ValueError):
    """ The too few graph nodes error class. """


class KTooLargeError(GeoProtoError, ValueError):
    """ The neighbor count larger than the number of other nodes error class. """


class DegenerateScaleError(ConfigurationError):
    """ The non-positive minimum bandwidth error class. """


class NoConvergenceError(GeoProtoError):
    """ The iterative eigensolver failure error class. """


class CountTooSmallError(GeoProtoError, ValueError):
    """ The landmark count too small for the graph error class. """


class NonFiniteLossError(GeoProtoError):
    """ The non-finite training loss error class. """

    def __init__(
            self,
            message: str,
            loss_trace: Optional[List[float]] = None
    ) -> None:
        """
        The constructor method of the class.

        :parameter message: The message of the exception.
        :parameter loss_trace: The per-epoch losses recorded before the failure.
        """

        super().__init__(message)

        self.loss_trace = list(loss_trace) if loss_trace is not None else list()


class ConstantInputError(GeoProtoError, ValueError):
    """ The constant rank correlation input error class. """


class DimensionMismatchError(GeoProtoError, ValueError):
    """ The feature dimension mismatch error class. """
