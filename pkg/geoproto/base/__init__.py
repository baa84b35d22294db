""" The ``geoproto.base`` package initialization module. """

from geoproto.base.base import BaseGeoProtoComponent

from geoproto.base.exception import (
    ChecksumFailureError,
    ConfigurationError,
    ConstantInputError,
    CountTooSmallError,
    DegenerateScaleError,
    DimensionMismatchError,
    EmptyClassError,
    GeoProtoError,
    InternalInvariantError,
    KTooLargeError,
    MalformedFileError,
    NoConvergenceError,
    NonFiniteLossError,
    NonFiniteValueError,
    TooFewSamplesError,
    VersionMismatchError,
)
