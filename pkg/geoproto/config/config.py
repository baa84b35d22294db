""" The ``geoproto.config`` package ``config`` module. """

from dataclasses import asdict, dataclass, field, fields
from os import PathLike
from pathlib import Path
from typing import Any, Dict, Mapping, Type, TypeVar, Union

from yaml import YAMLError, safe_load

from geoproto.base.exception import ConfigurationError
from geoproto.graph.graph import GraphConfig
from geoproto.landmarks.landmarks import LandmarkConfig
from geoproto.nystrom.nystrom import NystromUtility
from geoproto.proto.proto import PrototypeConfig
from geoproto.proto.utility.training import TrainingConfig
from geoproto.spectral.spectral import DiffusionConfig


SectionType = TypeVar("SectionType")


@dataclass(frozen=True)
class FitConfig:
    """ The fit configuration class. """

    graph: GraphConfig = field(default_factory=GraphConfig)
    diffusion: DiffusionConfig = field(default_factory=DiffusionConfig)
    landmarks: LandmarkConfig = field(default_factory=LandmarkConfig)
    nystrom_mode: str = "row"
    prototypes: PrototypeConfig = field(default_factory=PrototypeConfig)
    training: TrainingConfig = field(default_factory=TrainingConfig)
    seed: int = 0

    SECTIONS = {
        "graph": GraphConfig,
        "diffusion": DiffusionConfig,
        "landmarks": LandmarkConfig,
        "prototypes": PrototypeConfig,
        "training": TrainingConfig,
    }

    def __post_init__(
            self
    ) -> None:
        """ Validate the configuration. """

        if self.nystrom_mode not in NystromUtility.SUPPORTED_MODES:
            raise ConfigurationError(
                "nystrom_mode must be one of {modes}, got '{nystrom_mode}'.".format(
                    modes=", ".join(NystromUtility.SUPPORTED_MODES),
                    nystrom_mode=self.nystrom_mode
                )
            )

        if isinstance(self.seed, bool) or not isinstance(self.seed, int):
            raise ConfigurationError(
                "seed must be an integer."
            )

    @staticmethod
    def _coerce_value(
            name: str,
            value: Any,
            field_type: Any
    ) -> Any:
        """
        Coerce a configuration value to the type of its field.

        :parameter name: The name of the field.
        :parameter value: The value.
        :parameter field_type: The type of the field.

        :returns: The coerced value. Values of other types are returned unchanged for the section validation.
        """

        if field_type in (float, "float", ) and not isinstance(value, bool):
            try:
                return float(value)

            except (TypeError, ValueError) as exception_handle:
                raise ConfigurationError(
                    "{name:s} must be a number.".format(
                        name=name
                    )
                ) from exception_handle

        return value

    @staticmethod
    def _build_section(
            section_class: Type[SectionType],
            section_name: str,
            mapping: Any
    ) -> SectionType:
        """
        Build a configuration section from a mapping.

        :parameter section_class: The class of the configuration section.
        :parameter section_name: The name of the configuration section.
        :parameter mapping: The mapping of the configuration section.

        :returns: The configuration section.
        """

        if mapping is None:
            mapping = dict()

        if not isinstance(mapping, Mapping):
            raise ConfigurationError(
                "The configuration section '{section_name:s}' must be a mapping.".format(
                    section_name=section_name
                )
            )

        field_types = {
            section_field.name: section_field.type
            for section_field in fields(section_class)
        }

        unknown_keys = sorted(str(key) for key in mapping.keys() if key not in field_types)

        if len(unknown_keys) > 0:
            raise ConfigurationError(
                "The configuration section '{section_name:s}' has the unknown keys {unknown_keys}.".format(
                    section_name=section_name,
                    unknown_keys=", ".join(unknown_keys)
                )
            )

        return section_class(**{
            key: FitConfig._coerce_value(
                name=key,
                value=value,
                field_type=field_types[key]
            )
            for key, value in mapping.items()
        })

    @classmethod
    def from_mapping(
            cls,
            mapping: Any
    ) -> "FitConfig":
        """
        Build the configuration from a nested mapping whose keys are the field names.

        :parameter mapping: The nested mapping. The value `None` indicates the default configuration.

        :returns: The configuration.
        """

        if mapping is None:
            mapping = dict()

        if not isinstance(mapping, Mapping):
            raise ConfigurationError(
                "The configuration must be a mapping."
            )

        known_keys = set(cls.SECTIONS.keys()) | {"nystrom_mode", "seed", }
        unknown_keys = sorted(str(key) for key in mapping.keys() if key not in known_keys)

        if len(unknown_keys) > 0:
            raise ConfigurationError(
                "The configuration has the unknown keys {unknown_keys}.".format(
                    unknown_keys=", ".join(unknown_keys)
                )
            )

        try:
            return cls(
                nystrom_mode=mapping.get("nystrom_mode", "row"),
                seed=mapping.get("seed", 0),
                **{
                    section_name: cls._build_section(
                        section_class=section_class,
                        section_name=section_name,
                        mapping=mapping.get(section_name)
                    )
                    for section_name, section_class in cls.SECTIONS.items()
                }
            )

        except ConfigurationError:
            raise

        except (TypeError, ValueError) as exception_handle:
            raise ConfigurationError(str(exception_handle)) from exception_handle

    @classmethod
    def from_yaml(
            cls,
            file_path: Union[str, PathLike[str]]
    ) -> "FitConfig":
        """
        Load the configuration from a YAML file.

        :parameter file_path: The path to the YAML file.

        :returns: The configuration.
        """

        with open(file_path, mode="r", encoding="utf-8") as file_handle:
            try:
                mapping = safe_load(file_handle)

            except YAMLError as exception_handle:
                raise ConfigurationError(
                    "The configuration file '{file_path:s}' is not valid YAML.".format(
                        file_path=Path(file_path).as_posix()
                    )
                ) from exception_handle

        return cls.from_mapping(
            mapping=mapping
        )

    def to_mapping(
            self
    ) -> Dict[str, Any]:
        """
        Convert the configuration to a nested mapping that `from_mapping` restores exactly.

        :returns: The nested mapping.
        """

        return asdict(self)
