""" The ``geoproto.features.utility`` package ``serialization`` module. """

from dataclasses import dataclass
from os import PathLike
from pathlib import Path
from struct import Struct
from typing import Any, Dict, List, Mapping, Tuple, Union
from zlib import crc32

from numpy import asarray, float64, frombuffer, int64, ndarray, zeros

from scipy.sparse import csr_matrix

from yaml import YAMLError, safe_dump, safe_load

from geoproto.base.exception import (
    ChecksumFailureError,
    ConfigurationError,
    MalformedFileError,
    VersionMismatchError,
)

from geoproto.config.config import FitConfig
from geoproto.graph.graph import ClassGraph
from geoproto.nystrom.nystrom import ClassManifold
from geoproto.proto.proto import PrototypeBank
from geoproto.spectral.spectral import DiffusionConfig, SpectralBasis
from geoproto.spectral.utility.normalization import NormState


@dataclass(frozen=True, eq=False)
class ModelBundle:
    """ The fitted model bundle class. """

    manifolds: Mapping[int, ClassManifold]
    prototypes: PrototypeBank
    config: FitConfig
    format_version: int = 1

    def __post_init__(
            self
    ) -> None:
        """ Validate the bundle. """

        if sorted(self.manifolds.keys()) != list(self.prototypes.class_ids):
            raise ConfigurationError(
                "The manifolds of the model bundle must be keyed by exactly the classes of the prototypes."
            )


class ModelSerializationUtility:
    """
    The model bundle serialization utility class.

    The file layout is the magic `GPRO`, the little-endian u32 format version and header length, the UTF-8 YAML
    header, the little-endian f64 arrays in header order and the little-endian u32 CRC32 of the header and the arrays.
    """

    MAGIC = b"GPRO"
    FORMAT_VERSION = 1

    PREAMBLE = Struct("<4sII")
    CHECKSUM = Struct("<I")

    @staticmethod
    def _add_array(
            arrays: List[Tuple[str, ndarray, bool]],
            name: str,
            array: ndarray,
            integer: bool = False
    ) -> str:
        """
        Append an array to the ordered payload arrays.

        :parameter arrays: The ordered payload arrays, extended in place.
        :parameter name: The unique name of the array.
        :parameter array: The array.
        :parameter integer: The indicator of whether the array holds integers.

        :returns: The name of the array.
        """

        arrays.append((name, asarray(array), integer, ))

        return name

    @staticmethod
    def _encode_manifold(
            manifold: ClassManifold,
            arrays: List[Tuple[str, ndarray, bool]]
    ) -> Dict[str, Any]:
        """
        Encode a class manifold into its header entry and payload arrays.

        :parameter manifold: The class manifold.
        :parameter arrays: The ordered payload arrays, extended in place.

        :returns: The header entry of the class manifold.
        """

        prefix = "manifolds/{class_id:d}/".format(
            class_id=manifold.class_id
        )

        entry = {
            "class_id": int(manifold.class_id),
            "k": int(manifold.graph.k),
            "sigma_floor": float(manifold.graph.sigma_floor),
            "local_scaling": bool(manifold.graph.local_scaling),
            "number_of_nodes": int(manifold.graph.number_of_nodes),
            "L": int(manifold.basis.L),
            "requested_L": int(manifold.basis.requested_L),
            "basis_warnings": list(manifold.basis.warnings),
            "config": {
                "t": int(manifold.config.t),
                "L": int(manifold.config.L),
                "normalization": str(manifold.config.normalization),
                "zca_epsilon": float(manifold.config.zca_epsilon),
            },
            "normalization_mode": str(manifold.norm_state.mode),
            "k_oos": int(manifold.k_oos),
            "warnings": list(manifold.warnings),
        }

        for matrix_name in ("affinity", "transition", ):
            matrix = csr_matrix(getattr(manifold.graph, matrix_name))

            ModelSerializationUtility._add_array(arrays, prefix + matrix_name + "/data", matrix.data)
            ModelSerializationUtility._add_array(arrays, prefix + matrix_name + "/indices", matrix.indices, True)
            ModelSerializationUtility._add_array(arrays, prefix + matrix_name + "/indptr", matrix.indptr, True)

        for name, array, integer in (
            ("graph/degrees", manifold.graph.degrees, False, ),
            ("graph/scales", manifold.graph.scales, False, ),
            ("graph/node_features", manifold.graph.node_features, False, ),
            ("basis/eigenvalues", manifold.basis.eigenvalues, False, ),
            ("basis/eigenvectors", manifold.basis.eigenvectors, False, ),
            ("basis/degrees", manifold.basis.degrees, False, ),
            ("norm_state/mean", manifold.norm_state.mean, False, ),
            ("norm_state/transform", manifold.norm_state.transform, False, ),
            ("landmark_coords", manifold.landmark_coords, False, ),
            ("landmark_diffusion_coords", manifold.landmark_diffusion_coords, False, ),
            ("landmark_indices", manifold.landmark_indices, True, ),
        ):
            ModelSerializationUtility._add_array(arrays, prefix + name, array, integer)

        return entry

    @staticmethod
    def _decode_manifold(
            entry: Mapping[str, Any],
            arrays: Mapping[str, ndarray]
    ) -> ClassManifold:
        """
        Decode a class manifold from its header entry and payload arrays.

        :parameter entry: The header entry of the class manifold.
        :parameter arrays: The payload arrays by name.

        :returns: The class manifold.
        """

        prefix = "manifolds/{class_id:d}/".format(
            class_id=entry["class_id"]
        )

        shape = (entry["number_of_nodes"], entry["number_of_nodes"], )

        matrices = {
            matrix_name: csr_matrix(
                (
                    arrays[prefix + matrix_name + "/data"],
                    arrays[prefix + matrix_name + "/indices"],
                    arrays[prefix + matrix_name + "/indptr"],
                ),
                shape=shape
            )
            for matrix_name in ("affinity", "transition", )
        }

        return ClassManifold(
            class_id=entry["class_id"],
            graph=ClassGraph(
                affinity=matrices["affinity"],
                degrees=arrays[prefix + "graph/degrees"],
                transition=matrices["transition"],
                scales=arrays[prefix + "graph/scales"],
                node_features=arrays[prefix + "graph/node_features"],
                k=entry["k"],
                sigma_floor=entry["sigma_floor"],
                local_scaling=entry.get("local_scaling", True)
            ),
            basis=SpectralBasis(
                eigenvalues=arrays[prefix + "basis/eigenvalues"],
                eigenvectors=arrays[prefix + "basis/eigenvectors"],
                L=entry["L"],
                degrees=arrays[prefix + "basis/degrees"],
                requested_L=entry["requested_L"],
                warnings=tuple(entry["basis_warnings"])
            ),
            config=DiffusionConfig(**entry["config"]),
            norm_state=NormState(
                mode=entry["normalization_mode"],
                mean=arrays[prefix + "norm_state/mean"],
                transform=arrays[prefix + "norm_state/transform"]
            ),
            landmark_coords=arrays[prefix + "landmark_coords"],
            landmark_diffusion_coords=arrays[prefix + "landmark_diffusion_coords"],
            landmark_indices=arrays[prefix + "landmark_indices"],
            k_oos=entry["k_oos"],
            warnings=tuple(entry["warnings"])
        )

    @staticmethod
    def _encode_bank(
            bank: PrototypeBank,
            arrays: List[Tuple[str, ndarray, bool]]
    ) -> Dict[str, Any]:
        """
        Encode a prototype bank into its header entry and payload arrays.

        :parameter bank: The prototype bank.
        :parameter arrays: The ordered payload arrays, extended in place.

        :returns: The header entry of the prototype bank.
        """

        for class_id in bank.class_ids:
            prefix = "prototypes/{class_id:d}/".format(
                class_id=class_id
            )

            ModelSerializationUtility._add_array(arrays, prefix + "prototypes", bank.prototypes[class_id])
            ModelSerializationUtility._add_array(arrays, prefix + "projected", bank.projected[class_id])
            ModelSerializationUtility._add_array(arrays, prefix + "anchor_indices", bank.anchor_indices[class_id], True)
            ModelSerializationUtility._add_array(arrays, prefix + "head_weights", bank.head_weights[class_id])

            if class_id in bank.anchor_coords:
                ModelSerializationUtility._add_array(arrays, prefix + "anchor_coords", bank.anchor_coords[class_id])

        return {
            "class_ids": [int(class_id) for class_id in bank.class_ids],
            "anchored_class_ids": sorted(int(class_id) for class_id in bank.anchor_coords.keys()),
            "m": int(bank.m),
            "epsilon_sim": float(bank.epsilon_sim),
            "metric": str(bank.metric),
            "mode": str(bank.mode),
        }

    @staticmethod
    def _decode_bank(
            entry: Mapping[str, Any],
            arrays: Mapping[str, ndarray]
    ) -> PrototypeBank:
        """
        Decode a prototype bank from its header entry and payload arrays.

        :parameter entry: The header entry of the prototype bank.
        :parameter arrays: The payload arrays by name.

        :returns: The prototype bank.
        """

        def class_arrays(name: str, class_ids: List[int]) -> Dict[int, ndarray]:
            return {
                class_id: arrays["prototypes/{class_id:d}/{name:s}".format(
                    class_id=class_id,
                    name=name
                )]
                for class_id in class_ids
            }

        return PrototypeBank(
            prototypes=class_arrays("prototypes", entry["class_ids"]),
            projected=class_arrays("projected", entry["class_ids"]),
            anchor_indices=class_arrays("anchor_indices", entry["class_ids"]),
            anchor_coords=class_arrays("anchor_coords", entry["anchored_class_ids"]),
            head_weights=class_arrays("head_weights", entry["class_ids"]),
            m=entry["m"],
            epsilon_sim=entry["epsilon_sim"],
            metric=entry["metric"],
            mode=entry["mode"]
        )

    @staticmethod
    def to_bytes(
            bundle: ModelBundle
    ) -> bytes:
        """
        Serialize a model bundle.

        :parameter bundle: The model bundle.

        :returns: The serialized model bundle.
        """

        arrays = list()

        header = {
            "format_version": ModelSerializationUtility.FORMAT_VERSION,
            "config": bundle.config.to_mapping(),
            "manifolds": [
                ModelSerializationUtility._encode_manifold(
                    manifold=bundle.manifolds[class_id],
                    arrays=arrays
                )
                for class_id in sorted(bundle.manifolds.keys())
            ],
            "prototypes": ModelSerializationUtility._encode_bank(
                bank=bundle.prototypes,
                arrays=arrays
            ),
        }

        header["arrays"] = [
            {
                "name": name,
                "shape": [int(size) for size in array.shape],
                "integer": integer,
            }
            for name, array, integer in arrays
        ]

        header_bytes = safe_dump(header, sort_keys=True, allow_unicode=True).encode("utf-8")

        body = header_bytes + b"".join(
            asarray(array, dtype="<f8").tobytes(order="C")
            for _, array, _ in arrays
        )

        return ModelSerializationUtility.PREAMBLE.pack(
            ModelSerializationUtility.MAGIC,
            ModelSerializationUtility.FORMAT_VERSION,
            len(header_bytes)
        ) + body + ModelSerializationUtility.CHECKSUM.pack(crc32(body) & 0xFFFFFFFF)

    @staticmethod
    def from_bytes(
            data: bytes
    ) -> ModelBundle:
        """
        Deserialize a model bundle.

        :parameter data: The serialized model bundle.

        :returns: The model bundle.
        """

        preamble_size = ModelSerializationUtility.PREAMBLE.size
        checksum_size = ModelSerializationUtility.CHECKSUM.size

        if len(data) < preamble_size or data[:4] != ModelSerializationUtility.MAGIC:
            raise VersionMismatchError(
                "The model file does not start with the magic bytes 'GPRO'."
            )

        _, format_version, header_length = ModelSerializationUtility.PREAMBLE.unpack_from(data, 0)

        if format_version != ModelSerializationUtility.FORMAT_VERSION:
            raise VersionMismatchError(
                "The model file format version {format_version:d} is not supported, expected {expected:d}.".format(
                    format_version=format_version,
                    expected=ModelSerializationUtility.FORMAT_VERSION
                )
            )

        if len(data) < preamble_size + header_length + checksum_size:
            raise ChecksumFailureError(
                "The model file is truncated."
            )

        body = data[preamble_size:len(data) - checksum_size]
        stored_checksum, = ModelSerializationUtility.CHECKSUM.unpack_from(data, len(data) - checksum_size)

        if crc32(body) & 0xFFFFFFFF != stored_checksum:
            raise ChecksumFailureError(
                "The model file checksum does not match its content."
            )

        try:
            header = safe_load(body[:header_length].decode("utf-8"))

        except (UnicodeDecodeError, YAMLError) as exception_handle:
            raise MalformedFileError(
                "The model file header is malformed."
            ) from exception_handle

        payload = body[header_length:]

        arrays, offset = dict(), 0

        for array_entry in header["arrays"]:
            shape = tuple(array_entry["shape"])

            size = 1

            for dimension in shape:
                size *= dimension

            if offset + 8 * size > len(payload):
                raise MalformedFileError(
                    "The model file payload is shorter than its header declares."
                )

            if size == 0:
                array = zeros(shape, dtype=float64)

            else:
                array = frombuffer(payload, dtype="<f8", count=size, offset=offset).reshape(shape)

            arrays[array_entry["name"]] = array.astype(int64) if array_entry["integer"] else array.astype(float64)

            offset += 8 * size

        if offset != len(payload):
            raise MalformedFileError(
                "The model file payload is longer than its header declares."
            )

        return ModelBundle(
            manifolds={
                entry["class_id"]: ModelSerializationUtility._decode_manifold(
                    entry=entry,
                    arrays=arrays
                )
                for entry in header["manifolds"]
            },
            prototypes=ModelSerializationUtility._decode_bank(
                entry=header["prototypes"],
                arrays=arrays
            ),
            config=FitConfig.from_mapping(
                mapping=header["config"]
            ),
            format_version=format_version
        )

    @staticmethod
    def save_model(
            bundle: ModelBundle,
            file_path: Union[str, PathLike[str]]
    ) -> None:
        """
        Save a model bundle to a file.

        :parameter bundle: The model bundle.
        :parameter file_path: The path to the model file.
        """

        Path(file_path).write_bytes(ModelSerializationUtility.to_bytes(
            bundle=bundle
        ))

    @staticmethod
    def load_model(
            file_path: Union[str, PathLike[str]]
    ) -> ModelBundle:
        """
        Load a model bundle from a file.

        :parameter file_path: The path to the model file.

        :returns: The model bundle.
        """

        return ModelSerializationUtility.from_bytes(
            data=Path(file_path).read_bytes()
        )
