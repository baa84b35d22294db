""" The ``geoproto.config`` package tests. """

from pathlib import Path

from pytest import mark, raises

from geoproto.base.exception import ConfigurationError
from geoproto.config.config import FitConfig


def test_default_config(
) -> None:
    """ Test the defaults of the fit configuration. """

    config = FitConfig()

    assert (config.graph.k, config.graph.local_scaling, config.graph.epsilon_sigma, ) == (20, True, 1e-12, )
    assert (config.diffusion.t, config.diffusion.L, config.diffusion.normalization, ) == (4, 32, "zca", )
    assert (config.landmarks.selection, config.landmarks.count, config.landmarks.update_every, ) == ("kmeans", 768, 20, )
    assert (config.prototypes.m, config.prototypes.epsilon_sim, config.prototypes.metric, ) == (10, 1e-4, "diffusion", )
    assert (config.nystrom_mode, config.seed, ) == ("row", 0, )

    assert FitConfig.from_mapping(None) == config


def test_config_from_yaml(
        tmp_path: Path
) -> None:
    """ Test the parsing of a YAML configuration with partial sections and string floats. """

    (tmp_path / "config.yaml").write_text(
        "graph:\n"
        "  k: 8\n"
        "  epsilon_sigma: 1e-10\n"
        "diffusion:\n"
        "  normalization: energy\n"
        "prototypes:\n"
        "  m: 3\n"
        "  epsilon_sim: 1e-3\n"
        "seed: 7\n",
        encoding="utf-8"
    )

    config = FitConfig.from_yaml(tmp_path / "config.yaml")

    assert config.graph.k == 8
    assert config.graph.epsilon_sigma == 1e-10
    assert isinstance(config.prototypes.epsilon_sim, float)
    assert config.diffusion.normalization == "energy"
    assert config.diffusion.t == 4
    assert config.seed == 7


def test_config_round_trip(
) -> None:
    """ Test that a configuration is restored from its mapping. """

    config = FitConfig.from_mapping({
        "landmarks": {"selection": "random", "pool": "global", "count": 64, },
        "nystrom_mode": "paper",
        "training": {"epochs": 5, "step_size": 0.5, },
    })

    assert FitConfig.from_mapping(config.to_mapping()) == config
    assert config.to_mapping()["landmarks"]["pool"] == "global"


def test_fractional_diffusion_time(
) -> None:
    """ Test that a fractional diffusion time is rejected with its field name. """

    with raises(ConfigurationError, match="t must be a positive integer"):
        FitConfig.from_mapping({"diffusion": {"t": 2.5, }, })


@mark.parametrize(
    argnames="mapping",
    argvalues=[
        {"graphs": {}, },
        {"graph": {"neighbors": 5, }, },
        {"graph": [1, 2], },
        {"nystrom_mode": "exact", },
        {"seed": "zero", },
        {"prototypes": {"epsilon_sim": "small", }, },
        [1, 2, 3],
    ]
)
def test_config_errors(
        mapping: object
) -> None:
    """ Test the rejection of unknown keys, malformed sections and invalid values. """

    with raises(ConfigurationError):
        FitConfig.from_mapping(mapping)


def test_invalid_yaml(
        tmp_path: Path
) -> None:
    """ Test that a file that is not YAML is rejected. """

    (tmp_path / "config.yaml").write_text("graph: [k: 1\n", encoding="utf-8")

    with raises(ConfigurationError):
        FitConfig.from_yaml(tmp_path / "config.yaml")


@mark.parametrize(
    argnames="nystrom_mode",
    argvalues=["paper", "degree", ]
)
def test_degree_normalized_mode_names(
        tmp_path: Path,
        nystrom_mode: str
) -> None:
    """ Test that the degree-normalized extension is accepted under its name and its alias. """

    (tmp_path / "config.yaml").write_text(
        "nystrom_mode: {nystrom_mode}\n".format(
            nystrom_mode=nystrom_mode
        ),
        encoding="utf-8"
    )

    config = FitConfig.from_yaml(tmp_path / "config.yaml")

    assert config.nystrom_mode == nystrom_mode
    assert FitConfig.from_mapping(config.to_mapping()) == config
