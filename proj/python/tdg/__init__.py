"""Plane-wave Trefftz DG Helmholtz solver with hp and directional adaptivity."""

import json as _json
import os as _os

from . import _tdg
from ._tdg import (
    ConfigError,
    DomainError,
    SingularSystemError,
    UnsupportedDegreeError,
    bessel_j,
    bessel_y0,
    bessel_y1,
    canonical_directions,
    data_directory,
    gauss_rule,
    hankel1_0,
    hankel1_1,
    rotation_to,
    set_data_directory,
)

_here = _os.path.dirname(__file__)
if _os.path.isdir(_os.path.join(_here, "data")):
    set_data_directory(_os.path.join(_here, "data"))
if "TDG_PRESET_DIR" not in _os.environ and _os.path.isdir(_os.path.join(_here, "presets")):
    _os.environ["TDG_PRESET_DIR"] = _os.path.join(_here, "presets")


def _dump(config):
    return config if isinstance(config, str) else _json.dumps(config)


def default_config():
    return _json.loads(_tdg.default_config())


def preset(name):
    return _json.loads(_tdg.preset(name))


def load_config(path=None, text=None, base=None):
    """Config dict from an INI file or INI text, layered over `base`."""
    if (path is None) == (text is None):
        raise ValueError("give exactly one of path or text")
    if path is not None:
        with open(path) as fh:
            text = fh.read()
    b = None if base is None else _dump(base)
    return _json.loads(_tdg.config_from_ini(text, b))


def config_hash(config):
    return _tdg.config_hash(_dump(config))


def run_experiment(config):
    return _tdg.run_experiment(_dump(config))


def run_table2(config):
    return _tdg.run_table2(_dump(config))


def run_table3(config):
    return _tdg.run_table3(_dump(config))


def run_and_write(config):
    return _tdg.run_and_write(_dump(config))
