"""Run configuration: YAML file + dotted-path overrides, validated against a
closed schema (unknown keys rejected), with every default filled in so the
resolved config can be echoed verbatim into output metadata.
"""
from __future__ import annotations

import copy
import hashlib
import json

import yaml

from .errors import ConfigError

# section -> key -> (type, default); None default means "absent unless given"
SCHEMA = {
    "model": {
        "delta": (float, 0.3),
        "omega0": (float, 1.0),
        "lambda_hop": (float, 0.2),
        "g": (float, 0.3),
        "n_sites": (int, 2000),
        "separation": (int, 5),
    },
    "sweep": {
        "g": (list, None),
        "delta": (list, None),
        "separation": (list, None),
    },
    "ed": {
        "max_sites": (int, 12),
        "cap_dim": (int, 2_600_000),
        "target": (float, 1e-6),
        "n_max": (int, None),
        "proxy_sites": (int, 7),
    },
    "dynamics": {
        "t_max": (float, None),
        "dt": (float, None),
    },
    "protocol": {
        "ramp_factor": (float, 50.0),
        "hold": (float, None),
        "steps_per_segment": (int, 400),
        "n_sites": (int, 128),
    },
    "output": {
        "float_format": (str, ".12g"),
    },
    "deterministic": (bool, True),
}


def _coerce(value, typ, path):
    if value is None:
        return None
    if typ is float and isinstance(value, (int, float)) and not isinstance(value, bool):
        return float(value)
    if typ is int and isinstance(value, int) and not isinstance(value, bool):
        return value
    if typ is list and isinstance(value, list):
        return list(value)
    if typ is bool and isinstance(value, bool):
        return value
    if typ is str and isinstance(value, str):
        return value
    raise ConfigError(f"config key {path}: expected {typ.__name__}, "
                      f"got {value!r}")


def resolve_config(user: dict = None, overrides=()) -> dict:
    """Validate, apply overrides, and fill defaults. Raises ConfigError on
    unknown keys or type mismatches."""
    user = copy.deepcopy(user) if user else {}
    if not isinstance(user, dict):
        raise ConfigError("config root must be a mapping")
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"override {item!r} must look like key.path=value")
        path, raw = item.split("=", 1)
        keys = path.split(".")
        node = user
        for key in keys[:-1]:
            node = node.setdefault(key, {})
            if not isinstance(node, dict):
                raise ConfigError(f"override path {path!r} crosses a scalar")
        node[keys[-1]] = yaml.safe_load(raw)

    resolved = {}
    for section, spec in SCHEMA.items():
        if isinstance(spec, tuple):
            typ, default = spec
            value = user.pop(section, default)
            resolved[section] = _coerce(value, typ, section)
            continue
        block = user.pop(section, {}) or {}
        if not isinstance(block, dict):
            raise ConfigError(f"section {section!r} must be a mapping")
        resolved[section] = {}
        for key, (typ, default) in spec.items():
            value = block.pop(key, default)
            resolved[section][key] = _coerce(value, typ, f"{section}.{key}")
        if block:
            raise ConfigError(
                f"unknown keys in section {section!r}: {sorted(block)}")
    if user:
        raise ConfigError(f"unknown top-level keys: {sorted(user)}")
    if not resolved["deterministic"]:
        raise ConfigError("the deterministic flag is always on")
    return resolved


def load_config(path=None, overrides=()) -> dict:
    user = {}
    if path is not None:
        try:
            with open(path, "r", encoding="utf-8") as fh:
                user = yaml.safe_load(fh) or {}
        except OSError as err:
            raise ConfigError(f"cannot read config {path!r}: {err}") from err
        except yaml.YAMLError as err:
            raise ConfigError(f"malformed YAML in {path!r}: {err}") from err
    return resolve_config(user, overrides)


def config_hash(resolved: dict) -> str:
    canon = json.dumps(resolved, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode("utf-8")).hexdigest()
