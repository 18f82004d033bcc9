"""Plain-text key-value run configuration.

Format: one `key = value` per line, '#' starts a comment. Unknown keys are
rejected. Every run writes the fully resolved configuration (defaults
expanded) next to its outputs together with a schema-version stamp.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

from .errors import ConfigError

SCHEMA_VERSION = 1

_REQUIRED = object()


def _float_list(text: str):
    try:
        return [float(tok) for tok in str(text).split(",") if tok.strip() != ""]
    except ValueError as err:
        raise ConfigError(f"bad list value {text!r}") from err


# key -> (parser, default); _REQUIRED marks mandatory keys
SCHEMA = {
    # grid
    "dim": (int, _REQUIRED),
    "extent": (float, _REQUIRED),
    "points": (int, _REQUIRED),
    # model
    "mu1": (float, _REQUIRED),
    "mu2": (float, _REQUIRED),
    "p1": (float, _REQUIRED),
    "p2": (float, _REQUIRED),
    "r1": (float, _REQUIRED),
    "r2": (float, _REQUIRED),
    "beta": (float, _REQUIRED),
    "a1": (float, _REQUIRED),
    "a2": (float, _REQUIRED),
    # solver
    "tau": (float, 0.5),
    "max_iters": (int, 20000),
    "tol_residual": (float, 1e-8),
    "tol_energy": (float, 1e-12),
    "init": (str, "gaussian"),
    "seed": (int, 0),
    # evolution / stability
    "dt": (float, 0.002),
    "t_final": (float, 20.0),
    "record_every": (int, 50),
    "perturbation_sizes": (_float_list, [0.01]),
    # landscape scan
    "a1_values": (_float_list, [0.0, 0.5, 1.0, 1.5, 2.0]),
    "a2_values": (_float_list, [0.0, 0.5, 1.0, 1.5, 2.0]),
    "strict_margin": (float, 1e-4),
    "tol_solver": (float, 1e-8),
    # splitting diagnostic
    "separation": (int, -1),  # -1: quarter of the grid
    "split_width": (float, 1.0),
    # execution
    "threads": (int, 1),
}

THREADS_ENV = "NLSLAB_THREADS"


@dataclass
class RunConfig:
    values: dict

    def __getitem__(self, key):
        return self.values[key]

    def get(self, key, default=None):
        return self.values.get(key, default)


def parse_file(path) -> dict:
    raw = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            stripped = line.split("#", 1)[0].strip()
            if not stripped:
                continue
            if "=" not in stripped:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
            key, value = (part.strip() for part in stripped.split("=", 1))
            if key in raw:
                raise ConfigError(f"{path}:{lineno}: duplicate key {key!r}")
            raw[key] = value
    return raw


def resolve(raw: dict, overrides: dict | None = None) -> RunConfig:
    """Validate raw key-value text against the schema and expand defaults."""
    overrides = overrides or {}
    unknown = set(raw) - set(SCHEMA)
    if unknown:
        raise ConfigError(f"unknown configuration keys: {sorted(unknown)}")
    values = {}
    for key, (parser, default) in SCHEMA.items():
        if key in overrides and overrides[key] is not None:
            values[key] = overrides[key]
        elif key in raw:
            try:
                values[key] = parser(raw[key])
            except (TypeError, ValueError) as err:
                raise ConfigError(f"bad value for {key!r}: {raw[key]!r}") from err
        elif default is _REQUIRED:
            raise ConfigError(f"missing mandatory key {key!r}")
        else:
            values[key] = default
    return RunConfig(values)


def resolve_threads(flag_value: int | None) -> int:
    if flag_value is not None:
        return int(flag_value)
    env = os.environ.get(THREADS_ENV)
    if env is not None:
        try:
            return int(env)
        except ValueError as err:
            raise ConfigError(f"bad {THREADS_ENV} value {env!r}") from err
    return 1


def write_resolved(cfg: RunConfig, path):
    """Serialize the fully resolved configuration with a schema stamp."""
    lines = [f"schema_version = {SCHEMA_VERSION}"]
    for key in SCHEMA:
        val = cfg.values[key]
        if isinstance(val, list):
            val = ",".join(format(v, ".17g") for v in val)
        elif isinstance(val, float):
            val = format(val, ".17g")
        lines.append(f"{key} = {val}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
