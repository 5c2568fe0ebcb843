"""Run configuration: flat key=value files, presets, and overrides.

Resolution order (later wins): built-in defaults, then the preset's
pinned values, then keys from the config file, then ``--set`` overrides,
then the dedicated ``--seed`` flag.  The effective preset follows the
same layering: the ``--preset`` flag first, else a ``preset`` entry
among the overrides, else a ``preset`` key in the file.  A manifest
written by a run is
itself a valid config file: its informational keys (``subcommand``,
``version``) are accepted and ignored, and because it lists every key
explicitly, re-reading it reproduces the run exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields

from .errors import ConfigurationError
from .grids import GridSpec

_INT_KEYS = {"n_modes", "n_eta", "n_steps", "max_iters", "seed", "particles_n"}
_FLOAT_KEYS = {"eta_min", "eta_max", "horizon", "alpha", "epsilon"}
_BOOL_KEYS = {"dealias", "normalize"}
_STR_KEYS = {"initial_density", "target", "control", "preset"}
_OPTIONAL_INT_KEYS = {"storage_stride"}
_RESERVED_KEYS = {"subcommand", "version"}
_ALL_KEYS = _INT_KEYS | _FLOAT_KEYS | _BOOL_KEYS | _STR_KEYS | _OPTIONAL_INT_KEYS

_PINNED = {
    "eta_min": "0.0",
    "eta_max": "1.0",
    "horizon": "6.0",
    "alpha": "1.0",
    "epsilon": "0.01",
    "initial_density": "paper_cossin2",
    "normalize": "true",
    "target": f"constant:{math.pi!r}",
    "control": "zero",
}

PRESETS = {
    "desk": {**_PINNED, "n_modes": "128", "n_eta": "51", "n_steps": "1200"},
    "paper": {**_PINNED, "n_modes": "512", "n_eta": "501", "n_steps": "3000"},
}

_DEFAULTS = {
    "n_modes": "128",
    "n_eta": "51",
    "eta_min": "0.0",
    "eta_max": "1.0",
    "horizon": "6.0",
    "n_steps": "1200",
    "dealias": "true",
    "alpha": "1.0",
    "epsilon": "0.01",
    "max_iters": "50",
    "initial_density": "paper_cossin2",
    "normalize": "true",
    "target": f"constant:{math.pi!r}",
    "control": "zero",
    "storage_stride": "auto",
    "preset": "none",
    "seed": "0",
    "particles_n": "20000",
}


@dataclass
class RunConfig:
    """Fully resolved run parameters (every field explicit)."""

    n_modes: int
    n_eta: int
    eta_min: float
    eta_max: float
    horizon: float
    n_steps: int
    dealias: bool
    alpha: float
    epsilon: float
    max_iters: int
    initial_density: str
    normalize: bool
    target: str
    control: str
    storage_stride: int | None
    preset: str
    seed: int
    particles_n: int

    def __post_init__(self):
        # GridSpec re-validates the grid fields; the rest here.
        self.grid()
        if not self.alpha > 0:
            raise ConfigurationError(f"alpha must be > 0, got {self.alpha}")
        if not self.epsilon > 0:
            raise ConfigurationError(
                f"epsilon must be > 0, got {self.epsilon}")
        if self.max_iters < 0:
            raise ConfigurationError(
                f"max_iters must be >= 0, got {self.max_iters}")
        if self.particles_n < 1:
            raise ConfigurationError(
                f"particles_n must be >= 1, got {self.particles_n}")
        if self.storage_stride is not None:
            if self.storage_stride < 1 or self.n_steps % self.storage_stride:
                raise ConfigurationError(
                    f"storage_stride must divide n_steps={self.n_steps}, "
                    f"got {self.storage_stride}")
        _split_spec(self.target, "target", ("constant", "table"))
        if self.control != "zero":
            _split_spec(self.control, "control", ("table",))

    def grid(self) -> GridSpec:
        return GridSpec(n_modes=self.n_modes, n_eta=self.n_eta,
                        eta_min=self.eta_min, eta_max=self.eta_max,
                        horizon=self.horizon, n_steps=self.n_steps,
                        dealias=self.dealias)

    def to_mapping(self) -> dict[str, str]:
        """Every field as the flat-file string that parses back to it."""
        out = {}
        for f in fields(self):
            v = getattr(self, f.name)
            if f.name == "storage_stride":
                out[f.name] = "auto" if v is None else str(v)
            elif isinstance(v, bool):
                out[f.name] = "true" if v else "false"
            elif isinstance(v, float):
                out[f.name] = repr(v)
            else:
                out[f.name] = str(v)
        return out


def _split_spec(text: str, key: str, allowed: tuple[str, ...]) -> tuple[str, str]:
    head, sep, tail = text.partition(":")
    if head not in allowed or (sep and not tail):
        raise ConfigurationError(
            f"{key} must be one of {', '.join(a + ':<...>' for a in allowed)}; "
            f"got {text!r}")
    if head == "constant":
        try:
            float(tail)
        except ValueError:
            raise ConfigurationError(
                f"{key} constant value must be numeric, got {tail!r}") from None
    return head, tail


def parse_config_file(path: str) -> dict[str, str]:
    """Flat key=value lines; '#' starts a comment; blank lines ignored."""
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigurationError(f"cannot read config file {path}: {exc}")
    return parse_config_text(text, origin=path)


def parse_config_text(text: str, origin: str = "<config>") -> dict[str, str]:
    out: dict[str, str] = {}
    for idx, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key:
            raise ConfigurationError(
                f"{origin}:{idx}: expected key=value, got {raw.strip()!r}")
        if key in _RESERVED_KEYS:
            continue
        if key not in _ALL_KEYS:
            raise ConfigurationError(f"{origin}:{idx}: unknown key {key!r}")
        out[key] = value
    return out


def _coerce(key: str, value: str):
    try:
        if key in _INT_KEYS:
            return int(value)
        if key in _FLOAT_KEYS:
            return float(value)
    except ValueError:
        raise ConfigurationError(
            f"{key} must be numeric, got {value!r}") from None
    if key in _BOOL_KEYS:
        low = value.lower()
        if low in ("true", "1", "yes"):
            return True
        if low in ("false", "0", "no"):
            return False
        raise ConfigurationError(f"{key} must be true or false, got {value!r}")
    if key in _OPTIONAL_INT_KEYS:
        if value.lower() in ("auto", "none", ""):
            return None
        try:
            return int(value)
        except ValueError:
            raise ConfigurationError(
                f"{key} must be an integer or 'auto', got {value!r}") from None
    return value


def parse_overrides(pairs: list[str]) -> dict[str, str]:
    out: dict[str, str] = {}
    for pair in pairs:
        key, sep, value = pair.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key:
            raise ConfigurationError(
                f"--set expects key=value, got {pair!r}")
        if key in _RESERVED_KEYS:
            continue
        if key not in _ALL_KEYS:
            raise ConfigurationError(f"--set: unknown key {key!r}")
        out[key] = value
    return out


def resolve_config(preset: str | None = None,
                   file_values: dict[str, str] | None = None,
                   overrides: dict[str, str] | None = None,
                   seed: int | None = None) -> RunConfig:
    """Layer the sources and build a validated RunConfig."""
    file_values = dict(file_values or {})
    overrides = dict(overrides or {})

    file_preset = file_values.pop("preset", None)
    override_preset = overrides.pop("preset", None)
    name = preset or override_preset or file_preset or "none"
    if name not in PRESETS and name != "none":
        raise ConfigurationError(
            f"unknown preset {name!r}; choose from {sorted(PRESETS)}")

    raw = dict(_DEFAULTS)
    if name != "none":
        raw.update(PRESETS[name])
    raw["preset"] = name
    raw.update(file_values)
    raw.update(overrides)
    if seed is not None:
        raw["seed"] = str(seed)

    typed = {key: _coerce(key, value) for key, value in raw.items()}
    return RunConfig(**typed)
