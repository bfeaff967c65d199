"""Flat key-value run configuration shared by every CLI subcommand.

The config file format is one ``key = value`` pair per line with ``#``
comments; keys use underscores and match the command-line flag names.  Flags
override file values, unknown keys are rejected by name, and the fully
resolved configuration printed by ``--print-config`` re-parses to an
identical configuration.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, fields
from pathlib import Path

from .bsm import Convention, Protocol
from .erasure import CorrelationMode
from .errors import ValidationError
from .gsm import Architecture
from .threshold import DEFAULT_DISTANCES, DEFAULT_SAMPLES, SweepConfig, eta_grid

ENV_OUT_DIR = "GHZFUSION_OUTDIR"


def _parse_bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _parse_int_tuple(text: str) -> tuple[int, ...]:
    return tuple(int(tok) for tok in text.replace(",", " ").split())


def parse_eta_grid(text: str) -> tuple[float, ...]:
    """Either an explicit comma list or ``start:stop:count``."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"grid spec must be start:stop:count, got {text!r}")
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
        if count < 2 or stop <= start:
            raise ValueError(f"degenerate grid spec {text!r}")
        step = (stop - start) / (count - 1)
        return tuple(start + i * step for i in range(count))
    return tuple(float(tok) for tok in text.replace(",", " ").split())


@dataclass(frozen=True)
class RunConfig:
    architecture: Architecture = Architecture.CYCLIC
    protocol: Protocol = Protocol.STATIC
    n: int = 3
    m: int = 2
    j: int = 0
    convention: Convention | None = None  # None: per-architecture default
    distances: tuple[int, ...] = DEFAULT_DISTANCES
    eta_grid: tuple[float, ...] | None = None
    # default initial guess suits mid-range code sizes; one automatic
    # re-centering pass absorbs moderate drift, larger codes need their own
    eta_center: float | None = 0.04
    eta_span: float = 0.3
    eta_points: int = 9
    samples: int = DEFAULT_SAMPLES
    seed: int = 1
    workers: int = 0  # 0 = all available cores; results are worker-independent
    correlation: CorrelationMode = CorrelationMode.INDEPENDENT_OUTCOMES
    hub_rotation: int = 0
    out_dir: str = ""
    table: str = "I"
    floor: float = 0.70
    dump_graphs: bool = False
    bootstrap: int = 200

    def resolved_out_dir(self) -> Path:
        if self.out_dir:
            return Path(self.out_dir)
        return Path(os.environ.get(ENV_OUT_DIR, "out"))

    def resolved_etas(self) -> tuple[float, ...]:
        if self.eta_grid is not None:
            return self.eta_grid
        if self.eta_center is not None:
            return eta_grid(self.eta_center, self.eta_span, self.eta_points)
        raise ValidationError(
            "no loss-rate grid: set eta_grid or eta_center (key 'eta_grid'/'eta_center')"
        )

    def sweep_config(self) -> SweepConfig:
        try:
            return SweepConfig(
                architecture=self.architecture,
                protocol=self.protocol,
                n=self.n,
                m=self.m,
                j=self.j,
                convention=self.convention,
                distances=self.distances,
                etas=self.resolved_etas(),
                samples=self.samples,
                master_seed=self.seed,
                correlation=self.correlation,
                hub_rotation=self.hub_rotation,
                workers=self.workers,
            )
        except ValidationError:
            raise
        except ValueError as exc:
            raise ValidationError(str(exc)) from exc


# key -> (parser from string, serialiser to string)
def _enum_codec(enum_cls):
    return (lambda s: enum_cls(s.strip().lower()), lambda v: v.value)


_CODECS = {
    "architecture": _enum_codec(Architecture),
    "protocol": _enum_codec(Protocol),
    "n": (int, str),
    "m": (int, str),
    "j": (int, str),
    "convention": (
        lambda s: None if s.strip().lower() in ("", "auto") else Convention(s.strip().lower()),
        lambda v: "auto" if v is None else v.value,
    ),
    "distances": (_parse_int_tuple, lambda v: ",".join(map(str, v))),
    "eta_grid": (
        lambda s: None if not s.strip() else parse_eta_grid(s),
        lambda v: "" if v is None else ",".join(f"{x:.10g}" for x in v),
    ),
    "eta_center": (
        lambda s: None if not s.strip() else float(s),
        lambda v: "" if v is None else f"{v:.10g}",
    ),
    "eta_span": (float, lambda v: f"{v:.10g}"),
    "eta_points": (int, str),
    "samples": (int, str),
    "seed": (int, str),
    "workers": (int, str),
    "correlation": _enum_codec(CorrelationMode),
    "hub_rotation": (int, str),
    "out_dir": (str, str),
    "table": (str, str),
    "floor": (float, lambda v: f"{v:.10g}"),
    "dump_graphs": (_parse_bool, lambda v: "true" if v else "false"),
    "bootstrap": (int, str),
}

assert set(_CODECS) == {f.name for f in fields(RunConfig)}


def parse_config_text(text: str, source: str = "<config>") -> dict:
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValidationError(f"{source}:{lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        if key not in _CODECS:
            raise ValidationError(f"{source}:{lineno}: unknown configuration key {key!r}")
        parser, _ = _CODECS[key]
        try:
            values[key] = parser(value.strip())
        except (ValueError, KeyError) as exc:
            raise ValidationError(
                f"{source}:{lineno}: invalid value for key {key!r}: {value.strip()!r} ({exc})"
            ) from exc
    return values


def load_config(path: str | Path | None, overrides: dict) -> RunConfig:
    """File values (if any) merged with overrides, then validated.

    Every key present in ``overrides`` wins over the file, including ones
    whose resolved value is None (e.g. convention "auto").
    """
    values: dict = {}
    if path is not None:
        text = Path(path).read_text()
        values.update(parse_config_text(text, source=str(path)))
    for key, value in overrides.items():
        if key not in _CODECS:
            raise ValidationError(f"unknown configuration key {key!r}")
        values[key] = value
    config = RunConfig(**values)
    _validate(config)
    return config


def _validate(config: RunConfig) -> None:
    if config.n < 1:
        raise ValidationError(f"key 'n' must be >= 1, got {config.n}")
    if config.m < 1:
        raise ValidationError(f"key 'm' must be >= 1, got {config.m}")
    if config.protocol is Protocol.ACTIVE and not 0 <= config.j < config.m:
        raise ValidationError(
            f"key 'j' must satisfy 0 <= j < m, got j={config.j} with m={config.m}"
        )
    if config.protocol is Protocol.STATIC and config.j != 0:
        raise ValidationError(
            f"key 'j' applies to the active protocol only, got j={config.j}"
        )
    if config.samples < 1:
        raise ValidationError(f"key 'samples' must be >= 1, got {config.samples}")
    if config.hub_rotation not in (0, 1, 2, 3):
        raise ValidationError(
            f"key 'hub_rotation' must be in 0..3, got {config.hub_rotation}"
        )
    if config.workers < 0:
        raise ValidationError(f"key 'workers' must be >= 0, got {config.workers}")
    if config.eta_grid is not None and sorted(set(config.eta_grid)) != list(config.eta_grid):
        raise ValidationError("key 'eta_grid' must be strictly increasing")


def format_config(config: RunConfig) -> str:
    lines = []
    for f in fields(RunConfig):
        _, serialise = _CODECS[f.name]
        lines.append(f"{f.name} = {serialise(getattr(config, f.name))}")
    return "\n".join(lines) + "\n"
