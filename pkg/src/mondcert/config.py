"""Run configuration: resource limits and the nice-dimensions table."""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .errors import MondcertError
from .germ import DEFAULT_NICE_MAX
from .jets import DEFAULT_JET_CAP

DEFAULT_PAIR_CAP = 40
DEFAULT_SECONDS = 600.0
DEFAULT_RESOLUTION_STEPS = None  # n + 2 steps of the ambient ring, see free_resolution

ORDERS = ("local", "global-check")

_TRUE = {"1", "true", "yes", "y", "nice"}
_FALSE = {"0", "false", "no", "n", "not-nice"}


class ConfigError(MondcertError):
    pass


@dataclass(frozen=True)
class Config:
    """Every knob of a run.  Defaults are the documented CLI defaults."""

    order: str = "local"
    jet_cap: int = DEFAULT_JET_CAP
    pair_cap: int = DEFAULT_PAIR_CAP
    seconds: float | None = DEFAULT_SECONDS
    resolution_steps: int | None = DEFAULT_RESOLUTION_STEPS
    nice_table: dict[int, bool] = field(default_factory=dict)
    workers: int = 1
    timing: bool = False

    def __post_init__(self) -> None:
        if self.order not in ORDERS:
            raise ConfigError(f"order must be one of {', '.join(ORDERS)}")
        if self.jet_cap < 1:
            raise ConfigError("jet cap must be at least 1")
        if self.pair_cap < 1:
            raise ConfigError("pair cap must be at least 1")
        if self.seconds is not None and self.seconds <= 0:
            raise ConfigError("time limit must be positive")

    def describe(self) -> dict:
        return {
            "order": self.order,
            "jet_cap": self.jet_cap,
            "pair_cap": self.pair_cap,
            "seconds": self.seconds,
            "resolution_steps": self.resolution_steps,
            "nice_table": {str(k): v for k, v in sorted(self.nice_table.items())},
            "nice_default_max_n": DEFAULT_NICE_MAX,
        }


def read_nice_table(path: str | Path) -> dict[int, bool]:
    """Lines ``n = yes|no`` (also true/false, 1/0); ``#`` starts a comment."""
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read nice table {p}: {exc}") from None
    table: dict[int, bool] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        sep = "=" if "=" in line else (":" if ":" in line else None)
        parts = line.split(sep, 1) if sep else line.split(None, 1)
        if len(parts) != 2:
            raise ConfigError(f"{p}:{lineno}: expected 'n = yes|no'")
        key, val = parts[0].strip(), parts[1].strip().lower()
        try:
            n = int(key)
        except ValueError:
            raise ConfigError(f"{p}:{lineno}: {key!r} is not an integer") from None
        if val in _TRUE:
            table[n] = True
        elif val in _FALSE:
            table[n] = False
        else:
            raise ConfigError(f"{p}:{lineno}: {val!r} is not yes/no")
    return table
