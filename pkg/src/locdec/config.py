"""Default budgets and caps; every cap can be overridden by a LOCDEC_CAP_* variable."""

from __future__ import annotations

import os

DEFAULT_BUDGET = 10_000          # Turing-machine step budget B
DEFAULT_FRAGMENT_CAP = 10 ** 6   # fragment enumeration candidates
DEFAULT_ENUM_CAP = 10 ** 6       # id assignments per compiled decision
DEFAULT_Q_CAP = 10 ** 6          # views assembled into a neighbourhood collection


def cap(name: str, default: int) -> int:
    """Read ``LOCDEC_CAP_<NAME>`` if set, else ``default``."""
    raw = os.environ.get(f"LOCDEC_CAP_{name.upper()}")
    if raw is None or raw == "":
        return default
    value = int(raw)
    if value < 1:
        raise ValueError(f"LOCDEC_CAP_{name.upper()} must be positive")
    return value


def fragment_cap() -> int:
    return cap("fragments", DEFAULT_FRAGMENT_CAP)


def enum_cap() -> int:
    return cap("enum", DEFAULT_ENUM_CAP)


def q_cap() -> int:
    return cap("q", DEFAULT_Q_CAP)
