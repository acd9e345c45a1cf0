"""Structured pass/fail records shared by every verification routine."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

STATUSES = ("pass", "fail", "inconclusive")
SCHEMA_VERSION = 1


def _jsonable(x: Any) -> Any:
    from fractions import Fraction

    import numpy as np

    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else x.numerator
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating, float)):
        x = float(x)
        return x if math.isfinite(x) else str(x)
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, np.ndarray):
        return [_jsonable(v) for v in x.tolist()] if x.dtype != object else [
            _jsonable(v) for v in x
        ]
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    return x


@dataclass
class Check:
    name: str
    status: str
    residual: float = 0.0
    witness: Any = None

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"bad status {self.status!r}")

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "status": self.status,
            "residual": _jsonable(self.residual),
            "witness": _jsonable(self.witness),
        }


@dataclass
class VerificationReport:
    suite: str
    checks: list[Check] = field(default_factory=list)
    wall_time: float | None = None

    def add(self, name: str, ok: bool | None, residual: float = 0.0, witness: Any = None) -> Check:
        status = "inconclusive" if ok is None else ("pass" if ok else "fail")
        chk = Check(name, status, float(residual), witness)
        self.checks.append(chk)
        return chk

    def extend(self, other: "VerificationReport", prefix: str = "") -> None:
        for c in other.checks:
            self.checks.append(Check(prefix + c.name, c.status, c.residual, c.witness))

    @property
    def passed(self) -> bool:
        return all(c.status != "fail" for c in self.checks)

    @property
    def residual(self) -> float:
        return max((c.residual for c in self.checks), default=0.0)

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self, include_time: bool = False) -> dict:
        d = {
            "schema": SCHEMA_VERSION,
            "suite": self.suite,
            "passed": self.passed,
            "checks": [c.to_dict() for c in self.checks],
        }
        if include_time and self.wall_time is not None:
            d["wall_time"] = self.wall_time
        return d
