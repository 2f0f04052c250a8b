"""Check reports and their JSON-lines / CSV serializations."""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence


@dataclass
class Measurement:
    """What one check measures on one pair of lattices.

    ``constants`` are recorded constants (maxima of ratios) whose refinement
    drift decides the verdict; ``identities`` map a name to ``(error, tol)``;
    ``diagnostics`` are recorded but not judged.
    """

    lattice: dict
    constants: dict[str, float] = field(default_factory=dict)
    identities: dict[str, tuple[float, float]] = field(default_factory=dict)
    lhs: list[float] = field(default_factory=list)
    rhs: list[float] = field(default_factory=list)
    diagnostics: dict = field(default_factory=dict)

    @property
    def ratios(self) -> list[float]:
        return [_ratio(a, b) for a, b in zip(self.lhs, self.rhs)]

    def as_dict(self) -> dict:
        return {
            "lattice": self.lattice,
            "constants": self.constants,
            "identities": {k: {"error": e, "tol": t} for k, (e, t) in self.identities.items()},
            "lhs": self.lhs,
            "rhs": self.rhs,
            "ratios": self.ratios,
            "diagnostics": self.diagnostics,
        }


def _ratio(a: float, b: float) -> float:
    if b == 0:
        return 0.0 if a == 0 else math.inf
    return a / b


@dataclass
class CheckReport:
    """Outcome of one catalog check at a base lattice and its refinement."""

    check: str
    description: str
    family: list[str]
    seeds: list[int]
    levels: list[Measurement]
    drift: dict[str, float]
    passed: bool
    reasons: list[str]
    seconds: float = 0.0

    @property
    def constant(self) -> float:
        """Primary recorded constant at the base lattice (NaN for pure identity checks)."""
        c = self.levels[0].constants
        return next(iter(c.values())) if c else math.nan

    @property
    def max_drift(self) -> float:
        return max(self.drift.values()) if self.drift else math.nan

    @property
    def max_identity_error(self) -> float:
        errs = [e for lvl in self.levels for e, _ in lvl.identities.values()]
        return max(errs) if errs else math.nan

    def as_dict(self) -> dict:
        """JSON form; wall time is excluded so reports are reproducible byte for byte."""
        return {
            "check": self.check,
            "description": self.description,
            "family": self.family,
            "seeds": self.seeds,
            "levels": [lvl.as_dict() for lvl in self.levels],
            "constant": self.constant,
            "drift": self.drift,
            "pass": self.passed,
            "reasons": self.reasons,
        }

    def to_json(self) -> str:
        return json.dumps(_clean(self.as_dict()), sort_keys=True)


def _clean(obj):
    """Replace non-finite floats by strings so the output is strict JSON."""
    if isinstance(obj, float):
        if math.isnan(obj):
            return "nan"
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        return obj
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def write_reports(reports: Sequence[CheckReport], path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        for r in reports:
            fh.write(r.to_json() + "\n")
    return path


def write_summary(reports: Sequence[CheckReport], path) -> Path:
    """CSV with columns ``id,constant,drift,pass,seconds``."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["id", "constant", "drift", "pass", "seconds"])
        for r in reports:
            writer.writerow([r.check, repr(r.constant), repr(r.max_drift), str(r.passed).lower(), f"{r.seconds:.3f}"])
    return path


def format_table(reports: Sequence[CheckReport]) -> str:
    lines = [f"{'id':<14} {'constant':>12} {'drift':>8} {'pass':>5} {'seconds':>8}"]
    for r in reports:
        lines.append(
            f"{r.check:<14} {r.constant:>12.5g} {r.max_drift:>8.4f} {('yes' if r.passed else 'NO'):>5} {r.seconds:>8.2f}"
        )
    return "\n".join(lines)
