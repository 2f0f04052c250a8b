"""Configuration shared by the check catalog."""

from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace

from ..lattice import Lattice, make_lattice
from ..symbols import WindowFamily, make_window_family


@dataclass(frozen=True)
class VerifyConfig:
    """Parameters of a verification run.

    ``N`` and ``L`` describe the lattice on which operators act; ``sym_N`` and
    ``sym_L`` the lattice on which dyadic symbol pieces (supported in
    ``|xi| <= 2``) are sampled.  Every check runs at the stated sizes and at
    twice those sizes with the periods unchanged.
    """

    n: int = 1
    N: int = 64
    L: float = 2 * math.pi
    sym_N: int = 64
    sym_L: float = 8.0
    window: str = "smoothstep"
    order: int = 7
    s1: float = 0.4
    s2: float = 0.6
    cor_s1: float = 0.6
    cor_s2: float = 0.6
    jmin: int = -4
    jmax: int = 4
    seeds: tuple[int, ...] = (1, 2, 3)
    c: float = 0.3
    c_values: tuple[float, ...] = (0.2, 0.3, 0.4)
    draws: int = 20
    drift_bound: float = 1.25
    identity_tol: float = 1e-10
    strict_tol: float = 1e-12
    trials: int = 3
    iterations: int = 25
    checks: tuple[str, ...] | None = None
    out_dir: str = "bifour-out"

    def op_lattice(self, level: int = 0) -> Lattice:
        return make_lattice(self.n, self.N * 2**level, self.L)

    def sym_lattice(self, level: int = 0, L: float | None = None) -> Lattice:
        return make_lattice(self.n, self.sym_N * 2**level, self.sym_L if L is None else L)

    def windows(self) -> WindowFamily:
        return make_window_family(self.window, self.order)

    @property
    def jrange(self) -> tuple[int, int]:
        return (self.jmin, self.jmax)

    def with_updates(self, **changes) -> "VerifyConfig":
        return replace(self, **changes)

    def as_dict(self) -> dict:
        out = {}
        for f in fields(self):
            v = getattr(self, f.name)
            out[f.name] = list(v) if isinstance(v, tuple) else v
        return out

