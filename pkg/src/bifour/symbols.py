"""Bilinear symbols, dyadic windows and the symbol catalog.

Symbols are evaluated on arrays of frequency vectors: ``m(xi1, xi2)`` takes
two arrays of shape ``(..., n)`` and returns a complex array of shape
``(...)``.
"""

from __future__ import annotations

import ast
import math
import re
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

from .calculus import apply_along
from .errors import PreconditionError, RangeError, SymbolError
from .lattice import Lattice, ProductField, make_lattice

__all__ = [
    "smoothstep",
    "WindowFamily",
    "make_window_family",
    "BilinearSymbol",
    "default_symbol_lattice",
    "sample_symbol",
    "dyadic_piece",
    "resolvable_k",
    "product_lp_piece",
    "ConePartition",
    "cone_partition",
    "dual_transform",
    "swap_arguments",
    "symbol_library",
    "parse_symbol",
    "CATALOG",
]

Evaluator = Callable[[np.ndarray, np.ndarray], np.ndarray]


def _abs(x: np.ndarray) -> np.ndarray:
    return np.sqrt(np.sum(np.asarray(x, dtype=float) ** 2, axis=-1))


def smoothstep(t, order: int = 7) -> np.ndarray:
    """Odd-degree smoothstep polynomial clamped to [0, 1].

    Degree ``2q + 1`` gives a C^q transition from 0 at t=0 to 1 at t=1.
    """
    if order < 1 or order % 2 == 0:
        raise PreconditionError("smoothstep order must be an odd positive integer")
    q = (order - 1) // 2
    t = np.clip(np.asarray(t, dtype=float), 0.0, 1.0)
    acc = np.zeros_like(t)
    for k in range(q + 1):
        acc += math.comb(q + k, k) * math.comb(2 * q + 1, q - k) * (-t) ** k
    # pin the end states exactly so that windows have exact supports
    return np.where(t >= 1.0, 1.0, t ** (q + 1) * acc)


@dataclass(frozen=True)
class WindowFamily:
    """Radial dyadic partition built from a taper ``theta``.

    ``theta(r) = 1`` on [0, 1], ``0`` on [2, inf); the annular window is
    ``Psi(xi) = theta(|xi|) - theta(2|xi|)``, supported in 1/2 <= |xi| <= 2.
    The inhomogeneous family is ``psi_0 = theta(|xi|)`` and
    ``psi_k(xi) = Psi(xi / 2^k)`` for k >= 1.
    """

    profile: str = "smoothstep"
    order: int = 7

    def theta(self, r) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        t = r - 1.0
        if self.profile == "smoothstep":
            return 1.0 - smoothstep(t, self.order)
        tc = np.clip(t, 0.0, 1.0)
        return 0.5 * (1.0 + np.cos(np.pi * tc))

    def Psi(self, xi) -> np.ndarray:
        r = _abs(xi)
        return self.theta(r) - self.theta(2.0 * r)

    def Psi_pair(self, xi1, xi2) -> np.ndarray:
        """``Psi`` on R^{2n} evaluated at ``(xi1, xi2)``."""
        r = np.sqrt(_abs(xi1) ** 2 + _abs(xi2) ** 2)
        return self.theta(r) - self.theta(2.0 * r)

    def psi(self, xi, k: int) -> np.ndarray:
        """``psi_k`` of the inhomogeneous partition."""
        r = _abs(xi)
        if k == 0:
            return self.theta(r)
        return self.theta(r / 2.0**k) - self.theta(r / 2.0 ** (k - 1))

    def theta_radial(self, r) -> np.ndarray:
        return self.theta(r)


def make_window_family(profile: str = "smoothstep", order: int = 7) -> WindowFamily:
    """Window family with a ``"smoothstep"`` (odd ``order``) or ``"cosine"`` taper."""
    if profile in ("cosine", "cosine-taper"):
        return WindowFamily("cosine", 1)
    if profile.startswith("smoothstep"):
        smoothstep(0.5, order)  # validates the order
        return WindowFamily("smoothstep", int(order))
    raise PreconditionError(f"unknown window profile {profile!r}")


# --- bilinear symbols ---------------------------------------------------------


@dataclass(frozen=True)
class BilinearSymbol:
    """A bilinear Fourier multiplier ``m(xi1, xi2)``.

    Exactly one of ``evaluator`` and ``table`` is set.  A table is a
    :class:`ProductField` whose space grid holds the ``(xi1, xi2)`` samples;
    evaluation off that grid raises :class:`SymbolError`.  ``separable`` is an
    optional list of pairs ``(a_r, b_r)`` with ``m = sum_r a_r(xi1) b_r(xi2)``.
    """

    n: int
    evaluator: Evaluator | None = None
    table: ProductField | None = None
    separable: tuple[tuple[Callable, Callable], ...] | None = None
    vanishes_at_xi2_zero: bool = False
    vanishes_on_antidiagonal: bool = False
    homogeneous: bool = False
    name: str = "symbol"
    params: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if (self.evaluator is None) == (self.table is None):
            raise SymbolError("give exactly one of evaluator or table")

    @property
    def rank(self) -> int | None:
        return None if self.separable is None else len(self.separable)

    @property
    def is_sampled(self) -> bool:
        return self.table is not None

    def __call__(self, xi1, xi2) -> np.ndarray:
        xi1 = np.asarray(xi1, dtype=float)
        xi2 = np.asarray(xi2, dtype=float)
        if self.table is not None:
            return self._lookup(xi1, xi2)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.asarray(self.evaluator(xi1, xi2), dtype=np.complex128)
        return np.broadcast_to(out, np.broadcast_shapes(xi1.shape[:-1], xi2.shape[:-1]))

    def _lookup(self, xi1, xi2):
        lat = self.table.lattice
        idx = []
        for xi in (xi1, xi2):
            pos = xi / lat.h
            k = np.rint(pos)
            if np.any(np.abs(pos - k) > 1e-9):
                raise SymbolError("off-grid evaluation of a sampled symbol")
            idx.append(((k.astype(np.int64) + lat.N // 2) % lat.N))
        shape = np.broadcast_shapes(xi1.shape[:-1], xi2.shape[:-1])
        i1 = np.broadcast_to(idx[0], shape + (lat.n,))
        i2 = np.broadcast_to(idx[1], shape + (lat.n,))
        full = tuple(i1[..., d] for d in range(lat.n)) + tuple(i2[..., d] for d in range(lat.n))
        return self.table.values[full]

    def separable_value(self, xi1, xi2) -> np.ndarray:
        """Evaluate the separable form (for consistency checks)."""
        if self.separable is None:
            raise SymbolError("symbol has no separable form")
        return sum(np.asarray(a(xi1)) * np.asarray(b(xi2)) for a, b in self.separable)

    def scaled(self, factor: float) -> "BilinearSymbol":
        """``m(factor * xi1, factor * xi2)``."""
        if self.is_sampled:
            raise SymbolError("cannot rescale a sampled symbol")
        ev = self.evaluator
        sep = None
        if self.separable is not None:
            sep = tuple((_dilate(a, factor), _dilate(b, factor)) for a, b in self.separable)
        return replace(
            self,
            evaluator=lambda x1, x2: ev(factor * x1, factor * x2),
            separable=sep,
            name=f"{self.name}@{factor:g}",
        )

    def times(self, other: Evaluator, name: str | None = None) -> "BilinearSymbol":
        """Pointwise product with another closed-form function of ``(xi1, xi2)``."""
        if self.is_sampled:
            raise SymbolError("cannot multiply a sampled symbol by a closed form")
        ev = self.evaluator
        return BilinearSymbol(
            n=self.n,
            evaluator=lambda x1, x2: ev(x1, x2) * other(x1, x2),
            vanishes_at_xi2_zero=self.vanishes_at_xi2_zero,
            vanishes_on_antidiagonal=self.vanishes_on_antidiagonal,
            name=name or f"{self.name}*cut",
        )


def _dilate(fn, factor):
    return lambda x: fn(factor * x)


def default_symbol_lattice(n: int = 1, N: int = 64, L: float = 8.0) -> Lattice:
    """Lattice on which dyadic pieces (supported in |xi| <= 2) are sampled."""
    return make_lattice(n, N, L)


def _pair_grids(lat: Lattice):
    pts = lat.points()
    n = lat.n
    xi1 = pts.reshape(lat.shape + (1,) * n + (n,))
    xi2 = pts.reshape((1,) * n + lat.shape + (n,))
    return xi1, xi2


def sample_symbol(fn: Evaluator | BilinearSymbol, lat: Lattice) -> ProductField:
    """Sample a closed-form function of ``(xi1, xi2)`` on the product grid."""
    xi1, xi2 = _pair_grids(lat)
    with np.errstate(divide="ignore", invalid="ignore"):
        values = np.asarray(fn(xi1, xi2), dtype=np.complex128)
    values = np.broadcast_to(values, lat.shape * 2)
    if not np.all(np.isfinite(values)):
        raise SymbolError("symbol is not finite on the sampling grid")
    return ProductField(lat, values)


def dyadic_piece(
    m: BilinearSymbol,
    j: int,
    w: WindowFamily | None = None,
    lattice: Lattice | None = None,
) -> ProductField:
    """``m_j(xi1, xi2) = m(2^j xi1, 2^j xi2) Psi(xi1, xi2)`` on the product grid."""
    w = w or make_window_family()
    if m.is_sampled:
        if j != 0:
            raise SymbolError("sampled symbols support only the j = 0 piece")
        lat = m.table.lattice
        xi1, xi2 = _pair_grids(lat)
        return ProductField(lat, m.table.values * w.Psi_pair(xi1, xi2))
    lat = lattice or default_symbol_lattice(m.n)
    if lat.n != m.n:
        raise SymbolError("symbol and lattice dimensions differ")
    xi1, xi2 = _pair_grids(lat)
    window = w.Psi_pair(xi1, xi2)
    scale = 2.0**j
    values = np.zeros(lat.shape * 2, dtype=np.complex128)
    support = np.broadcast_to(window != 0, values.shape)
    x1 = np.broadcast_to(xi1, values.shape + (lat.n,))[support]
    x2 = np.broadcast_to(xi2, values.shape + (lat.n,))[support]
    values[support] = m(scale * x1, scale * x2) * np.broadcast_to(window, values.shape)[support]
    return ProductField(lat, values)


def resolvable_k(lat: Lattice) -> int:
    """Largest Littlewood-Paley index needed so that sum_{k<=K} psi_k = 1 on the grid."""
    return max(0, int(math.ceil(math.log2(max(lat.max_frequency(), 1.0)))))


def product_lp_piece(m: ProductField, k1: int, k2: int, w: WindowFamily | None = None) -> ProductField:
    """``psi_k1(D_xi1) psi_k2(D_xi2) m``."""
    w = w or make_window_family()
    lat = m.lattice
    K = resolvable_k(lat)
    if not (0 <= k1 <= K and 0 <= k2 <= K):
        raise RangeError(f"(k1, k2) must lie in [0, {K}]^2, got ({k1}, {k2})")
    y = lat.frequencies()
    n = lat.n
    out = apply_along(m.values, lat, tuple(range(n)), w.psi(y, k1))
    out = apply_along(out, lat, tuple(range(n, 2 * n)), w.psi(y, k2))
    return ProductField(lat, out)


# --- cone partition -----------------------------------------------------------

COVER_LIMIT = 1.0 / math.sqrt(5.0)


@dataclass(frozen=True)
class ConePartition:
    """Degree-0 homogeneous partition of unity subordinate to the cones over V_0, V_1, V_2.

    ``V_0 = {|xi1| > c, |xi2| > c}``, ``V_1 = {|xi1| > c, |xi1 + xi2| > c}``,
    ``V_2 = {|xi2| > c, |xi1 + xi2| > c}`` on the unit sphere of R^{2n}.
    """

    c: float
    order: int = 7

    def _ramp(self, u):
        return smoothstep(np.asarray(u) / self.c, self.order)

    def bumps(self, xi1, xi2) -> np.ndarray:
        xi1 = np.asarray(xi1, dtype=float)
        xi2 = np.asarray(xi2, dtype=float)
        r = np.sqrt(_abs(xi1) ** 2 + _abs(xi2) ** 2)
        safe = np.where(r > 0, r, 1.0)[..., None]
        a1 = _abs(xi1 / safe) - self.c
        a2 = _abs(xi2 / safe) - self.c
        a3 = _abs((xi1 + xi2) / safe) - self.c
        b = np.stack(
            [self._ramp(a1) * self._ramp(a2), self._ramp(a1) * self._ramp(a3), self._ramp(a2) * self._ramp(a3)]
        )
        return b, r

    def __call__(self, xi1, xi2) -> np.ndarray:
        """All three functions, stacked on a leading axis of length 3."""
        b, r = self.bumps(xi1, xi2)
        total = b.sum(axis=0)
        phi = b / np.where(total > 0, total, 1.0)
        return np.where(r > 0, phi, 1.0 / 3.0)

    def component(self, i: int) -> Evaluator:
        if i not in (0, 1, 2):
            raise RangeError("cone index must be 0, 1 or 2")
        return lambda x1, x2: self(x1, x2)[i]

    def in_cone(self, i: int, xi1, xi2) -> np.ndarray:
        """Defining inequalities of V_i for the normalized point."""
        xi1 = np.asarray(xi1, dtype=float)
        xi2 = np.asarray(xi2, dtype=float)
        r = np.sqrt(_abs(xi1) ** 2 + _abs(xi2) ** 2)[..., None]
        a1, a2, a3 = _abs(xi1 / r), _abs(xi2 / r), _abs((xi1 + xi2) / r)
        pairs = [(a1, a2), (a1, a3), (a2, a3)][i]
        return (pairs[0] > self.c) & (pairs[1] > self.c)


def cone_partition(c: float = 0.3, order: int = 7) -> ConePartition:
    """Partition for aperture ``0 < c < 1/sqrt(5)``; beyond that the three cones miss points."""
    if not 0 < c < COVER_LIMIT:
        raise PreconditionError(
            f"aperture must satisfy 0 < c < 1/sqrt(5) = {COVER_LIMIT:.6f} for the cones to cover the sphere"
        )
    return ConePartition(float(c), order)


# --- dual transforms ----------------------------------------------------------


def dual_transform(m: BilinearSymbol, which: int) -> BilinearSymbol:
    """``m^{*1}(xi1, xi2) = m(-xi1 - xi2, xi2)`` or ``m^{*2}(xi1, xi2) = m(xi1, -xi1 - xi2)``."""
    if which not in (1, 2):
        raise RangeError("which must be 1 or 2")
    if m.is_sampled:
        table = m.table
        lat = table.lattice
        n = lat.n
        idx = np.indices(lat.shape * 2)
        i1, i2 = idx[:n], idx[n:]
        c = lat.N // 2
        sheared = (c - (i1 - c) - (i2 - c)) % lat.N
        full = tuple(sheared) + tuple(i2) if which == 1 else tuple(i1) + tuple(sheared)
        new = ProductField(lat, table.values[full])
        van2 = m.vanishes_at_xi2_zero if which == 1 else m.vanishes_on_antidiagonal
        anti = which == 2 and m.vanishes_at_xi2_zero
        return BilinearSymbol(n=m.n, table=new, name=f"{m.name}*{which}",
                              vanishes_at_xi2_zero=van2, vanishes_on_antidiagonal=anti)
    ev = m.evaluator
    if which == 1:
        # m^{*1}(xi1, 0) = m(-xi1, 0), so vanishing at xi2 = 0 is inherited
        fn = lambda x1, x2: ev(-x1 - x2, x2)  # noqa: E731
        van2 = m.vanishes_at_xi2_zero
        anti = False
    else:
        # m^{*2}(xi1, 0) = m(xi1, -xi1) and m^{*2}(xi1, -xi1) = m(xi1, 0)
        fn = lambda x1, x2: ev(x1, -x1 - x2)  # noqa: E731
        van2 = m.vanishes_on_antidiagonal
        anti = m.vanishes_at_xi2_zero
    return BilinearSymbol(
        n=m.n,
        evaluator=fn,
        vanishes_at_xi2_zero=van2,
        vanishes_on_antidiagonal=anti,
        homogeneous=m.homogeneous,
        name=f"{m.name}*{which}",
    )


def swap_arguments(m: BilinearSymbol) -> BilinearSymbol:
    """``m(xi2, xi1)``, the symbol of ``(f1, f2) -> T_m(f2, f1)``."""
    if m.is_sampled:
        lat = m.table.lattice
        n = lat.n
        perm = tuple(range(n, 2 * n)) + tuple(range(n))
        table = ProductField(lat, np.transpose(m.table.values, perm))
        return BilinearSymbol(n=m.n, table=table, vanishes_on_antidiagonal=m.vanishes_on_antidiagonal,
                              name=f"{m.name}~swap")
    ev = m.evaluator
    sep = None if m.separable is None else tuple((b, a) for a, b in m.separable)
    return BilinearSymbol(
        n=m.n,
        evaluator=lambda x1, x2: ev(x2, x1),
        separable=sep,
        vanishes_on_antidiagonal=m.vanishes_on_antidiagonal,
        homogeneous=m.homogeneous,
        name=f"{m.name}~swap",
    )


# --- catalog ------------------------------------------------------------------

_PROFILES: dict[str, Callable[[np.ndarray], np.ndarray]] = {
    "one": lambda x: np.ones(np.shape(x)[:-1]),
    "gauss": lambda x: np.exp(-np.sum(np.asarray(x) ** 2, axis=-1)),
    "lorentz": lambda x: 1.0 / (1.0 + np.sum(np.asarray(x) ** 2, axis=-1)),
    "cos": lambda x: np.cos(np.asarray(x)[..., 0]),
}


def _constant_one(n: int) -> BilinearSymbol:
    one = _PROFILES["one"]
    return BilinearSymbol(
        n=n,
        evaluator=lambda x1, x2: np.ones(np.broadcast_shapes(x1.shape[:-1], x2.shape[:-1])),
        separable=((one, one),),
        homogeneous=True,
        name="constant-one",
    )


def _coifman_meyer(n: int, a: float = 1.0) -> BilinearSymbol:
    def ev(x1, x2):
        r1 = np.sum(x1**2, axis=-1)
        r2 = np.sum(x2**2, axis=-1)
        return (r1 + 2.0 * r2 + 1j * np.sum(x1 * x2, axis=-1)) / (r1 + r2 + a * a)

    return BilinearSymbol(n=n, evaluator=ev, name="coifman-meyer", params={"a": a})


def _homogeneous_angular(n: int, l: int = 1) -> BilinearSymbol:
    def ev(x1, x2):
        r = np.sqrt(np.sum(x1**2, axis=-1) + np.sum(x2**2, axis=-1))
        z = (x1[..., 0] + 1j * x2[..., 0]) / np.where(r > 0, r, 1.0)
        return np.where(r > 0, z**l, 0.0)

    return BilinearSymbol(n=n, evaluator=ev, homogeneous=True, name="homogeneous-angular", params={"l": l})


def _vanish_xi2(n: int, k: int = 1, a: float = 1.0) -> BilinearSymbol:
    if not 1 <= k <= n:
        raise SymbolError(f"component k must be in 1..{n}")

    def ev(x1, x2):
        r2 = np.sum(x1**2, axis=-1) + np.sum(x2**2, axis=-1)
        den = np.sqrt(a * a + r2)
        return np.where(den > 0, x2[..., k - 1] / np.where(den > 0, den, 1.0), 0.0)

    return BilinearSymbol(
        n=n, evaluator=ev, vanishes_at_xi2_zero=True, homogeneous=(a == 0),
        name="vanish-at-xi2-zero", params={"k": k, "a": a},
    )


def _vanish_antidiagonal(n: int, a: float = 1.0, v: Sequence[float] | None = None) -> BilinearSymbol:
    vec = np.zeros(n)
    if v is None:
        vec[0] = 1.0
    else:
        vec[:] = np.asarray(v, dtype=float)

    def ev(x1, x2):
        r2 = np.sum(x1**2, axis=-1) + np.sum(x2**2, axis=-1)
        den = np.sqrt(a * a + r2)
        num = np.sum((x1 + x2) * vec, axis=-1)
        return np.where(den > 0, num / np.where(den > 0, den, 1.0), 0.0)

    return BilinearSymbol(
        n=n, evaluator=ev, vanishes_on_antidiagonal=True, homogeneous=(a == 0),
        name="vanish-on-antidiagonal", params={"a": a},
    )


def _random_bandlimited(n: int, seed: int = 0, radius: float = 1.0, terms: int = 8) -> BilinearSymbol:
    """Sum of ``terms`` plane waves with dual frequencies in the ball of ``radius``."""
    rng = np.random.default_rng(seed)
    dirs = rng.standard_normal((terms, 2 * n))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    ys = dirs * radius * rng.random((terms, 1)) ** (1.0 / (2 * n))
    coef = (rng.standard_normal(terms) + 1j * rng.standard_normal(terms)) / np.sqrt(2 * terms)
    y1, y2 = ys[:, :n], ys[:, n:]

    def ev(x1, x2):
        ph = np.tensordot(x1, y1.T, axes=1) + np.tensordot(x2, y2.T, axes=1)
        return np.exp(1j * ph) @ coef

    sep = tuple(
        ((lambda x, c=coef[q], y=y1[q]: c * np.exp(1j * np.tensordot(x, y, axes=1))),
         (lambda x, y=y2[q]: np.exp(1j * np.tensordot(x, y, axes=1))))
        for q in range(terms)
    )
    return BilinearSymbol(
        n=n, evaluator=ev, separable=sep, name="random-bandlimited",
        params={"seed": seed, "radius": radius, "terms": terms},
    )


def _tensor(n: int, a: str = "gauss", b: str = "gauss") -> BilinearSymbol:
    try:
        fa, fb = _PROFILES[a], _PROFILES[b]
    except KeyError as exc:
        raise SymbolError(f"unknown profile {exc.args[0]!r}; known: {sorted(_PROFILES)}") from None
    return BilinearSymbol(
        n=n,
        evaluator=lambda x1, x2: fa(x1) * fb(x2),
        separable=((fa, fb),),
        name="tensor",
        params={"a": a, "b": b},
    )


CATALOG: dict[str, Callable[..., BilinearSymbol]] = {
    "constant-one": _constant_one,
    "coifman-meyer": _coifman_meyer,
    "homogeneous-angular": _homogeneous_angular,
    "vanish-at-xi2-zero": _vanish_xi2,
    "vanish-on-antidiagonal": _vanish_antidiagonal,
    "random-bandlimited": _random_bandlimited,
    "tensor": _tensor,
}


def symbol_library(name: str, n: int = 1, *args, **params) -> BilinearSymbol:
    """Look up a catalog symbol by name."""
    try:
        factory = CATALOG[name]
    except KeyError:
        raise SymbolError(f"unknown symbol {name!r}; known: {sorted(CATALOG)}") from None
    if n not in (1, 2):
        raise SymbolError("symbols are defined for n = 1 or 2")
    return factory(n, *args, **params)


_CALL = re.compile(r"^\s*([A-Za-z][\w-]*)\s*(?:\((.*)\))?\s*$")


def _literal(text: str):
    try:
        return ast.literal_eval(text)
    except (ValueError, SyntaxError):
        return text.strip()


def parse_symbol(spec: str, n: int = 1) -> BilinearSymbol:
    """Parse ``name(param=value, ...)`` or ``tensor(gauss,gauss)`` into a catalog symbol."""
    match = _CALL.match(spec)
    if not match:
        raise SymbolError(f"cannot parse symbol reference {spec!r}")
    name, body = match.group(1), match.group(2)
    args, kwargs = [], {}
    if body and body.strip():
        for part in body.split(","):
            if "=" in part:
                key, value = part.split("=", 1)
                kwargs[key.strip()] = _literal(value)
            else:
                args.append(_literal(part))
    return symbol_library(name, n, *args, **kwargs)
