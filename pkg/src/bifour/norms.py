"""Norms on lattice fields and on sampled bilinear symbols.

Space-side norms use the quadrature weight ``h^n`` and frequency-side norms
use ``(2 pi / L)^n``.  For a :class:`~bifour.lattice.ProductField` holding a
symbol, the lattice space grid carries ``(xi1, xi2)`` and the Bessel
potentials act in the dual variables ``(y1, y2)``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .calculus import apply_along, dyadic_radii, japanese, periodic_convolve, zeta_kernel, PeakKernelSpec
from .errors import PreconditionError, RangeError
from .lattice import Field, Lattice, ProductField, Spectrum, forward_array, spectral_transform
from .symbols import (
    BilinearSymbol,
    WindowFamily,
    dyadic_piece,
    make_window_family,
    resolvable_k,
)

__all__ = [
    "FLAVORS",
    "SmoothnessParams",
    "lp_norm",
    "mixed_lp",
    "sobolev_norm",
    "product_sobolev",
    "mixed_sobolev",
    "bessel_product",
    "besov_product",
    "band_restricted_norm",
    "bmo_norm",
    "gaussian_profile",
    "hardy1_norm",
    "CarlesonMeasure",
    "carleson_constant",
    "carleson_from_bmo",
    "sup_dyadic_norm",
    "symbol_norm",
    "norm_record",
    "append_jsonl",
]

FLAVORS = ("product", "mixed-1", "mixed-2", "besov-1", "besov-2")


@dataclass(frozen=True)
class SmoothnessParams:
    """Smoothness pair ``(s1, s2)`` and the norm flavor it is used with."""

    s1: float
    s2: float
    flavor: str = "mixed-2"

    def __post_init__(self):
        if not (math.isfinite(self.s1) and math.isfinite(self.s2)):
            raise PreconditionError("smoothness exponents must be finite")
        if self.flavor not in FLAVORS:
            raise PreconditionError(f"flavor must be one of {FLAVORS}, got {self.flavor!r}")

    @property
    def slot(self) -> int | None:
        """Inner-L^2 partner index for mixed and Besov flavors."""
        return None if self.flavor == "product" else int(self.flavor[-1])


# --- scalar fields ------------------------------------------------------------


def _check_p(p: float) -> None:
    if not (p >= 1):
        raise RangeError(f"exponent must lie in [1, inf], got {p}")


def _weighted_lp(a: np.ndarray, p: float, weight: float, axis=None) -> np.ndarray:
    a = np.abs(a)
    if math.isinf(p):
        return np.max(a, axis=axis)
    return (weight * np.sum(a**p, axis=axis)) ** (1.0 / p)


def lp_norm(f: Field | Spectrum, p: float) -> float:
    """Quadrature ``L^p`` norm; a Spectrum is weighted by the frequency step."""
    _check_p(p)
    lat = f.lattice
    if isinstance(f, Spectrum):
        return float(_weighted_lp(f.coeffs, p, lat.freq_weight))
    return float(_weighted_lp(f.values, p, lat.space_weight))


def mixed_lp(F: ProductField, p1: float, p2: float, order: str = "inner-xi1") -> float:
    """Iterated norm ``|| ||F||_{L^p1} ||_{L^p2}``: ``p1`` inner, ``p2`` outer.

    ``order`` names the variable integrated first (with ``p1``); the
    remaining variable carries ``p2``.
    """
    _check_p(p1)
    _check_p(p2)
    lat = F.lattice
    n = lat.n
    ax1 = tuple(range(n))
    ax2 = tuple(range(n, 2 * n))
    w = lat.space_weight
    if order == "inner-xi1":
        inner = _weighted_lp(F.values, p1, w, axis=ax1)
        return float(_weighted_lp(inner, p2, w))
    if order == "inner-xi2":
        inner = _weighted_lp(F.values, p1, w, axis=ax2)
        return float(_weighted_lp(inner, p2, w))
    raise PreconditionError("order must be 'inner-xi1' or 'inner-xi2'")


def sobolev_norm(f: Field, s: float) -> float:
    """``||<xi>^s f_hat||_{L^2}`` on the frequency grid."""
    lat = f.lattice
    fhat = spectral_transform(f).coeffs
    weight = japanese(lat.frequencies()) ** s
    return float(np.sqrt(lat.freq_weight * np.sum(np.abs(weight * fhat) ** 2)))


# --- symbol norms -------------------------------------------------------------


def product_sobolev(m: ProductField, s1: float, s2: float) -> float:
    """``||<y1>^s1 <y2>^s2 m_hat(y1, y2)||_{L^2}`` with the full product transform."""
    lat = m.lattice
    n = lat.n
    mhat = forward_array(m.values, lat, tuple(range(2 * n)))
    jy = japanese(lat.frequencies())
    w1 = (jy**s1).reshape(lat.shape + (1,) * n)
    w2 = (jy**s2).reshape((1,) * n + lat.shape)
    return float(np.sqrt(lat.freq_weight**2 * np.sum(np.abs(w1 * w2 * mhat) ** 2)))


def bessel_product(m: ProductField, s1: float, s2: float) -> np.ndarray:
    """``<D_xi1>^s1 <D_xi2>^s2 m`` as an array on the product grid."""
    lat = m.lattice
    n = lat.n
    jy = japanese(lat.frequencies())
    out = m.values
    if s1 != 0:
        out = apply_along(out, lat, tuple(range(n)), jy**s1)
    if s2 != 0:
        out = apply_along(out, lat, tuple(range(n, 2 * n)), jy**s2)
    return np.asarray(out)


def _inf_of_l2(values: np.ndarray, lat: Lattice, i: int) -> float:
    """L^2 in xi1 (i = 1) or xi2 (i = 2), then max over the other variable."""
    n = lat.n
    if i not in (1, 2):
        raise PreconditionError("slot index must be 1 or 2")
    inner_axes = tuple(range(n)) if i == 1 else tuple(range(n, 2 * n))
    inner = np.sqrt(lat.space_weight * np.sum(np.abs(values) ** 2, axis=inner_axes))
    return float(np.max(inner))


def mixed_sobolev(m: ProductField, s1: float, s2: float, i: int = 2) -> float:
    """``|| || <D_xi1>^s1 <D_xi2>^s2 m ||_{L^2} ||_{L^inf}``.

    The inner ``L^2`` runs over ``xi1`` when ``i = 1`` and over ``xi2`` when
    ``i = 2``; the outer maximum runs over the remaining variable.
    """
    return _inf_of_l2(bessel_product(m, s1, s2), m.lattice, i)


def _lp_multipliers(lat: Lattice, w: WindowFamily, K: int) -> list[np.ndarray]:
    y = lat.frequencies()
    return [w.psi(y, k) for k in range(K + 1)]


def besov_product(
    m: ProductField, s1: float, s2: float, i: int = 2, w: WindowFamily | None = None, kmax: int | None = None
) -> float:
    """``sup_k 2^(k1 s1 + k2 s2) || || Delta_k m ||_{L^2} ||_{L^inf}`` over the resolvable range."""
    w = w or make_window_family()
    lat = m.lattice
    n = lat.n
    K = resolvable_k(lat) if kmax is None else kmax
    if K < 0:
        raise RangeError("empty dyadic range")
    psis = _lp_multipliers(lat, w, K)
    ax1, ax2 = tuple(range(n)), tuple(range(n, 2 * n))
    best = 0.0
    for k1 in range(K + 1):
        partial = apply_along(m.values, lat, ax1, psis[k1])
        for k2 in range(K + 1):
            piece = apply_along(partial, lat, ax2, psis[k2])
            best = max(best, 2.0 ** (k1 * s1 + k2 * s2) * _inf_of_l2(piece, lat, i))
    return best


def band_restricted_norm(m: ProductField, s1: float, s2: float, w: WindowFamily | None = None) -> float:
    """``sup_k1 2^(k1 s1) || || psi_k1(D_xi1) <D_xi2>^s2 m ||_{L^2_xi2} ||_{L^inf_xi1}``."""
    w = w or make_window_family()
    lat = m.lattice
    n = lat.n
    smoothed = bessel_product(m, 0.0, s2)
    best = 0.0
    for k1, psi in enumerate(_lp_multipliers(lat, w, resolvable_k(lat))):
        piece = apply_along(smoothed, lat, tuple(range(n)), psi)
        best = max(best, 2.0 ** (k1 * s1) * _inf_of_l2(piece, lat, 2))
    return best


# --- BMO and H^1 --------------------------------------------------------------


def _cube_windows(lat: Lattice, side: int, starts: np.ndarray) -> np.ndarray:
    """Flat indices of the cubes of ``side`` points starting at each multi-index in ``starts``."""
    n = lat.n
    offsets = np.stack(np.meshgrid(*([np.arange(side)] * n), indexing="ij"), axis=-1).reshape(-1, n)
    idx = (starts[:, None, :] + offsets[None, :, :]) % lat.N
    return np.ravel_multi_index(tuple(idx[..., d] for d in range(n)), lat.shape)


def bmo_norm(f: Field, chunk: int = 1 << 20) -> float:
    """Max mean oscillation over lattice-aligned cubes of side ``L / 2^l`` and all periodic translates."""
    lat = f.lattice
    n = lat.n
    flat = np.asarray(f.values).reshape(-1)
    starts_all = np.stack(np.meshgrid(*([np.arange(lat.N)] * n), indexing="ij"), axis=-1).reshape(-1, n)
    best = 0.0
    side = lat.N
    while side >= 2:
        vol = side**n
        # the whole torus is a single cube; smaller cubes need every translate
        starts = starts_all[:1] if side == lat.N else starts_all
        rows = max(1, chunk // vol)
        for a in range(0, len(starts), rows):
            idx = _cube_windows(lat, side, starts[a : a + rows])
            vals = flat[idx]
            osc = np.mean(np.abs(vals - vals.mean(axis=1, keepdims=True)), axis=1)
            best = max(best, float(osc.max()))
        side //= 2
    return best


def gaussian_profile(x: np.ndarray) -> np.ndarray:
    """Unit-mass Gaussian ``pi^(-n/2) exp(-|x|^2)``."""
    x = np.asarray(x, dtype=float)
    n = x.shape[-1]
    return np.pi ** (-n / 2) * np.exp(-np.sum(x**2, axis=-1))


def hardy1_norm(f: Field, phi: Callable[[np.ndarray], np.ndarray] | None = None) -> float:
    """``|| sup_t |phi_t * f| ||_{L^1}`` with ``phi_t = t^-n phi(./t)`` over the dyadic radii.

    ``phi`` is a profile evaluated at points of shape ``(..., n)``; its
    lattice mass must not vanish.
    """
    lat = f.lattice
    phi = phi or gaussian_profile
    pts = lat.points()
    base = np.asarray(phi(pts), dtype=np.complex128)
    mass = lat.space_weight * base.sum()
    if abs(mass) <= 1e-12 * max(lat.space_weight * np.abs(base).sum(), 1e-300):
        raise PreconditionError("the profile phi must have nonzero mean")
    sup = np.zeros(lat.shape)
    for t in dyadic_radii(lat):
        kernel = t ** (-lat.n) * np.asarray(phi(pts / t), dtype=np.complex128)
        sup = np.maximum(sup, np.abs(periodic_convolve(kernel, f.values, lat)))
    return float(lat.space_weight * sup.sum())


# --- Carleson measures --------------------------------------------------------


@dataclass(frozen=True)
class CarlesonMeasure:
    """Finite atomic measure on the upper half space over ``lattice``.

    Atom ``a`` sits at ``points[a]`` (shape ``(A, n)``) and height
    ``scales[a]`` with mass ``masses[a] >= 0``.
    """

    lattice: Lattice
    points: np.ndarray
    scales: np.ndarray
    masses: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float).reshape(-1, self.lattice.n)
        scales = np.asarray(self.scales, dtype=float).reshape(-1)
        masses = np.asarray(self.masses, dtype=float).reshape(-1)
        if not (len(pts) == len(scales) == len(masses)):
            raise PreconditionError("points, scales and masses must have equal length")
        if np.any(masses < 0):
            raise PreconditionError("masses must be nonnegative")
        if np.any(scales <= 0):
            raise PreconditionError("scales must be positive")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "scales", scales)
        object.__setattr__(self, "masses", masses)

    @classmethod
    def empty(cls, lattice: Lattice) -> "CarlesonMeasure":
        return cls(lattice, np.zeros((0, lattice.n)), np.zeros(0), np.zeros(0))


def carleson_constant(mu: CarlesonMeasure) -> float:
    """``max_Q mu(Q x (0, side(Q))) / |Q|`` over the dyadic cubes of the lattice.

    Cubes have sides ``L / 2^l`` (``l = 0 .. log2 N``) and start at multiples
    of the side measured from ``-L/2``.
    """
    lat = mu.lattice
    if len(mu.masses) == 0:
        return 0.0
    idx = (np.rint(mu.points / lat.h).astype(np.int64) + lat.N // 2) % lat.N
    best = 0.0
    side = lat.N
    while side >= 1:
        length = side * lat.h
        keep = mu.scales < length
        if np.any(keep):
            cells = idx[keep] // side
            per_axis = lat.N // side
            flat = np.ravel_multi_index(tuple(cells.T), (per_axis,) * lat.n)
            totals = np.bincount(flat, weights=mu.masses[keep], minlength=per_axis**lat.n)
            best = max(best, float(totals.max()) / length**lat.n)
        side //= 2
    return best


def carleson_from_bmo(
    b: Field,
    jrange: Sequence[int] | None = None,
    s: float | None = None,
    w: WindowFamily | None = None,
) -> CarlesonMeasure:
    """Atoms ``(zeta_j * |psi(2^-j D) b|^2)(x) h^n`` at height ``2^-j`` for every lattice point.

    ``psi`` is the annular window (vanishing at the origin) and ``zeta_j``
    uses the exponent ``2s = n + 1`` unless ``s`` is given.
    """
    lat = b.lattice
    w = w or make_window_family()
    s = (lat.n + 1.0) / 2.0 if s is None else s
    if jrange is None:
        jmax = int(math.floor(math.log2(lat.N) / 2))
        jrange = [j for j in range(-jmax, jmax + 1) if 2.0 ** (-j) <= lat.L]
    fhat = spectral_transform(b).coeffs
    xi = lat.frequencies()
    pts = lat.points().reshape(-1, lat.n)
    all_pts, all_scales, all_masses = [], [], []
    for j in jrange:
        band = spectral_transform(Spectrum(lat, fhat * w.Psi(xi / 2.0**j))).values
        density = np.real(periodic_convolve(zeta_kernel(lat, PeakKernelSpec(j, s)), np.abs(band) ** 2, lat))
        all_pts.append(pts)
        all_scales.append(np.full(len(pts), 2.0 ** (-j)))
        all_masses.append(np.maximum(density.reshape(-1), 0.0) * lat.space_weight)
    return CarlesonMeasure(lat, np.concatenate(all_pts), np.concatenate(all_scales), np.concatenate(all_masses))


# --- suprema over dyadic pieces -----------------------------------------------


def symbol_norm(piece: ProductField, params: SmoothnessParams, w: WindowFamily | None = None) -> float:
    """Norm of a sampled symbol selected by ``params.flavor``."""
    if params.flavor == "product":
        return product_sobolev(piece, params.s1, params.s2)
    if params.flavor.startswith("mixed"):
        return mixed_sobolev(piece, params.s1, params.s2, params.slot)
    return besov_product(piece, params.s1, params.s2, params.slot, w)


def sup_dyadic_norm(
    m: BilinearSymbol,
    params: SmoothnessParams,
    jrange: Sequence[int] = (-4, 4),
    w: WindowFamily | None = None,
    lattice: Lattice | None = None,
) -> float:
    """``max_{jmin <= j <= jmax} || m_j ||`` in the norm selected by ``params``."""
    jmin, jmax = int(jrange[0]), int(jrange[1])
    if jmax < jmin:
        raise RangeError("empty j-range")
    w = w or make_window_family()
    return max(symbol_norm(dyadic_piece(m, j, w, lattice), params, w) for j in range(jmin, jmax + 1))


# --- run logs -----------------------------------------------------------------


def norm_record(check: str, norm: str, params: dict, value: float, lattice: Lattice) -> dict:
    """JSON-lines record ``{check, norm, params, value, lattice}``."""
    return {
        "check": check,
        "norm": norm,
        "params": params,
        "value": float(value),
        "lattice": {"n": lattice.n, "N": lattice.N, "L": lattice.L},
    }


def append_jsonl(path, record: dict) -> None:
    with open(path, "a", encoding="utf-8") as fh:
        fh.write(json.dumps(record, sort_keys=True) + "\n")
