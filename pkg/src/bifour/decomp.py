"""Constructive decompositions: vanishing-moment dyadic pieces and the Riesz split.

``vanishing_decompose`` writes a function with ``f(0) = 0`` as a sum of
pieces with dyadic frequency support, each again vanishing at the origin.
``fs_split`` writes ``g = g_0 + sum_k R_k g_k`` with Riesz transforms ``R_k``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .calculus import riesz_symbol, riesz_transform
from .errors import BifourError, PreconditionError, RangeError
from .lattice import Field, Lattice, Spectrum, read_field, spectral_transform, write_field
from .norms import bmo_norm, lp_norm, sobolev_norm
from .symbols import WindowFamily, make_window_family, resolvable_k

__all__ = [
    "annular_bump",
    "VanishingDecomposition",
    "vanishing_decompose",
    "FSSplit",
    "fs_split",
    "homogeneous_product_sobolev_check",
    "write_decomposition",
    "read_decomposition",
]


def annular_bump(r) -> np.ndarray:
    """C^3 radial bump ``(4 (r - 1)(2 - r))^4`` on ``1 <= r <= 2``, zero elsewhere."""
    r = np.asarray(r, dtype=float)
    inside = (r > 1.0) & (r < 2.0)
    return np.where(inside, (4.0 * (r - 1.0) * (2.0 - r)) ** 4, 0.0)


@dataclass(frozen=True)
class VanishingDecomposition:
    """Pieces ``g_0 .. g_K`` with ``sum g_k = f`` and zero transform mass each."""

    source: Field
    pieces: tuple[Field, ...]
    spectra: tuple[Spectrum, ...]
    s: float
    coefficients: tuple[complex, ...]

    @property
    def K(self) -> int:
        return len(self.pieces) - 1

    def reconstruct(self) -> Field:
        lat = self.source.lattice
        return Field(lat, np.sum([g.values for g in self.pieces], axis=0))

    def decay(self) -> tuple[float, ...]:
        """``||g_k||_{L^2} 2^(k s)`` per level."""
        return tuple(lp_norm(g, 2) * 2.0 ** (k * self.s) for k, g in enumerate(self.pieces))

    def decay_constant(self) -> float:
        """``max_k ||g_k||_{L^2} 2^(k s) / ||f||_{W^s}``."""
        denom = sobolev_norm(self.source, self.s)
        return max(self.decay()) / denom if denom > 0 else 0.0


def vanishing_decompose(
    f: Field,
    s: float,
    K: int | None = None,
    w: WindowFamily | None = None,
    tol: float = 1e-10,
) -> VanishingDecomposition:
    """Telescoping dyadic decomposition of ``f`` with ``f(0) = 0``.

    With ``a_k = int psi_k f_hat`` and ``A_k = a_0 + ... + a_k``, the pieces are
    ``g_0_hat = psi_0 f_hat - A_0 theta_0`` and
    ``g_k_hat = psi_k f_hat + A_{k-1} theta_{k-1} - A_k theta_k``, where
    ``theta_k`` is an annular bump on ``2^k <= |xi| <= 2^(k+1)`` with unit
    lattice integral.  The last level drops ``A_K theta_K`` when that bump has
    no grid support (then ``A_K`` is the vanishing total mass).

    Raises
    ------
    PreconditionError
        If ``s <= n/2`` or the transform mass of ``f`` is not zero.
    RangeError
        If a bump ``theta_k``, ``k < K``, has no grid support (insufficient resolution).
    """
    lat = f.lattice
    if s <= lat.n / 2:
        raise PreconditionError(f"need s > n/2, got s = {s}")
    w = w or make_window_family()
    Kmax = resolvable_k(lat)
    K = Kmax if K is None else int(K)
    if not 0 <= K <= Kmax:
        raise RangeError(f"K must lie in [0, {Kmax}]")
    spec = spectral_transform(f)
    fhat = spec.coeffs
    scale = lat.freq_weight * float(np.sum(np.abs(fhat)))
    if abs(spec.total_mass()) > tol * max(scale, 1e-300):
        raise PreconditionError("total transform mass must vanish (f(0) = 0)")
    xi = lat.frequencies()
    r = lat.abs_frequencies()
    psis = [w.psi(xi, k) for k in range(K + 1)]
    # with K below the resolvable level, the last window absorbs the tail
    psis[K] = 1.0 - sum(psis[:K]) if K > 0 else np.ones(lat.shape)
    thetas = []
    for k in range(K + 1):
        bump = annular_bump(r / 2.0**k)
        mass = lat.freq_weight * bump.sum()
        if mass <= 0:
            if k < K:
                raise RangeError(f"annulus {2**k} <= |xi| <= {2**(k + 1)} has no grid points; refine the lattice")
            thetas.append(None)
        else:
            thetas.append(bump / mass)
    a = [complex(lat.freq_weight * np.sum(p * fhat)) for p in psis]
    A = np.cumsum(a)
    spectra = []
    for k in range(K + 1):
        ghat = psis[k] * fhat
        if k > 0:
            ghat = ghat + A[k - 1] * thetas[k - 1]
        if thetas[k] is not None:
            ghat = ghat - A[k] * thetas[k]
        spectra.append(Spectrum(lat, ghat))
    pieces = tuple(spectral_transform(g) for g in spectra)
    return VanishingDecomposition(f, pieces, tuple(spectra), float(s), tuple(a))


@dataclass(frozen=True)
class FSSplit:
    """``g = g_0 + sum_k R_k(g_k)``."""

    source: Field
    g0: Field
    components: tuple[Field, ...]

    def reconstruct(self) -> Field:
        out = self.g0.values.copy()
        for k, gk in enumerate(self.components, start=1):
            out = out + riesz_transform(gk, k).values
        return Field(self.g0.lattice, out)

    def linf_sum(self) -> float:
        """``sum_k ||g_k||_inf`` over ``k = 0 .. n``."""
        return lp_norm(self.g0, math.inf) + sum(lp_norm(g, math.inf) for g in self.components)

    def bmo_ratio(self) -> float:
        """Diagnostic ``sum_k ||g_k||_inf / ||g||_BMO``; not bounded by construction."""
        b = bmo_norm(self.source)
        return self.linf_sum() / b if b > 0 else (0.0 if self.linf_sum() == 0 else math.inf)


def _unpaired_mask(lat: Lattice) -> np.ndarray:
    """Frequencies whose negatives fall off the grid (some component at -N/2), plus zero."""
    idx = np.indices(lat.shape)
    mask = np.any(idx == 0, axis=0)
    mask[lat.origin_index()] = True
    return mask


def fs_split(g: Field) -> FSSplit:
    """Split ``g`` as ``g_0 + sum_k R_k g_k`` with ``g_k = -R_k(g - g_0)``.

    ``g_0`` keeps the mean and the Nyquist modes that have no mirror on the
    grid; on the remaining modes ``sum_k R_k^2 = -1`` reconstructs exactly and
    every ``g_k`` is real whenever ``g`` is.
    """
    lat = g.lattice
    ghat = spectral_transform(g).coeffs
    keep = _unpaired_mask(lat)
    g0 = spectral_transform(Spectrum(lat, np.where(keep, ghat, 0.0)))
    rest_hat = np.where(keep, 0.0, ghat)
    real = bool(np.all(g.values.imag == 0))
    comps = []
    for k in range(1, lat.n + 1):
        comp = spectral_transform(Spectrum(lat, -riesz_symbol(lat, k) * rest_hat))
        comps.append(Field(lat, comp.values.real) if real else comp)
    if real:
        g0 = Field(lat, g0.values.real)
    return FSSplit(g, g0, tuple(comps))


def homogeneous_product_sobolev_check(
    sigma: Callable[[np.ndarray], np.ndarray],
    f: Field,
    s: float,
    s_tilde: float,
    radius: float = 2.0,
    tol: float = 1e-10,
) -> tuple[float, float]:
    """``(||sigma f||_{W^s_tilde}, ||f||_{W^s})`` for a degree-0 homogeneous ``sigma``.

    ``sigma`` is evaluated at the lattice points (shape ``(..., n)``); its value
    at the origin is replaced by 0.  ``f`` must vanish at the origin and
    outside the ball of ``radius``.
    """
    lat = f.lattice
    n = lat.n
    if s <= n / 2:
        raise PreconditionError("need s > n/2")
    if not 0 <= s_tilde < min(s, n // 2 + 1):
        raise PreconditionError("need 0 <= s_tilde < min(s, [n/2] + 1)")
    vals = np.asarray(f.values)
    scale = float(np.max(np.abs(vals))) if vals.size else 0.0
    if scale == 0:
        return 0.0, 0.0
    if abs(f.at_origin()) > tol * scale:
        raise PreconditionError("f must vanish at the origin")
    if np.any(np.abs(vals[lat.abs_points() > radius]) > tol * scale):
        raise PreconditionError(f"f must be supported in |x| <= {radius}")
    with np.errstate(divide="ignore", invalid="ignore"):
        table = np.asarray(sigma(lat.points()), dtype=np.complex128)
    table = np.broadcast_to(table, lat.shape).copy()
    table[lat.origin_index()] = 0.0
    if not np.all(np.isfinite(table)):
        raise PreconditionError("sigma must be finite away from the origin")
    return sobolev_norm(Field(lat, table * vals), s_tilde), sobolev_norm(f, s)


# --- persistence --------------------------------------------------------------


def write_decomposition(pieces: Sequence[Field], directory) -> list[Path]:
    """Write pieces as ``piece_000.txt``, ``piece_001.txt``, ... in ``directory``."""
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    paths = []
    for k, piece in enumerate(pieces):
        path = d / f"piece_{k:03d}.txt"
        write_field(piece, path)
        paths.append(path)
    return paths


def read_decomposition(directory) -> list[Field]:
    paths = sorted(Path(directory).glob("piece_*.txt"))
    if not paths:
        raise BifourError(f"{directory}: no piece files")
    return [read_field(p) for p in paths]
