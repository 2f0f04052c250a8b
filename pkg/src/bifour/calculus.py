"""Linear operators on lattice fields.

Multipliers act by pointwise multiplication of the centered spectrum, so a
symbol table is always laid out like ``Lattice.frequencies()``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import PreconditionError, RangeError, SymbolError
from .lattice import Field, Lattice, Spectrum, forward_array, inverse_array, spectral_transform

__all__ = [
    "LinearSymbol",
    "PeakKernelSpec",
    "TimeScaleField",
    "japanese",
    "bessel_apply",
    "multiplier_apply",
    "riesz_symbol",
    "riesz_transform",
    "pseudodiff_apply",
    "dyadic_radii",
    "hl_maximal",
    "zeta_kernel",
    "zeta_convolve",
    "nontangential_max",
    "periodic_convolve",
]


def japanese(x: np.ndarray) -> np.ndarray:
    """``<x> = (1 + |x|^2)^(1/2)`` over the last axis."""
    return np.sqrt(1.0 + np.sum(np.asarray(x) ** 2, axis=-1))


@dataclass(frozen=True)
class LinearSymbol:
    """A Fourier multiplier given by a closed-form evaluator or a sampled table.

    ``evaluator`` receives frequencies of shape ``(..., n)``; ``table`` is laid
    out on a lattice frequency grid.  ``origin`` overrides the value at xi = 0.
    """

    evaluator: Callable[[np.ndarray], np.ndarray] | None = None
    table: np.ndarray | None = None
    origin: complex | None = None

    def on_grid(self, lat: Lattice) -> np.ndarray:
        if self.table is not None:
            table = np.asarray(self.table, dtype=np.complex128)
            if table.shape != lat.shape:
                raise SymbolError("sampled symbol does not match the lattice grid")
            values = table.copy()
        elif self.evaluator is not None:
            with np.errstate(divide="ignore", invalid="ignore"):
                values = np.asarray(self.evaluator(lat.frequencies()), dtype=np.complex128)
            values = np.broadcast_to(values, lat.shape).copy()
        else:
            raise SymbolError("symbol has neither evaluator nor table")
        if self.origin is not None:
            values[lat.origin_index()] = self.origin
        if not np.all(np.isfinite(values)):
            raise SymbolError("symbol undefined at a grid point")
        return values


def _as_symbol(sigma) -> LinearSymbol:
    if isinstance(sigma, LinearSymbol):
        return sigma
    if callable(sigma):
        return LinearSymbol(evaluator=sigma)
    return LinearSymbol(table=np.asarray(sigma))


def multiplier_apply(f: Field, sigma) -> Field:
    """``sigma(D) f``: multiply the spectrum of ``f`` by ``sigma`` on the grid."""
    table = _as_symbol(sigma).on_grid(f.lattice)
    fhat = spectral_transform(f)
    return spectral_transform(Spectrum(f.lattice, fhat.coeffs * table))


def bessel_apply(f: Field, s: float) -> Field:
    """Bessel potential ``<D>^s f``."""
    lat = f.lattice
    weight = japanese(lat.frequencies()) ** s
    return spectral_transform(Spectrum(lat, spectral_transform(f).coeffs * weight))


def apply_along(values: np.ndarray, lat: Lattice, axes, weight: np.ndarray) -> np.ndarray:
    """Apply a multiplier (laid out on ``lat.frequencies()``) along ``axes`` of an array."""
    coeffs = forward_array(values, lat, axes)
    shape = [1] * values.ndim
    for ax, size in zip(axes, weight.shape):
        shape[ax] = size
    return inverse_array(coeffs * weight.reshape(shape), lat, axes)


def riesz_symbol(lat: Lattice, k: int) -> np.ndarray:
    """Table of ``-i xi_k / |xi|`` with the zero mode set to 0."""
    if not 1 <= k <= lat.n:
        raise RangeError(f"Riesz axis must be in 1..{lat.n}, got {k}")
    xi = lat.frequencies()
    r = np.sqrt(np.sum(xi**2, axis=-1))
    out = np.zeros(lat.shape, dtype=np.complex128)
    nz = r > 0
    out[nz] = -1j * xi[..., k - 1][nz] / r[nz]
    return out


def riesz_transform(f: Field, k: int) -> Field:
    return multiplier_apply(f, LinearSymbol(table=riesz_symbol(f.lattice, k)))


def pseudodiff_apply(f: Field, sigma: Callable[[np.ndarray, np.ndarray], np.ndarray]) -> Field:
    """``sigma(X, D) f`` by direct summation over the frequency grid.

    ``sigma`` receives ``x`` of shape ``(P, 1, n)`` and ``xi`` of shape
    ``(1, P, n)`` with ``P = N^n`` and must broadcast to ``(P, P)``.
    """
    lat = f.lattice
    x = lat.points().reshape(-1, lat.n)
    xi = lat.frequencies().reshape(-1, lat.n)
    fhat = spectral_transform(f).coeffs.reshape(-1)
    table = np.broadcast_to(
        np.asarray(sigma(x[:, None, :], xi[None, :, :]), dtype=np.complex128),
        (len(x), len(xi)),
    )
    phase = np.exp(1j * (x @ xi.T))
    out = (phase * table) @ fhat
    out *= lat.freq_weight / (2 * np.pi) ** lat.n
    return Field(lat, out.reshape(lat.shape))


# --- convolution-type operators ----------------------------------------------


def periodic_convolve(kernel: np.ndarray, values: np.ndarray, lat: Lattice) -> np.ndarray:
    """``(k * f)(x) = h^n sum_y k(x - y) f(y)`` for a kernel sampled on centered points."""
    axes = tuple(range(lat.n))
    k0 = np.fft.ifftshift(kernel, axes=axes)
    f0 = np.fft.ifftshift(values, axes=axes)
    out = np.fft.ifftn(np.fft.fftn(k0, axes=axes) * np.fft.fftn(f0, axes=axes), axes=axes)
    return np.fft.fftshift(out, axes=axes) * lat.space_weight


def dyadic_radii(lat: Lattice) -> list[float]:
    """``h, 2h, 4h, ..., L/2``."""
    return [lat.h * 2**i for i in range(int(np.log2(lat.N)))]


def _ball_average(values: np.ndarray, lat: Lattice, r: float) -> np.ndarray:
    mask = (lat.abs_points() < r - 1e-12 * lat.h).astype(float)
    return np.real(periodic_convolve(mask, values, lat)) / r**lat.n


def hl_maximal(f: Field) -> Field:
    """Hardy-Littlewood maximal function over the dyadic radii ``h .. L/2``."""
    lat = f.lattice
    a = np.abs(f.values)
    out = np.zeros(lat.shape)
    for r in dyadic_radii(lat):
        out = np.maximum(out, _ball_average(a, lat, r))
    return Field(lat, out)


@dataclass(frozen=True)
class PeakKernelSpec:
    """``zeta_j(x) = 2^(jn) (1 + 2^j |x|)^(-2s)``."""

    j: int
    s: float

    def __post_init__(self):
        if self.s < 0:
            raise PreconditionError("decay exponent must be nonnegative")


def zeta_kernel(lat: Lattice, spec: PeakKernelSpec) -> np.ndarray:
    if abs(spec.j) > np.log2(lat.N) / 2:
        raise RangeError(f"|j| must be <= log2(N)/2 = {np.log2(lat.N) / 2}, got {spec.j}")
    scale = 2.0**spec.j
    return scale**lat.n * (1.0 + scale * lat.abs_points()) ** (-2.0 * spec.s)


def zeta_convolve(f: Field, spec: PeakKernelSpec) -> Field:
    """Periodic convolution ``zeta_j * f``."""
    lat = f.lattice
    return Field(lat, periodic_convolve(zeta_kernel(lat, spec), f.values, lat))


@dataclass(frozen=True)
class TimeScaleField:
    """Samples ``F(y, t)`` at a strictly decreasing list of scales ``t``."""

    lattice: Lattice
    scales: tuple[float, ...]
    fields: tuple[np.ndarray, ...]

    def __post_init__(self):
        if len(self.scales) == 0:
            raise PreconditionError("need at least one scale")
        if len(self.scales) != len(self.fields):
            raise PreconditionError("one field per scale")
        if any(b >= a for a, b in zip(self.scales, self.scales[1:])):
            raise PreconditionError("scale list must be strictly decreasing")

    @classmethod
    def from_fields(cls, scales: Sequence[float], fields: Sequence[Field]) -> "TimeScaleField":
        lat = fields[0].lattice
        return cls(lat, tuple(float(t) for t in scales), tuple(np.asarray(f.values) for f in fields))


def _ball_offsets(lat: Lattice, t: float) -> np.ndarray:
    """Index offsets of lattice points at periodic distance < t from the origin."""
    pts = lat.abs_points()
    idx = np.argwhere(pts < t)
    return idx - np.array(lat.origin_index())


def nontangential_max(F: TimeScaleField) -> Field:
    """``F*(x) = max_t max_{|x - y| < t} |F(y, t)|`` with periodic distance."""
    lat = F.lattice
    out = np.zeros(lat.shape)
    axes = tuple(range(lat.n))
    for t, values in zip(F.scales, F.fields):
        a = np.abs(np.asarray(values).reshape(lat.shape))
        for off in _ball_offsets(lat, t):
            out = np.maximum(out, np.roll(a, tuple(int(o) for o in off), axis=axes))
    return Field(lat, out)
