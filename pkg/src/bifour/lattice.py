"""Periodic lattice model of R^n and its spectral transforms.

Space points and frequencies are both stored in centered order: index ``k``
along an axis corresponds to ``(k - N/2) * h`` in space and
``(k - N/2) * 2*pi/L`` in frequency.

The forward transform is the quadrature

    f_hat(xi) = h^n * sum_x exp(-i x.xi) f(x)

and the inverse is ``(2 pi)^-n * (2 pi / L)^n * sum_xi exp(i x.xi) f_hat(xi)``,
so discrete values approximate the continuum Fourier integrals and
Plancherel reads ``||f||^2 = (2 pi)^-n ||f_hat||^2``.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import (
    BifourError,
    InvalidDimensionError,
    InvalidSizeError,
    LatticeMismatchError,
    NonpositivePeriodError,
)

__all__ = [
    "Lattice",
    "Field",
    "Spectrum",
    "ProductField",
    "make_lattice",
    "spectral_transform",
    "frequency_grid",
    "write_field",
    "read_field",
    "random_bandlimited",
]


@dataclass(frozen=True)
class Lattice:
    """Discrete torus of period ``L`` with ``N`` points per axis in dimension ``n``."""

    n: int
    N: int
    L: float

    @property
    def h(self) -> float:
        return self.L / self.N

    @property
    def dxi(self) -> float:
        return 2.0 * np.pi / self.L

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.N,) * self.n

    @property
    def size(self) -> int:
        return self.N**self.n

    @property
    def space_weight(self) -> float:
        return self.h**self.n

    @property
    def freq_weight(self) -> float:
        return self.dxi**self.n

    def axis_points(self) -> np.ndarray:
        return (np.arange(self.N) - self.N // 2) * self.h

    def axis_frequencies(self) -> np.ndarray:
        return (np.arange(self.N) - self.N // 2) * self.dxi

    def points(self) -> np.ndarray:
        """Space grid as an array of shape ``shape + (n,)``."""
        return _mesh(self.axis_points(), self.n)

    def frequencies(self) -> np.ndarray:
        """Frequency grid as an array of shape ``shape + (n,)``."""
        return _mesh(self.axis_frequencies(), self.n)

    def abs_points(self) -> np.ndarray:
        """Periodic distance of every grid point to the origin."""
        return np.sqrt(np.sum(self.points() ** 2, axis=-1))

    def abs_frequencies(self) -> np.ndarray:
        return np.sqrt(np.sum(self.frequencies() ** 2, axis=-1))

    def origin_index(self) -> tuple[int, ...]:
        return (self.N // 2,) * self.n

    def max_frequency(self) -> float:
        """Largest |xi| on the frequency grid (corner of the Nyquist box)."""
        return np.sqrt(self.n) * (self.N // 2) * self.dxi


def _mesh(axis: np.ndarray, n: int) -> np.ndarray:
    grids = np.meshgrid(*([axis] * n), indexing="ij")
    return np.stack(grids, axis=-1)


def make_lattice(n: int, N: int, L: float) -> Lattice:
    """Build a lattice after validating ``n in {1, 2}``, ``N = 2^k >= 8`` and ``L > 0``."""
    if n not in (1, 2):
        raise InvalidDimensionError(f"dimension must be 1 or 2, got {n}")
    if int(N) != N or N < 8 or (int(N) & (int(N) - 1)) != 0:
        raise InvalidSizeError(f"N must be a power of two >= 8, got {N}")
    if not np.isfinite(L) or L <= 0:
        raise NonpositivePeriodError(f"period must be positive, got {L}")
    return Lattice(int(n), int(N), float(L))


def _frozen(values: np.ndarray) -> np.ndarray:
    arr = np.array(values, dtype=np.complex128, copy=True)
    arr.setflags(write=False)
    return arr


class _Sampled:
    __slots__ = ("lattice", "_data")

    def __init__(self, lattice: Lattice, data, expected_shape):
        data = np.asarray(data)
        if data.shape != expected_shape:
            if data.size == np.prod(expected_shape):
                data = data.reshape(expected_shape)
            else:
                raise LatticeMismatchError(
                    f"expected {np.prod(expected_shape)} samples, got {data.size}"
                )
        self.lattice = lattice
        self._data = _frozen(data)

    def __setattr__(self, name, value):
        if hasattr(self, "_data"):
            raise AttributeError(f"{type(self).__name__} is immutable")
        object.__setattr__(self, name, value)

    def __repr__(self):
        lat = self.lattice
        return f"{type(self).__name__}(n={lat.n}, N={lat.N}, L={lat.L!r})"

    def _check_same(self, other):
        if type(other) is not type(self):
            return NotImplemented
        if other.lattice != self.lattice:
            raise LatticeMismatchError("operands live on different lattices")
        return other._data

    def __add__(self, other):
        if np.isscalar(other):
            return type(self)(self.lattice, self._data + other)
        data = self._check_same(other)
        if data is NotImplemented:
            return data
        return type(self)(self.lattice, self._data + data)

    __radd__ = __add__

    def __sub__(self, other):
        if np.isscalar(other):
            return type(self)(self.lattice, self._data - other)
        data = self._check_same(other)
        if data is NotImplemented:
            return data
        return type(self)(self.lattice, self._data - data)

    def __neg__(self):
        return type(self)(self.lattice, -self._data)

    def __mul__(self, other):
        if np.isscalar(other):
            return type(self)(self.lattice, self._data * other)
        data = self._check_same(other)
        if data is NotImplemented:
            return data
        return type(self)(self.lattice, self._data * data)

    __rmul__ = __mul__


class Field(_Sampled):
    """Complex samples of a function on the space grid of ``lattice``."""

    def __init__(self, lattice: Lattice, values):
        super().__init__(lattice, values, lattice.shape)

    @property
    def values(self) -> np.ndarray:
        return self._data

    @property
    def real(self) -> np.ndarray:
        return self._data.real

    def at_origin(self) -> complex:
        return complex(self._data[self.lattice.origin_index()])


class Spectrum(_Sampled):
    """Complex samples on the frequency grid of ``lattice``."""

    def __init__(self, lattice: Lattice, coeffs):
        super().__init__(lattice, coeffs, lattice.shape)

    @property
    def coeffs(self) -> np.ndarray:
        return self._data

    def total_mass(self) -> complex:
        """Quadrature of the coefficients, ``(2 pi / L)^n * sum``."""
        return complex(self.lattice.freq_weight * self._data.sum())


class ProductField(_Sampled):
    """Samples over the product grid ``lattice x lattice``.

    The first ``n`` axes carry the first variable.  When the product field
    holds a bilinear symbol, the lattice's space grid plays the role of the
    frequency variables ``(xi1, xi2)`` and its frequency grid the role of the
    dual variables ``(y1, y2)``.
    """

    def __init__(self, lattice: Lattice, values):
        super().__init__(lattice, values, lattice.shape * 2)

    @property
    def values(self) -> np.ndarray:
        return self._data

    @property
    def n(self) -> int:
        return self.lattice.n


def _axes(n: int, offset: int = 0) -> tuple[int, ...]:
    return tuple(range(offset, offset + n))


def forward_array(values: np.ndarray, lattice: Lattice, axes) -> np.ndarray:
    """Centered quadrature transform of ``values`` along ``axes``."""
    h = lattice.h ** len(axes)
    shifted = np.fft.ifftshift(values, axes=axes)
    return h * np.fft.fftshift(np.fft.fftn(shifted, axes=axes), axes=axes)


def inverse_array(coeffs: np.ndarray, lattice: Lattice, axes) -> np.ndarray:
    h = lattice.h ** len(axes)
    shifted = np.fft.ifftshift(coeffs, axes=axes)
    return np.fft.fftshift(np.fft.ifftn(shifted, axes=axes), axes=axes) / h


def spectral_transform(f: Field | Spectrum, direction: str | None = None):
    """Forward transform of a Field or inverse transform of a Spectrum.

    ``direction`` may be given as ``"forward"`` or ``"inverse"``; it must then
    agree with the type of ``f``.
    """
    if isinstance(f, Field):
        if direction not in (None, "forward"):
            raise BifourError("a Field can only be transformed forward")
        lat = f.lattice
        return Spectrum(lat, forward_array(f.values, lat, _axes(lat.n)))
    if isinstance(f, Spectrum):
        if direction not in (None, "inverse"):
            raise BifourError("a Spectrum can only be transformed inverse")
        lat = f.lattice
        return Field(lat, inverse_array(f.coeffs, lat, _axes(lat.n)))
    raise TypeError(f"cannot transform {type(f).__name__}")


def frequency_grid(lat: Lattice) -> np.ndarray:
    """All frequency vectors, shape ``(N^n, n)``, first component slowest."""
    return lat.frequencies().reshape(-1, lat.n)


def random_bandlimited(
    lat: Lattice, radius: float, rng: np.random.Generator, real: bool = False
) -> Field:
    """Random field whose spectrum is supported in ``|xi| <= radius``.

    Coefficients are drawn for the frequency multiples of ``2 pi / L`` inside
    the ball in a fixed order, so the same ``(L, radius, rng state)`` gives
    the same continuum function on every lattice that resolves the ball.
    """
    kmax = int(np.floor(radius / lat.dxi + 1e-12))
    if kmax >= lat.N // 2:
        raise BifourError("radius exceeds the Nyquist extent of the lattice")
    ks = np.arange(-kmax, kmax + 1)
    grid = np.stack(np.meshgrid(*([ks] * lat.n), indexing="ij"), axis=-1)
    grid = grid.reshape(-1, lat.n)
    grid = grid[np.sum((grid * lat.dxi) ** 2, axis=-1) <= radius**2 + 1e-12]
    draws = rng.standard_normal((len(grid), 2))
    coeffs = np.zeros(lat.shape, dtype=np.complex128)
    idx = tuple((grid + lat.N // 2).T)
    coeffs[idx] = draws[:, 0] + 1j * draws[:, 1]
    f = spectral_transform(Spectrum(lat, coeffs)).values
    if real:
        f = f.real
    scale = np.sqrt(np.mean(np.abs(f) ** 2))
    return Field(lat, f / scale if scale > 0 else f)


# --- text serialization -------------------------------------------------------

_DOMAINS = {Field: "space", Spectrum: "freq", ProductField: "product"}


def write_field(obj: Field | Spectrum | ProductField, path) -> None:
    """Write a header ``n,N,L,domain`` then one ``index...,re,im`` line per sample."""
    lat = obj.lattice
    domain = _DOMAINS[type(obj)]
    data = obj._data
    lines = [f"{lat.n},{lat.N},{lat.L!r},{domain}"]
    for index in np.ndindex(data.shape):
        v = data[index]
        idx = ",".join(str(i) for i in index)
        lines.append(f"{idx},{float(v.real)!r},{float(v.imag)!r}")
    Path(path).write_text("\n".join(lines) + "\n")


def read_field(path):
    """Inverse of :func:`write_field`."""
    text = Path(path).read_text().splitlines()
    if not text:
        raise BifourError(f"{path}: empty file")
    head = text[0].split(",")
    if len(head) != 4:
        raise BifourError(f"{path}: malformed header {text[0]!r}")
    lat = make_lattice(int(head[0]), int(head[1]), float(head[2]))
    kind = {v: k for k, v in _DOMAINS.items()}.get(head[3].strip())
    if kind is None:
        raise BifourError(f"{path}: unknown domain {head[3]!r}")
    shape = lat.shape * (2 if kind is ProductField else 1)
    data = np.zeros(shape, dtype=np.complex128)
    seen = 0
    for line in text[1:]:
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != len(shape) + 2:
            raise BifourError(f"{path}: malformed sample line {line!r}")
        idx = tuple(int(p) for p in parts[: len(shape)])
        data[idx] = complex(float(parts[-2]), float(parts[-1]))
        seen += 1
    if seen != data.size:
        raise LatticeMismatchError(f"{path}: expected {data.size} samples, got {seen}")
    return kind(lat, data)
