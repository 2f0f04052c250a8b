"""The bilinear multiplier operator on the lattice and empirical operator norms.

On the lattice,

    T_m(f1, f2)^(eta) = (2 pi)^-n (2 pi / L)^n
        sum_{xi1 + xi2 = eta (mod lattice)} m(xi1, xi2) f1^(xi1) f2^(xi2),

followed by the inverse transform.  For ``m = 1`` this is exactly the
transform of the pointwise product.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .calculus import _as_symbol, riesz_symbol
from .errors import LatticeMismatchError, PreconditionError, SymbolError
from .lattice import Field, Lattice, Spectrum, forward_array, inverse_array, random_bandlimited, spectral_transform
from .norms import bmo_norm, hardy1_norm, lp_norm
from .symbols import BilinearSymbol, dual_transform

__all__ = [
    "TRIPLES",
    "symbol_matrix",
    "apply_bilinear",
    "OperatorNormEstimate",
    "estimate_norm",
    "adjoint_pairing",
    "pairing",
]

TRIPLES = {
    ("L2", "Linf", "L2"),
    ("L2", "L2", "L1"),
    ("L2", "BMO", "L2"),
    ("L2", "L2", "H1"),
}

_ALIASES = {"l2": "L2", "linf": "Linf", "l^inf": "Linf", "inf": "Linf", "l1": "L1", "bmo": "BMO", "h1": "H1"}


def _normalize_triple(triple) -> tuple[str, str, str]:
    if isinstance(triple, str):
        triple = tuple(t.strip() for t in triple.replace("->", ",").replace("x", ",").split(",") if t.strip())
    out = tuple(_ALIASES.get(str(t).lower(), str(t)) for t in triple)
    if out not in TRIPLES:
        raise PreconditionError(f"unsupported space triple {triple!r}; supported: {sorted(TRIPLES)}")
    return out


def _same_lattice(*fields: Field) -> Lattice:
    lat = fields[0].lattice
    for f in fields[1:]:
        if f.lattice != lat:
            raise LatticeMismatchError("fields live on different lattices")
    return lat


def symbol_matrix(m: BilinearSymbol, lat: Lattice, rows: slice | None = None) -> np.ndarray:
    """``m(xi1, xi2)`` on the frequency grid, shape ``(P, P)`` with ``P = N^n`` (or a row block)."""
    xi = lat.frequencies().reshape(-1, lat.n)
    x1 = xi if rows is None else xi[rows]
    values = np.asarray(m(x1[:, None, :], xi[None, :, :]), dtype=np.complex128)
    values = np.broadcast_to(values, (len(x1), len(xi)))
    if not np.all(np.isfinite(values)):
        raise SymbolError("symbol is not finite on the frequency grid")
    return values


def _output_index(lat: Lattice, rows: np.ndarray, idx: np.ndarray) -> np.ndarray:
    c = lat.N // 2
    out = (rows[:, None, :] + idx[None, :, :] - c) % lat.N
    return np.ravel_multi_index(tuple(out[..., d] for d in range(lat.n)), lat.shape)


def _naive(m: BilinearSymbol, f1: Field, f2: Field, block: int = 4096) -> Field:
    lat = f1.lattice
    P = lat.size
    F1 = spectral_transform(f1).coeffs.reshape(-1)
    F2 = spectral_transform(f2).coeffs.reshape(-1)
    idx = np.indices(lat.shape).reshape(lat.n, -1).T
    acc = np.zeros(P, dtype=np.complex128)
    rows_per = max(1, block * 64 // P)
    for a in range(0, P, rows_per):
        sl = slice(a, min(P, a + rows_per))
        M = symbol_matrix(m, lat, sl)
        prod = (M * F1[sl, None] * F2[None, :]).reshape(-1)
        target = _output_index(lat, idx[sl], idx).reshape(-1)
        acc += np.bincount(target, weights=prod.real, minlength=P)
        acc += 1j * np.bincount(target, weights=prod.imag, minlength=P)
    acc *= lat.freq_weight / (2 * np.pi) ** lat.n
    return spectral_transform(Spectrum(lat, acc.reshape(lat.shape)))


def _fast(m: BilinearSymbol, f1: Field, f2: Field) -> Field:
    # Each input is transformed once; the R multiplied spectra of each slot go
    # through a single batched inverse transform.
    lat = f1.lattice
    axes = tuple(range(1, lat.n + 1))
    A = np.stack([_as_symbol(a).on_grid(lat) for a, _ in m.separable])
    B = np.stack([_as_symbol(b).on_grid(lat) for _, b in m.separable])
    g1 = inverse_array(A * spectral_transform(f1).coeffs, lat, axes)
    g2 = inverse_array(B * spectral_transform(f2).coeffs, lat, axes)
    return Field(lat, np.sum(g1 * g2, axis=0))


def apply_bilinear(m: BilinearSymbol, f1: Field, f2: Field, path: str = "auto") -> Field:
    """``T_m(f1, f2)`` on the lattice.

    ``path`` is ``"naive"`` (double frequency sum), ``"fast"`` (separable
    form ``sum_r a_r(D) f1 * b_r(D) f2``) or ``"auto"`` (fast when available).
    """
    _same_lattice(f1, f2)
    if m.n != f1.lattice.n:
        raise SymbolError("symbol and field dimensions differ")
    if path == "auto":
        path = "fast" if m.separable is not None else "naive"
    if path == "fast":
        if m.separable is None:
            raise SymbolError("symbol has no separable form")
        return _fast(m, f1, f2)
    if path == "naive":
        return _naive(m, f1, f2)
    raise PreconditionError(f"unknown path {path!r}")


def pairing(f: Field, g: Field) -> complex:
    """``integral f g`` (no conjugation) by lattice quadrature."""
    _same_lattice(f, g)
    return complex(f.lattice.space_weight * np.sum(f.values * g.values))


def adjoint_pairing(m: BilinearSymbol, f1: Field, f2: Field, g: Field) -> tuple[complex, complex, complex]:
    """``(int T_m(f1,f2) g, int T_{m*1}(g,f2) f1, int T_{m*2}(f1,g) f2)``."""
    _same_lattice(f1, f2, g)
    first = pairing(apply_bilinear(m, f1, f2, "naive"), g)
    second = pairing(apply_bilinear(dual_transform(m, 1), g, f2, "naive"), f1)
    third = pairing(apply_bilinear(dual_transform(m, 2), f1, g, "naive"), f2)
    return first, second, third


# --- dense linear algebra for norm search ---------------------------------------


class _Operator:
    """Dense slot-wise matrices of ``T_m`` in space coordinates."""

    def __init__(self, m: BilinearSymbol, lat: Lattice):
        self.lat = lat
        P = lat.size
        axes = tuple(range(lat.n))
        eye = np.eye(P, dtype=np.complex128).reshape(lat.shape + (P,))
        self.W = forward_array(eye, lat, axes).reshape(P, P)
        self.Winv = inverse_array(eye, lat, axes).reshape(P, P)
        self.M = symbol_matrix(m, lat)
        idx = np.indices(lat.shape).reshape(lat.n, -1).T
        c = lat.N // 2
        # J[eta, xi] = flat index of eta - xi (wrapped)
        diff = (idx[:, None, :] - idx[None, :, :] + c) % lat.N
        self.J = np.ravel_multi_index(tuple(diff[..., d] for d in range(lat.n)), lat.shape)
        self.cols = np.broadcast_to(np.arange(P)[None, :], (P, P))
        self.scale = lat.freq_weight / (2 * np.pi) ** lat.n

    def slot1(self, f2: np.ndarray) -> np.ndarray:
        """Matrix of ``f1 -> T(f1, f2)``."""
        F2 = self.W @ f2
        B = self.scale * self.M[self.cols, self.J] * F2[self.J]
        return self.Winv @ B @ self.W

    def slot2(self, f1: np.ndarray) -> np.ndarray:
        """Matrix of ``f2 -> T(f1, f2)``."""
        F1 = self.W @ f1
        B = self.scale * self.M[self.J, self.cols] * F1[self.J]
        return self.Winv @ B @ self.W

    def apply(self, f1: np.ndarray, f2: np.ndarray) -> np.ndarray:
        return self.slot1(f2) @ f1


def _phase(v: np.ndarray) -> np.ndarray:
    a = np.abs(v)
    out = np.ones_like(v)
    nz = a > 0
    out[nz] = v[nz] / a[nz]
    return out


def _top_right_singular(A: np.ndarray, start: np.ndarray, steps: int) -> np.ndarray:
    v = start / max(np.linalg.norm(start), 1e-300)
    AhA = A.conj().T @ A
    for _ in range(steps):
        w = AhA @ v
        nrm = np.linalg.norm(w)
        if nrm == 0:
            return v
        v = w / nrm
    return v


@dataclass(frozen=True)
class OperatorNormEstimate:
    """Best ratio ``||T_m(f1, f2)||_Y / (||f1||_X1 ||f2||_X2)`` found by search.

    The value is a lattice lower bound for the operator norm.
    """

    value: float
    witness: tuple[Field, Field]
    trials: int
    iterations: int
    triple: tuple[str, str, str]
    seed: int
    label: str = "lattice lower bound"
    trial_values: tuple[float, ...] = field(default=())

    def recompute(self, m: BilinearSymbol) -> float:
        return ratio(m, self.triple, *self.witness)


def _space_norm(f: Field, name: str) -> float:
    if name == "L2":
        return lp_norm(f, 2)
    if name == "Linf":
        return lp_norm(f, math.inf)
    if name == "L1":
        return lp_norm(f, 1)
    if name == "BMO":
        return bmo_norm(f)
    if name == "H1":
        return hardy1_norm(f)
    raise PreconditionError(name)


def ratio(m: BilinearSymbol, triple, f1: Field, f2: Field) -> float:
    """``||T_m(f1, f2)||_Y / (||f1||_X1 ||f2||_X2)`` with ``0/0 = 0`` and ``c/0 = inf``."""
    X1, X2, Y = _normalize_triple(triple)
    top = _space_norm(apply_bilinear(m, f1, f2, "naive"), Y)
    bottom = _space_norm(f1, X1) * _space_norm(f2, X2)
    return _safe_ratio(top, bottom)


def _safe_ratio(top: float, bottom: float) -> float:
    if bottom <= 1e-300:
        return 0.0 if top <= 1e-300 else math.inf
    return top / bottom


def _vector_norms(lat: Lattice):
    w = lat.space_weight
    return (
        lambda v: math.sqrt(w * float(np.sum(np.abs(v) ** 2))),
        lambda v: float(np.max(np.abs(v))),
        lambda v: w * float(np.sum(np.abs(v))),
    )


def _trial(op: _Operator, triple, rng: np.random.Generator, iterations: int, power_steps: int, radius: float):
    lat = op.lat
    P = lat.size
    l2, linf, l1 = _vector_norms(lat)
    shape = lat.shape

    def field(v):
        return Field(lat, v.reshape(shape))

    f1 = random_bandlimited(lat, radius, rng).values.reshape(-1)
    f2 = random_bandlimited(lat, radius, rng).values.reshape(-1)
    best = (0.0, f1, f2)

    def consider(value, a, b):
        nonlocal best
        if value > best[0] or (best[0] == 0.0 and value == 0.0):
            best = (value, a.copy(), b.copy())

    X1, X2, Y = triple
    if triple == ("L2", "Linf", "L2"):
        for _ in range(iterations):
            A1 = op.slot1(f2)
            f1 = _top_right_singular(A1, f1, power_steps)
            A2 = op.slot2(f1)
            f2 = _phase(A2.conj().T @ (A2 @ f2))
            consider(_safe_ratio(l2(A2 @ f2), l2(f1) * linf(f2)), f1, f2)
    elif triple == ("L2", "L2", "L1"):
        for _ in range(iterations):
            A1 = op.slot1(f2)
            u = _phase(A1 @ f1)
            f1 = A1.conj().T @ u
            f1 /= max(l2(f1), 1e-300)
            A2 = op.slot2(f1)
            u = _phase(A2 @ f2)
            f2 = A2.conj().T @ u
            f2 /= max(l2(f2), 1e-300)
            consider(_safe_ratio(l1(A2 @ f2), l2(f1) * l2(f2)), f1, f2)
    elif triple == ("L2", "BMO", "L2"):
        R = [np.eye(P, dtype=np.complex128)]
        for k in range(1, lat.n + 1):
            R.append(op.Winv @ (riesz_symbol(lat, k).reshape(-1)[:, None] * op.W))
        Rstack = np.concatenate(R, axis=1)  # f2 = Rstack @ g
        g = _phase(np.concatenate([f2] + [rng.standard_normal(P) + 1j * rng.standard_normal(P) for _ in range(lat.n)]))
        f2 = Rstack @ g
        for _ in range(iterations):
            A1 = op.slot1(f2)
            f1 = _top_right_singular(A1, f1, power_steps)
            C = op.slot2(f1) @ Rstack
            g = _phase(C.conj().T @ (C @ g))
            f2 = Rstack @ g
            out = op.apply(f1, f2)
            consider(_safe_ratio(l2(out), l2(f1) * bmo_norm(field(f2))), f1, f2)
    elif triple == ("L2", "L2", "H1"):
        for _ in range(iterations):
            A1 = op.slot1(f2)
            u = _phase(A1 @ f1)
            f1 = A1.conj().T @ u
            f1 /= max(l2(f1), 1e-300)
            A2 = op.slot2(f1)
            u = _phase(A2 @ f2)
            f2 = A2.conj().T @ u
            f2 /= max(l2(f2), 1e-300)
            out = A2 @ f2
            consider(_safe_ratio(hardy1_norm(field(out)), l2(f1) * l2(f2)), f1, f2)
    return best


def estimate_norm(
    m: BilinearSymbol,
    triple,
    lattice: Lattice,
    trials: int = 3,
    iterations: int = 25,
    seed: int = 0,
    power_steps: int = 30,
    radius: float | None = None,
) -> OperatorNormEstimate:
    """Randomized lower bound for ``||T_m||_{X1 x X2 -> Y}`` on ``lattice``.

    Each trial starts from random band-limited inputs and alternates between
    the two slots: an optimal or ascent step for one input with the other
    fixed.  Trial seeds are spawned from ``seed``; the result is the maximum
    over trials taken in trial order, so it depends only on
    ``(seed, trials, iterations)``.
    """
    triple = _normalize_triple(triple)
    if lattice.size > 1024:
        raise PreconditionError("norm search uses dense matrices; keep N^n <= 1024")
    op = _Operator(m, lattice)
    radius = radius if radius is not None else (lattice.N // 4) * lattice.dxi
    children = np.random.SeedSequence(seed).spawn(trials)
    results = [_trial(op, triple, np.random.default_rng(c), iterations, power_steps, radius) for c in children]
    best_index = 0
    for t, r in enumerate(results):
        if r[0] > results[best_index][0]:
            best_index = t
    value, f1, f2 = results[best_index]
    shape = lattice.shape
    return OperatorNormEstimate(
        value=float(value),
        witness=(Field(lattice, f1.reshape(shape)), Field(lattice, f2.reshape(shape))),
        trials=trials,
        iterations=iterations,
        triple=triple,
        seed=seed,
        trial_values=tuple(float(r[0]) for r in results),
    )
