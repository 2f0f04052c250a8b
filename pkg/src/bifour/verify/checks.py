"""The check catalog.

Each check is a function ``(config, level) -> Measurement``.  ``level`` 0 uses
the configured lattices and level 1 doubles every ``N`` with the periods
unchanged; the runner compares the two.  Inequality checks record maxima of
ratios (``constants``); identity checks record errors against tolerances.
All randomness is seeded from ``(seed, draw, check id)``.
"""

from __future__ import annotations

import math
import zlib
from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..bilinear import adjoint_pairing, apply_bilinear, estimate_norm
from ..calculus import PeakKernelSpec, apply_along, japanese, multiplier_apply, zeta_convolve
from ..decomp import fs_split, homogeneous_product_sobolev_check, vanishing_decompose
from ..lattice import Field, Lattice, ProductField, make_lattice, random_bandlimited, spectral_transform
from ..norms import (
    SmoothnessParams,
    band_restricted_norm,
    besov_product,
    bmo_norm,
    carleson_constant,
    carleson_from_bmo,
    lp_norm,
    mixed_sobolev,
    product_sobolev,
    sobolev_norm,
    sup_dyadic_norm,
)
from ..symbols import (
    BilinearSymbol,
    cone_partition,
    dual_transform,
    dyadic_piece,
    parse_symbol,
    sample_symbol,
    swap_arguments,
    symbol_library,
)
from .config import VerifyConfig
from .report import Measurement

__all__ = ["CheckSpec", "CHECKS", "ESTIMATE_FAMILIES", "VANISH_XI2_FAMILIES", "ANTIDIAGONAL_FAMILIES"]

ESTIMATE_FAMILIES = (
    "constant-one",
    "coifman-meyer(a=1.0)",
    "homogeneous-angular(l=1)",
    "homogeneous-angular(l=2)",
    "tensor(a=gauss,b=lorentz)",
    "random-bandlimited(seed=5,radius=1.0)",
)
VANISH_XI2_FAMILIES = tuple(f"vanish-at-xi2-zero(a={a})" for a in (1.0, 0.0, 2.0))
ANTIDIAGONAL_FAMILIES = tuple(f"vanish-on-antidiagonal(a={a})" for a in (1.0, 0.0, 2.0))
# families used where the symbol is cut off or sampled on compact sets
SMOOTH_FAMILIES = (
    "constant-one",
    "coifman-meyer(a=1.0)",
    "homogeneous-angular(l=1)",
    "tensor(a=gauss,b=lorentz)",
)
PIECE_FAMILIES = (
    "coifman-meyer(a=1.0)",
    "homogeneous-angular(l=1)",
    "tensor(a=gauss,b=lorentz)",
    "vanish-at-xi2-zero(a=1.0)",
)


@dataclass(frozen=True)
class CheckSpec:
    id: str
    description: str
    family: tuple[str, ...]
    run: Callable[[VerifyConfig, int], Measurement]


# --- helpers ------------------------------------------------------------------


def _rng(check_id: str, seed: int, draw: int = 0) -> np.random.Generator:
    ss = np.random.SeedSequence([int(seed) & 0xFFFFFFFF, int(draw), zlib.crc32(check_id.encode())])
    return np.random.default_rng(ss)


def _lat_dict(lat: Lattice) -> dict:
    return {"n": lat.n, "N": lat.N, "L": lat.L}


def _lattices(cfg: VerifyConfig, level: int, **extra: Lattice) -> dict:
    out = {"op": _lat_dict(cfg.op_lattice(level)), "sym": _lat_dict(cfg.sym_lattice(level))}
    out.update({k: _lat_dict(v) for k, v in extra.items()})
    return out


def _max_ratio(lhs, rhs) -> float:
    best = 0.0
    for a, b in zip(lhs, rhs):
        if b == 0:
            if a != 0:
                return math.inf
            continue
        best = max(best, a / b)
    return best


def _params(s1: float, s2: float, flavor: str) -> SmoothnessParams:
    return SmoothnessParams(s1, s2, flavor)


def _sup(cfg: VerifyConfig, m: BilinearSymbol, level: int, s1: float, s2: float, flavor: str) -> float:
    return sup_dyadic_norm(m, _params(s1, s2, flavor), cfg.jrange, cfg.windows(), cfg.sym_lattice(level))


def _estimate_suite(
    check_id: str,
    cfg: VerifyConfig,
    level: int,
    families,
    triple,
    rhs_fn: Callable[[BilinearSymbol], float],
    transform: Callable[[BilinearSymbol], BilinearSymbol] | None = None,
) -> Measurement:
    lat = cfg.op_lattice(level)
    meas = Measurement(_lattices(cfg, level))
    per_family = {}
    for fam in families:
        m = parse_symbol(fam, cfg.n)
        rhs = rhs_fn(m)
        op_symbol = transform(m) if transform else m
        vals = []
        for seed in cfg.seeds:
            est = estimate_norm(op_symbol, triple, lat, cfg.trials, cfg.iterations, seed=seed)
            meas.lhs.append(est.value)
            meas.rhs.append(rhs)
            vals.append(est.value)
        per_family[fam] = {"estimate": max(vals), "rhs": rhs}
    meas.constants["C"] = _max_ratio(meas.lhs, meas.rhs)
    meas.diagnostics["families"] = per_family
    return meas


# --- operator bounds against symbol norms ------------------------------------


def _thm11(triple):
    def run(cfg: VerifyConfig, level: int) -> Measurement:
        return _estimate_suite(
            "THM-1.1", cfg, level, ESTIMATE_FAMILIES, triple,
            lambda m: _sup(cfg, m, level, cfg.s1, cfg.s2, "mixed-2"),
        )

    return run


def _thm11_sym(cfg: VerifyConfig, level: int) -> Measurement:
    # T_m(f1, f2) = T_{m~}(f2, f1) with m~(a, b) = m(b, a): the L^inf x L^2 -> L^2 bound
    # of T_m is the L^2 x L^inf -> L^2 bound of T_{m~}, controlled by mixed-1 norms of m.
    return _estimate_suite(
        "THM-1.1-SYM", cfg, level, ESTIMATE_FAMILIES, ("L2", "Linf", "L2"),
        lambda m: _sup(cfg, m, level, cfg.s2, cfg.s1, "mixed-1"),
        transform=swap_arguments,
    )


def _thm11_min(cfg: VerifyConfig, level: int) -> Measurement:
    def rhs(m):
        return min(
            _sup(cfg, m, level, cfg.s2, cfg.s1, "mixed-1"),
            _sup(cfg, m, level, cfg.s1, cfg.s2, "mixed-2"),
        )

    return _estimate_suite("THM-1.1-MIN", cfg, level, ESTIMATE_FAMILIES, ("L2", "L2", "L1"), rhs)


def _cmp16(cfg: VerifyConfig, level: int) -> Measurement:
    # product norm with (s1, s2), s1 > n/2, dominates the mixed norm with s1 - n/2 - delta
    s1 = cfg.cor_s1 + 0.15
    s1_tilde = s1 - cfg.n / 2 - 0.1
    meas = Measurement(_lattices(cfg, level), diagnostics={"s1": s1, "s1_tilde": s1_tilde, "s2": cfg.cor_s2})
    for fam in ESTIMATE_FAMILIES:
        m = parse_symbol(fam, cfg.n)
        meas.lhs.append(_sup(cfg, m, level, s1_tilde, cfg.cor_s2, "mixed-2"))
        meas.rhs.append(_sup(cfg, m, level, s1, cfg.cor_s2, "product"))
    meas.constants["C"] = _max_ratio(meas.lhs, meas.rhs)
    return meas


def _thm12(families, triple):
    def run(cfg: VerifyConfig, level: int) -> Measurement:
        return _estimate_suite(
            "THM-1.2", cfg, level, families, triple,
            lambda m: _sup(cfg, m, level, cfg.s1, cfg.s2, "mixed-2"),
        )

    return run


def _cor13(cfg: VerifyConfig, level: int) -> Measurement:
    def rhs(m):
        return _sup(cfg, m, level, cfg.cor_s1, cfg.cor_s2, "product")

    bmo = _estimate_suite("COR-1.3", cfg, level, VANISH_XI2_FAMILIES, ("L2", "BMO", "L2"), rhs)
    h1 = _estimate_suite("COR-1.3", cfg, level, ANTIDIAGONAL_FAMILIES, ("L2", "L2", "H1"), rhs)
    meas = Measurement(_lattices(cfg, level))
    meas.lhs = bmo.lhs + h1.lhs
    meas.rhs = bmo.rhs + h1.rhs
    meas.constants["bmo"] = bmo.constants["C"]
    meas.constants["h1"] = h1.constants["C"]
    meas.diagnostics = {"bmo": bmo.diagnostics, "h1": h1.diagnostics}
    return meas


# --- pointwise bounds and Carleson measures ----------------------------------


def _lem21(cfg: VerifyConfig, level: int) -> Measurement:
    """Pointwise bound by a peaked-kernel average, tested at every grid point x.

    Symbols are cut off by ``theta(|xi2| / 2)`` so that the xi2-profile of
    the inner integral lives on a fixed compact set, sampled on ``eta_lat``.
    """
    lat = cfg.op_lattice(level)
    eta_lat = make_lattice(cfg.n, cfg.sym_N * 2**level, 16.0)
    w = cfg.windows()
    s = cfg.s2
    n = cfg.n
    meas = Measurement(_lattices(cfg, level, eta=eta_lat))
    x = lat.points().reshape(-1, n)
    xi = lat.frequencies().reshape(-1, n)
    eta = eta_lat.points().reshape(-1, n)
    phase = np.exp(1j * x @ xi.T)
    bessel = japanese(eta_lat.frequencies()) ** s
    axes = tuple(range(1, n + 1))
    draws = max(1, cfg.draws // 10)
    worst = 0.0
    for fam in SMOOTH_FAMILIES:
        base = parse_symbol(fam, n)
        m = base.times(lambda x1, x2: w.theta(np.sqrt(np.sum(x2**2, axis=-1)) / 2.0), name=f"{fam}*cut")
        for seed in cfg.seeds:
            for d in range(draws):
                rng = _rng("LEM-2.1", seed, d)
                f1 = random_bandlimited(lat, 8.0, rng)
                f2 = random_bandlimited(lat, 8.0, rng)
                F1 = spectral_transform(f1).coeffs.reshape(-1)
                for j in (-1, 0, 1, 2):
                    scale = 2.0 ** (-j)
                    lhs = np.abs(apply_bilinear(m.scaled(scale), f1, f2, "naive").values).reshape(-1)
                    M = m(scale * xi[:, None, :], eta[None, :, :])
                    G = (2 * np.pi) ** (-n) * lat.freq_weight * (phase @ (F1[:, None] * M))
                    G = apply_along(G.reshape((len(x),) + eta_lat.shape), eta_lat, axes, bessel)
                    inner = np.sqrt(eta_lat.space_weight * np.sum(np.abs(G.reshape(len(x), -1)) ** 2, axis=1))
                    zeta = np.real(zeta_convolve(Field(lat, np.abs(f2.values) ** 2), PeakKernelSpec(j, s)).values)
                    rhs = np.sqrt(np.maximum(zeta.reshape(-1), 0.0)) * inner
                    with np.errstate(divide="ignore", invalid="ignore"):
                        r = np.where(rhs > 0, lhs / rhs, np.where(lhs > 0, np.inf, 0.0))
                    k = int(np.argmax(r))
                    meas.lhs.append(float(lhs[k]))
                    meas.rhs.append(float(rhs[k]))
                    worst = max(worst, float(r[k]))
    meas.constants["C"] = worst
    meas.diagnostics["j"] = [-1, 0, 1, 2]
    meas.diagnostics["points_per_draw"] = int(lat.size)
    return meas


def _lem22(cfg: VerifyConfig, level: int) -> Measurement:
    lat = cfg.op_lattice(level)
    w = cfg.windows()
    s = (cfg.n + 1) / 2.0
    xi = lat.frequencies()
    meas = Measurement(_lattices(cfg, level), diagnostics={"j": list(range(-2, 4)), "s": s})
    draws = max(1, cfg.draws // 4)
    for seed in cfg.seeds:
        for d in range(draws):
            rng = _rng("LEM-2.2", seed, d)
            f = random_bandlimited(lat, 8.0, rng, real=True)
            g = random_bandlimited(lat, 8.0, rng, real=True)
            total = 0.0
            for j in range(-2, 4):
                spec = PeakKernelSpec(j, s)
                band = multiplier_apply(g, lambda q, j=j: w.Psi(q / 2.0**j))
                a = np.real(zeta_convolve(Field(lat, np.abs(f.values)), spec).values)
                b = np.real(zeta_convolve(Field(lat, np.abs(band.values) ** 2), spec).values)
                total += lat.space_weight * float(np.sum(a**2 * np.maximum(b, 0.0)))
            meas.lhs.append(math.sqrt(total))
            meas.rhs.append(lp_norm(f, 2) * bmo_norm(g))
    meas.constants["C"] = _max_ratio(meas.lhs, meas.rhs)
    return meas


def _carleson(cfg: VerifyConfig, level: int) -> Measurement:
    lat = cfg.op_lattice(level)
    w = cfg.windows()
    meas = Measurement(_lattices(cfg, level), diagnostics={"j": list(range(-2, 4))})
    draws = max(1, cfg.draws // 4)
    for seed in cfg.seeds:
        for d in range(draws):
            b = random_bandlimited(lat, 8.0, _rng("CARL-A1", seed, d), real=True)
            mu = carleson_from_bmo(b, list(range(-2, 4)), w=w)
            meas.lhs.append(carleson_constant(mu))
            meas.rhs.append(bmo_norm(b) ** 2)
    meas.constants["C"] = _max_ratio(meas.lhs, meas.rhs)
    return meas


# --- symbol norm comparisons -------------------------------------------------


def _pieces(cfg: VerifyConfig, level: int) -> list[tuple[str, ProductField]]:
    lat = cfg.sym_lattice(level)
    w = cfg.windows()
    out = []
    for fam in PIECE_FAMILIES:
        m = parse_symbol(fam, cfg.n)
        for j in (0, 2):
            out.append((f"{fam}@j={j}", dyadic_piece(m, j, w, lat)))
    for seed in cfg.seeds:
        m = symbol_library("random-bandlimited", cfg.n, seed=seed, radius=2.0)
        out.append((f"random-bandlimited(seed={seed},radius=2.0)@j=0", dyadic_piece(m, 0, w, lat)))
    return out


def _prop31(cfg: VerifyConfig, level: int) -> Measurement:
    w = cfg.windows()
    s1, s2 = cfg.s1, cfg.s2
    t1, t2 = s1 - 0.25, s2 - 0.25
    meas = Measurement(_lattices(cfg, level))
    c1_l, c1_r = [], []
    for _, piece in _pieces(cfg, level):
        W_t = mixed_sobolev(piece, t1, t2, 2)
        B_t = besov_product(piece, t1, t2, 2, w)
        B_s = besov_product(piece, s1, s2, 2, w)
        c1_l.append(B_t)
        c1_r.append(W_t)
        meas.lhs.append(W_t)
        meas.rhs.append(B_s)
    meas.constants["C1"] = _max_ratio(c1_l, c1_r)
    meas.constants["C2"] = _max_ratio(meas.lhs, meas.rhs)
    meas.diagnostics = {"B_over_W": {"lhs": c1_l, "rhs": c1_r}, "s": [s1, s2], "s_tilde": [t1, t2]}
    return meas


def _rem321(cfg: VerifyConfig, level: int) -> Measurement:
    meas = Measurement(_lattices(cfg, level))
    for _, piece in _pieces(cfg, level):
        meas.lhs.append(mixed_sobolev(piece, cfg.s1 / 2, cfg.s2 / 2, 2))
        meas.rhs.append(mixed_sobolev(piece, cfg.s1, cfg.s2, 2))
    meas.constants["C"] = _max_ratio(meas.lhs, meas.rhs)
    return meas


def _rem322(cfg: VerifyConfig, level: int) -> Measurement:
    w = cfg.windows()
    meas = Measurement(_lattices(cfg, level))
    for _, piece in _pieces(cfg, level):
        meas.lhs.append(band_restricted_norm(piece, cfg.s1, cfg.s2, w))
        meas.rhs.append(mixed_sobolev(piece, cfg.s1, cfg.s2, 2))
    meas.constants["C"] = _max_ratio(meas.lhs, meas.rhs)
    return meas


def _rem35(cfg: VerifyConfig, level: int) -> Measurement:
    s1, s2 = 0.3, 0.8
    meas = Measurement(_lattices(cfg, level), diagnostics={"s": [s1, s2]})
    for _, piece in _pieces(cfg, level):
        meas.lhs.append(float(np.max(np.abs(piece.values))))
        meas.rhs.append(mixed_sobolev(piece, s1, s2, 2))
    meas.constants["C"] = _max_ratio(meas.lhs, meas.rhs)
    return meas


def _lem33(cfg: VerifyConfig, level: int) -> Measurement:
    s1, s2 = cfg.s1, cfg.s2
    t1, t2 = s1 - 0.1, s2 - 0.1
    meas = Measurement(_lattices(cfg, level), diagnostics={"c": list(cfg.c_values)})
    per_c = {}
    for c in cfg.c_values:
        cp = cone_partition(c, cfg.order)
        lhs_c, rhs_c = [], []
        for fam in SMOOTH_FAMILIES:
            m = parse_symbol(fam, cfg.n)
            rhs = _sup(cfg, m, level, s1, s2, "mixed-2")
            for i in range(3):
                mc = m.times(cp.component(i), name=f"{fam}*Phi{i}")
                lhs_c.append(_sup(cfg, mc, level, t1, t2, "mixed-2"))
                rhs_c.append(rhs)
        per_c[repr(c)] = _max_ratio(lhs_c, rhs_c)
        meas.lhs += lhs_c
        meas.rhs += rhs_c
    meas.constants["C"] = _max_ratio(meas.lhs, meas.rhs)
    meas.diagnostics["per_c"] = per_c
    return meas


def _piece_symbol(m: BilinearSymbol, j: int, w) -> BilinearSymbol:
    """Closed form of ``m_j`` so that dual transforms can be evaluated anywhere."""
    scale = 2.0**j
    return BilinearSymbol(
        n=m.n,
        evaluator=lambda x1, x2: m(scale * x1, scale * x2) * w.Psi_pair(x1, x2),
        name=f"{m.name}_j{j}",
    )


def _lem34(cfg: VerifyConfig, level: int) -> Measurement:
    # the sheared support of (m_j)^{*2} reaches |xi| <= 4, hence the wider period
    lat = make_lattice(cfg.n, 2 * cfg.sym_N * 2**level, 16.0)
    w = cfg.windows()
    s1, s2 = cfg.s1, cfg.s2
    t1, t2 = s1 - 0.1, s2 - 0.1
    meas = Measurement(_lattices(cfg, level, dual=lat))
    for fam in ESTIMATE_FAMILIES:
        m = parse_symbol(fam, cfg.n)
        for j in range(cfg.jmin, cfg.jmax + 1):
            mj = _piece_symbol(m, j, w)
            meas.lhs.append(mixed_sobolev(sample_symbol(dual_transform(mj, 2), lat), t1, t2, 2))
            meas.rhs.append(mixed_sobolev(sample_symbol(mj, lat), s1, s1 + s2, 2))
    meas.constants["C"] = _max_ratio(meas.lhs, meas.rhs)
    return meas


# --- duality and the cone estimate -------------------------------------------


def _dual42(cfg: VerifyConfig, level: int) -> Measurement:
    lat = cfg.op_lattice(level)
    radius = (lat.N // 4 - 1) * lat.dxi
    meas = Measurement(_lattices(cfg, level))
    worst = 0.0
    for d in range(cfg.draws):
        seed = cfg.seeds[d % len(cfg.seeds)]
        rng = _rng("DUAL-4.2", seed, d)
        m = parse_symbol("coifman-meyer(a=1.0)" if d % 2 == 0 else f"random-bandlimited(seed={d},radius=1.0)", cfg.n)
        f1, f2, g = (random_bandlimited(lat, radius, rng) for _ in range(3))
        vals = adjoint_pairing(m, f1, f2, g)
        scale = max(abs(v) for v in vals)
        err = max(abs(a - b) for a in vals for b in vals) / scale if scale > 0 else 0.0
        worst = max(worst, err)
    meas.identities["pairing"] = (worst, cfg.identity_tol)
    return meas


def _est48(cfg: VerifyConfig, level: int) -> Measurement:
    """Hoelder/decay profile of the xi1-difference of the V_2 cone piece."""
    lat = cfg.sym_lattice(level)
    w = cfg.windows()
    n = cfg.n
    eps = cfg.s1 / 2.0
    phi2 = cone_partition(cfg.c, cfg.order).component(2)
    r = lat.abs_points().reshape(-1)
    cut = w.theta(r / 4.0)
    with np.errstate(divide="ignore"):
        bound = np.where(r > 0, np.minimum(1.0 / np.where(r > 0, r, 1.0), r**eps), 0.0)
    origin = lat.origin_index()
    bessel = japanese(lat.frequencies()) ** cfg.s2
    ax2 = tuple(range(n, 2 * n))
    meas = Measurement(_lattices(cfg, level), diagnostics={"epsilon": eps, "c": cfg.c})
    for fam in SMOOTH_FAMILIES:
        m = parse_symbol(fam, n).times(phi2, name=f"{fam}*Phi2")
        sup_norm = _sup(cfg, m, level, cfg.s1, cfg.s2, "mixed-2")
        best = 0.0
        for j in range(cfg.jmin, cfg.jmax + 1):
            piece = dyadic_piece(m, j, w, lat).values
            diff = piece - piece[origin][(None,) * n]
            diff = apply_along(diff, lat, ax2, bessel)
            inner = np.sqrt(lat.space_weight * np.sum(np.abs(diff) ** 2, axis=ax2)).reshape(-1) * cut
            with np.errstate(divide="ignore", invalid="ignore"):
                ratio = np.where(bound > 0, inner / bound, 0.0)
            best = max(best, float(ratio.max()))
        meas.lhs.append(best)
        meas.rhs.append(sup_norm)
    meas.constants["C"] = _max_ratio(meas.lhs, meas.rhs)
    return meas


# --- decompositions -----------------------------------------------------------


def _vanishing_input(cfg: VerifyConfig, level: int, seed: int, d: int, check_id: str) -> Field:
    lat = cfg.sym_lattice(level)
    p = random_bandlimited(lat, 6.0, _rng(check_id, seed, d), real=True)
    q = np.exp(-lat.abs_points() ** 2)
    return Field(lat, p.values - p.at_origin() * q)


def _lem51(cfg: VerifyConfig, level: int) -> Measurement:
    s = 0.8
    w = cfg.windows()
    meas = Measurement(_lattices(cfg, level), diagnostics={"s": s})
    rec = mass = support = 0.0
    decay = []
    for seed in cfg.seeds:
        f = _vanishing_input(cfg, level, seed, 0, "LEM-5.1")
        dec = vanishing_decompose(f, s, w=w)
        lat = f.lattice
        scale = float(np.max(np.abs(f.values)))
        rec = max(rec, float(np.max(np.abs(dec.reconstruct().values - f.values))) / scale)
        fhat_l1 = lat.freq_weight * float(np.sum(np.abs(spectral_transform(f).coeffs)))
        r = lat.abs_frequencies()
        for k, spec in enumerate(dec.spectra):
            mass = max(mass, abs(spec.total_mass()) / fhat_l1)
            # g_0 lives in |xi| <= 2, g_k in 2^(k-1) <= |xi| <= 2^(k+1); the last piece carries the tail
            upper = 2.0 ** (k + 1) if k < dec.K else np.inf
            lower = 2.0 ** (k - 1) if k > 0 else 0.0
            outside = (r > upper) | (r < lower)
            support = max(support, float(np.max(np.abs(spec.coeffs[outside]), initial=0.0)))
        meas.lhs.append(max(dec.decay()))
        meas.rhs.append(sobolev_norm(f, s))
        decay.append(dec.decay_constant())
    meas.identities["reconstruction"] = (rec, cfg.identity_tol)
    meas.identities["mass"] = (mass, cfg.identity_tol)
    meas.identities["support"] = (support, 0.0)
    meas.constants["C"] = max(decay)
    return meas


def _lem52(cfg: VerifyConfig, level: int) -> Measurement:
    s, s_tilde = 0.8, 0.4
    w = cfg.windows()
    lat = cfg.sym_lattice(level)
    chi = w.theta(lat.abs_points())
    meas = Measurement(_lattices(cfg, level), diagnostics={"s": s, "s_tilde": s_tilde, "sigma": "-i sign(x)"})
    draws = max(1, cfg.draws // 4)
    for seed in cfg.seeds:
        for d in range(draws):
            p = random_bandlimited(lat, 4.0, _rng("LEM-5.2", seed, d), real=True)
            f = Field(lat, chi * (p.values - p.at_origin()))
            top, bottom = homogeneous_product_sobolev_check(
                lambda x: -1j * x[..., 0] / np.sqrt(np.sum(x**2, axis=-1)), f, s, s_tilde
            )
            meas.lhs.append(top)
            meas.rhs.append(bottom)
    meas.constants["C"] = _max_ratio(meas.lhs, meas.rhs)
    return meas


def _fs51(cfg: VerifyConfig, level: int) -> Measurement:
    lat = cfg.op_lattice(level)
    meas = Measurement(_lattices(cfg, level))
    worst = 0.0
    ratios = []
    for seed in cfg.seeds:
        rng = _rng("FS-5.1", seed)
        inputs = [random_bandlimited(lat, 8.0, rng, real=True), Field(lat, rng.standard_normal(lat.shape))]
        for g in inputs:
            split = fs_split(g)
            err = float(np.max(np.abs(split.reconstruct().values - g.values))) / float(np.max(np.abs(g.values)))
            worst = max(worst, err)
            ratios.append(split.bmo_ratio())
    meas.identities["reconstruction"] = (worst, cfg.strict_tol)
    meas.diagnostics["linf_over_bmo"] = ratios
    return meas


CHECKS: dict[str, CheckSpec] = {
    spec.id: spec
    for spec in [
        CheckSpec("THM-1.1-A", "L2 x Linf -> L2 norm vs sup_j mixed-2 norm", ESTIMATE_FAMILIES,
                  _thm11(("L2", "Linf", "L2"))),
        CheckSpec("THM-1.1-B", "L2 x L2 -> L1 norm vs sup_j mixed-2 norm", ESTIMATE_FAMILIES,
                  _thm11(("L2", "L2", "L1"))),
        CheckSpec("THM-1.1-SYM", "Linf x L2 -> L2 norm vs sup_j mixed-1 norm", ESTIMATE_FAMILIES, _thm11_sym),
        CheckSpec("THM-1.1-MIN", "L2 x L2 -> L1 norm vs min of mixed-1/mixed-2 sups", ESTIMATE_FAMILIES,
                  _thm11_min),
        CheckSpec("CMP-1.6", "mixed-2 sup with reduced s1 vs product sup", ESTIMATE_FAMILIES, _cmp16),
        CheckSpec("THM-1.2-1", "L2 x BMO -> L2 norm for symbols vanishing at xi2 = 0", VANISH_XI2_FAMILIES,
                  _thm12(VANISH_XI2_FAMILIES, ("L2", "BMO", "L2"))),
        CheckSpec("THM-1.2-2", "L2 x L2 -> H1 norm for symbols vanishing on xi1 + xi2 = 0",
                  ANTIDIAGONAL_FAMILIES, _thm12(ANTIDIAGONAL_FAMILIES, ("L2", "L2", "H1"))),
        CheckSpec("COR-1.3", "BMO and H1 targets vs product Sobolev sup",
                  VANISH_XI2_FAMILIES + ANTIDIAGONAL_FAMILIES, _cor13),
        CheckSpec("LEM-2.1", "pointwise bound by peaked-kernel average at every grid point", SMOOTH_FAMILIES,
                  _lem21),
        CheckSpec("LEM-2.2", "square function of band pieces vs ||f||_2 ||g||_BMO", ("random",), _lem22),
        CheckSpec("PROP-3.1", "two-sided Besov / mixed Sobolev comparison", PIECE_FAMILIES, _prop31),
        CheckSpec("REM-3.2-1", "monotonicity of mixed norms in the smoothness", PIECE_FAMILIES, _rem321),
        CheckSpec("REM-3.2-2", "band-restricted norm vs mixed norm", PIECE_FAMILIES, _rem322),
        CheckSpec("LEM-3.3", "cone cutoffs keep sup_j mixed norms finite", SMOOTH_FAMILIES, _lem33),
        CheckSpec("LEM-3.4", "dual transform of m_j vs mixed norm with (s1, s1 + s2)", ESTIMATE_FAMILIES, _lem34),
        CheckSpec("REM-3.5", "sup norm vs mixed-2 norm", PIECE_FAMILIES, _rem35),
        CheckSpec("DUAL-4.2", "three-way adjoint pairing identity", ("coifman-meyer", "random-bandlimited"),
                  _dual42),
        CheckSpec("EST-4.8", "xi1-difference profile of the V_2 cone piece", SMOOTH_FAMILIES, _est48),
        CheckSpec("LEM-5.1", "vanishing dyadic decomposition invariants and decay", ("random",), _lem51),
        CheckSpec("LEM-5.2", "degree-0 homogeneous multiplication in Sobolev spaces", ("random",), _lem52),
        CheckSpec("FS-5.1", "Riesz split reconstruction", ("random", "white-noise"), _fs51),
        CheckSpec("CARL-A1", "Carleson constant of the band measure vs ||b||_BMO^2", ("random",), _carleson),
    ]
}
