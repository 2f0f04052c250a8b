import math

import numpy as np
import pytest

from bifour.calculus import (
    LinearSymbol,
    PeakKernelSpec,
    TimeScaleField,
    bessel_apply,
    dyadic_radii,
    hl_maximal,
    multiplier_apply,
    nontangential_max,
    pseudodiff_apply,
    riesz_transform,
    zeta_convolve,
    zeta_kernel,
)
from bifour.errors import PreconditionError, RangeError, SymbolError
from bifour.lattice import Field, make_lattice, random_bandlimited, spectral_transform
from bifour.norms import lp_norm, sobolev_norm
from bifour.symbols import make_window_family


def _x(lat):
    return lat.points()[..., 0]


def test_bessel_identity_and_single_mode(rng, lat64):
    f = Field(lat64, rng.standard_normal(64))
    np.testing.assert_allclose(bessel_apply(f, 0.0).values, f.values, atol=1e-12)
    e = Field(lat64, np.exp(3j * _x(lat64)))
    np.testing.assert_allclose(bessel_apply(e, 0.7).values, 10**0.35 * e.values, atol=1e-12)


def test_bessel_inverse_and_isometry(rng, lat2d):
    f = Field(lat2d, rng.standard_normal(lat2d.shape))
    back = bessel_apply(bessel_apply(f, 1.3), -1.3)
    np.testing.assert_allclose(back.values, f.values, atol=1e-12)
    # W^s is measured on the frequency side, so Plancherel contributes (2 pi)^(n/2)
    expected = sobolev_norm(f, 0.8) / (2 * math.pi) ** (lat2d.n / 2)
    assert lp_norm(bessel_apply(f, 0.8), 2) == pytest.approx(expected, rel=1e-12)


def test_multiplier_identity_and_disjoint_support(rng, lat64):
    f = random_bandlimited(lat64, 3.0, rng)
    np.testing.assert_allclose(multiplier_apply(f, lambda xi: np.ones(xi.shape[:-1])).values, f.values, atol=1e-12)
    w = make_window_family()
    # Psi(xi / 2^3) lives in 4 <= |xi| <= 16, disjoint from |xi| <= 3
    out = multiplier_apply(f, lambda xi: w.Psi(xi / 8.0))
    assert np.max(np.abs(out.values)) < 1e-12


def test_multiplier_matches_direct_sum(rng, lat64):
    f = Field(lat64, rng.standard_normal(64) + 1j * rng.standard_normal(64))
    sigma = lambda xi: np.exp(-xi[..., 0] ** 2 / 50) * (1 + 1j * xi[..., 0])  # noqa: E731
    out = multiplier_apply(f, sigma).values
    x, xi = _x(lat64), lat64.frequencies()[..., 0]
    fhat = np.array([lat64.h * np.sum(np.exp(-1j * x * k) * f.values) for k in xi])
    s = sigma(lat64.frequencies())
    direct = np.array([np.sum(np.exp(1j * xx * xi) * s * fhat) for xx in x]) * lat64.dxi / (2 * math.pi)
    np.testing.assert_allclose(out, direct, atol=1e-12 * np.max(np.abs(direct)) * 10)


def test_multiplier_composes(rng, lat64):
    f = Field(lat64, rng.standard_normal(64))
    a = lambda xi: 1 / (1 + xi[..., 0] ** 2)  # noqa: E731
    b = lambda xi: np.cos(xi[..., 0])  # noqa: E731
    lhs = multiplier_apply(multiplier_apply(f, b), a).values
    rhs = multiplier_apply(f, lambda xi: a(xi) * b(xi)).values
    np.testing.assert_allclose(lhs, rhs, atol=1e-12)


def test_multiplier_undefined_symbol(lat64):
    f = Field(lat64, np.ones(64))
    with pytest.raises(SymbolError):
        multiplier_apply(f, lambda xi: 1.0 / xi[..., 0])
    # a declared value at the origin makes it well defined
    out = multiplier_apply(f, LinearSymbol(evaluator=lambda xi: 1.0 / xi[..., 0], origin=0.0))
    assert np.max(np.abs(out.values)) < 1e-12


def test_riesz_examples(rng, lat64):
    x = _x(lat64)
    np.testing.assert_allclose(riesz_transform(Field(lat64, np.cos(x)), 1).values, np.sin(x), atol=1e-12)
    assert np.max(np.abs(riesz_transform(Field(lat64, np.full(64, 3.0)), 1).values)) < 1e-12
    with pytest.raises(RangeError):
        riesz_transform(Field(lat64, np.cos(x)), 2)


@pytest.mark.parametrize("n, N", [(1, 64), (2, 16)])
def test_riesz_square_sum(rng, n, N):
    lat = make_lattice(n, N, 2 * math.pi)
    f = Field(lat, rng.standard_normal(lat.shape))
    total = sum(riesz_transform(riesz_transform(f, k), k).values for k in range(1, n + 1))
    # R_k includes the Nyquist modes, so the identity holds on every nonzero mode.
    np.testing.assert_allclose(total, -(f.values - f.values.mean()), atol=1e-12)


def test_riesz_skew_adjoint(rng, lat2d):
    f = Field(lat2d, rng.standard_normal(lat2d.shape))
    g = Field(lat2d, rng.standard_normal(lat2d.shape))
    f = f - Field(lat2d, np.full(lat2d.shape, f.values.mean()))
    for k in (1, 2):
        lhs = np.vdot(g.values, riesz_transform(f, k).values)
        rhs = -np.vdot(riesz_transform(g, k).values, f.values)
        assert abs(lhs - rhs) < 1e-10


def test_pseudodiff_reductions(rng, lat64):
    f = Field(lat64, rng.standard_normal(64))
    b = lambda xi: 1 / (1 + xi[..., 0] ** 2)  # noqa: E731
    np.testing.assert_allclose(
        pseudodiff_apply(f, lambda x, xi: b(xi)).values, multiplier_apply(f, b).values, atol=1e-12
    )
    a = np.sin(_x(lat64))
    out = pseudodiff_apply(f, lambda x, xi: np.sin(x[..., 0]) * b(xi)).values
    np.testing.assert_allclose(out, a * multiplier_apply(f, b).values, atol=1e-12)


def test_pseudodiff_modulation(rng, lat64):
    f = random_bandlimited(lat64, 6.0, rng)
    out = pseudodiff_apply(f, lambda x, xi: np.exp(2j * x[..., 0]) + 0 * xi[..., 0])
    spec_in = spectral_transform(f).coeffs
    spec_out = spectral_transform(out).coeffs
    np.testing.assert_allclose(spec_out, np.roll(spec_in, 2), atol=1e-10)


def test_hl_maximal_properties(rng, lat64):
    c = Field(lat64, np.full(64, -2.0))
    Mc = hl_maximal(c).values
    assert np.ptp(Mc) < 1e-12
    assert Mc[0] >= 2.0 - 1e-12
    f = Field(lat64, rng.standard_normal(64))
    g = Field(lat64, rng.standard_normal(64))
    Mf = hl_maximal(f).values
    assert np.all(Mf >= 0)
    np.testing.assert_allclose(hl_maximal(Field(lat64, -3 * f.values)).values, 3 * Mf, atol=1e-12)
    assert np.all(hl_maximal(f + g).values <= Mf + hl_maximal(g).values + 1e-12)
    assert np.all(Mf >= np.abs(f.values) - 1e-12)


def test_hl_maximal_l2_constant_is_stable():
    consts = []
    for N in (64, 128):
        lat = make_lattice(1, N, 2 * math.pi)
        ratios = [
            lp_norm(hl_maximal(f), 2) / lp_norm(f, 2)
            for f in (random_bandlimited(lat, 8.0, np.random.default_rng(s)) for s in range(5))
        ]
        consts.append(max(ratios))
    assert max(consts) / min(consts) <= 1.25


def test_zeta_examples(rng, lat64):
    spec = PeakKernelSpec(1, 1.0)
    mass = lat64.space_weight * zeta_kernel(lat64, spec).sum()
    np.testing.assert_allclose(zeta_convolve(Field(lat64, np.ones(64)), spec).values, mass, atol=1e-12)
    f = Field(lat64, np.abs(rng.standard_normal(64)))
    assert np.all(np.real(zeta_convolve(f, spec).values) >= -1e-12)


def test_zeta_matches_direct_sum(rng, lat64):
    spec = PeakKernelSpec(0, 1.0)
    f = rng.standard_normal(64)
    out = np.real(zeta_convolve(Field(lat64, f), spec).values)
    x = _x(lat64)
    L = lat64.L
    direct = []
    for xx in x:
        d = (xx - x + L / 2) % L - L / 2  # periodic distance, centered sampling
        direct.append(lat64.h * np.sum((1 + np.abs(d)) ** (-2.0) * f))
    np.testing.assert_allclose(out, direct, atol=1e-10)


def test_zeta_range_and_exponent(lat64):
    with pytest.raises(RangeError):
        zeta_kernel(lat64, PeakKernelSpec(4, 1.0))
    with pytest.raises(PreconditionError):
        PeakKernelSpec(0, -1.0)
    k = zeta_kernel(lat64, PeakKernelSpec(2, 0.5))
    r = lat64.abs_points()
    order = np.argsort(r)
    assert np.all(np.diff(k[order]) <= 1e-15) and np.all(k > 0)


def test_nontangential_max(rng, lat64):
    vals = [rng.standard_normal(64) for _ in range(3)]
    small = TimeScaleField.from_fields([lat64.h / 2], [Field(lat64, vals[0])])
    np.testing.assert_allclose(nontangential_max(small).values, np.abs(vals[0]))
    scales = [1.0, 0.5, 0.25]
    ones = TimeScaleField.from_fields(scales, [Field(lat64, np.ones(64))] * 3)
    np.testing.assert_allclose(nontangential_max(ones).values, 1.0)
    F = TimeScaleField.from_fields(scales, [Field(lat64, v) for v in vals])
    star = nontangential_max(F).values
    for v in vals:
        assert np.all(star >= np.abs(v) - 1e-15)
    with pytest.raises(PreconditionError):
        TimeScaleField.from_fields([0.25, 0.5], [Field(lat64, v) for v in vals[:2]])


def test_dyadic_radii(lat64):
    r = dyadic_radii(lat64)
    assert r[0] == pytest.approx(lat64.h) and r[-1] == pytest.approx(lat64.L / 2)
