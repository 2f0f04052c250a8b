import math

import numpy as np
import pytest

from bifour.bilinear import adjoint_pairing, apply_bilinear, estimate_norm, ratio
from bifour.calculus import multiplier_apply
from bifour.errors import LatticeMismatchError, PreconditionError, SymbolError
from bifour.lattice import Field, make_lattice, random_bandlimited, spectral_transform
from bifour.symbols import BilinearSymbol, symbol_library

SEPARABLE = ["constant-one", "random-bandlimited", "tensor"]


def _zero():
    return BilinearSymbol(n=1, evaluator=lambda a, b: np.zeros(np.broadcast_shapes(a.shape[:-1], b.shape[:-1])),
                          name="zero")


@pytest.mark.parametrize("path", ["naive", "fast"])
@pytest.mark.parametrize("n, N", [(1, 64), (2, 16)])
def test_constant_one_is_product(rng, path, n, N):
    lat = make_lattice(n, N, 2 * math.pi)
    f1 = Field(lat, rng.standard_normal(lat.shape) + 1j * rng.standard_normal(lat.shape))
    f2 = Field(lat, rng.standard_normal(lat.shape))
    out = apply_bilinear(symbol_library("constant-one", n), f1, f2, path)
    np.testing.assert_allclose(out.values, f1.values * f2.values, atol=1e-12)


def test_separable_reduction(rng, lat64):
    m = symbol_library("tensor", a="gauss", b="lorentz")
    f1, f2 = random_bandlimited(lat64, 10.0, rng), random_bandlimited(lat64, 10.0, rng)
    a, b = m.separable[0]
    expected = multiplier_apply(f1, a).values * multiplier_apply(f2, b).values
    np.testing.assert_allclose(apply_bilinear(m, f1, f2, "naive").values, expected, atol=1e-12)


@pytest.mark.parametrize("k1, k2", [(1, 2), (-3, 5), (7, -7)])
def test_single_modes(lat64, k1, k2):
    x = lat64.points()[..., 0]
    m = symbol_library("coifman-meyer", a=1.0)
    out = apply_bilinear(m, Field(lat64, np.exp(1j * k1 * x)), Field(lat64, np.exp(1j * k2 * x)))
    # f_hat = 2 pi delta, so (2 pi)^-1 * dxi * m * (2 pi)^2 = 2 pi m at k1 + k2, i.e. m e^{i(k1+k2)x}
    weight = complex((k1**2 + 2 * k2**2 + 1j * k1 * k2) / (k1**2 + k2**2 + 1))
    np.testing.assert_allclose(out.values, weight * np.exp(1j * (k1 + k2) * x), atol=1e-12)


def test_bilinearity_and_symbol_linearity(rng, lat64):
    m = symbol_library("coifman-meyer")
    m2 = symbol_library("homogeneous-angular", l=1)
    f1, g1, f2 = (Field(lat64, rng.standard_normal(64) + 1j * rng.standard_normal(64)) for _ in range(3))
    al, be = 1.5 - 0.5j, -2.0
    lhs = apply_bilinear(m, Field(lat64, al * f1.values + be * g1.values), f2).values
    rhs = al * apply_bilinear(m, f1, f2).values + be * apply_bilinear(m, g1, f2).values
    np.testing.assert_allclose(lhs, rhs, atol=1e-12)
    lhs = apply_bilinear(m, f2, Field(lat64, al * f1.values + be * g1.values)).values
    rhs = al * apply_bilinear(m, f2, f1).values + be * apply_bilinear(m, f2, g1).values
    np.testing.assert_allclose(lhs, rhs, atol=1e-12)
    combo = BilinearSymbol(n=1, evaluator=lambda a, b: al * m(a, b) + be * m2(a, b))
    lhs = apply_bilinear(combo, f1, f2).values
    rhs = al * apply_bilinear(m, f1, f2).values + be * apply_bilinear(m2, f1, f2).values
    np.testing.assert_allclose(lhs, rhs, atol=1e-12)


def test_frequency_support_sumset(rng, lat64):
    f1, f2 = random_bandlimited(lat64, 5.0, rng), random_bandlimited(lat64, 3.0, rng)
    out = apply_bilinear(symbol_library("coifman-meyer"), f1, f2)
    spec = spectral_transform(out).coeffs
    assert np.max(np.abs(spec[np.abs(lat64.frequencies()[..., 0]) > 8])) < 1e-12


@pytest.mark.parametrize("name", SEPARABLE)
@pytest.mark.parametrize("n, N", [(1, 64), (2, 16)])
def test_fast_matches_naive(rng, name, n, N):
    lat = make_lattice(n, N, 2 * math.pi)
    m = symbol_library(name, n)
    f1 = Field(lat, rng.standard_normal(lat.shape) + 1j * rng.standard_normal(lat.shape))
    f2 = Field(lat, rng.standard_normal(lat.shape))
    a = apply_bilinear(m, f1, f2, "naive").values
    b = apply_bilinear(m, f1, f2, "fast").values
    assert np.max(np.abs(a - b)) <= 1e-10 * max(1.0, np.max(np.abs(a)))


def test_apply_errors(rng, lat64):
    f = Field(lat64, np.ones(64))
    other = Field(make_lattice(1, 32, 2 * math.pi), np.ones(32))
    with pytest.raises(LatticeMismatchError):
        apply_bilinear(symbol_library("constant-one"), f, other)
    with pytest.raises(SymbolError):
        apply_bilinear(symbol_library("coifman-meyer"), f, f, "fast")
    with pytest.raises(PreconditionError):
        apply_bilinear(symbol_library("constant-one"), f, f, "quick")


def test_adjoint_pairing_examples(rng, lat64):
    f1, f2, g = (random_bandlimited(lat64, 15.0, rng) for _ in range(3))
    one = adjoint_pairing(symbol_library("constant-one"), f1, f2, g)
    direct = lat64.space_weight * np.sum(f1.values * f2.values * g.values)
    for v in one:
        assert abs(v - direct) <= 1e-12 * abs(direct)
    zero = adjoint_pairing(symbol_library("coifman-meyer"), Field(lat64, np.zeros(64)), f2, g)
    assert all(v == 0 for v in zero)
    for name in ("coifman-meyer", "random-bandlimited", "vanish-on-antidiagonal"):
        vals = adjoint_pairing(symbol_library(name), f1, f2, g)
        scale = max(abs(v) for v in vals)
        assert max(abs(a - b) for a in vals for b in vals) <= 1e-10 * scale


def test_estimate_known_norm(lat64):
    est = estimate_norm(symbol_library("constant-one"), ("L2", "Linf", "L2"), lat64, seed=1)
    assert 1 - 1e-6 <= est.value <= 1 + 1e-6
    assert est.label == "lattice lower bound"
    zero = estimate_norm(_zero(), "L2 x L2 -> L1", lat64, trials=2, iterations=3)
    assert zero.value == 0.0


def test_estimate_recomputable(lat64):
    m = symbol_library("coifman-meyer")
    for triple in [("L2", "Linf", "L2"), ("L2", "L2", "L1"), ("L2", "BMO", "L2"), ("L2", "L2", "H1")]:
        est = estimate_norm(m, triple, lat64, trials=2, iterations=5, seed=4)
        assert est.recompute(m) == pytest.approx(est.value, rel=1e-10)
        assert est.value == max(est.trial_values)


def test_estimate_seed_stability(lat64):
    m = symbol_library("coifman-meyer")
    vals = [estimate_norm(m, ("L2", "Linf", "L2"), lat64, seed=s).value for s in (1, 2, 3)]
    assert max(vals) / min(vals) <= 1.05


def test_estimate_deterministic(lat64):
    m = symbol_library("homogeneous-angular")
    a = estimate_norm(m, ("L2", "L2", "L1"), lat64, trials=2, iterations=4, seed=9)
    b = estimate_norm(m, ("L2", "L2", "L1"), lat64, trials=2, iterations=4, seed=9)
    assert a.value == b.value and np.array_equal(a.witness[0].values, b.witness[0].values)


def test_estimate_preconditions(lat64):
    with pytest.raises(PreconditionError):
        estimate_norm(symbol_library("constant-one"), ("L1", "L1", "L1"), lat64)
    with pytest.raises(PreconditionError):
        estimate_norm(symbol_library("constant-one"), ("L2", "L2", "L1"), make_lattice(1, 2048, 1.0))


def test_ratio_conventions(lat64):
    zero = Field(lat64, np.zeros(64))
    assert ratio(symbol_library("constant-one"), ("L2", "Linf", "L2"), zero, zero) == 0.0
