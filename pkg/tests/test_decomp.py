import math

import numpy as np
import pytest

from bifour.calculus import riesz_transform
from bifour.decomp import (
    annular_bump,
    fs_split,
    homogeneous_product_sobolev_check,
    read_decomposition,
    vanishing_decompose,
    write_decomposition,
)
from bifour.errors import PreconditionError, RangeError
from bifour.lattice import Field, Spectrum, make_lattice, random_bandlimited, spectral_transform
from bifour.norms import sobolev_norm
from bifour.symbols import make_window_family


def _admissible(lat, rng, radius=6.0):
    p = random_bandlimited(lat, radius, rng, real=True)
    return Field(lat, p.values - p.at_origin() * np.exp(-lat.abs_points() ** 2))


@pytest.fixture
def lat8():
    return make_lattice(1, 64, 8.0)


def test_annular_bump():
    r = np.linspace(0, 3, 301)
    b = annular_bump(r)
    assert np.all(b[(r <= 1) | (r >= 2)] == 0)
    assert annular_bump(1.5) == pytest.approx(1.0)


def test_low_band_input_is_its_own_first_piece():
    lat = make_lattice(1, 64, 8.0)
    xi = lat.frequencies()[..., 0]
    # spectrum on |xi| <= 1 with zero total mass
    coeffs = np.where(np.abs(xi) <= 1.0, xi * (1.2 - np.abs(xi)), 0.0) + 0j
    assert abs(Spectrum(lat, coeffs).total_mass()) < 1e-15
    f = spectral_transform(Spectrum(lat, coeffs))
    dec = vanishing_decompose(f, 0.8)
    assert all(abs(a) < 1e-15 for a in dec.coefficients)
    np.testing.assert_allclose(dec.pieces[0].values, f.values, atol=1e-14)
    for g in dec.pieces[1:]:
        assert np.max(np.abs(g.values)) < 1e-14


def test_vanishing_invariants(rng, lat8):
    f = _admissible(lat8, rng)
    dec = vanishing_decompose(f, 0.8)
    assert np.max(np.abs(dec.reconstruct().values - f.values)) <= 1e-10 * np.max(np.abs(f.values))
    l1 = lat8.freq_weight * np.sum(np.abs(spectral_transform(f).coeffs))
    r = lat8.abs_frequencies()
    for k, spec in enumerate(dec.spectra):
        assert abs(spec.total_mass()) <= 1e-10 * l1
        upper = 2.0 ** (k + 1) if k < dec.K else np.inf
        lower = 2.0 ** (k - 1) if k > 0 else 0.0
        assert np.all(spec.coeffs[(r > upper) | (r < lower)] == 0)


def test_decay_constant_recorded(rng, lat8):
    consts = [vanishing_decompose(_admissible(lat8, rng), 0.8).decay_constant() for _ in range(20)]
    assert np.all(np.isfinite(consts)) and max(consts) < 10


def test_vanishing_preconditions(rng, lat8):
    f = _admissible(lat8, rng)
    with pytest.raises(PreconditionError):
        vanishing_decompose(f, 0.5)
    with pytest.raises(PreconditionError):
        vanishing_decompose(Field(lat8, f.values + 1.0), 0.8)
    coarse = make_lattice(1, 16, 2 * math.pi)  # integer frequencies: no grid point strictly inside (1, 2)
    with pytest.raises(RangeError):
        vanishing_decompose(_admissible(coarse, rng, radius=3.0), 0.8)
    with pytest.raises(RangeError):
        vanishing_decompose(f, 0.8, K=99)


def test_vanishing_cosine_windows(rng, lat8):
    f = _admissible(lat8, rng)
    dec = vanishing_decompose(f, 1.0, w=make_window_family("cosine"))
    np.testing.assert_allclose(dec.reconstruct().values, f.values, atol=1e-10)


def test_fs_split_examples(rng, lat64):
    c = fs_split(Field(lat64, np.full(64, 2.5)))
    np.testing.assert_allclose(c.g0.values, 2.5)
    assert np.max(np.abs(c.components[0].values)) < 1e-14
    x = lat64.points()[..., 0]
    s = fs_split(Field(lat64, np.cos(x)))
    assert np.max(np.abs(s.g0.values)) < 1e-14
    np.testing.assert_allclose(s.components[0].values, -np.sin(x), atol=1e-14)
    np.testing.assert_allclose(riesz_transform(Field(lat64, -np.sin(x)), 1).values, np.cos(x), atol=1e-14)


@pytest.mark.parametrize("n, N", [(1, 64), (2, 16)])
def test_fs_split_reconstruction(rng, n, N):
    lat = make_lattice(n, N, 2 * math.pi)
    g = Field(lat, rng.standard_normal(lat.shape))
    split = fs_split(g)
    assert np.max(np.abs(split.reconstruct().values - g.values)) <= 1e-12 * np.max(np.abs(g.values))
    assert all(np.all(c.values.imag == 0) for c in split.components)
    assert np.isfinite(split.bmo_ratio())


def test_homogeneous_check_examples(rng, lat8):
    chi = make_window_family().theta(lat8.abs_points())
    p = random_bandlimited(lat8, 4.0, rng, real=True)
    f = Field(lat8, chi * (p.values - p.at_origin()))
    top, bottom = homogeneous_product_sobolev_check(lambda x: np.ones(x.shape[:-1]), f, 0.8, 0.4)
    # sigma = 1 except at the origin, where f vanishes anyway
    assert top == pytest.approx(sobolev_norm(f, 0.4), rel=1e-12)
    assert top <= bottom
    assert homogeneous_product_sobolev_check(lambda x: 1.0, Field(lat8, np.zeros(64)), 0.8, 0.4) == (0.0, 0.0)


def test_homogeneous_check_preconditions(rng, lat8):
    f = Field(lat8, np.exp(-lat8.abs_points() ** 2))
    sign = lambda x: -1j * np.sign(x[..., 0])  # noqa: E731
    with pytest.raises(PreconditionError):
        homogeneous_product_sobolev_check(sign, f, 0.8, 0.4)  # f(0) != 0
    with pytest.raises(PreconditionError):
        homogeneous_product_sobolev_check(sign, f, 0.4, 0.2)
    with pytest.raises(PreconditionError):
        homogeneous_product_sobolev_check(sign, f, 0.8, 0.9)


def test_homogeneous_ratio_refinement():
    consts = []
    w = make_window_family()
    for N in (64, 128):
        lat = make_lattice(1, N, 8.0)
        chi = w.theta(lat.abs_points())
        ratios = []
        for seed in range(20):
            p = random_bandlimited(lat, 4.0, np.random.default_rng(seed), real=True)
            f = Field(lat, chi * (p.values - p.at_origin()))
            top, bottom = homogeneous_product_sobolev_check(
                lambda x: -1j * x[..., 0] / np.abs(x[..., 0]), f, 0.8, 0.4
            )
            ratios.append(top / bottom)
        consts.append(max(ratios))
    assert max(consts) / min(consts) <= 1.2


def test_decomposition_files_roundtrip(tmp_path, rng, lat8):
    dec = vanishing_decompose(_admissible(lat8, rng), 0.8)
    paths = write_decomposition(dec.pieces, tmp_path / "pieces")
    assert [p.name for p in paths][:2] == ["piece_000.txt", "piece_001.txt"]
    back = read_decomposition(tmp_path / "pieces")
    for a, b in zip(back, dec.pieces):
        assert np.array_equal(a.values, b.values)
