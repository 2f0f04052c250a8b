"""Vanishing-mass dyadic decomposition and the Riesz split of a BMO sample.

Run: ``python3 demos/decompositions.py``
"""

import math

import numpy as np

from bifour.decomp import fs_split, vanishing_decompose
from bifour.lattice import Field, make_lattice, random_bandlimited
from bifour.norms import bmo_norm

lat = make_lattice(1, 128, 8.0)
rng = np.random.default_rng(1)
p = random_bandlimited(lat, 10.0, rng, real=True)
# subtract a Gaussian so that the transform has zero total mass
f = Field(lat, p.values - p.at_origin() * np.exp(-lat.abs_points() ** 2))

dec = vanishing_decompose(f, 0.8)
print(f"K = {dec.K}, reconstruction error {np.max(np.abs(dec.reconstruct().values - f.values)):.1e}")
print(f"decay constant max_k 2^(k s) ||g_k||_2 / ||f||_W^s = {dec.decay_constant():.4f}")
for k, spec in enumerate(dec.spectra):
    print(f"  k={k}: |mass| {abs(spec.total_mass()):.1e}, max |g_k_hat| {np.max(np.abs(spec.coeffs)):.3e}")

torus = make_lattice(1, 256, 2 * math.pi)
x = torus.points()[..., 0]
g = Field(torus, np.log(np.abs(np.sin(x / 2)) + 1e-3))
split = fs_split(g)
err = np.max(np.abs(split.reconstruct().values - g.values))
print(f"\nRiesz split of log|sin(x/2)|: reconstruction error {err:.1e}")
print(f"||g||_BMO = {bmo_norm(g):.4f}, sum ||g_k||_inf / ||g||_BMO = {split.bmo_ratio():.4f}")
print(f"g_0 (mean plus unpaired Nyquist mode) = {split.g0.values.real.mean():.4f}, mean of g = {g.values.real.mean():.4f}")
