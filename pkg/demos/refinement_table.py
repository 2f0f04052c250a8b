"""Operator-norm estimates against symbol norms under lattice refinement.

For each symbol family the ratio of the estimated ``L^2 x L^inf -> L^2``
norm to the dyadic mixed Sobolev norm is printed at two grid sizes; a
bounded ratio that barely moves under refinement is the numerical footprint
of a boundedness estimate.

Run: ``python3 demos/refinement_table.py``
"""

import math

from bifour.bilinear import estimate_norm
from bifour.lattice import make_lattice
from bifour.norms import SmoothnessParams, sup_dyadic_norm
from bifour.symbols import make_window_family, parse_symbol

FAMILIES = ["constant-one", "coifman-meyer", "homogeneous-angular(l=2)", "tensor(a=gauss,b=lorentz)"]
w = make_window_family()
params = SmoothnessParams(0.4, 0.6, "mixed-2")

print(f"{'symbol':<28} {'N':>4} {'estimate':>10} {'sup norm':>10} {'ratio':>8}")
for name in FAMILIES:
    m = parse_symbol(name)
    for level, N in enumerate((64, 128)):
        lat = make_lattice(1, N, 2 * math.pi)
        est = estimate_norm(m, ("L2", "Linf", "L2"), lat, trials=2, iterations=10, seed=7)
        sup = sup_dyadic_norm(m, params, (-4, 4), w, make_lattice(1, 64 * 2**level, 8.0))
        print(f"{name:<28} {N:>4} {est.value:>10.4f} {sup:>10.4f} {est.value / sup:>8.4f}")
