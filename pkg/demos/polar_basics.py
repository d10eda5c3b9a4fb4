"""Polar decomposition of singular and nonsingular matrices."""

import numpy as np

from centerlab import polar_decompose, is_polar_pair
from centerlab.generators import dense_random, jordan

np.set_printoptions(precision=4, suppress=True)

# A nilpotent Jordan block has rank d-1; U is the shift on the range of T*.
t = jordan(3, 0)
pf = polar_decompose(t)
print("rank:", pf.rank)
print("U =\n", pf.u.real)
print("|T| =\n", pf.modulus.real)
print("polar pair:", is_polar_pair(t, pf.u).value.value)

# U*U is the projection onto the range of T*, not the identity.
print("U*U =\n", (pf.u.conj().T @ pf.u).real)

# Rank-deficient random matrices behave the same way.
for deficit in (0, 2, 5):
    t = dense_random(8, seed=3, rank_deficit=deficit)
    pf = polar_decompose(t)
    print(f"deficit {deficit}: rank {pf.rank}, factor residual {pf.residual_factor:.1e}, "
          f"valid {pf.is_valid()}")
