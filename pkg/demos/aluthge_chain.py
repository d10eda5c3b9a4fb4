"""Iterated generalized Aluthge transforms of a block shift.

The chain is renormalized at each step; log_scale records the discarded
norm so the true step can be recovered.  Each step carries a reliability
flag based on the rank it should have and on its conditioning.
"""

from centerlab import AluthgeParams, iterated_aluthge, aluthge_modulus_closed_forms
from centerlab.generators import block_shift_family, quasinormal

t = block_shift_family(2)
chain = iterated_aluthge(t, AluthgeParams(0.5, 0.5), 3)
for step in chain.steps:
    print(f"step {step.k}: rank {step.polar.rank}, cond {step.polar.cond:.2e}, "
          f"binormal {chain.binormal(step.k).value.value}, reliable {step.reliable}")

# For binormal T the modulus of the transform has a closed form.
q = quasinormal(4, seed=1)
cf = aluthge_modulus_closed_forms(q, AluthgeParams(1.0, 2.0))
print("closed forms:", cf.match_m.value.value, cf.match_mstar.value.value)
