"""Equivalence checks on single operators.

Each verifier evaluates every statement of one equivalence and reports
whether they agree.  A larger n asks for more centeredness.
"""

from centerlab import (verify_theorem_3_4, verify_theorem_4_3, verify_theorem_5_1,
                       verify_corollary_5_4)
from centerlab.generators import block_shift_family, weighted_shift
from centerlab.theorems import OperatorContext

t = block_shift_family(2)
ctx = OperatorContext(t)
for verify, n in ((verify_theorem_3_4, 2), (verify_theorem_3_4, 3),
                  (verify_theorem_4_3, 2), (verify_theorem_4_3, 3),
                  (verify_theorem_5_1, 2)):
    v = verify(t, n, ctx=ctx)
    labels = " ".join(f"{c.label}={c.verdict.value.value}" for c in v.conditions)
    print(f"{v.theorem} n={n}: {v.status:13s} {labels}")

v = verify_corollary_5_4(weighted_shift([1, 2, 3]), 4)
print("cor54 on a weighted shift:", v.outcome.value, "with", len(v.conditions), "conditions")
