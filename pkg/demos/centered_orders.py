"""How far up the powers does the polar decomposition stay multiplicative?

block_shift(n) is exactly (n+1)-centered.  Both oracles, the definitional
one (T^k = U^k |T^k| for every k) and the commutator one, locate the same
boundary.
"""

from centerlab import centered_report, max_centered_order
from centerlab.generators import block_shift_family, jordan, weighted_shift

for n in range(1, 5):
    order, rep = max_centered_order(block_shift_family(n), n + 3)
    print(f"block_shift({n}): order {order} "
          f"(definitional {rep.max_order_definitional}, "
          f"commutator {rep.max_order_commutator})")

# Per-level verdicts need not be monotone (a high power can vanish); the
# cumulative ones are.
rep = centered_report(block_shift_family(2), 5)
pairs = zip(rep.cumulative("definitional"), rep.cumulative("commutator"))
for k, (a, b) in enumerate(pairs, start=1):
    print(f"  level {k}: definitional {a.value.value:6s} {a.ratio:.1e}   "
          f"commutator {b.value.value:6s} {b.ratio:.1e}")

# Weighted shifts are centered; a non-nilpotent Jordan block is not even binormal.
print("weighted_shift(1,2,3):", max_centered_order(weighted_shift([1, 2, 3]), 6)[0])
print("jordan(2, 1):", max_centered_order(jordan(2, 1.0), 4)[0])
