"""A space where signed super-democracy fails while disjoint pairs stay controlled.

The block space is built from blocks S_1, S_2, ... of sizes N_1, N_2, ...
with an l^2-type norm across blocks and balanced-sign functionals inside
them.  Half of S_2 together with half of S_3 has norm N_2 / 32, while S_2
itself has norm 2.  Sampled disjoint pairs never exceed sqrt(N_2).

Run: python3 demos/block_gap.py
"""

from glab.experiments import witness_block
from glab.spaces import BlockSpec

out = witness_block(k=2, samples=100)
print(f"N_2 = {out['N_k']}")
print(f"||1_A|| = {out['norm_A']:g}   ||1_S2|| = {out['norm_B']:g}   ratio = {out['ratio']:g}")
print(f"closed-form lower estimate {out['gap_formula']:.2f}, holds: {out['gap_formula_holds']}")
print(f"{out['pair_count']} disjoint-pair quotients, max {out['pair_max']:.3f}"
      f" <= sqrt(N_2) = {out['pair_bound']:g}: {out['pair_bound_holds']}")

small = witness_block(BlockSpec.geometric(8, 3), k=2, samples=100)
print(f"\ngeometric blocks of size 8^k: ratio {small['ratio']:.3f},"
      f" max sampled quotient {small['pair_max']:.3f} (bound {small['pair_bound']:.3f})")
