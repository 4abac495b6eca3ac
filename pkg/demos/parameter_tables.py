"""Exact parameter tables on small windows and the inequalities tying them together.

Every parameter is a sup of norm ratios over finite families of sets and
sign patterns, so on a window of 8 indices the tables are exact.  The
chain check then asserts the democracy inequalities line by line.

Run: python3 demos/parameter_tables.py
"""

from glab.experiments import mu_chain_checks
from glab.params import conditionality_est, fundamental_function, gamma_cc, super_democracy
from glab.spaces import parse_space

m = 3
for desc in ("summing:8", "difference:8", "lp:1:8", "lp:2:8"):
    S = parse_space(desc)
    mt, mtd = super_democracy(S, m)
    rows = {
        "mu~": mt, "mu~d": mtd, "gamma": gamma_cc(S, m),
        "phi_r": fundamental_function(S, m), "k": conditionality_est(S, m)[0],
    }
    print(desc)
    for name, tab in rows.items():
        print(f"  {name:<6}" + "".join(f"{tab[j]:9.4f}" for j in range(1, m + 1)) + f"   ({tab.mode})")
    res = mu_chain_checks(S, m)
    bad = [c.name for c in res["checks"] if not c.satisfied]
    print(f"  {len(res['checks'])} inequality checks, violations: {bad or 'none'}\n")
