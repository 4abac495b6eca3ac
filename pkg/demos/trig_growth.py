"""Growth of the Chebyshev Lebesgue ratio for the trigonometric system in L^p.

Dirichlet blocks are flat in L^2 but have L^p norms of a different order
than lacunary sets of the same size.  Pitting one against the other gives
ratios growing like m^|1/p - 1/2|; the log-log slope of the witness ratios
is printed next to that exponent.

Run: python3 demos/trig_growth.py   (about a minute; the p = inf case is the slowest)
"""

import math

from glab.experiments import trig_slope

for p in (1.0, 4 / 3, 2.0, 4.0, math.inf):
    res = trig_slope(p)
    ratios = " ".join(f"{r:7.3f}" for r in res["ratios"])
    print(f"p = {str(res['p'])[:5]:<5}  ratios {ratios}   slope {res['slope']:.3f}"
          f"  expected {res['expected_slope']:.3f}")
    if "kernel_norms" in res:
        print("          L^1 norms of the de la Vallee-Poussin kernels:",
              " ".join(f"{v:.3f}" for v in res["kernel_norms"]))
