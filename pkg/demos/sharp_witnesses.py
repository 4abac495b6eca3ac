"""Witnesses on which the Chebyshev greedy step is as bad as the general bound allows.

For the summing and difference bases the best correction on the chosen
t-greedy set is zero, so the Chebyshev step gains nothing over plain
thresholding, and the ratio residual / sigma_m equals 1 + 2(1 + 1/t)m.

Run: python3 demos/sharp_witnesses.py
"""

from glab.experiments import witness_difference, witness_summing

print(f"{'basis':<11}{'m':>3}{'t':>6}{'residual':>10}{'sigma':>8}{'ratio':>8}{'bound':>8}")
for make, name in ((witness_summing, "summing"), (witness_difference, "difference")):
    for m in (1, 2, 4):
        for t in (1.0, 0.5, 0.25):
            r = make(m, t)
            print(f"{name:<11}{m:>3}{t:>6g}{r.residual:>10g}{r.sigma:>8g}{r.ratio:>8g}{r.expected_ratio:>8g}")

r = witness_summing(2, 0.5)
print("\nsumming witness for m = 2, t = 1/2:", r.witness.to_text())
print("greedy set:", r.greedy_set, " optimal coefficients:", r.extra["chebyshev_coefficients"])
