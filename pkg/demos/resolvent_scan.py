"""Scan the resolvent norm along the imaginary axis at alpha = 0 and fit
the decay of its supremum in beta."""
from ostab import exponent_fit, sup_resolvent

points = []
for beta in (1e3, 3e3, 1e4):
    s = sup_resolvent("poiseuille", 0.0, beta, npts=60)
    points.append((beta, s.value))
    print(f"beta = {beta:8.0f}  sup = {s.value:.4e}  at Im lambda = {s.nu_star:.4f}")
print("fitted exponent:", round(exponent_fit(points)["slope"], 4))
