"""Locate the critical Reynolds number of plane Poiseuille flow and print
the leftmost eigenvalue and phase speed at a few Reynolds numbers around it."""
from ostab import SpectralParams, assemble_os, build_grid, critical_reynolds, leftmost, poiseuille
from ostab.sweeps import convert_c

r = critical_reynolds("poiseuille", n=96, criterion="classical")
print(f"R_c = {r['R_c']:.4f}  alpha_c = {r['alpha_c']:.5f}  c_c = {r['c_c'].real:.6f}")

g = build_grid(96)
alpha = r["alpha_c"]
for reynolds in (0.9 * r["R_c"], r["R_c"], 1.1 * r["R_c"]):
    params = SpectralParams(alpha=alpha, beta=alpha * reynolds)
    lam = leftmost(assemble_os(g, poiseuille(), params))
    c = convert_c(params, lam)
    print(f"R = {reynolds:10.2f}  lambda = {lam.real:+.3e} {lam.imag:+.6f}i  Im c = {c.imag:+.2e}")
