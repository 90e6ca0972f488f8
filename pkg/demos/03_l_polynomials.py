"""
L-functions as polynomials and their zeros
==========================================

For a nonprincipal character mod Q the L-function is a polynomial in
u = q^{-s} of degree at most deg Q - 1.  Every inverse root sits either
on the circle |alpha| = sqrt(q) (critical zeros) or at alpha = 1
(trivial zeros): the function-field analogue of the critical line.
"""

import numpy as np

from ffluniv import Poly, UnitGroup, field, l_coeffs, rh_family_sweep

spec = field(3)
Q = Poly.parse(spec, "1 2 0 1")  # irreducible cubic
group = UnitGroup(Q)

print("modulus", Q.text, " family size", group.phi)
print()
for chi in group.characters():
    if chi.is_principal:
        continue
    L = l_coeffs(chi)
    roots = L.inverse_roots
    moduli = ", ".join("%.6f" % m for m in np.abs(roots))
    print("chi %-16s degree %d  |inverse roots| = %s"
          % (chi.exponents, L.observed_degree, moduli))

print("\nsqrt(q)          = %.6f" % np.sqrt(3))

# the family sweep classifies every root of every character at once
records = rh_family_sweep(group)
counts = {}
for rec in records:
    for c in rec.classifications:
        counts[c] = counts.get(c, 0) + 1
print("root classification over the family:", counts)
assert "VIOLATION" not in counts
