"""
Bulk coefficient transform vs per-character sums
================================================

L-polynomial coefficients are character sums over monic residues, so the
whole family mod Q can be produced in one group transform instead of one
pass per character.  This compares the two paths on the same modulus for
agreement and speed.
"""

import time

import numpy as np

from ffluniv import Poly, UnitGroup, field, l_coeffs, l_coeffs_all

spec = field(3)
Q = Poly.x(spec) ** 5
group = UnitGroup(Q)
chars = list(group.characters())
print("modulus x^5 over F_3, family size", group.phi)

t0 = time.perf_counter()
bulk = l_coeffs_all(group)
t_bulk = time.perf_counter() - t0

t0 = time.perf_counter()
singles = [None if c.is_principal else l_coeffs(c) for c in chars]
t_single = time.perf_counter() - t0

diff = 0.0
for row, L in zip(bulk, singles):
    if L is None:
        continue
    n = L.coeffs.size
    diff = max(diff, float(np.abs(row[:n] - L.coeffs).max()))
    if n < row.size:
        diff = max(diff, float(np.abs(row[n:]).max()))

print("bulk transform   %8.4f s" % t_bulk)
print("per-character    %8.4f s" % t_single)
print("speedup          %8.1fx" % (t_single / t_bulk))
print("max coefficient difference %.3e" % diff)
assert diff < 1e-9
