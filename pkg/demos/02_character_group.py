"""
Dirichlet characters modulo a polynomial
========================================

Enumerate the character group of (F_q[x]/Q)^*, evaluate characters as
exact roots of unity, and confirm the orthogonality mean-value identity
on random coefficient vectors.
"""

import numpy as np

from ffluniv import Poly, UnitGroup, field, orthogonality_mean_value

spec = field(3)
x = Poly.x(spec)
Q = x**3 + x + x  # x^3 + 2x = x (x+1) (x+2)

group = UnitGroup(Q)
print("modulus        ", Q.text)
print("group order    ", group.phi)
print("generator orders", list(group.orders))
print("character count", sum(1 for _ in group.characters()))

# characters take exact root-of-unity values: chi(f) = e(j / N)
chi = next(c for c in group.characters() if not c.is_principal)
f = x**2 + Poly.one(spec)  # coprime to Q, which kills x, x+1, x+2
j = chi.angle_numerator(f)
print("\nchi =", chi.text)
print("chi(%s) = e(%d / %d) = %s" % (f.text, j, group.N, chi(f)))

# mean over chi of |sum a_N chi(N)|^2  ==  phi(Q) * sum |a_N|^2
rng = np.random.default_rng(7)
units = [Poly.from_code(spec, c) for c in range(1, 27)
         if group.dlog_flat[c] >= 0]
a = rng.standard_normal(len(units)) + 1j * rng.standard_normal(len(units))
lhs, rhs = orthogonality_mean_value(group, list(zip(units, a)))
print("\northogonality lhs %.12f" % lhs)
print("orthogonality rhs %.12f" % rhs)
print("relative error    %.3e" % (abs(lhs - rhs) / rhs))
