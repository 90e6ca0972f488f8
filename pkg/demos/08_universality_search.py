"""
Universality: approximating targets by L-functions
==================================================

Scan a character family for L-functions that sup-approximate a target
on an annulus grid, then recover a planted L-function with the guided
(phase-fitting) search instead of brute force.
"""

import numpy as np

from ffluniv import (
    Poly,
    TargetFunction,
    UnitGroup,
    default_annulus_grid,
    field,
    guided_search,
    l_coeffs,
    universality_search,
)

spec = field(3)
x = Poly.x(spec)
grid = default_annulus_grid(3)

# exhaustive scan: how close does the family mod x^6 get to the constant 1
Q = x**6
one = TargetFunction.constant(1.0)
rep = universality_search(Q, one, grid, 0.5)
print("modulus x^6: searched %d characters" % rep.searched)
print("best distance to F = 1:  %.3e" % rep.best_distance)
print("proportion within 0.5:   %.4f" % rep.proportion)

# guided search: plant a known L-function as the target and find it back
group = UnitGroup(x**5)
chars = [c for c in group.characters() if not c.is_principal]
star = chars[41]
target = TargetFunction.polynomial(l_coeffs(star).coeffs)
out = guided_search(group, target, grid, mu=0)
print("\nplanted exponents   ", star.exponents)
print("recovered exponents ", out.best_exponents)
print("recovered distance   %.3e" % out.best_distance)
print("candidates evaluated %d of %d" % (out.searched, len(chars)))

# distinct characters can share an L-polynomial, so recovery up to an
# exact tie is the right notion of success
found = next(c for c in chars if c.exponents == out.best_exponents)
tie = np.allclose(l_coeffs(found).coeffs, l_coeffs(star).coeffs)
print("same L-polynomial as the planted character:", tie)
