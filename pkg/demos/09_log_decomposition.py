"""
Decomposing log L and splitting the family
==========================================

Off the critical line, log L(s, chi) splits into low-degree prime
powers, window primes, a bounded bulk, and a tail.  Splitting the
family by the size of the log on a right-half-strip grid isolates the
small "good" majority from the large "bad" minority.
"""

import numpy as np

from ffluniv import (
    Poly,
    UnitGroup,
    decompose_logL,
    field,
    good_bad_split,
    peak_poly,
    PhaseAssignment,
    rectangle_grid,
    primes_of_degree,
)

spec = field(3)
Q = Poly.x(spec) ** 4
group = UnitGroup(Q)
chi = next(c for c in group.characters() if not c.is_principal)

# the four pieces recombine to log L pointwise
s = 0.8 + 0.3j
f1, f2, f3, f4, residual = decompose_logL(chi, s, mu=1, rho=2, K=4)
print("s = %s" % s)
print("low primes    f1 = %s" % f1)
print("window primes f2 = %s" % f2)
print("bulk          f3 = %s" % f3)
print("tail          f4 = %s" % f4)
print("recombination residual = %.3e" % residual)

# family split by sup of |log L| against the threshold (deg Q)^(-d/2)
grid = rectangle_grid(3, n_sigma=4, n_t=4, sigma_lo=0.6, sigma_hi=0.9)
prims = primes_of_degree(spec, 1)[1:]  # x divides Q, skip it
phases = PhaseAssignment([(prims[0], 0.23), (prims[1], 0.71)])
split = good_bad_split(Q, phases, peak_poly(16, 0.2), K=4, grid=grid)
print("\ngood characters %d, bad characters %d"
      % (split.good_size, split.bad_size))
print("good ratio %.3f, threshold %.4f" % (split.good_ratio, split.threshold))
