"""
Mean values of phase detectors over a character family
======================================================

g(chi) multiplies peak polynomials over window primes with prescribed
phases; h(chi) recenters it so that h > 0 forces every window angle
within delta of its target.  Averaged over the family mod Q, the main
term dominates and the discrepancy stays bounded by a small constant.
"""

import numpy as np

from ffluniv import (
    ParamSet,
    PhaseAssignment,
    Poly,
    field,
    mv_g_experiment,
    mv_h_experiment,
    peak_poly,
    primes_of_degree,
)

spec = field(3)
x = Poly.x(spec)

# modulus: product of the three linears and two cubic primes (degree 9)
cubics = primes_of_degree(spec, 3)
Q = x * (x + Poly.one(spec)) * (x + Poly.one(spec) + Poly.one(spec))
Q = Q * cubics[0] * cubics[1]
print("modulus degree", Q.degree)

# window: the three quadratic primes, with fixed target phases
rng = np.random.default_rng(20260823)
window = primes_of_degree(spec, 2)
phases = PhaseAssignment(list(zip(window, rng.uniform(0, 1, len(window)))))

params = ParamSet.from_degree(3, Q.degree)
print("derived parameters: K = %d, delta = %.4f" % (params.K, params.delta))
f = peak_poly(params.K, params.delta)

g = mv_g_experiment(Q, phases, f)
print("\ng experiment: main %.6e  discrepancy constant %.3f"
      % (g.main, g.discrepancy))

h = mv_h_experiment(Q, phases, f)
ratio = h.lhs_plus / h.main
print("h experiment: positive-part mass / main = %.4f" % ratio)
print("characters with h > 0 exist:", h.lhs_plus > 0)
