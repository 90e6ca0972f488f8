"""
Peak trigonometric polynomials
==============================

peak_poly(K, delta) builds a degree-K trigonometric polynomial with
f(0) = 1 that decays below 2 exp(-pi K delta) once the circle distance
to 0 exceeds delta.  These localize phase constraints: a character whose
prime angles all sit within delta of prescribed targets is detected by a
positive mean of f over its angles.
"""

import math

import numpy as np

from ffluniv import default_epsilon, kappa, peak_poly

print(" K   delta   off-peak sup   analytic bound   kappa    epsilon")
for K in (16, 32, 64):
    for delta in (0.1, 0.2):
        f = peak_poly(K, delta)
        bound = 2 * math.exp(-math.pi * K * delta)
        print("%3d   %.2f    %.6e   %.6e   %.4f   %.3e"
              % (K, delta, f.sup_off_peak, bound, kappa(f),
                 default_epsilon(f)))
        assert abs(f(0.0) - 1) < 1e-12
        assert f.sup_off_peak <= bound

# the mass kappa = sum |c_k|^2 equals the mean square of f on the circle
f = peak_poly(32, 0.15)
mids = (np.arange(4096) + 0.5) / 4096
quad = float(np.mean(np.abs(f(mids)) ** 2))
print("\nParseval check: kappa = %.10f, quadrature = %.10f" % (kappa(f), quad))
