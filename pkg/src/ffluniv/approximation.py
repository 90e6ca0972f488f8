"""Peak trigonometric polynomials, character-targeting functionals, and fits.

A peak polynomial f concentrates at theta = 0 with f(0) = 1 and
|f| <= 2 exp(-pi K delta) away from the peak.  Products of |f|^2 evaluated
at character angles (the g and h functionals) then detect characters whose
values chi(P) land near prescribed targets e(theta_P); their mean values
over the full character group are computable exactly and sit close to
kappa^{|P-set|} phi(Q).  A constructive sup-norm fit assigns the targets
theta_P so that a short Dirichlet polynomial tracks a given function.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .algebra import (
    Poly,
    factorize,
    irreducible_test,
    prime_count,
    primes_of_degree,
)
from .characters import UnitGroup

PEAK_GRID = 10_000


def _as_group(Q, capacity=2_000_000):
    if isinstance(Q, UnitGroup):
        return Q
    return UnitGroup(Q, capacity=capacity)


class PeakPolynomial:
    """One-sided trigonometric polynomial sum c_k e(k theta), k = 0..K.

    Normalized to f(0) = 1; off the window [-delta, delta] the modulus
    stays below 2 exp(-pi K delta).  sup_off_peak is the analytic bound
    1 / T_m(x0) valid on all of [delta, 1 - delta]; grid_off_peak_max is
    the certified measurement on the build grid, evaluated through the
    closed form in log space so that magnitudes far below double rounding
    noise are still measured faithfully.
    """

    def __init__(self, K, delta, coeffs, sup_off_peak, grid_off_peak_max):
        self.K = K
        self.delta = delta
        self.coeffs = np.asarray(coeffs, dtype=complex)
        self.sup_off_peak = float(sup_off_peak)
        self.grid_off_peak_max = float(grid_off_peak_max)

    def __repr__(self):
        return f"PeakPolynomial(K={self.K}, delta={self.delta})"

    def __call__(self, theta):
        t_arr = np.asarray(theta, dtype=float)
        w = np.exp(2j * np.pi * t_arr)
        acc = np.zeros_like(w)
        for c in self.coeffs[::-1]:
            acc = acc * w + c
        return complex(acc) if t_arr.ndim == 0 else acc


def peak_poly(K, delta):
    """Build the modulated-Chebyshev peak polynomial for (K, delta).

    T_m of an affine cosine map sends theta = 0 to x0 > 1 and all of
    [delta, 1 - delta] into [-1, 1], so the normalized window peaks at 1
    and decays like 1 / T_m(x0); modulation by e(m theta) makes the
    frequencies one-sided with m = K // 2.  The decay contract
    |f| <= 2 exp(-pi K delta) is certified at build time, both through
    the analytic sup bound and on a dense grid, and failure raises.
    """
    if K < 1:
        raise ValueError("K must be >= 1")
    if not 0 < delta <= 0.5:
        raise ValueError("delta must lie in (0, 1/2]")
    m = K // 2
    if m < 1:
        raise ValueError("K must be >= 2 for the modulated window")
    cos_d = math.cos(2 * math.pi * delta)
    if cos_d <= -1.0 + 1e-12:
        raise ArithmeticError(
            f"peak construction degenerates at delta={delta}: the cosine map "
            "has no room between peak and window"
        )
    a = 2.0 / (1.0 + cos_d)
    b = a - 1.0
    x0 = a + b
    y0 = m * math.acosh(x0)
    if y0 > 690:
        raise ArithmeticError("peak parameters overflow the double range")
    # log T_m(x0) = y0 + log((1 + e^{-2 y0}) / 2), stable for large y0
    log_peak = y0 + math.log1p(math.exp(-2 * y0)) - math.log(2.0)
    sup_off_peak = math.exp(-log_peak)
    target = 2.0 * math.exp(-math.pi * K * delta)
    if sup_off_peak > target:
        raise ArithmeticError(
            f"peak construction cannot certify the decay bound at K={K}, "
            f"delta={delta}: off-peak sup {sup_off_peak:.3e} > {target:.3e}"
        )
    # sample on a fine circle and read coefficients off the FFT
    M = 1 << max(12, (2 * K + 2).bit_length())
    theta = np.arange(M) / M
    mapped = a * np.cos(2 * np.pi * theta) + b
    vals = np.cos(m * np.arccos(np.clip(mapped, -1.0, 1.0)))
    big = mapped > 1.0
    vals[big] = np.cosh(m * np.arccosh(mapped[big]))
    vals = vals / math.cosh(y0) * np.exp(2j * np.pi * m * theta)
    spectrum = np.fft.fft(vals) / M
    coeffs = spectrum[: K + 1].copy()
    leak = np.abs(np.delete(spectrum, np.arange(K + 1))).max() if M > K + 1 else 0.0
    if leak > 1e-12:
        raise ArithmeticError(f"peak spectrum leaks outside 0..K: {leak:.3e}")
    coeffs /= coeffs.sum()
    # certify on the grid through the closed form in log space; summing the
    # coefficients cannot see magnitudes under double rounding, the closed
    # form can
    grid = np.arange(PEAK_GRID) / PEAK_GRID
    off = grid[(grid >= delta) & (grid <= 1 - delta)]
    mapped_off = np.clip(a * np.cos(2 * np.pi * off) + b, -1.0, 1.0)
    with np.errstate(divide="ignore"):
        log_mag = np.log(np.abs(np.cos(m * np.arccos(mapped_off)))) - log_peak
    measured = float(np.exp(log_mag.max())) if off.size else 0.0
    if measured > target:
        raise ArithmeticError(
            f"peak decay bound failed on the grid: {measured:.3e} > {target:.3e}"
        )
    f = PeakPolynomial(K, delta, coeffs, sup_off_peak, measured)
    if abs(f(0.0) - 1.0) > 1e-12:
        raise ArithmeticError("peak normalization failed")
    mags = np.abs(f(grid))
    if not (mags.max() <= 1 + 1e-9 and mags[0] >= mags.max() - 1e-12):
        raise ArithmeticError("peak grid max is not attained at theta = 0")
    # the coefficient path must agree with the closed form wherever doubles
    # can resolve it
    coarse = np.abs(f(off)).max() if off.size else 0.0
    if coarse > max(target, 1e-13):
        raise ArithmeticError(
            f"coefficient evaluation disagrees with the certified bound: "
            f"{coarse:.3e}"
        )
    return f


def kappa(f):
    """L^2 mass of the peak polynomial, sum |c_k|^2 by Parseval."""
    return float(np.sum(np.abs(f.coeffs) ** 2))


def default_epsilon(f, base="e"):
    """Penalty weight for h: 4 base^(-2 pi K delta), base e unless asked."""
    if base == "e":
        return 4.0 * math.exp(-2 * math.pi * f.K * f.delta)
    b = float(base)
    if b <= 1:
        raise ValueError("base must exceed 1")
    return 4.0 * b ** (-2 * math.pi * f.K * f.delta)


class PhaseAssignment:
    """Ordered map from prime moduli targets: prime P -> angle theta_P in [0,1)."""

    def __init__(self, items):
        pairs = []
        seen = set()
        for P, theta in items:
            if not isinstance(P, Poly):
                raise ValueError("phase keys must be Poly primes")
            if not irreducible_test(P.monic() if P.is_monic else P):
                raise ValueError(f"phase key is not prime: {P.text}")
            theta = float(theta) % 1.0
            if P.code in seen:
                raise ValueError(f"duplicate phase key: {P.text}")
            seen.add(P.code)
            pairs.append((P, theta))
        pairs.sort(key=lambda pt: (pt[0].degree, pt[0].code))
        self._pairs = tuple(pairs)

    def __len__(self):
        return len(self._pairs)

    def __iter__(self):
        return iter(self._pairs)

    def __repr__(self):
        inner = ", ".join(f"{P.text!r}: {t:.6f}" for P, t in self._pairs)
        return f"PhaseAssignment({{{inner}}})"

    @property
    def primes(self):
        return tuple(P for P, _ in self._pairs)

    @property
    def thetas(self):
        return tuple(t for _, t in self._pairs)

    @property
    def max_degree(self):
        return max((P.degree for P, _ in self._pairs), default=0)

    @property
    def min_degree(self):
        return min((P.degree for P, _ in self._pairs), default=0)

    def theta_of(self, P):
        for Q, t in self._pairs:
            if Q.code == P.code and Q.spec == P.spec:
                return t
        raise KeyError(P.text)


def _character_angles(chi, phases):
    """Exact angles arg chi(P) / 2pi as fractions j/N; raises off units."""
    group = chi.group
    out = []
    for P, _ in phases:
        j = chi.angle_numerator(P)
        if j < 0:
            raise ValueError(f"phase prime divides the modulus: {P.text}")
        out.append(j / group.N)
    return np.array(out) if out else np.zeros(0)


def g_func(chi, phases, f):
    """prod over target primes of |f(arg chi(P)/2pi - theta_P)|^2."""
    angles = _character_angles(chi, phases)
    if angles.size == 0:
        return 1.0
    devs = angles - np.array(phases.thetas)
    return float(np.prod(np.abs(f(devs)) ** 2))


def h_func(chi, phases, f, epsilon=None):
    """Leave-one-out penalized functional g - epsilon * sum of co-products.

    If any angle misses its target by more than delta (circle distance)
    then h <= 0, because the remaining co-product exceeds g by at least
    1 / sup_off_peak^2 >= 1 / epsilon there.
    """
    if epsilon is None:
        epsilon = default_epsilon(f)
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    angles = _character_angles(chi, phases)
    if angles.size == 0:
        return 1.0
    devs = angles - np.array(phases.thetas)
    vals = np.abs(f(devs)) ** 2
    prefix = np.concatenate(([1.0], np.cumprod(vals)))
    suffix = np.concatenate((np.cumprod(vals[::-1])[::-1], [1.0]))
    co_products = prefix[:-1] * suffix[1:]
    return float(prefix[-1] - epsilon * co_products.sum())


def _angles_all(group, code):
    """Angle numerators of chi(code) for every character, enumeration order."""
    flat = group.dlog_flat[code]
    if flat < 0:
        raise ValueError("code not coprime to the modulus")
    digits = group.dlog_digits[code]
    N = group.N
    total = np.zeros(1, dtype=np.int64)
    for d, n in zip(digits, group.orders):
        axis = (np.arange(n, dtype=np.int64) * int(d) * (N // n)) % N
        total = (total[:, None] + axis[None, :]).reshape(-1) % N
    return total


def _functional_tables(group, phases, f, epsilon):
    """Per-character g and h over the whole family via angle lookup tables.

    For each target prime the N possible angles give N values of
    |f(j/N - theta_P)|^2; gathering those per character avoids any
    per-character work.  Returns (g_all, h_all) in enumeration order.
    """
    N = group.N
    if len(phases) == 0:
        g_all = np.ones(group.phi)
        return g_all, g_all.copy()
    vals = []
    for P, theta in phases:
        code = group.ring.code_of(P)
        table = np.abs(f(np.arange(N) / N - theta)) ** 2
        vals.append(table[_angles_all(group, code)])
    vals = np.array(vals)
    g_all = np.prod(vals, axis=0)
    k = len(phases)
    prefix = np.ones((k + 1, group.phi))
    for i in range(k):
        prefix[i + 1] = prefix[i] * vals[i]
    suffix = np.ones((k + 1, group.phi))
    for i in range(k - 1, -1, -1):
        suffix[i] = suffix[i + 1] * vals[i]
    co_sum = sum(prefix[i] * suffix[i + 1] for i in range(k))
    return g_all, g_all - epsilon * co_sum


def _principal_index(group):
    return 0


@dataclass(frozen=True)
class GMeanReport:
    """Mean of g over nonprincipal characters against phi(Q) kappa^k."""

    q: int
    deg_q: int
    phi: int
    n_primes: int
    K: int
    kappa_value: float
    lhs: float
    main: float
    discrepancy: float


def mv_g_experiment(Q, phases, f):
    """Sum of g over chi != chi0 versus phi(Q) kappa^{|P-set|}.

    The discrepancy is |lhs - main| / (max(1, n^K) kappa^n) with
    n = |P-set|; the growing-family behavior keeps it bounded by a small
    constant.
    """
    group = _as_group(Q)
    n = len(phases)
    if n ** f.K > group.ring.spec.q ** (group.ring.n / 2):
        raise ValueError("n_primes^K exceeds sqrt(|Q|); experiment not in regime")
    g_all, _ = _functional_tables(group, phases, f, 1.0)
    kap = kappa(f)
    lhs = float(g_all.sum() - g_all[_principal_index(group)])
    main = group.phi * kap**n
    denom = max(1.0, float(n) ** f.K) * kap**n
    return GMeanReport(
        q=group.spec.q,
        deg_q=group.ring.n,
        phi=group.phi,
        n_primes=n,
        K=f.K,
        kappa_value=kap,
        lhs=lhs,
        main=main,
        discrepancy=abs(lhs - main) / denom,
    )


@dataclass(frozen=True)
class HMeanReport:
    """Mean of h (and h+) over nonprincipal characters."""

    q: int
    deg_q: int
    phi: int
    n_primes: int
    epsilon: float
    kappa_value: float
    lhs: float
    lhs_plus: float
    main: float
    rel_error: float
    rel_error_times_deg: float


def mv_h_experiment(Q, phases, f, epsilon=None):
    """Sum of h over chi != chi0 versus kappa^{|P-set|} phi(Q).

    Also records the sum of h+ = max(h, 0), the quantity the selection
    arguments actually use; rel_error is measured for h against the
    1/deg Q scale.
    """
    group = _as_group(Q)
    if epsilon is None:
        epsilon = default_epsilon(f)
    g_all, h_all = _functional_tables(group, phases, f, epsilon)
    kap = kappa(f)
    n = len(phases)
    i0 = _principal_index(group)
    lhs = float(h_all.sum() - h_all[i0])
    lhs_plus = float(np.maximum(h_all, 0.0).sum() - max(h_all[i0], 0.0))
    main = kap**n * group.phi
    rel = abs(lhs / main - 1.0)
    return HMeanReport(
        q=group.spec.q,
        deg_q=group.ring.n,
        phi=group.phi,
        n_primes=n,
        epsilon=epsilon,
        kappa_value=kap,
        lhs=lhs,
        lhs_plus=lhs_plus,
        main=main,
        rel_error=rel,
        rel_error_times_deg=rel * group.ring.n,
    )


@dataclass(frozen=True)
class TailReport:
    """g-weighted mean square of a tail Dirichlet polynomial."""

    q: int
    deg_q: int
    phi: int
    n_primes: int
    rho: int
    z: int
    sigma: float
    lhs: float
    bound: float
    ratio: float


def mv_tail_experiment(Q, phases, f, b=None, sigma=0.75, z=None):
    """Sum over all chi of g(chi) |sum_{rho < deg P <= z} b_P chi(P)|^2.

    rho is the top degree of the target primes; the comparison bound is
    phi(Q) kappa^{|P-set|} q^{rho(1-2 sigma)} / rho.  The default
    coefficients are b_P = |P|^{-sigma}; any b must satisfy
    |b(P)| <= |P|^{-sigma}.
    """
    group = _as_group(Q)
    q = group.spec.q
    rho = phases.max_degree
    if rho == 0:
        raise ValueError("tail experiment needs a nonempty target set")
    if z is None:
        z = rho + 2
    if z <= rho:
        raise ValueError("need z > rho")
    if b is None:
        b = lambda P: q ** (-sigma * P.degree)
    g_all, _ = _functional_tables(group, phases, f, 1.0)
    N = group.N
    tail = np.zeros(group.phi, dtype=complex)
    for d in range(rho + 1, z + 1):
        for P in primes_of_degree(group.spec, d):
            code = group.ring.code_of(P)
            if group.dlog_flat[code] < 0:
                continue
            bp = complex(b(P))
            if abs(bp) > q ** (-sigma * d) + 1e-12:
                raise ValueError(f"b violates |b| <= |P|^-sigma at {P.text}")
            tail += bp * np.exp(2j * np.pi * _angles_all(group, code) / N)
    lhs = float(np.sum(g_all * np.abs(tail) ** 2))
    bound = group.phi * kappa(f) ** len(phases) * q ** (rho * (1 - 2 * sigma)) / rho
    return TailReport(
        q=q,
        deg_q=group.ring.n,
        phi=group.phi,
        n_primes=len(phases),
        rho=rho,
        z=z,
        sigma=sigma,
        lhs=lhs,
        bound=bound,
        ratio=lhs / bound,
    )


def n_lambda(Q, x):
    """Counting function of the multiset {deg P * log q : P prime, P not | Q}.

    Counts with multiplicity all prime degrees d with d log q <= x, minus
    the primes dividing Q of those degrees.
    """
    spec = Q.spec
    logq = math.log(spec.q)
    top = int(math.floor(x / logq + 1e-12))
    if top > 200:
        raise ValueError("x too large for the degree range")
    divisor_degrees = [P.degree for P in factorize(Q).distinct_primes]
    total = 0
    for d in range(1, top + 1):
        total += prime_count(spec, d) - divisor_degrees.count(d)
    return total


@dataclass(frozen=True)
class CountingRow:
    x: float
    n_value: int
    growth_ratio: float
    window: float
    short_diff: int
    short_ratio: float


@dataclass(frozen=True)
class CountingReport:
    q: int
    modulus: str
    x_max: float
    c: float
    rows: tuple


def counting_checks(Q, x_max):
    """Growth and short-interval lower bounds for the prime multiset.

    Tabulates N(x) x / e^x on x = 2 log q and half-integer multiples of
    log q (midpoints dodge the lattice jumps), plus the short-interval
    increment N(x + c/x^2) - N(x) scaled by x^3 / e^x.  The window
    constant c = 0.55 log(q) x_max^2 keeps c/x^2 wide enough to reach the
    next degree for every tabulated x.
    """
    spec = Q.spec
    logq = math.log(spec.q)
    if x_max < 2 * logq:
        raise ValueError("x_max must be at least 2 log q")
    c = 0.55 * logq * x_max**2
    grid = [2 * logq]
    d = 2
    while (d + 0.5) * logq <= x_max + 1e-9:
        grid.append((d + 0.5) * logq)
        d += 1
    rows = []
    for x in grid:
        n_here = n_lambda(Q, x)
        window = c / x**2
        diff = n_lambda(Q, x + window) - n_here
        rows.append(
            CountingRow(
                x=x,
                n_value=n_here,
                growth_ratio=n_here * x / math.exp(x),
                window=window,
                short_diff=diff,
                short_ratio=diff * x**3 / math.exp(x),
            )
        )
    return CountingReport(
        q=spec.q, modulus=Q.text, x_max=x_max, c=c, rows=tuple(rows)
    )


@dataclass(frozen=True)
class ParamSet:
    """Targeting parameters derived from the modulus degree."""

    rho: float
    K: int
    delta: float

    @classmethod
    def from_degree(cls, q, deg_q):
        if deg_q < 2:
            raise ValueError("deg Q must be at least 2")
        lg = math.log(deg_q, q)
        K = int(math.floor(deg_q / (2 * lg)))
        return cls(rho=lg, K=K, delta=lg**2 / deg_q)

    @classmethod
    def from_modulus(cls, Q):
        return cls.from_degree(Q.spec.q, Q.degree)


def fit_phases(target, window, Q, grid):
    """Assign angles theta_P so that sum e(theta_P) |P|^{-s} tracks target.

    The primes run over the window mu < deg P <= rho, skipping divisors of
    Q; the objective is the exact sup over the grid of
    |target - sum_P e(theta_P) q^{-s deg P}|.  Cyclic coordinate descent
    updates one angle at a time from a 64-point scan refined by
    golden-section, so the objective never increases; starting angles are
    all zero and the prime order is fixed, making the result
    deterministic.  Returns (PhaseAssignment, achieved_sup_error).
    """
    mu, rho = window
    if rho <= mu:
        raise ValueError("empty degree window")
    spec = Q.spec
    primes = []
    for d in range(int(mu) + 1, int(rho) + 1):
        for P in primes_of_degree(spec, d):
            if not (Q % P).is_zero:
                primes.append(P)
    if not primes:
        raise ValueError("no usable primes in the window")
    primes.sort(key=lambda P: (P.degree, P.code))
    s = grid.s_points()
    if callable(target):
        values = np.asarray([complex(target(si)) for si in s])
    else:
        values = np.asarray(target, dtype=complex)
        if values.shape != s.shape:
            raise ValueError("target values must match the grid size")
    q = spec.q
    cols = np.array([q ** (-s * P.degree) for P in primes])
    thetas = np.zeros(len(primes))
    phases_vec = np.exp(2j * np.pi * thetas)

    def objective_for(i, angle):
        model = (phases_vec[:, None] * cols).sum(axis=0)
        model = model + (np.exp(2j * np.pi * angle) - phases_vec[i]) * cols[i]
        return float(np.abs(values - model).max())

    current = float(
        np.abs(values - (phases_vec[:, None] * cols).sum(axis=0)).max()
    )
    scan = np.arange(64) / 64
    for _ in range(60):
        before = current
        for i in range(len(primes)):
            rest = (phases_vec[:, None] * cols).sum(axis=0) - phases_vec[i] * cols[i]
            trial = rest[None, :] + np.exp(2j * np.pi * scan)[:, None] * cols[i][None, :]
            errs = np.abs(values[None, :] - trial).max(axis=1)
            j = int(np.argmin(errs))
            best_angle, best_err = scan[j], float(errs[j])
            bracket = (scan[j] - 1 / 64, scan[j], scan[j] + 1 / 64)
            try:
                res = minimize_scalar(
                    lambda t: objective_for(i, t), bracket=bracket, method="golden",
                    options={"xtol": 1e-10},
                )
                if res.fun < best_err:
                    best_angle, best_err = float(res.x) % 1.0, float(res.fun)
            except ValueError:
                pass
            if best_err < current:
                thetas[i] = best_angle % 1.0
                phases_vec[i] = np.exp(2j * np.pi * thetas[i])
                current = best_err
        if before - current < 1e-12:
            break
    assignment = PhaseAssignment(list(zip(primes, thetas)))
    return assignment, current
