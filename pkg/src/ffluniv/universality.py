"""Sup-norm approximation searches over a character family.

Targets are nonvanishing functions on a finite grid with log branches
fixed by pointwise continuation along the grid path.  Searches measure
the sup distance max |L - F| for every character, either exhaustively
through the family coefficient matrix or along the constructive
pipeline: subtract the low-degree part of log F, fit phase targets for
a window of primes, sieve characters by their angles at those primes,
and rank only the survivors.  The good/bad split thresholds characters
by the sup of the high-degree prime sum instead.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .algebra import Poly, euler_phi, primes_of_degree
from .approximation import (
    ParamSet,
    PhaseAssignment,
    _angles_all,
    _as_group,
    _functional_tables,
    _principal_index,
    default_epsilon,
    fit_phases,
    kappa,
)
from .lfunctions import _cached_l, l_coeffs_all, u_of_s, von_mangoldt_character_sum, zeta_q

EXHAUSTIVE_FAMILY_LIMIT = 100_000

_KINDS = ("constant", "polynomial", "exp_polynomial", "reciprocal_linear")


class TargetFunction:
    """A nonvanishing approximation target evaluated in the grid variable.

    Supported kinds: a constant, a polynomial with listed complex
    coefficients, the exponential of such a polynomial, and the
    reciprocal of a linear factor 1/(w - a).  Polynomials are read in
    the plane of whatever grid they meet (u for annulus grids, s for
    rectangle grids).
    """

    def __init__(self, kind, params):
        if kind not in _KINDS:
            raise ValueError(f"unknown target kind: {kind}")
        self.kind = kind
        self.params = params

    @classmethod
    def constant(cls, c):
        return cls("constant", (complex(c),))

    @classmethod
    def polynomial(cls, coeffs):
        coeffs = tuple(complex(c) for c in coeffs)
        if not coeffs:
            raise ValueError("polynomial target needs coefficients")
        return cls("polynomial", coeffs)

    @classmethod
    def exp_polynomial(cls, coeffs):
        coeffs = tuple(complex(c) for c in coeffs)
        if not coeffs:
            raise ValueError("exponential target needs coefficients")
        return cls("exp_polynomial", coeffs)

    @classmethod
    def reciprocal_linear(cls, a):
        return cls("reciprocal_linear", (complex(a),))

    @property
    def label(self):
        if self.kind == "constant":
            return f"constant({self.params[0]})"
        if self.kind == "reciprocal_linear":
            return f"reciprocal_linear({self.params[0]})"
        return f"{self.kind}[deg {len(self.params) - 1}]"

    def __repr__(self):
        return f"TargetFunction({self.label})"

    def __call__(self, w):
        w = np.asarray(w, dtype=complex)
        if self.kind == "constant":
            out = np.full_like(w, self.params[0])
        elif self.kind == "reciprocal_linear":
            with np.errstate(divide="ignore", invalid="ignore"):
                out = 1.0 / (w - self.params[0])
        else:
            acc = np.zeros_like(w)
            for c in reversed(self.params):
                acc = acc * w + c
            out = np.exp(acc) if self.kind == "exp_polynomial" else acc
        return out

    def values(self, grid):
        return self(grid.points)

    def min_modulus(self, grid):
        return float(np.abs(self.values(grid)).min())

    def certify_nonvanishing(self, grid):
        """Minimum modulus over the grid; zero or nonfinite values raise."""
        vals = self.values(grid)
        if not np.all(np.isfinite(vals)):
            raise ValueError("target is not finite on the grid")
        low = float(np.abs(vals).min())
        if low == 0.0:
            raise ValueError("target vanishes on the grid")
        return low

    def log_branch(self, grid):
        """log F along the grid path: principal value at the first point,
        then nearest-branch continuation; large jumps mean the grid is
        too coarse to continue and raise."""
        self.certify_nonvanishing(grid)
        vals = self.values(grid)
        angles = np.unwrap(np.angle(vals))
        if angles.size > 1 and np.abs(np.diff(angles)).max() > math.pi / 2:
            raise ValueError(
                "consecutive log values jump by more than pi/2; "
                "the grid path is too coarse for branch continuation"
            )
        return np.log(np.abs(vals)) + 1j * angles


def _prime_power_sum(chi, d, j):
    """sum over deg P = d of chi(P)^j, exact angle arithmetic."""
    group = chi.group
    ring = group.ring
    codes = np.array(
        [ring.code_of(P) for P in primes_of_degree(group.spec, d)], dtype=np.int64
    )
    nums = chi.angle_numerators(codes)
    keep = nums >= 0
    return complex(np.exp(2j * np.pi * (nums[keep] * j % group.N) / group.N).sum())


def decompose_logL(chi, s, mu, rho, K):
    """Split log P_K(s, chi) into four windows of prime powers.

    f1 holds all prime powers with deg P <= mu; f2 and f3 are the
    first-power sums over mu < deg P <= rho and rho < deg P <= K; f4
    collects the higher powers of primes above mu.  Returns
    (f1, f2, f3, f4, residual) where the residual is the exact gap to
    the direct prime-power sum for log P_K.
    """
    if chi.is_principal:
        raise ValueError("decomposition needs a nonprincipal character")
    s_arr = np.asarray(s, dtype=complex)
    scalar = s_arr.ndim == 0
    s_arr = np.atleast_1d(s_arr)
    if np.any(s_arr.real <= 0.5):
        raise ValueError("decomposition needs sigma > 1/2")
    if K < 1:
        zero = 0j if scalar else np.zeros_like(s_arr)
        return (zero, zero, zero, zero, 0.0)
    if not 1 <= mu < rho < K:
        raise ValueError("need 1 <= mu < rho < K")
    q = chi.group.spec.q
    u = q ** (-s_arr)
    f1 = np.zeros_like(s_arr)
    f2 = np.zeros_like(s_arr)
    f3 = np.zeros_like(s_arr)
    f4 = np.zeros_like(s_arr)
    for d in range(1, K + 1):
        top = K // d
        if top < 1:
            continue
        if d <= mu:
            for j in range(1, top + 1):
                f1 += _prime_power_sum(chi, d, j) * u ** (j * d) / j
        else:
            if d <= rho:
                f2 += _prime_power_sum(chi, d, 1) * u**d
            else:
                f3 += _prime_power_sum(chi, d, 1) * u**d
            for j in range(2, top + 1):
                f4 += _prime_power_sum(chi, d, j) * u ** (j * d) / j
    direct = np.zeros_like(s_arr)
    for k in range(1, K + 1):
        direct += von_mangoldt_character_sum(chi, k) * u**k / k
    residual = float(np.abs(f1 + f2 + f3 + f4 - direct).max())
    if scalar:
        return (complex(f1[0]), complex(f2[0]), complex(f3[0]), complex(f4[0]), residual)
    return (f1, f2, f3, f4, residual)


def character_sieve(Q, phases, delta, also_zero_targets_below_mu=True, mu=None):
    """Nonprincipal characters whose angles hit every target within delta.

    Each phase prime P demands circle distance ||arg chi(P)/2pi -
    theta_P|| < delta, strictly; with the flag set, every prime of
    degree <= mu coprime to the modulus additionally demands a zero
    target.  mu defaults to just below the lightest phase prime.
    Returns characters in enumeration order.
    """
    group = _as_group(Q)
    if delta <= 0:
        raise ValueError("delta must be positive")
    if mu is None:
        mu = phases.min_degree - 1 if len(phases) else 0
    if len(phases) and phases.min_degree <= mu:
        raise ValueError("phase primes must have degree above mu")
    conditions = []
    if also_zero_targets_below_mu:
        for d in range(1, int(mu) + 1):
            for P in primes_of_degree(group.spec, d):
                if not (group.Q % P).is_zero:
                    conditions.append((P, 0.0))
    conditions.extend(phases)
    ring = group.ring
    keep = np.ones(group.phi, dtype=bool)
    for P, theta in conditions:
        code = ring.code_of(P)
        if group.dlog_flat[code] < 0:
            raise ValueError(f"sieve prime divides the modulus: {P.text}")
        angles = _angles_all(group, code) / group.N
        dist = np.abs((angles - theta + 0.5) % 1.0 - 0.5)
        keep &= dist < delta
    keep[_principal_index(group)] = False
    return [chi for chi, ok in zip(group.characters(), keep) if ok]


def sup_distance(chi, target, grid):
    """max over the grid of |L(., chi) - F|, in the grid's own plane."""
    q = chi.group.spec.q
    u = grid.points if grid.plane == "u" else u_of_s(q, grid.points)
    if chi.is_principal:
        lvals = zeta_q(chi.group.Q, u)
    else:
        lvals = _cached_l(chi)(u)
    return float(np.abs(lvals - target.values(grid)).max())


def _family_distances(group, target, grid, workers=None):
    """Sup distances for every character row at once; principal row NaN."""
    coeffs = l_coeffs_all(group)
    u = grid.u_points()
    powers = u[None, :] ** np.arange(group.ring.n)[:, None]
    fvals = target.values(grid)[None, :]
    if workers and workers > 1:
        blocks = np.array_split(np.arange(group.phi), workers)
        out = np.empty(group.phi)

        def run(rows):
            out[rows] = np.abs(coeffs[rows] @ powers - fvals).max(axis=1)

        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(run, blocks))
    else:
        out = np.abs(coeffs @ powers - fvals).max(axis=1)
    out[_principal_index(group)] = np.nan
    return out


@dataclass(frozen=True)
class SearchReport:
    """Distance distribution of a family search against one target."""

    modulus: str
    target_id: str
    grid_id: str
    epsilon: float
    exponents: tuple
    distances: np.ndarray
    best_exponents: tuple | None
    best_distance: float | None
    proportion: float
    searched: int
    sieve_size: int | None
    family_best_distance: float | None
    elapsed: float


def _grid_id(grid):
    name = grid.metadata.get("name")
    return name if name else f"{grid.plane}-grid[{len(grid)}]"


def universality_search(Q, target, grid, epsilon, workers=None):
    """Exhaustive sup-distance scan of all nonprincipal characters.

    Reports the full distance distribution, the best character, and the
    proportion of the phi(Q) characters within epsilon.
    """
    t0 = time.perf_counter()
    if isinstance(Q, Poly) and euler_phi(Q) > EXHAUSTIVE_FAMILY_LIMIT:
        raise ValueError(
            "family too large for the exhaustive search; use guided_search"
        )
    group = _as_group(Q)
    if group.phi > EXHAUSTIVE_FAMILY_LIMIT:
        raise ValueError(
            "family too large for the exhaustive search; use guided_search"
        )
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    dists = _family_distances(group, target, grid, workers=workers)
    exps = tuple(chi.exponents for chi in group.characters())
    mask = np.isfinite(dists)
    sub = dists[mask]
    best_row = int(np.flatnonzero(mask)[np.argmin(sub)])
    hits = int((sub < epsilon).sum())
    return SearchReport(
        modulus=group.Q.text,
        target_id=target.label,
        grid_id=_grid_id(grid),
        epsilon=float(epsilon),
        exponents=tuple(e for e, ok in zip(exps, mask) if ok),
        distances=sub,
        best_exponents=exps[best_row],
        best_distance=float(dists[best_row]),
        proportion=hits / group.phi,
        searched=int(mask.sum()),
        sieve_size=None,
        family_best_distance=float(np.nanmin(dists)),
        elapsed=time.perf_counter() - t0,
    )


def guided_search(Q, target, grid, mu, rho_override=None, epsilon=0.5, workers=None):
    """Constructive search: fit phases to log F, sieve, rank survivors.

    The low-degree part of log F is removed exactly (prime powers of
    degree <= mu, coprime to Q, truncated at K), phase targets for the
    (mu, rho] window are fitted to the remainder, and only characters
    passing the angle sieve are measured.  An empty sieve is a reported
    outcome, not an error.  Parameters K, delta, rho derive from the
    modulus degree; rho_override replaces rho.
    """
    t0 = time.perf_counter()
    group = _as_group(Q)
    params = ParamSet.from_modulus(group.Q)
    rho = params.rho if rho_override is None else rho_override
    K = max(1, params.K)
    q = group.spec.q
    s = grid.s_points()
    flog = target.log_branch(grid)
    f1 = np.zeros_like(s)
    for d in range(1, int(mu) + 1):
        for P in primes_of_degree(group.spec, d):
            if (group.Q % P).is_zero:
                continue
            for j in range(1, K // d + 1):
                f1 += q ** (-s * d * j) / j
    window_has_primes = any(
        not (group.Q % P).is_zero
        for d in range(int(mu) + 1, int(rho) + 1)
        for P in primes_of_degree(group.spec, d)
    )
    if window_has_primes:
        phases, _ = fit_phases(flog - f1, (mu, rho), group.Q, grid)
    else:
        phases = PhaseAssignment([])
    sieved = character_sieve(group.Q, phases, params.delta, True, mu=mu)
    dists = np.array([sup_distance(chi, target, grid) for chi in sieved])
    if dists.size:
        best_row = int(np.argmin(dists))
        best_exp = sieved[best_row].exponents
        best = float(dists[best_row])
    else:
        best_exp = None
        best = None
    family_best = None
    if group.phi <= EXHAUSTIVE_FAMILY_LIMIT:
        family_best = float(np.nanmin(_family_distances(group, target, grid, workers)))
    hits = int((dists < epsilon).sum()) if dists.size else 0
    return SearchReport(
        modulus=group.Q.text,
        target_id=target.label,
        grid_id=_grid_id(grid),
        epsilon=float(epsilon),
        exponents=tuple(chi.exponents for chi in sieved),
        distances=dists,
        best_exponents=best_exp,
        best_distance=best,
        proportion=hits / group.phi,
        searched=len(sieved),
        sieve_size=len(sieved),
        family_best_distance=family_best,
        elapsed=time.perf_counter() - t0,
    )


@dataclass(frozen=True)
class SplitReport:
    """Character split by the sup of the high-degree prime sum."""

    modulus: str
    phi: int
    rho: int
    K: int
    d: float
    threshold: float
    good_size: int
    bad_size: int
    good_h_mass: float
    bad_h_mass: float
    m2_mass: float
    main: float
    good_ratio: float


def good_bad_split(Q, phases, f, K, grid, rho=None, epsilon=None):
    """Threshold characters by M(chi) = max over the grid of |f3(s, chi)|.

    f3 sums chi(P)/|P|^s over rho < deg P <= K; the split is at
    (deg Q)^(-d/2) with d the grid's distance to sigma = 1/2.  Reports
    the h+ mass on each side, the h+ |M|^2 mass, and the good-side mass
    against kappa^n phi(Q).
    """
    group = _as_group(Q)
    s = grid.s_points()
    d = float(s.real.min()) - 0.5
    if d <= 0:
        raise ValueError("grid must stay right of sigma = 1/2")
    if rho is None:
        rho = phases.max_degree
    if K < rho:
        raise ValueError("need K >= rho")
    q = group.spec.q
    ring = group.ring
    M = np.zeros(group.phi)
    degrees = list(range(rho + 1, K + 1))
    if degrees:
        sums = []
        for deg in degrees:
            codes = np.array(
                [ring.code_of(P) for P in primes_of_degree(group.spec, deg)],
                dtype=np.int64,
            )
            flat = group.dlog_flat[codes]
            counts = np.bincount(flat[flat >= 0], minlength=group.phi).astype(float)
            sums.append(np.conj(np.fft.fftn(counts.reshape(group.orders))).ravel())
        weights = q ** (-s[:, None] * np.array(degrees)[None, :])
        M = np.abs(weights @ np.stack(sums)).max(axis=0)
    threshold = float(group.ring.n) ** (-d / 2)
    if epsilon is None:
        epsilon = default_epsilon(f)
    _, h_all = _functional_tables(group, phases, f, epsilon)
    hplus = np.maximum(h_all, 0.0)
    nonprincipal = np.ones(group.phi, dtype=bool)
    nonprincipal[_principal_index(group)] = False
    good = nonprincipal & (M <= threshold)
    bad = nonprincipal & (M > threshold)
    main = kappa(f) ** len(phases) * group.phi
    return SplitReport(
        modulus=group.Q.text,
        phi=group.phi,
        rho=int(rho),
        K=int(K),
        d=d,
        threshold=threshold,
        good_size=int(good.sum()),
        bad_size=int(bad.sum()),
        good_h_mass=float(hplus[good].sum()),
        bad_h_mass=float(hplus[bad].sum()),
        m2_mass=float((hplus[nonprincipal] * M[nonprincipal] ** 2).sum()),
        main=main,
        good_ratio=float(hplus[good].sum() / main),
    )
