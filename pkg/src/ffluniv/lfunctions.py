"""Dirichlet L-functions over F_q[x]: exact coefficients, zeros, hybrid forms.

For nonprincipal chi mod Q the Dirichlet series sum_f chi(f) u^{deg f} over
monic f has vanishing coefficients from deg Q on, so L(u, chi) is a
polynomial with c_0 = 1.  Its inverse roots alpha_j (those with
L = prod(1 - alpha_j u)) satisfy |alpha_j| = sqrt(q) apart from trivial
roots on |alpha| = 1.  The truncated prime sum P_K and the zero tail Z_K
factor L exactly, L = P_K * Z_K for every K, which lets the prime side and
the zero side be checked against each other numerically.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .algebra import factorize, primes_of_degree
from .characters import UnitGroup

COEFF_ZERO_TOL = 1e-9
ROOT_CLASS_TOL = 1e-6
ABERTH_TOL = 1e-12
ABERTH_MAX_ITER = 200
# bincount-per-angle-class accumulation stays exact up to this cyclotomic order
EXACT_DFT_LIMIT = 65536


@lru_cache(maxsize=None)
def _unity_table(N):
    return np.exp(2j * np.pi * np.arange(N) / N)


def _angle_sum(numerators, N, weights=None):
    """Sum of w * e(j/N) over entries with j >= 0.

    Integer weights accumulate per angle class first, so the only rounding
    is the final dot with the unit-root table; past EXACT_DFT_LIMIT the
    fallback is compensated summation of the complex values.
    """
    keep = numerators >= 0
    j = numerators[keep]
    w = None if weights is None else np.broadcast_to(weights, numerators.shape)[keep]
    if N <= EXACT_DFT_LIMIT:
        counts = np.bincount(j, weights=w, minlength=N)
        return complex(counts @ _unity_table(N))
    vals = np.exp(2j * np.pi * j / N)
    if w is not None:
        vals = vals * w
    return complex(math.fsum(vals.real), math.fsum(vals.imag))


class LPolynomial:
    """L(u, chi) = sum c_n u^n, stored through degree deg Q - 1."""

    def __init__(self, chi, coeffs):
        coeffs = np.asarray(coeffs, dtype=complex)
        if coeffs.ndim != 1 or coeffs.size == 0:
            raise ValueError("coefficients must form a nonempty vector")
        if abs(coeffs[0] - 1) > 1e-9:
            raise ValueError("c_0 must equal 1")
        self.chi = chi
        self.coeffs = coeffs
        self._roots = None

    def __repr__(self):
        return f"LPolynomial(chi={self.chi.text!r}, degree={self.observed_degree})"

    @property
    def q(self):
        return self.chi.group.spec.q

    @property
    def observed_degree(self):
        """Largest n with |c_n| above the zero tolerance."""
        big = np.nonzero(np.abs(self.coeffs) > COEFF_ZERO_TOL)[0]
        return int(big[-1]) if big.size else 0

    def __call__(self, u):
        u_arr = np.asarray(u, dtype=complex)
        acc = np.zeros_like(u_arr)
        for c in self.coeffs[::-1]:
            acc = acc * u_arr + c
        return complex(acc) if u_arr.ndim == 0 else acc

    @property
    def inverse_roots(self):
        if self._roots is None:
            self._roots = roots(self)
        return self._roots

    @property
    def root_classifications(self):
        return classify_roots(self.inverse_roots, self.q)


def classify_roots(alphas, q):
    """Label each inverse root critical (|a|=sqrt q), trivial (|a|=1), or VIOLATION."""
    rq = math.sqrt(q)
    out = []
    for a in np.atleast_1d(np.asarray(alphas, dtype=complex)):
        m = abs(a)
        if abs(m - rq) < ROOT_CLASS_TOL:
            out.append("critical")
        elif abs(m - 1.0) < ROOT_CLASS_TOL:
            out.append("trivial")
        else:
            out.append("VIOLATION")
    return tuple(out)


def l_coeffs(chi):
    """Exact coefficients c_n = sum over monic degree-n f of chi(f).

    Character values are roots of unity with rational angle j/N, so each
    c_n is accumulated as integer counts per angle class before any
    floating point enters.
    """
    if chi.is_principal:
        raise ValueError("principal character has a pole at u = 1/q; use zeta_q")
    group = chi.group
    coeffs = np.empty(group.ring.n, dtype=complex)
    for n in range(group.ring.n):
        j = chi.angle_numerators(group.ring.monic_codes(n))
        coeffs[n] = _angle_sum(j, group.N)
    return LPolynomial(chi, coeffs)


@lru_cache(maxsize=512)
def _cached_l(chi):
    return l_coeffs(chi)


def l_coeffs_all(group):
    """Coefficient matrix with one row per character, in enumeration order.

    The degree-n monic residues are counted per discrete-log cell; a single
    multidimensional FFT then produces sum chi(f) for every character at
    once.  Agrees with the per-character path within rounding.
    """
    ring = group.ring
    shape = group.orders
    rows = group.phi
    out = np.empty((rows, ring.n), dtype=complex)
    for n in range(ring.n):
        flat = group.dlog_flat[ring.monic_codes(n)]
        counts = np.bincount(flat[flat >= 0], minlength=rows).astype(float)
        out[:, n] = np.conj(np.fft.fftn(counts.reshape(shape))).ravel()
    return out


def zeta_q(Q, u):
    """Principal L value: prod_{P | Q} (1 - u^{deg P}) / (1 - q u)."""
    q = Q.spec.q
    u_arr = np.asarray(u, dtype=complex)
    if np.any(np.abs(u_arr - 1.0 / q) < 1e-14):
        raise ZeroDivisionError("zeta_q has a pole at u = 1/q")
    num = np.ones_like(u_arr)
    for P in factorize(Q).distinct_primes:
        num = num * (1 - u_arr ** P.degree)
    out = num / (1 - q * u_arr)
    return complex(out) if u_arr.ndim == 0 else out


def principal_inverse_roots(Q):
    """Inverse roots of the polynomial part of zeta_q, all on |alpha| = 1."""
    alphas = []
    for P in factorize(Q).distinct_primes:
        d = P.degree
        alphas.extend(np.exp(2j * np.pi * np.arange(d) / d))
    return np.array(alphas, dtype=complex)


def u_of_s(q, s):
    """u = q^{-s}."""
    s_arr = np.asarray(s, dtype=complex)
    out = np.exp(-s_arr * math.log(q))
    return complex(out) if s_arr.ndim == 0 else out


def s_of_u(q, u):
    """Inverse of u_of_s on the branch with Im s in [0, 2 pi / log q)."""
    u_arr = np.asarray(u, dtype=complex)
    if np.any(u_arr == 0):
        raise ValueError("s_of_u is undefined at u = 0")
    theta = np.angle(u_arr)
    theta = np.where(theta > 0, theta - 2 * np.pi, theta)
    out = (-np.log(np.abs(u_arr)) - 1j * theta) / math.log(q)
    return complex(out) if u_arr.ndim == 0 else out


class RegionGrid:
    """Sample points in the u-annulus 1/q < |u| < q^(-1/2) or its s-image.

    The s-plane region is the open box 1/2 < Re s < 1,
    0 < Im s < 2 pi / log q.  Points keep their traversal order (the
    built-in grids serpentine through rows so consecutive points stay
    close); duplicates are rejected.
    """

    def __init__(self, plane, q, points, metadata=None):
        if plane not in ("u", "s"):
            raise ValueError("plane must be 'u' or 's'")
        pts = np.asarray(points, dtype=complex).ravel()
        if pts.size == 0:
            raise ValueError("empty grid")
        if np.unique(pts).size != pts.size:
            raise ValueError("duplicate grid points")
        if plane == "u":
            r = np.abs(pts)
            if np.any(r <= 1.0 / q) or np.any(r >= q**-0.5):
                raise ValueError("u points must satisfy 1/q < |u| < q^(-1/2)")
        else:
            t_max = 2 * np.pi / math.log(q)
            ok = (
                (pts.real > 0.5)
                & (pts.real < 1.0)
                & (pts.imag > 0.0)
                & (pts.imag < t_max)
            )
            if not np.all(ok):
                raise ValueError(
                    "s points must lie in the open box (1/2, 1) x (0, 2pi/log q)"
                )
        self.plane = plane
        self.q = q
        self.points = pts
        self.metadata = dict(metadata or {})

    def __len__(self):
        return self.points.size

    def __repr__(self):
        return f"RegionGrid(plane={self.plane!r}, q={self.q}, n={len(self)})"

    def u_points(self):
        return self.points if self.plane == "u" else u_of_s(self.q, self.points)

    def s_points(self):
        return self.points if self.plane == "s" else s_of_u(self.q, self.points)


def default_annulus_grid(q, n_radii=10, n_angles=20, r_lo=None, r_hi=None,
                         angle_span=0.8 * math.pi):
    """Serpentine n_radii x n_angles grid well inside the u-annulus."""
    if r_lo is None:
        r_lo = q**-0.85
    if r_hi is None:
        r_hi = q**-0.65
    radii = np.linspace(r_lo, r_hi, n_radii)
    angles = np.linspace(0.0, angle_span, n_angles)
    rows = []
    for i, r in enumerate(radii):
        row = r * np.exp(1j * angles)
        rows.append(row[::-1] if i % 2 else row)
    meta = {"r_lo": r_lo, "r_hi": r_hi, "n_radii": n_radii,
            "n_angles": n_angles, "angle_span": angle_span}
    return RegionGrid("u", q, np.concatenate(rows), meta)


def rectangle_grid(q, n_sigma=8, n_t=8, sigma_lo=0.55, sigma_hi=0.95,
                   t_lo=None, t_hi=None):
    """Serpentine s-plane grid inside the open rectangle."""
    t_max = 2 * np.pi / math.log(q)
    if t_lo is None:
        t_lo = 0.05 * t_max
    if t_hi is None:
        t_hi = 0.95 * t_max
    sigmas = np.linspace(sigma_lo, sigma_hi, n_sigma)
    ts = np.linspace(t_lo, t_hi, n_t)
    rows = []
    for i, sigma in enumerate(sigmas):
        row = sigma + 1j * ts
        rows.append(row[::-1] if i % 2 else row)
    meta = {"sigma_lo": sigma_lo, "sigma_hi": sigma_hi, "t_lo": t_lo,
            "t_hi": t_hi, "n_sigma": n_sigma, "n_t": n_t}
    return RegionGrid("s", q, np.concatenate(rows), meta)


def _aberth(rows, q):
    """Simultaneous root iteration on a batch of monic polynomials.

    rows: (m, D+1) descending coefficients with leading entry 1.  Starts
    from points equally spaced on |z| = sqrt(q), the critical circle in
    inverse-root space, rotated off the real axis.  Returns
    (roots, converged, iterations); multiple roots may stall the step
    criterion, so callers judge by reconstruction residual as well.
    """
    rows = np.asarray(rows, dtype=complex)
    m, width = rows.shape
    D = width - 1
    init = math.sqrt(q) * np.exp(2j * np.pi * (np.arange(D) + 0.3) / D)
    z = np.broadcast_to(init, (m, D)).copy()
    idx = np.arange(D)
    with np.errstate(divide="ignore", invalid="ignore"):
        for it in range(1, ABERTH_MAX_ITER + 1):
            p = np.repeat(rows[:, :1], D, axis=1)
            dp = np.zeros_like(z)
            for c in rows.T[1:]:
                dp = dp * z + p
                p = p * z + c[:, None]
            newton = p / dp
            diff = z[:, :, None] - z[:, None, :]
            diff[:, idx, idx] = np.inf
            repel = (1.0 / diff).sum(axis=2)
            w = newton / (1 - newton * repel)
            w = np.where(np.isfinite(w), w, 0.0)
            z = z - w
            if np.all(np.abs(w) <= ABERTH_TOL * (1 + np.abs(z))):
                return z, True, it
    return z, False, ABERTH_MAX_ITER


def _cluster_centroids(alphas, radius=1e-3):
    """Replace tight root clusters by their centroid with multiplicity.

    A root of multiplicity m comes back from any iterative finder smeared
    into an m-star of radius about eps^(1/m), symmetric to first order,
    so the centroid recovers the true root far beyond the smear.  Returns
    None when every root is isolated.
    """
    n = alphas.size
    close = np.abs(alphas[:, None] - alphas[None, :]) < radius
    if not (close.sum() > n):
        return None
    out = np.empty_like(alphas)
    seen = np.zeros(n, dtype=bool)
    for i in range(n):
        if seen[i]:
            continue
        member = np.zeros(n, dtype=bool)
        member[i] = True
        while True:
            grown = close[member].any(axis=0)
            if (grown == member).all():
                break
            member = grown
        out[member] = alphas[member].mean()
        seen |= member
    return out


def _expand_and_check(alphas, row, label, iterations, converged):
    """Re-expand prod(z - alpha_j), compare to row, sort roots for output."""
    recon = np.atleast_1d(np.poly(alphas))
    residual = float(np.max(np.abs(recon - row)))
    if residual > COEFF_ZERO_TOL:
        # repeated roots, e.g. (1 - u)^2, can stall the simultaneous
        # iteration at a spurious equilibrium; companion-matrix
        # eigenvalues reconstruct such clusters to machine precision
        alt = np.roots(row)
        alt_residual = float(np.max(np.abs(np.atleast_1d(np.poly(alt)) - row)))
        if alt_residual < residual:
            alphas, residual = alt, alt_residual
    if alphas.size > 1:
        # merging a cluster is accepted only when the re-expanded product
        # still matches, so distinct roots can never be glued together
        merged = _cluster_centroids(alphas)
        if merged is not None:
            m_res = float(np.max(np.abs(np.atleast_1d(np.poly(merged)) - row)))
            if m_res <= COEFF_ZERO_TOL:
                alphas, residual = merged, m_res
    if residual > COEFF_ZERO_TOL:
        raise ArithmeticError(
            f"root finder failed on {label}: reconstruction residual "
            f"{residual:.3e} after {iterations} iterations"
            + ("" if converged else " without step convergence")
        )
    order = np.lexsort((alphas.imag, alphas.real))
    return alphas[order]


def roots(L):
    """Inverse roots alpha_j with multiplicity; L(u) = prod(1 - alpha_j u).

    The reversed coefficient vector is monic with the alpha_j as ordinary
    roots.  The expanded product must reproduce the coefficients within
    1e-9 or the call fails, so smeared multiple roots pass only when their
    symmetric errors cancel.
    """
    D = L.observed_degree
    if D == 0:
        return np.array([], dtype=complex)
    row = L.coeffs[: D + 1]
    zs, converged, iters = _aberth(row[None, :], L.q)
    return _expand_and_check(zs[0], row, repr(L), iters, converged)


def euler_product_truncated(chi, u, maxdeg):
    """prod over primes of degree <= maxdeg of (1 - chi(P) u^{deg P})^{-1}.

    Valid only in |u| < 1/q, where the full product converges to L.
    """
    q = chi.group.spec.q
    u_c = complex(u)
    if abs(u_c) >= 1.0 / q:
        raise ValueError("Euler product requires |u| < 1/q")
    if maxdeg < 0:
        raise ValueError("maxdeg must be >= 0")
    spec = chi.group.spec
    ring = chi.group.ring
    out = 1.0 + 0j
    for d in range(1, maxdeg + 1):
        codes = np.array(
            [ring.code_of(P) for P in primes_of_degree(spec, d)], dtype=np.int64
        )
        vals = chi(codes)
        out *= complex(np.prod(1.0 / (1.0 - vals * u_c**d)))
    return out


@lru_cache(maxsize=None)
def von_mangoldt_character_sum(chi, k):
    """Lambda_k(chi) = sum over deg f = k of Lambda(f) chi(f), exactly.

    Only prime powers f = P^e with e deg P = k contribute, with weight
    deg P; angles stay rational throughout.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    group = chi.group
    ring = group.ring
    N = group.N
    total = 0j
    for d in range(1, k + 1):
        if k % d:
            continue
        e = k // d
        codes = np.array(
            [ring.code_of(P) for P in primes_of_degree(group.spec, d)],
            dtype=np.int64,
        )
        j = chi.angle_numerators(codes)
        powered = np.where(j >= 0, j * e % N, -1)
        total += d * _angle_sum(powered, N)
    return total


def p_k(chi, u, K):
    """exp of the truncated prime-power sum sum_{k<=K} Lambda_k(chi) u^k / k."""
    if K < 0:
        raise ValueError("K must be >= 0")
    u_arr = np.asarray(u, dtype=complex)
    acc = np.zeros_like(u_arr)
    for k in range(1, K + 1):
        acc = acc + (von_mangoldt_character_sum(chi, k) / k) * u_arr**k
    out = np.exp(acc)
    return complex(out) if u_arr.ndim == 0 else out


def z_k(L, u, K):
    """Zero-side factor exp(-sum_j sum_{k>K} (alpha_j u)^k / k).

    Each root's tail uses the closed form -log(1-z) - sum_{k<=K} z^k / k,
    so the factor is finite arithmetic; requires |alpha_j u| < 1.
    """
    if K < 0:
        raise ValueError("K must be >= 0")
    u_arr = np.asarray(u, dtype=complex)
    alphas = L.inverse_roots
    if alphas.size == 0:
        out = np.ones_like(u_arr)
        return complex(out) if u_arr.ndim == 0 else out
    z = u_arr[..., None] * alphas
    if np.any(np.abs(z) >= 1.0):
        raise ValueError("z_k requires |alpha_j u| < 1 for every inverse root")
    tail = -np.log1p(-z)
    zp = np.ones_like(z)
    for k in range(1, K + 1):
        zp = zp * z
        tail = tail - zp / k
    out = np.exp(-tail.sum(axis=-1))
    return complex(out) if u_arr.ndim == 0 else out


def _hybrid_residual(L, grid, K):
    u = grid.u_points()
    vals = L(u) - p_k(L.chi, u, K) * z_k(L, u, K)
    return float(np.max(np.abs(vals)))


def hybrid_check(chi, grid, K):
    """Max over the grid of |L - P_K Z_K|.

    The factorization is an identity, so anything beyond rounding noise
    (1e-9 contract) signals a defect in one of the two sides.
    """
    if chi.is_principal:
        raise ValueError("hybrid factorization needs a nonprincipal character")
    return _hybrid_residual(_cached_l(chi), grid, K)


@dataclass(frozen=True)
class TruncationReport:
    """Observed implied constant for the prime-sum approximation of L."""

    q: int
    deg_q: int
    K: int
    sigma_min: float
    max_deviation: float
    c_obs: float


def pk_ratio_check(chi, grid, K):
    """Compare |L/P_K - 1| against the envelope (deg Q / K) q^{(1/2-sigma)K}.

    c_obs is the max over the grid of deviation / envelope; the envelope
    should absorb the deviation with a modest constant whenever the grid
    stays right of sigma = 1/2.
    """
    if chi.is_principal:
        raise ValueError("prime-sum approximation needs a nonprincipal character")
    if K < 1:
        raise ValueError("K must be >= 1")
    s = grid.s_points()
    if np.any(s.real <= 0.5):
        raise ValueError("grid must stay right of sigma = 1/2")
    q = chi.group.spec.q
    u = u_of_s(q, s)
    deviation = np.abs(_cached_l(chi)(u) / p_k(chi, u, K) - 1.0)
    deg_q = chi.group.ring.n
    envelope = (deg_q / K) * q ** ((0.5 - s.real) * K)
    ratio = deviation / envelope
    return TruncationReport(
        q=q,
        deg_q=deg_q,
        K=K,
        sigma_min=float(s.real.min()),
        max_deviation=float(deviation.max()),
        c_obs=float(ratio.max()),
    )


def l_eval_s(chi, s):
    """L(s, chi) through u = q^{-s}; closed form for the principal character."""
    q = chi.group.spec.q
    u = u_of_s(q, s)
    if chi.is_principal:
        return zeta_q(chi.group.Q, u)
    return _cached_l(chi)(u)


@dataclass(frozen=True)
class CharacterRootRecord:
    """Per-character root data for a family sweep."""

    exponents: tuple
    observed_degree: int
    inverse_roots: tuple
    root_moduli: tuple
    classifications: tuple
    max_hybrid_residual: float


def rh_family_sweep(group, hybrid_grid=None, K=4, workers=None):
    """Root classification for every nonprincipal character mod Q.

    Coefficients come from the bulk transform and root finding batches the
    characters by observed degree.  When hybrid_grid is given each record
    carries max |L - P_K Z_K| over the grid, else NaN.  Records follow the
    group's character enumeration order.
    """
    coeffs = l_coeffs_all(group)
    chars = list(group.characters())
    q = group.spec.q
    by_degree = {}
    for i, chi in enumerate(chars):
        if chi.is_principal:
            continue
        row = np.abs(coeffs[i])
        big = np.nonzero(row > COEFF_ZERO_TOL)[0]
        by_degree.setdefault(int(big[-1]) if big.size else 0, []).append(i)
    roots_by_index = {}
    for D, idxs in sorted(by_degree.items()):
        if D == 0:
            for i in idxs:
                roots_by_index[i] = np.array([], dtype=complex)
            continue
        block = coeffs[np.array(idxs)][:, : D + 1]
        zs, converged, iters = _aberth(block, q)
        for r, i in enumerate(idxs):
            roots_by_index[i] = _expand_and_check(
                zs[r], block[r], f"character {chars[i].text!r}", iters, converged
            )

    def one(i):
        chi = chars[i]
        alphas = roots_by_index[i]
        L = LPolynomial(chi, coeffs[i])
        L._roots = alphas
        if hybrid_grid is None:
            residual = float("nan")
        else:
            residual = _hybrid_residual(L, hybrid_grid, K)
        return CharacterRootRecord(
            exponents=chi.exponents,
            observed_degree=L.observed_degree,
            inverse_roots=tuple(map(complex, alphas)),
            root_moduli=tuple(float(abs(a)) for a in alphas),
            classifications=classify_roots(alphas, q),
            max_hybrid_residual=residual,
        )

    order = [i for i, chi in enumerate(chars) if not chi.is_principal]
    if workers and workers > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(one, order))
    return [one(i) for i in order]
