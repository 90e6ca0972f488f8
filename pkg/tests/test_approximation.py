import math

import numpy as np
import pytest

from ffluniv.algebra import Poly, field, primes_of_degree
from ffluniv.characters import UnitGroup
from ffluniv.approximation import (
    ParamSet,
    PhaseAssignment,
    counting_checks,
    default_epsilon,
    fit_phases,
    g_func,
    h_func,
    kappa,
    mv_g_experiment,
    mv_h_experiment,
    mv_tail_experiment,
    n_lambda,
    peak_poly,
)
from ffluniv.lfunctions import rectangle_grid

S3 = field(3)
X3 = Poly.x(S3)
ONE3 = Poly.one(S3)

PEAK_GRID_CASES = [(K, d) for K in (8, 16, 32, 64) for d in (0.05, 0.1, 0.25)]


def circle_distance(a, b):
    return abs((a - b + 0.5) % 1.0 - 0.5)


def test_peak_poly_small_closed_forms():
    # K=2, delta=1/4: T_1(2 cos 2 pi t + 1)/3 has coefficients (1,1,1)/3
    f = peak_poly(2, 0.25)
    assert np.allclose(f.coeffs, np.full(3, 1 / 3), atol=1e-12)
    assert abs(f.sup_off_peak - 1 / 3) < 1e-12
    assert abs(kappa(f) - 1 / 3) < 1e-12
    # K=4: T_2 of the same map gives (2,4,5,4,2)/17
    g = peak_poly(4, 0.25)
    assert np.allclose(g.coeffs * 17, [2, 4, 5, 4, 2], atol=1e-9)
    assert abs(kappa(g) - 65 / 289) < 1e-12


def test_peak_invariants_across_grid():
    for K, d in PEAK_GRID_CASES:
        f = peak_poly(K, d)
        assert len(f.coeffs) == K + 1
        assert abs(f(0.0) - 1.0) < 1e-12
        assert abs(f.coeffs.sum() - 1.0) < 1e-12
        # one-sided spectrum is conjugate-symmetric about m = K//2
        assert np.allclose(f.coeffs, f.coeffs[::-1].conj(), atol=1e-12)
        target = 2 * math.exp(-math.pi * K * d)
        assert f.sup_off_peak <= target
        assert f.grid_off_peak_max <= target
        assert 1 / (K + 1) - 1e-12 <= kappa(f) <= 1 + 1e-12


def test_peak_parseval_against_quadrature():
    ts = (np.arange(2048) + 0.5) / 2048
    for K, d in [(8, 0.05), (16, 0.1), (64, 0.25)]:
        f = peak_poly(K, d)
        quad = float(np.mean(np.abs(f(ts)) ** 2))
        assert abs(quad - kappa(f)) < 1e-6


def test_peak_poly_rejects_bad_parameters():
    with pytest.raises(ValueError):
        peak_poly(1, 0.1)
    with pytest.raises(ValueError):
        peak_poly(8, 0.0)
    with pytest.raises(ValueError):
        peak_poly(8, 0.6)
    # at delta = 1/2 the cosine map degenerates
    with pytest.raises(ArithmeticError):
        peak_poly(8, 0.5)
    # odd K loses one modulation order and this corner cannot certify
    with pytest.raises(ArithmeticError):
        peak_poly(9, 0.05)


def test_default_epsilon_bases():
    f = peak_poly(8, 0.1)
    assert abs(default_epsilon(f) - 4 * math.exp(-2 * math.pi * 0.8)) < 1e-15
    assert abs(default_epsilon(f, base=3) - 4 * 3.0 ** (-2 * math.pi * 0.8)) < 1e-15
    with pytest.raises(ValueError):
        default_epsilon(f, base=1.0)


def test_phase_assignment_validation_and_order():
    P1 = X3 + ONE3
    P2 = X3 + ONE3 + ONE3
    quad = primes_of_degree(S3, 2)[0]
    ph = PhaseAssignment([(quad, 0.9), (P2, 1.25), (P1, -0.1)])
    assert ph.primes == (P1, P2, quad)
    assert ph.thetas == (0.9, 0.25, 0.9)
    assert ph.min_degree == 1 and ph.max_degree == 2
    assert ph.theta_of(P2) == 0.25
    with pytest.raises(KeyError):
        ph.theta_of(X3)
    with pytest.raises(ValueError):
        PhaseAssignment([(P1, 0.1), (P1, 0.2)])
    with pytest.raises(ValueError):
        PhaseAssignment([((X3 + ONE3) ** 2, 0.1)])
    empty = PhaseAssignment([])
    assert len(empty) == 0 and empty.max_degree == 0


def test_g_and_h_pointwise_properties():
    group = UnitGroup(X3**4)
    prims = [P for P in primes_of_degree(S3, 1) if not (X3**4 % P).is_zero]
    f = peak_poly(4, 0.15)
    eps = default_epsilon(f)
    rng = np.random.default_rng(11)
    phases = PhaseAssignment(list(zip(prims, rng.uniform(0, 1, len(prims)))))
    for chi in group.characters():
        g = g_func(chi, phases, f)
        h = h_func(chi, phases, f)
        assert -1e-12 <= g <= 1 + 1e-12
        assert h <= max(h, 0.0) <= g + 1e-12
    # on-target phases: g = 1 and h = 1 - eps * |P-set| at the principal
    on = PhaseAssignment([(P, 0.0) for P in prims])
    chi0 = group.principal
    assert abs(g_func(chi0, on, f) - 1.0) < 1e-12
    assert abs(h_func(chi0, on, f) - (1 - eps * len(prims))) < 1e-12
    # empty target set gives the empty product
    none = PhaseAssignment([])
    assert g_func(chi0, none, f) == 1.0 == h_func(chi0, none, f)
    with pytest.raises(ValueError):
        h_func(chi0, on, f, epsilon=-1.0)
    with pytest.raises(ValueError):
        g_func(chi0, PhaseAssignment([(X3, 0.0)]), f)


def test_h_nonpositive_when_any_angle_displaced():
    # the defining implication: miss by more than delta somewhere -> h <= 0
    group = UnitGroup(X3**4)
    prims = [P for P in primes_of_degree(S3, 1) if not (X3**4 % P).is_zero]
    f = peak_poly(16, 0.2)
    phases = PhaseAssignment([(P, 0.37 * (i + 1)) for i, P in enumerate(prims)])
    checked = 0
    for chi in group.characters():
        devs = [
            circle_distance(chi.angle_numerator(P) / group.N, phases.theta_of(P))
            for P in prims
        ]
        if max(devs) > f.delta:
            checked += 1
            assert h_func(chi, phases, f) <= 0.0
    assert checked > 0


def test_mv_g_exhaustive_oracles():
    # Q = x^4: no two distinct products of (x+1)^a (x+2)^b with a,b <= 2
    # collide mod Q, so the character sum has only diagonal terms and
    # sum over chi != chi0 of g equals phi * kappa^2 - 1 = 5 exactly
    f = peak_poly(2, 0.25)
    prims = [P for P in primes_of_degree(S3, 1) if not (X3**4 % P).is_zero]
    both = PhaseAssignment([(P, 0.0) for P in prims])
    rep = mv_g_experiment(X3**4, both, f)
    assert rep.phi == 54 and rep.n_primes == 2 and rep.K == 2
    assert abs(rep.lhs - 5.0) < 1e-9
    assert abs(rep.main - 6.0) < 1e-12
    assert abs(rep.discrepancy - 2.25) < 1e-9
    # single prime: residues of (x+1)^k are distinct, lhs = 3 phi / 9 - 1
    one = PhaseAssignment([(prims[0], 0.0)])
    rep1 = mv_g_experiment(X3**4, one, f)
    assert abs(rep1.lhs - 17.0) < 1e-9
    assert abs(rep1.discrepancy - 3.0) < 1e-9
    # empty target set: g = 1 on every character
    rep0 = mv_g_experiment(X3**4, PhaseAssignment([]), f)
    assert rep0.lhs == 53.0 and rep0.main == 54.0
    assert abs(rep0.discrepancy - 1.0) < 1e-12


def test_mv_g_matches_per_character_loop():
    f = peak_poly(2, 0.15)
    group = UnitGroup(X3**4)
    prims = [P for P in primes_of_degree(S3, 1) if not (X3**4 % P).is_zero]
    phases = PhaseAssignment([(prims[0], 0.2), (prims[1], 0.7)])
    rep = mv_g_experiment(X3**4, phases, f)
    direct = sum(
        g_func(chi, phases, f) for chi in group.characters() if not chi.is_principal
    )
    assert abs(rep.lhs - direct) < 1e-9


def test_mv_g_capacity_guard():
    f = peak_poly(8, 0.25)
    prims = [P for P in primes_of_degree(S3, 1) if not (X3**4 % P).is_zero]
    phases = PhaseAssignment([(P, 0.0) for P in prims])
    # 2^8 > sqrt(81): outside the regime the error term controls
    with pytest.raises(ValueError):
        mv_g_experiment(X3**4, phases, f)


def test_mv_h_report_and_bounds():
    f = peak_poly(2, 0.25)
    group = UnitGroup(X3**4)
    prims = [P for P in primes_of_degree(S3, 1) if not (X3**4 % P).is_zero]
    phases = PhaseAssignment([(P, 0.1) for P in prims])
    reph = mv_h_experiment(X3**4, phases, f)
    repg = mv_g_experiment(X3**4, phases, f)
    assert reph.lhs <= repg.lhs + 1e-9
    assert reph.lhs <= reph.lhs_plus + 1e-12
    assert reph.lhs_plus >= 0.0
    assert reph.main == repg.main
    assert abs(reph.rel_error_times_deg - 4 * reph.rel_error) < 1e-12
    direct = sum(
        h_func(chi, phases, f, reph.epsilon)
        for chi in group.characters()
        if not chi.is_principal
    )
    assert abs(reph.lhs - direct) < 1e-9
    # with a vanishing penalty h -> g
    tiny = mv_h_experiment(X3**4, phases, f, epsilon=1e-15)
    assert abs(tiny.lhs - repg.lhs) < 1e-9


def test_mv_tail_oracles_and_convergence():
    f = peak_poly(2, 0.25)
    quads = primes_of_degree(S3, 2)[:2]
    phases = PhaseAssignment([(P, 0.3) for P in quads])
    zero = mv_tail_experiment(X3**4, phases, f, b=lambda P: 0.0, z=4)
    assert zero.lhs == 0.0
    rep = mv_tail_experiment(X3**4, phases, f, sigma=0.75, z=4)
    # rho=2, sigma=3/4, kappa=1/3: bound = 54 * (1/9) * 3^-1 / 2 = 1 exactly
    assert abs(rep.bound - 1.0) < 1e-12
    assert 0 < rep.ratio < 1
    # the tail series converges: successive z-extensions add less and less
    lhs = {z: mv_tail_experiment(X3**4, phases, f, sigma=0.75, z=z).lhs for z in (4, 6, 8)}
    assert abs(lhs[8] - lhs[6]) < abs(lhs[6] - lhs[4])
    with pytest.raises(ValueError):
        mv_tail_experiment(X3**4, phases, f, z=2)
    with pytest.raises(ValueError):
        mv_tail_experiment(X3**4, PhaseAssignment([]), f)
    with pytest.raises(ValueError):
        mv_tail_experiment(X3**4, phases, f, b=lambda P: 1.0, z=4)


def test_n_lambda_oracles():
    logq = math.log(3)
    assert n_lambda(X3, 0.9 * logq) == 0
    assert n_lambda(X3, 3 * logq) == 13
    # jump at d log q is pi_q(d) minus the degree-d primes dividing Q
    for d, jump in [(1, 2), (2, 3), (3, 8)]:
        assert n_lambda(X3, d * logq) - n_lambda(X3, d * logq - 1e-9) == jump
    Q2 = X3 * (X3 + ONE3)
    assert n_lambda(Q2, logq) - n_lambda(Q2, logq - 1e-9) == 1
    with pytest.raises(ValueError):
        n_lambda(X3, 1000.0)


def test_counting_checks_growth_and_short_intervals():
    rep = counting_checks(X3, 8 * math.log(3))
    assert rep.q == 3 and rep.modulus == X3.text
    assert [r.n_value for r in rep.rows] == [5, 5, 13, 31, 79, 195, 507]
    for r in rep.rows:
        assert 0.5 < r.growth_ratio < 2.0
        assert r.short_diff > 0
        assert r.short_ratio > 0
    xs = [r.x for r in rep.rows]
    assert xs == sorted(xs) and abs(xs[0] - 2 * math.log(3)) < 1e-12
    with pytest.raises(ValueError):
        counting_checks(X3, 1.5 * math.log(3))


def test_param_set_from_degree():
    p9 = ParamSet.from_degree(3, 9)
    assert p9.rho == 2.0 and p9.K == 2
    assert abs(p9.delta - 4 / 9) < 1e-12
    p12 = ParamSet.from_degree(3, 12)
    rho12 = math.log(12) / math.log(3)
    assert abs(p12.rho - rho12) < 1e-12
    assert p12.K == 2
    assert abs(p12.delta - rho12**2 / 12) < 1e-12
    p16 = ParamSet.from_degree(3, 16)
    assert p16.K == int(16 / (2 * math.log(16) / math.log(3)))
    assert ParamSet.from_modulus(X3**9) == p9


def test_fit_phases_recovers_planted_atom():
    # modulus removes x and x+1, leaving a single degree-1 prime
    Q = X3 * (X3 + ONE3)
    grid = rectangle_grid(3, n_sigma=5, n_t=5)
    target = lambda s: np.exp(2j * np.pi * 0.37) * 3.0 ** (-np.asarray(s))
    pa, err = fit_phases(target, (0, 1), Q, grid)
    assert len(pa) == 1 and pa.primes[0].text == "2 1"
    assert circle_distance(pa.thetas[0], 0.37) < 1e-6
    assert err < 1e-6
    # achieved error is reproducible from the returned assignment
    model = np.zeros(len(grid.points), dtype=complex)
    svals = np.array(grid.s_points())
    for P, t in pa:
        model += np.exp(2j * np.pi * t) * 3.0 ** (-svals * P.degree)
    sup = float(np.abs(target(svals) - model).max())
    assert abs(sup - err) < 1e-12


def test_fit_phases_zero_target_and_window():
    grid = rectangle_grid(3, n_sigma=5, n_t=5)
    pa, err = fit_phases(lambda s: 0.0, (0, 2), X3**4, grid)
    # two degree-1 atoms can cancel and three degree-2 atoms can cancel
    assert err < 1e-4
    assert [P.degree for P in pa.primes] == [1, 1, 2, 2, 2]
    with pytest.raises(ValueError):
        fit_phases(lambda s: 0.0, (2, 2), X3**4, grid)
