import math

import numpy as np
import pytest

from ffluniv.algebra import Poly, field, primes_of_degree
from ffluniv.characters import UnitGroup
from ffluniv.lfunctions import (
    LPolynomial,
    classify_roots,
    default_annulus_grid,
    euler_product_truncated,
    hybrid_check,
    l_coeffs,
    l_coeffs_all,
    l_eval_s,
    p_k,
    pk_ratio_check,
    principal_inverse_roots,
    rectangle_grid,
    rh_family_sweep,
    roots,
    RegionGrid,
    s_of_u,
    u_of_s,
    von_mangoldt_character_sum,
    z_k,
    zeta_q,
)

S3 = field(3)
S5 = field(5)
X3 = Poly.x(S3)
X5 = Poly.x(S5)


def all_monic_moduli(spec, d):
    base = spec.q**d
    return [Poly.from_code(spec, code) for code in range(base, 2 * base)]


def test_l_coeffs_c0_and_principal_error():
    g = UnitGroup(X3**2)
    for chi in g.characters():
        if chi.is_principal:
            with pytest.raises(ValueError, match="zeta_q"):
                l_coeffs(chi)
        else:
            assert l_coeffs(chi).coeffs[0] == pytest.approx(1.0)


def test_l_coeffs_mod_x2_degree_and_root_moduli():
    g = UnitGroup(X3**2)
    for chi in g.characters():
        if chi.is_principal:
            continue
        L = l_coeffs(chi)
        assert L.observed_degree <= 1
        for a in L.inverse_roots:
            assert min(abs(abs(a) - 1.0), abs(abs(a) - math.sqrt(3))) < 1e-6


def test_l_coeffs_matches_manual_dlog_oracle():
    # recompute dlogs mod x^2 by repeated multiplication, then sum directly
    g = UnitGroup(X3**2)
    assert g.orders == (6,)
    gen = g.generators[0]
    table = {}
    cur = Poly.one(S3)
    for e in range(6):
        table[cur.code] = e
        cur = cur * g.ring.to_poly(gen) % g.Q
    for m in range(1, 6):
        chi = g.character((m,))
        expect = sum(
            np.exp(2j * np.pi * m * table[f.code] / 6)
            for f in (X3 + Poly.one(S3), X3 + Poly.constant(S3, 2))
        )
        assert l_coeffs(chi).coeffs[1] == pytest.approx(expect, abs=1e-12)


def test_l_coeffs_all_matches_per_character():
    Q = X3**4 + X3 + Poly.one(S3)
    g = UnitGroup(Q)
    mat = l_coeffs_all(g)
    for i, chi in enumerate(g.characters()):
        if chi.is_principal:
            assert mat[i, 0] == pytest.approx(1.0)
            continue
        assert np.abs(mat[i] - l_coeffs(chi).coeffs).max() < 1e-9


def test_truncation_sums_vanish_at_and_past_deg_q():
    # direct reduction of every monic degree-n poly, n = deg Q and deg Q + 1,
    # via honest division x^j mod Q; character sums must all vanish
    for d in range(1, 6):
        for Q in all_monic_moduli(S3, d):
            g = UnitGroup(Q)
            ring = g.ring
            xj = np.zeros((d + 2, d), dtype=np.int64)
            for j in range(d + 2):
                r = X3**j % Q
                for i, c in enumerate(r.coeffs):
                    xj[j, i] = c
            for n in (d, d + 1):
                count = 3**n
                tails = (np.arange(count)[:, None] // 3 ** np.arange(n)) % 3
                digits = (tails @ xj[:n] + xj[n]) % 3
                codes = digits @ (3 ** np.arange(d, dtype=np.int64))
                flat = g.dlog_flat[codes]
                counts = np.bincount(flat[flat >= 0], minlength=g.phi)
                sums = np.conj(np.fft.fftn(counts.reshape(g.orders).astype(float)))
                assert np.abs(sums.ravel()[1:]).max() < 1e-9


def test_conjugate_character_conjugates_coefficients():
    Q = X3**3 + X3**2 + Poly.constant(S3, 2)
    g = UnitGroup(Q)
    for chi in g.characters():
        if chi.is_principal:
            continue
        a = l_coeffs(chi).coeffs
        b = l_coeffs(chi.conjugate()).coeffs
        assert np.abs(b - np.conj(a)).max() < 1e-12


def test_zeta_q_values_pole_and_series():
    assert zeta_q(X3, 0.0) == pytest.approx(1.0)
    assert zeta_q(X3, 1 / 9) == pytest.approx(4 / 3)
    with pytest.raises(ZeroDivisionError):
        zeta_q(X3, 1 / 3)
    # partial sums of the principal series approach the closed form
    u = 0.2
    Q = X3**2
    partial = 0.0
    ring_Q = Q
    for n in range(7):
        base = 3**n
        count = 0
        for code in range(base, 2 * base):
            f = Poly.from_code(S3, code)
            if not (f % X3).is_zero:
                count += 1
        if n == 0:
            count = 1
        partial += count * u**n
    assert abs(partial - zeta_q(ring_Q, u)) < 2 * (3 * u) ** 7


def test_principal_inverse_roots_are_unit_modulus():
    Q = X3**2 * (X3**2 + Poly.one(S3))
    alphas = principal_inverse_roots(Q)
    assert alphas.shape == (3,)
    assert np.abs(np.abs(alphas) - 1.0).max() < 1e-12


def test_roots_degree_one_closed_form():
    g = UnitGroup(X3**2)
    chi = g.character((1,))
    L = l_coeffs(chi)
    assert L.observed_degree == 1
    assert L.inverse_roots[0] == pytest.approx(-L.coeffs[1])


def test_roots_reconstruction_on_grid():
    Q = X3**3 + Poly.constant(S3, 2) * X3 + Poly.one(S3)
    g = UnitGroup(Q)
    grid = default_annulus_grid(3)
    for chi in g.characters():
        if chi.is_principal:
            continue
        L = l_coeffs(chi)
        vals = np.ones_like(grid.points)
        for a in L.inverse_roots:
            vals = vals * (1 - a * grid.points)
        assert np.abs(vals - L(grid.points)).max() < 1e-9


def test_rh_mod_x3_no_violations():
    recs = rh_family_sweep(UnitGroup(X3**3))
    assert len(recs) == 17
    for rec in recs:
        assert "VIOLATION" not in rec.classifications


def test_repeated_roots_classify_cleanly():
    # (1 - u)^2 and (1 - u)^3 smear iterative root finders; the cluster
    # centroid must restore |alpha| = 1 to classification accuracy
    cases = [
        (S3, "0 1 0 1", np.array([1, -2, 1], dtype=complex)),
        (S5, "2 0 2 0 1", np.array([1, -3, 3, -1], dtype=complex)),
    ]
    for spec, text, binom in cases:
        Q = Poly.parse(spec, text)
        g = UnitGroup(Q)
        found = False
        for chi in g.characters():
            if chi.is_principal:
                continue
            L = l_coeffs(chi)
            if L.observed_degree != binom.size - 1:
                continue
            if np.abs(L.coeffs[: binom.size] - binom).max() < 1e-9:
                alphas = L.inverse_roots
                assert np.abs(np.abs(alphas) - 1.0).max() < 1e-6
                assert classify_roots(alphas, spec.q) == ("trivial",) * len(alphas)
                found = True
        assert found


def test_rh_family_sweep_q5_deg2_with_hybrid():
    grid = default_annulus_grid(5)
    for Q in all_monic_moduli(S5, 2)[:6]:
        recs = rh_family_sweep(UnitGroup(Q), hybrid_grid=grid, K=3)
        for rec in recs:
            assert "VIOLATION" not in rec.classifications
            assert rec.max_hybrid_residual < 1e-9


def test_classify_roots_flags_off_circle_values():
    assert classify_roots(np.array([2.0 + 0j]), 3) == ("VIOLATION",)
    assert classify_roots(np.array([1.0 + 0j, math.sqrt(3) + 0j]), 3) == (
        "trivial",
        "critical",
    )


def test_lpolynomial_rejects_bad_constant_term():
    g = UnitGroup(X3**2)
    chi = g.character((1,))
    with pytest.raises(ValueError):
        LPolynomial(chi, np.array([2.0, 1.0], dtype=complex))
    with pytest.raises(ValueError):
        LPolynomial(chi, np.array([], dtype=complex))


def test_euler_product_convergence_and_domain():
    g = UnitGroup(X3**2)
    chi = g.character((1,))
    L = l_coeffs(chi)
    u = 0.2
    prev = None
    for maxdeg in range(0, 7):
        err = abs(euler_product_truncated(chi, u, maxdeg) - L(u))
        assert err < 2 * (3 * u) ** maxdeg
        if prev is not None:
            assert err < prev + 1e-12
        prev = err
    assert euler_product_truncated(chi, 0.1, 0) == 1.0
    # principal case approaches the closed form
    chi0 = g.principal
    assert abs(euler_product_truncated(chi0, u, 7) - zeta_q(g.Q, u)) < 2 * (3 * u) ** 7
    with pytest.raises(ValueError):
        euler_product_truncated(chi, 0.5, 3)


def test_von_mangoldt_sum_degree_one_is_linear_prime_sum():
    g = UnitGroup(X3**3)
    for chi in (g.character((1, 0)), g.character((0, 1))):
        direct = sum(chi(P) for P in primes_of_degree(S3, 1))
        assert von_mangoldt_character_sum(chi, 1) == pytest.approx(direct)


def test_p_k_trivial_and_s_form_consistency():
    g = UnitGroup(X3**3)
    chi = g.character((1, 1))
    assert p_k(chi, 0.3 + 0.1j, 0) == 1.0
    K = 6
    s = 0.8 + 0.9j
    u = u_of_s(3, s)
    # independent s-form: loop over prime powers P^e with e deg P <= K
    acc = 0j
    for d in range(1, K + 1):
        for P in primes_of_degree(S3, d):
            cp = chi(P)
            for e in range(1, K // d + 1):
                acc += d * cp**e * (3 ** (-s * e * d)) / (e * d)
    assert abs(p_k(chi, u, K) - np.exp(acc)) < 1e-12


def test_z_k_closed_form_matches_direct_tail():
    g = UnitGroup(X3**3)
    chi = g.character((1, 2))
    L = l_coeffs(chi)
    u = 0.3 * np.exp(0.7j)
    for K in (0, 1, 3, 7):
        direct = 0j
        for a in L.inverse_roots:
            zz = a * u
            assert abs(zz) <= 0.9
            direct += sum(zz**k / k for k in range(K + 1, K + 500))
        assert abs(z_k(L, u, K) - np.exp(-direct)) < 1e-12
    assert z_k(L, 0.0, 5) == 1.0
    assert abs(z_k(L, u, 0) - L(u)) < 1e-12
    with pytest.raises(ValueError):
        z_k(L, 0.7, 2)


def test_hybrid_identity_mod_x3_all_K():
    g = UnitGroup(X3**3)
    grid = default_annulus_grid(3)
    for chi in g.characters():
        if chi.is_principal:
            with pytest.raises(ValueError):
                hybrid_check(chi, grid, 2)
            continue
        for K in (0, 1, 2, 4, 8):
            assert hybrid_check(chi, grid, K) < 1e-9


def test_pk_ratio_improves_with_K():
    g = UnitGroup(X3**4)
    chi = g.character(tuple(1 for _ in g.orders))
    grid = rectangle_grid(3, sigma_lo=0.8, sigma_hi=0.95)
    r2 = pk_ratio_check(chi, grid, 2)
    r8 = pk_ratio_check(chi, grid, 8)
    assert r2.deg_q == 4 and r2.K == 2
    assert r8.max_deviation < r2.max_deviation
    # the deviation envelope at sigma_min = 0.8 is (4/K) 3^(-0.3 K)
    assert r8.max_deviation <= 10 * (4 / 8) * 3.0 ** (-0.3 * 8)
    assert 0 < r2.c_obs <= 10 and 0 < r8.c_obs <= 10
    with pytest.raises(ValueError):
        pk_ratio_check(g.principal, grid, 2)
    with pytest.raises(ValueError):
        pk_ratio_check(chi, grid, 0)


def test_u_s_maps_and_round_trip():
    assert u_of_s(3, 1.0) == pytest.approx(1 / 3)
    assert abs(u_of_s(3, 0.5)) == pytest.approx(3**-0.5)
    rng = np.random.default_rng(11)
    s = rng.uniform(0.51, 0.99, 64) + 1j * rng.uniform(
        1e-3, 2 * np.pi / math.log(3) - 1e-3, 64
    )
    assert np.abs(s_of_u(3, u_of_s(3, s)) - s).max() < 1e-12
    u = 0.4 * np.exp(1j * np.linspace(-3, 3, 33))
    assert np.abs(u_of_s(3, s_of_u(3, u)) - u).max() < 1e-12
    back = s_of_u(3, u)
    assert back.imag.min() >= 0
    assert back.imag.max() < 2 * np.pi / math.log(3)
    with pytest.raises(ValueError):
        s_of_u(3, 0.0)


def test_region_grid_validation():
    with pytest.raises(ValueError):
        RegionGrid("u", 3, [])
    with pytest.raises(ValueError):
        RegionGrid("u", 3, [0.4, 0.4])
    with pytest.raises(ValueError):
        RegionGrid("u", 3, [0.2])  # |u| < 1/3
    with pytest.raises(ValueError):
        RegionGrid("u", 3, [0.6])  # |u| > 3^(-1/2)
    with pytest.raises(ValueError):
        RegionGrid("s", 3, [0.4 + 1j])  # sigma too small
    with pytest.raises(ValueError):
        RegionGrid("w", 3, [0.4])
    g = RegionGrid("s", 3, [0.75 + 1.0j])
    assert abs(g.u_points()[0] - u_of_s(3, 0.75 + 1.0j)) < 1e-15


def test_default_grids_are_serpentine_and_in_region():
    for q in (3, 5):
        grid = default_annulus_grid(q)
        assert len(grid) == 200
        r = np.abs(grid.points)
        assert r.min() > 1 / q and r.max() < q**-0.5
        steps = np.abs(np.diff(grid.points))
        assert steps.max() < 0.2
    sgrid = rectangle_grid(3)
    assert sgrid.plane == "s"
    assert np.abs(np.diff(sgrid.points)).max() < 1.2
    back = sgrid.s_points()
    assert np.shares_memory(back, sgrid.points) or np.all(back == sgrid.points)


def test_l_eval_s_polynomial_and_principal_paths():
    g = UnitGroup(X3**3)
    chi = g.character((1, 0))
    s = 0.7 + 0.5j
    assert abs(l_eval_s(chi, s) - l_coeffs(chi)(u_of_s(3, s))) < 1e-12
    assert abs(l_eval_s(g.principal, s) - zeta_q(g.Q, u_of_s(3, s))) < 1e-12
