"""Dirichlet characters mod Q over F_q[x].

The unit group (F_q[x]/Q)* is decomposed into cyclic factors by a greedy
max-order search: repeatedly find the element of maximal order in the
quotient by the subgroup generated so far (smallest code on ties), adjust
it to have that exact order in the full group, and extend the running
discrete-log enumeration.  Characters are exponent tuples against the
resulting generators; their values are exact rational angles j/N with
N = lcm of the generator orders, converted to complex only at the edge.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .algebra import Poly, ResidueRing, _int_factor, euler_phi


def _quotient_orders(ring, codes, M, in_h):
    """Orders of the given residue codes in G/H.

    M is |G/H| (every quotient order divides it); in_h is a boolean mask
    over all codes marking membership in H.
    """
    out = np.ones(len(codes), dtype=np.int64)
    for ell, a in _int_factor(M).items():
        v = ring.pow(codes, M // ell**a)
        lexp = np.full(len(codes), -1, dtype=np.int64)
        cur = v
        for e in range(a + 1):
            hit = (lexp < 0) & in_h[cur]
            lexp[hit] = e
            if e < a:
                cur = ring.pow(cur, ell)
        if (lexp < 0).any():
            raise RuntimeError("element order does not divide |G/H|")
        out *= ell**lexp
    return out


def _solve_congruence(n, t, ni):
    """Smallest u with n*u = t (mod ni), or None."""
    g = math.gcd(n, ni)
    if t % g:
        return None
    ni_g = ni // g
    return (t // g) * pow(n // g, -1, ni_g) % ni_g if ni_g > 1 else 0


class UnitGroup:
    """(F_q[x]/Q)* with generators, orders, and a full dlog table."""

    def __init__(self, Q, capacity=2_000_000):
        self.ring = ResidueRing(Q, capacity=capacity)
        self.Q = self.ring.Q
        self.spec = self.ring.spec
        self.phi = euler_phi(self.ring.factorization)
        self.unit_codes = np.nonzero(self.ring.coprime_mask)[0]
        if len(self.unit_codes) != self.phi:
            raise RuntimeError("coprime count disagrees with euler_phi")
        self._build()
        self.N = math.lcm(*self.orders) if self.orders else 1
        self._digits = None
        self._scalar_angle_cache = {}

    def _build(self):
        ring = self.ring
        units = self.unit_codes
        gens, orders = [], []
        h_mask = np.zeros(ring.size, dtype=bool)
        h_mask[1] = True
        h_codes = np.array([1], dtype=np.int64)
        h_flat = np.full(ring.size, -1, dtype=np.int64)
        h_flat[1] = 0
        covered = 1
        while covered < self.phi:
            M = self.phi // covered
            qord = _quotient_orders(ring, units, M, h_mask)
            n = int(qord.max())
            adjusted = None
            for g in units[qord == n]:
                t_flat = int(h_flat[int(ring.pow(np.array([g]), n)[0])])
                # write g^n over the current generators and divide out an
                # n-th root so the adjusted generator has exact order n
                us = []
                rem = t_flat
                for ni in reversed(orders):
                    rem, ti = divmod(rem, ni)
                    u = _solve_congruence(n, ti, ni)
                    if u is None:
                        break
                    us.append(u)
                else:
                    us.reverse()
                    if us:
                        # inverse of prod g_i^{u_i} read off the enumeration
                        inv_flat = 0
                        for ni, u in zip(orders, us):
                            inv_flat = inv_flat * ni + (ni - u) % ni
                        adjusted = int(ring.mul(g, h_codes[inv_flat]))
                    else:
                        adjusted = int(g)
                    break
            if adjusted is None:
                raise RuntimeError("no adjustable maximal-order generator found")
            if int(ring.pow(np.array([adjusted]), n)[0]) != 1:
                raise RuntimeError("generator adjustment failed")
            old = h_codes
            h_codes = np.empty(len(old) * n, dtype=np.int64)
            cur = old
            for j in range(n):
                if j:
                    cur = ring.mul(cur, adjusted)
                h_codes[j::n] = cur
                h_flat[cur] = np.arange(len(old), dtype=np.int64) * n + j
                h_mask[cur] = True
            gens.append(adjusted)
            orders.append(n)
            covered *= n
        if sorted(h_codes.tolist()) != units.tolist():
            raise RuntimeError("dlog enumeration does not cover the units")
        self.generators = tuple(gens)
        self.orders = tuple(orders)
        self.dlog_flat = h_flat

    def __repr__(self):
        return f"UnitGroup(Q={self.Q.text!r}, orders={self.orders})"

    @property
    def rank(self):
        return len(self.orders)

    @property
    def dlog_digits(self):
        """(size, rank) matrix of dlog exponents; junk rows off the units."""
        if self._digits is None:
            flat = np.where(self.dlog_flat >= 0, self.dlog_flat, 0)
            digits = np.zeros((self.ring.size, self.rank), dtype=np.int64)
            for i in range(self.rank - 1, -1, -1):
                flat, digits[:, i] = np.divmod(flat, self.orders[i])
            self._digits = digits
        return self._digits

    def dlog(self, f):
        """Exponent tuple of a coprime residue (Poly or code)."""
        code = self.ring.code_of(f) if isinstance(f, Poly) else int(f)
        if self.dlog_flat[code] < 0:
            raise ValueError("dlog of a residue not coprime to Q")
        return tuple(int(d) for d in self.dlog_digits[code])

    def character(self, exponents):
        return Character(self, tuple(int(m) for m in exponents))

    @property
    def principal(self):
        return self.character((0,) * self.rank)

    def characters(self):
        """All phi(Q) characters, principal first, odometer order."""
        for m in np.ndindex(*self.orders):
            yield Character(self, tuple(int(v) for v in m))

    def angle_numerators(self, exponents, codes):
        """j with chi(code) = e(j/N); -1 marks non-coprime codes."""
        codes = np.asarray(codes, dtype=np.int64)
        w = np.array(
            [m * (self.N // n) % self.N for m, n in zip(exponents, self.orders)],
            dtype=np.int64,
        )
        j = (self.dlog_digits[codes] @ w) % self.N
        return np.where(self.dlog_flat[codes] >= 0, j, -1)


@dataclass(frozen=True)
class Character:
    group: UnitGroup
    exponents: tuple

    def __post_init__(self):
        if len(self.exponents) != self.group.rank:
            raise ValueError("exponent tuple length mismatch")
        for m, n in zip(self.exponents, self.group.orders):
            if not 0 <= m < n:
                raise ValueError(f"exponent {m} out of range for order {n}")

    @property
    def is_principal(self):
        return all(m == 0 for m in self.exponents)

    @property
    def order(self):
        return math.lcm(
            *(n // math.gcd(m, n) for m, n in zip(self.exponents, self.group.orders))
        ) if self.exponents else 1

    def conjugate(self):
        return Character(
            self.group,
            tuple((-m) % n for m, n in zip(self.exponents, self.group.orders)),
        )

    def __mul__(self, other):
        if other.group is not self.group:
            raise ValueError("characters from different groups")
        return Character(
            self.group,
            tuple(
                (a + b) % n
                for a, b, n in zip(self.exponents, other.exponents, self.group.orders)
            ),
        )

    def angle_numerators(self, codes):
        return self.group.angle_numerators(self.exponents, codes)

    def angle_numerator(self, f):
        """Exact j with chi(f) = e(j / group.N), or -1 when chi(f) = 0."""
        code = self.group.ring.code_of(f) if isinstance(f, Poly) else int(f)
        return int(self.angle_numerators(np.array([code]))[0])

    def __call__(self, f):
        scalar = isinstance(f, Poly) or np.isscalar(f)
        if isinstance(f, Poly):
            codes = np.array([self.group.ring.code_of(f)])
        else:
            codes = np.atleast_1d(np.asarray(f, dtype=np.int64))
        j = self.angle_numerators(codes)
        vals = np.exp(2j * np.pi * j / self.group.N)
        vals[j < 0] = 0.0
        return complex(vals[0]) if scalar else vals

    @property
    def is_even(self):
        """True iff chi is trivial on the constants F_q*."""
        scalars = np.arange(1, self.group.spec.q, dtype=np.int64)
        return bool((self.angle_numerators(scalars) == 0).all())

    @property
    def text(self):
        return f"{self.group.Q.text} : " + ",".join(str(m) for m in self.exponents)

    def __repr__(self):
        return f"Character({self.text!r})"


def character_from_text(group, text):
    q_text, _, exp_text = text.partition(":")
    if q_text.strip() != group.Q.text:
        raise ValueError("character text names a different modulus")
    return group.character(int(tok) for tok in exp_text.strip().split(","))


def orthogonality_mean_value(group_or_Q, terms):
    """Mean value of |sum_N a_N chi(N)|^2 over all characters mod Q.

    Returns (lhs, rhs) with lhs = sum over every character of the squared
    modulus of the character sum, and rhs = phi(Q) * sum |a_N|^2.  The N
    must be distinct, of norm below |Q|, and coprime to Q; without
    coprimality the identity is false (chi(N) = 0 for every chi, so the
    left side drops the term while the right side keeps it).
    """
    group = group_or_Q if isinstance(group_or_Q, UnitGroup) else UnitGroup(group_or_Q)
    ring = group.ring
    tensor = np.zeros(group.orders if group.orders else (1,), dtype=complex)
    seen = set()
    for N, a in terms:
        if N.degree >= ring.n:
            raise ValueError(f"|N| must be smaller than |Q|: {N.text}")
        code = ring.code_of(N)
        if code in seen:
            raise ValueError(f"duplicate N: {N.text}")
        seen.add(code)
        flat = group.dlog_flat[code]
        if flat < 0:
            raise ValueError(f"N not coprime to Q: {N.text}")
        tensor[np.unravel_index(flat, group.orders)] += complex(a)
    sums = np.fft.fftn(np.conj(tensor))
    lhs = float(np.sum(np.abs(sums) ** 2))
    rhs = group.phi * float(sum(abs(complex(a)) ** 2 for _, a in terms))
    return lhs, rhs
