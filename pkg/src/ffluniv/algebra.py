"""Exact arithmetic for F_q and F_q[x].

Elements of F_q = F_p[y]/(m(y)) are integer indices 0..q-1 whose base-p
digits (lowest power of y first) are the coordinates in the power basis.
The modulus m is fixed per (p, k) so that indices, polynomial codes and
text forms are stable across runs.  Polynomials store coefficient indices
lowest degree first; the canonical integer code sum(c_i q^i) orders every
degree block lexicographically, and all enumeration here follows it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

NEG_INF = float("-inf")

# Smallest monic irreducible of degree k over F_p in code order,
# coefficients lowest power first.  Frozen so element indices never move.
_MODULI = {
    (3, 2): (1, 0, 1),
    (3, 3): (1, 2, 0, 1),
    (3, 4): (2, 1, 0, 0, 1),
    (5, 2): (2, 0, 1),
    (5, 3): (1, 1, 0, 1),
    (5, 4): (2, 0, 0, 0, 1),
    (7, 2): (1, 0, 1),
    (7, 3): (2, 0, 0, 1),
    (7, 4): (1, 1, 0, 0, 1),
}


def _is_prime_int(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _int_divisors(n):
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return sorted(out)


def _int_factor(n):
    """Prime factorization of a positive int as a dict prime -> exponent."""
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _mobius_int(n):
    mu = 1
    for _, e in _int_factor(n).items():
        if e > 1:
            return 0
        mu = -mu
    return mu


class FieldSpec:
    """The coefficient field F_q, q = p^k odd, with cached op tables."""

    def __init__(self, p, k=1):
        if not _is_prime_int(p) or p == 2:
            raise ValueError(f"p must be an odd prime, got {p}")
        if k < 1:
            raise ValueError(f"k must be positive, got {k}")
        if k > 1 and (p, k) not in _MODULI:
            raise ValueError(f"no modulus on file for p={p}, k={k}")
        self.p = p
        self.k = k
        self.q = p**k
        self.modulus = _MODULI.get((p, k))
        self._tables = {}
        self._primes = {}
        self._prime_codes = {}

    def __eq__(self, other):
        return isinstance(other, FieldSpec) and (self.p, self.k) == (other.p, other.k)

    def __hash__(self):
        return hash((FieldSpec, self.p, self.k))

    def __repr__(self):
        return f"FieldSpec({self.text})"

    @property
    def text(self):
        return str(self.p) if self.k == 1 else f"{self.p}^{self.k}"

    def _digit_matrix(self):
        d = self._tables.get("digits")
        if d is None:
            idx = np.arange(self.q)
            d = (idx[:, None] // self.p ** np.arange(self.k)) % self.p
            d = d.astype(np.int16)
            self._tables["digits"] = d
        return d

    def _encode_digits(self, digits):
        w = self.p ** np.arange(self.k, dtype=np.int64)
        return (digits.astype(np.int64) @ w).astype(np.int64)

    @property
    def add_table(self):
        t = self._tables.get("add")
        if t is None:
            d = self._digit_matrix()
            s = (d[:, None, :] + d[None, :, :]) % self.p
            t = self._encode_digits(s).astype(np.int16)
            self._tables["add"] = t
        return t

    @property
    def neg_table(self):
        t = self._tables.get("neg")
        if t is None:
            d = self._digit_matrix()
            t = self._encode_digits((-d) % self.p).astype(np.int16)
            self._tables["neg"] = t
        return t

    @property
    def sub_table(self):
        t = self._tables.get("sub")
        if t is None:
            t = self.add_table[:, self.neg_table]
            self._tables["sub"] = t
        return t

    def _reduction_rows(self):
        """Digits of y^(k+j) mod m for j = 0..k-2, over the power basis."""
        p, k, m = self.p, self.k, self.modulus
        rows = []
        cur = [(-m[i]) % p for i in range(k)]
        rows.append(list(cur))
        for _ in range(k - 2):
            top = cur[-1]
            cur = [0] + cur[:-1]
            for i in range(k):
                cur[i] = (cur[i] + top * rows[0][i]) % p
            rows.append(list(cur))
        return rows

    @property
    def mul_table(self):
        t = self._tables.get("mul")
        if t is None:
            q, p, k = self.q, self.p, self.k
            d = self._digit_matrix().astype(np.int32)
            if k == 1:
                t = ((np.arange(q)[:, None] * np.arange(q)[None, :]) % p).astype(np.int16)
            else:
                rows = np.array(self._reduction_rows(), dtype=np.int32)
                t = np.empty((q, q), dtype=np.int16)
                step = max(1, 2**22 // (q * (2 * k - 1)))
                for lo in range(0, q, step):
                    hi = min(q, lo + step)
                    conv = np.zeros((hi - lo, q, 2 * k - 1), dtype=np.int32)
                    for i in range(k):
                        for j in range(k):
                            conv[:, :, i + j] += d[lo:hi, None, i] * d[None, :, j]
                    low = conv[:, :, :k]
                    low += conv[:, :, k:] @ rows
                    low %= p
                    t[lo:hi] = self._encode_digits(low)
            self._tables["mul"] = t
        return t

    @property
    def inv_table(self):
        t = self._tables.get("inv")
        if t is None:
            # index 0 holds the out-of-range sentinel q: using it as an
            # index fails loudly instead of returning a wrong element
            rows, cols = np.nonzero(self.mul_table == 1)
            t = np.full(self.q, self.q, dtype=np.int16)
            t[rows] = cols
            self._tables["inv"] = t
        return t

    def element(self, index):
        index = int(index)
        if not 0 <= index < self.q:
            raise ValueError(f"element index {index} out of range for {self}")
        return FieldElement(self, index)

    @property
    def zero(self):
        return FieldElement(self, 0)

    @property
    def one(self):
        return FieldElement(self, 1)

    def elements(self):
        return [FieldElement(self, i) for i in range(self.q)]

    def element_text(self, index):
        if self.k == 1:
            return str(int(index))
        digits = [(int(index) // self.p**i) % self.p for i in range(self.k)]
        return "".join(str(d) for d in digits)

    def parse_element(self, text):
        if self.k == 1:
            idx = int(text)
        else:
            if len(text) != self.k:
                raise ValueError(f"expected {self.k} digits for {self}, got {text!r}")
            idx = sum(int(ch) * self.p**i for i, ch in enumerate(text))
        if not 0 <= idx < self.q:
            raise ValueError(f"bad element text {text!r} for {self}")
        return FieldElement(self, idx)


_FIELD_CACHE = {}


def field(q, k=None):
    """field(q) or field(p, k): cached FieldSpec for F_q."""
    if k is None:
        fac = _int_factor(q)
        if len(fac) != 1:
            raise ValueError(f"{q} is not a prime power")
        (p, k), = fac.items()
    else:
        p = q
    spec = _FIELD_CACHE.get((p, k))
    if spec is None:
        spec = FieldSpec(p, k)
        _FIELD_CACHE[(p, k)] = spec
    return spec


def parse_field_text(text):
    """Parse "p" or "p^k" into a FieldSpec."""
    if "^" in text:
        p_s, k_s = text.split("^", 1)
        return field(int(p_s), int(k_s))
    return field(int(text))


@dataclass(frozen=True)
class FieldElement:
    spec: FieldSpec
    index: int

    def _check(self, other):
        if self.spec != other.spec:
            raise ValueError("mixed fields")

    @property
    def is_zero(self):
        return self.index == 0

    @property
    def text(self):
        return self.spec.element_text(self.index)

    def __repr__(self):
        return f"F{self.spec.q}({self.text})"

    def __add__(self, other):
        self._check(other)
        return FieldElement(self.spec, int(self.spec.add_table[self.index, other.index]))

    def __neg__(self):
        return FieldElement(self.spec, int(self.spec.neg_table[self.index]))

    def __sub__(self, other):
        self._check(other)
        return FieldElement(self.spec, int(self.spec.sub_table[self.index, other.index]))

    def __mul__(self, other):
        self._check(other)
        return FieldElement(self.spec, int(self.spec.mul_table[self.index, other.index]))

    def inverse(self):
        if self.index == 0:
            raise ZeroDivisionError("inverse of zero")
        return FieldElement(self.spec, int(self.spec.inv_table[self.index]))

    def __truediv__(self, other):
        return self * other.inverse()

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** (-e)
        out = self.spec.one
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out


@dataclass(frozen=True)
class Poly:
    """Polynomial over F_q; coeffs are element indices, lowest degree first."""

    spec: FieldSpec
    coeffs: tuple

    def __post_init__(self):
        cs = []
        for c in self.coeffs:
            if isinstance(c, FieldElement):
                if c.spec != self.spec:
                    raise ValueError("mixed fields")
                cs.append(c.index)
            else:
                c = int(c)
                if not 0 <= c < self.spec.q:
                    raise ValueError(f"coefficient index {c} out of range")
                cs.append(c)
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def zero(cls, spec):
        return cls(spec, ())

    @classmethod
    def one(cls, spec):
        return cls(spec, (1,))

    @classmethod
    def constant(cls, spec, c):
        return cls(spec, (c,))

    @classmethod
    def x(cls, spec):
        return cls(spec, (0, 1))

    @classmethod
    def from_code(cls, spec, code):
        code = int(code)
        if code < 0:
            raise ValueError("negative code")
        cs = []
        while code:
            code, r = divmod(code, spec.q)
            cs.append(r)
        return cls(spec, tuple(cs))

    @property
    def code(self):
        return sum(c * self.spec.q**i for i, c in enumerate(self.coeffs))

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    @property
    def is_zero(self):
        return not self.coeffs

    @property
    def is_monic(self):
        return bool(self.coeffs) and self.coeffs[-1] == 1

    @property
    def norm(self):
        """|f| = q^deg f, with |0| = 0."""
        return 0 if self.is_zero else self.spec.q ** self.degree

    @property
    def lead(self):
        if self.is_zero:
            raise ValueError("zero polynomial has no leading coefficient")
        return FieldElement(self.spec, self.coeffs[-1])

    @property
    def text(self):
        if self.is_zero:
            return "0"
        return " ".join(self.spec.element_text(c) for c in self.coeffs)

    @classmethod
    def parse(cls, spec, text):
        text = text.strip()
        if text == "0":
            return cls.zero(spec)
        return cls(spec, tuple(spec.parse_element(tok).index for tok in text.split()))

    def __repr__(self):
        return f"Poly({self.spec.text}, {self.text!r})"

    def __lt__(self, other):
        if self.spec != other.spec:
            raise ValueError("mixed fields")
        return self.code < other.code

    def _check(self, other):
        if not isinstance(other, Poly) or self.spec != other.spec:
            raise ValueError("mixed fields")

    def __add__(self, other):
        self._check(other)
        add = self.spec.add_table
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = int(add[out[i], c])
        return Poly(self.spec, tuple(out))

    def __neg__(self):
        neg = self.spec.neg_table
        return Poly(self.spec, tuple(int(neg[c]) for c in self.coeffs))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        self._check(other)
        if self.is_zero or other.is_zero:
            return Poly.zero(self.spec)
        mul = self.spec.mul_table
        add = self.spec.add_table
        a, b = self.coeffs, other.coeffs
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x == 0:
                continue
            row = mul[x]
            for j, y in enumerate(b):
                if y:
                    out[i + j] = int(add[out[i + j], row[y]])
        return Poly(self.spec, tuple(out))

    def scale(self, c):
        if isinstance(c, FieldElement):
            c = c.index
        row = self.spec.mul_table[c]
        return Poly(self.spec, tuple(int(row[x]) for x in self.coeffs))

    def shift(self, n):
        """Multiply by x^n."""
        if self.is_zero:
            return self
        return Poly(self.spec, (0,) * n + self.coeffs)

    def __pow__(self, e):
        if e < 0:
            raise ValueError("negative polynomial power")
        out = Poly.one(self.spec)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __divmod__(self, other):
        self._check(other)
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        spec = self.spec
        mul, sub, inv = spec.mul_table, spec.sub_table, spec.inv_table
        db = other.degree
        linv = int(inv[other.coeffs[-1]])
        rem = list(self.coeffs)
        quot = [0] * max(0, len(rem) - db)
        for t in range(len(rem) - 1, db - 1, -1):
            c = rem[t]
            if c == 0:
                continue
            f = int(mul[c, linv])
            quot[t - db] = f
            for i, bc in enumerate(other.coeffs):
                if bc:
                    rem[t - db + i] = int(sub[rem[t - db + i], mul[f, bc]])
        return Poly(spec, tuple(quot)), Poly(spec, tuple(rem))

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def monic(self):
        if self.is_zero:
            return self
        return self.scale(self.lead.inverse())

    def __call__(self, elt):
        if not isinstance(elt, FieldElement) or elt.spec != self.spec:
            raise ValueError("argument must be an element of the same field")
        acc = self.spec.zero
        for c in reversed(self.coeffs):
            acc = acc * elt + FieldElement(self.spec, c)
        return acc


def poly_gcd(f, g):
    """Monic gcd, with gcd(0, 0) = 0."""
    while not g.is_zero:
        f, g = g, f % g
    return f.monic()


def monics_of_degree(spec, d):
    """All monic degree-d polynomials in code order."""
    if d < 0:
        raise ValueError("degree must be nonnegative")
    base = spec.q**d
    for m in range(base, 2 * base):
        yield Poly.from_code(spec, m)


def _monic_digit_block(spec, b):
    """Digits of every monic degree-b poly, shape (q^b, b+1), code order."""
    q = spec.q
    r = np.arange(q**b, dtype=np.int64)
    dig = np.empty((q**b, b + 1), dtype=np.int16)
    for i in range(b):
        dig[:, i] = (r // q**i) % q
    dig[:, b] = 1
    return dig


def _prime_codes_of_degree(spec, d):
    """Codes of monic irreducibles of degree d, via a composite sieve.

    Every monic composite of degree d has a prime factor of degree
    <= d/2, so marking prime-times-monic products finds the rest.
    """
    for e in range(1, d + 1):
        if e in spec._prime_codes:
            continue
        q = spec.q
        composite = np.zeros(q**e, dtype=bool)
        weights = q ** np.arange(e + 1, dtype=np.int64)
        for a in range(1, e // 2 + 1):
            b = e - a
            gb = _monic_digit_block(spec, b)
            for pc in spec._prime_codes[a]:
                pdig = [(int(pc) // q**i) % q for i in range(a + 1)]
                if spec.k == 1:
                    out = np.zeros((q**b, e + 1), dtype=np.int32)
                    for i, ci in enumerate(pdig):
                        if ci:
                            out[:, i : i + b + 1] += ci * gb
                    out %= spec.p
                else:
                    mul, add = spec.mul_table, spec.add_table
                    out = np.zeros((q**b, e + 1), dtype=np.int16)
                    for i, ci in enumerate(pdig):
                        if ci:
                            seg = out[:, i : i + b + 1]
                            out[:, i : i + b + 1] = add[seg, mul[ci, gb]]
                composite[out.astype(np.int64) @ weights - q**e] = True
        spec._prime_codes[e] = q**e + np.nonzero(~composite)[0]
    return spec._prime_codes[d]


def primes_of_degree(spec, d):
    """Monic irreducibles of degree d in code order, cached per field."""
    if d < 1:
        raise ValueError("degree must be positive")
    got = spec._primes.get(d)
    if got is None:
        got = tuple(Poly.from_code(spec, int(c)) for c in _prime_codes_of_degree(spec, d))
        spec._primes[d] = got
    return got


def irreducible_test(f):
    """Trial division by all monic primes of degree <= deg f / 2."""
    if f.is_zero or f.degree < 1 or not f.is_monic:
        raise ValueError("irreducibility test needs a monic input of degree >= 1")
    for e in range(1, f.degree // 2 + 1):
        for P in primes_of_degree(f.spec, e):
            if (f % P).is_zero:
                return False
    return True


def prime_count(spec, d):
    """pi_q(d) = (1/d) sum_{e | d} mu(e) q^(d/e), exactly in integers."""
    if d < 1:
        raise ValueError("degree must be positive")
    total = sum(_mobius_int(e) * spec.q ** (d // e) for e in _int_divisors(d))
    assert total % d == 0
    return total // d


@dataclass(frozen=True)
class Factorization:
    """unit * prod P^e with factors sorted by code (degree, then lex)."""

    spec: FieldSpec
    unit: int
    factors: tuple

    def value(self):
        out = Poly.constant(self.spec, self.unit)
        for P, e in self.factors:
            out = out * P**e
        return out

    @property
    def distinct_primes(self):
        return tuple(P for P, _ in self.factors)

    def __iter__(self):
        return iter(self.factors)


def factorize(f):
    """Trial division by primes in code order."""
    if f.is_zero:
        raise ValueError("cannot factor the zero polynomial")
    spec = f.spec
    unit = f.coeffs[-1]
    w = f.monic()
    factors = []
    d = 1
    while w.degree >= 2 * d:
        for P in primes_of_degree(spec, d):
            if w.degree < 2 * d:
                break
            e = 0
            while True:
                quot, rem = divmod(w, P)
                if not rem.is_zero:
                    break
                w = quot
                e += 1
            if e:
                factors.append((P, e))
        d += 1
    if w.degree >= 1:
        factors.append((w, 1))
    return Factorization(spec, unit, tuple(factors))


def von_mangoldt_degree(f):
    """deg P if f is a positive power of a prime P (times a unit), else 0."""
    if f.is_zero or f.degree < 1:
        return 0
    fac = factorize(f)
    if len(fac.factors) == 1:
        return fac.factors[0][0].degree
    return 0


def von_mangoldt(f):
    """Lambda(f) = deg P * log q on prime powers, else 0."""
    return von_mangoldt_degree(f) * math.log(f.spec.q)


def euler_phi(f):
    """Number of units in F_q[x]/(f); accepts a Poly or a Factorization."""
    fac = f if isinstance(f, Factorization) else factorize(f)
    out = 1
    for P, e in fac:
        np_ = P.norm
        out *= np_ ** (e - 1) * (np_ - 1)
    return out


@dataclass(frozen=True)
class PhiBoundReport:
    q: int
    n: int
    deg_q: int
    phi: int
    ratio: float
    c0: float
    passed: bool


def phi_lower_bound_check(spec, n, c0=0.25):
    """Check phi(Q) >= c0 |Q| / log_q(deg Q) on a worst-case modulus.

    Q is the product of every monic prime of degree <= n, the squarefree
    modulus minimizing phi/|Q| at its degree.  phi and |Q| are exact; only
    the final ratio is floated.
    """
    if n < 1:
        raise ValueError("n must be positive")
    deg_q = sum(d * prime_count(spec, d) for d in range(1, n + 1))
    phi = 1
    phi_over_norm = Fraction(1)
    for d in range(1, n + 1):
        nd = spec.q**d
        pc = prime_count(spec, d)
        phi *= (nd - 1) ** pc
        phi_over_norm *= Fraction(nd - 1, nd) ** pc
    ratio = float(phi_over_norm) * math.log(deg_q, spec.q)
    return PhiBoundReport(spec.q, n, deg_q, phi, ratio, c0, ratio >= c0)


class ResidueRing:
    """F_q[x]/(Q) with residues as integer codes and vectorized ops.

    The code of a residue is sum(c_i q^i) over its coefficient indices, so
    codes run 0..q^degQ - 1 and monic degree-n residues (n < deg Q) occupy
    the contiguous block [q^n, 2 q^n).
    """

    def __init__(self, Q, capacity=2_000_000):
        if Q.is_zero or Q.degree < 1:
            raise ValueError("modulus must have degree >= 1")
        self.Q = Q.monic()
        self.spec = Q.spec
        self.n = Q.degree
        self.size = self.spec.q**self.n
        if self.size > capacity:
            raise ValueError(
                f"residue ring has {self.size} elements, over capacity {capacity}"
            )
        self.qpow = self.spec.q ** np.arange(self.n, dtype=np.int64)
        idx = np.arange(self.size, dtype=np.int64)
        self.digits = ((idx[:, None] // self.qpow) % self.spec.q).astype(np.int16)
        self._red = self._reduction_rows()
        self._coprime = None
        self._factorization = None

    def _reduction_rows(self):
        """Coefficient indices of x^(n+j) mod Q for j = 0..n-2."""
        rows = np.zeros((max(0, self.n - 1), self.n), dtype=np.int16)
        x = Poly.x(self.spec)
        cur = x**self.n % self.Q
        for j in range(self.n - 1):
            row = list(cur.coeffs) + [0] * (self.n - len(cur.coeffs))
            rows[j] = row
            cur = cur * x % self.Q
        return rows

    def encode(self, digit_matrix):
        return (digit_matrix.astype(np.int64) @ self.qpow).astype(np.int64)

    def code_of(self, f):
        if f.spec != self.spec:
            raise ValueError("mixed fields")
        return (f % self.Q).code

    def to_poly(self, code):
        return Poly.from_code(self.spec, int(code))

    @property
    def factorization(self):
        if self._factorization is None:
            self._factorization = factorize(self.Q)
        return self._factorization

    def mul(self, a, b):
        """Product of residue codes; broadcasts scalars against arrays."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        a, b = np.broadcast_arrays(a, b)
        shape = a.shape
        a = a.ravel()
        b = b.ravel()
        n, p, k = self.n, self.spec.p, self.spec.k
        A = self.digits[a]
        B = self.digits[b]
        if k == 1:
            # prime field: indices are values, so plain integer convolution
            # then one reduction beats per-op table lookups
            acc = np.zeros((len(a), 2 * n - 1), dtype=np.int32)
            Ai = A.astype(np.int32)
            Bi = B.astype(np.int32)
            for i in range(n):
                col = Ai[:, i : i + 1]
                acc[:, i : i + n] += col * Bi
            low = acc[:, :n]
            if n > 1:
                low = low + acc[:, n:].astype(np.int64) @ self._red.astype(np.int64)
            out = (low % p).astype(np.int16)
        else:
            add, mul = self.spec.add_table, self.spec.mul_table
            acc = np.zeros((len(a), 2 * n - 1), dtype=np.int16)
            for i in range(n):
                for j in range(n):
                    acc[:, i + j] = add[acc[:, i + j], mul[A[:, i], B[:, j]]]
            out = acc[:, :n]
            for j in range(n - 1):
                c = acc[:, n + j]
                out = add[out, mul[c[:, None], self._red[j][None, :]]]
        return self.encode(out).reshape(shape)

    def pow(self, a, e):
        """a^e for codes a and integer e >= 0, by binary powering."""
        if e < 0:
            raise ValueError("negative exponent")
        a = np.asarray(a, dtype=np.int64)
        out = np.ones_like(a)
        base = a
        while e:
            if e & 1:
                out = self.mul(out, base)
            if e > 1:
                base = self.mul(base, base)
            e >>= 1
        return out

    def _divisible_mask(self, P):
        """Which residue codes are divisible by the monic polynomial P."""
        dp = P.degree
        if dp < 1 or not P.is_monic:
            raise ValueError("divisor must be monic of degree >= 1")
        if dp > self.n:
            return np.zeros(self.size, dtype=bool)
        sub, mul = self.spec.sub_table, self.spec.mul_table
        D = self.digits.copy()
        pc = P.coeffs
        for t in range(self.n - 1, dp - 1, -1):
            c = D[:, t]
            for i in range(dp):
                if pc[i]:
                    D[:, t - dp + i] = sub[D[:, t - dp + i], mul[c, pc[i]]]
            D[:, t] = 0
        return (D[:, :dp] == 0).all(axis=1)

    @property
    def coprime_mask(self):
        """Boolean array over codes: coprime to Q (the unit residues)."""
        if self._coprime is None:
            mask = np.ones(self.size, dtype=bool)
            for P in self.factorization.distinct_primes:
                mask &= ~self._divisible_mask(P)
            self._coprime = mask
        return self._coprime

    def monic_codes(self, d):
        """Codes of the monic degree-d residues, d < deg Q."""
        if not 0 <= d < self.n:
            raise ValueError(f"need 0 <= d < {self.n}")
        base = self.spec.q**d
        return np.arange(base, 2 * base, dtype=np.int64)
