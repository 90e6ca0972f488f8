"""
Polynomial arithmetic over F_q[x]
=================================

Build polynomials from integer codes or digit strings, multiply and
divide them, factor into monic irreducibles, and compare prime counts
against the exact Gauss formula.
"""

from ffluniv import Poly, factorize, field, monics_of_degree, primes_of_degree

spec = field(3)
x = Poly.x(spec)

# digits are lowest-first: "1 2 0 1" is 1 + 2x + x^3
f = Poly.parse(spec, "1 2 0 1")
g = x**2 + Poly.one(spec)
print("f      =", f.text, " (code", f.code, ")")
print("g      =", g.text)
print("f * g  =", (f * g).text)
q, r = divmod(f, g)
print("f = g * (%s) + (%s)" % (q.text, r.text))

# every product of monic primes reconstructs the original polynomial
h = x**3 + x + x
fac = factorize(h)
print("\nfactor(%s):" % h.text)
for P, e in fac:
    print("   prime %-8s exponent %d" % (P.text, e))
print("reconstruction matches:", fac.value() == h)

# Gauss: the number of monic primes of degree d is (1/d) sum_{e|d} mu(e) q^{d/e}
mobius = {1: 1, 2: -1, 3: -1, 4: 0, 5: -1}
print("\nd  #primes  Gauss")
for d in range(1, 6):
    got = len(primes_of_degree(spec, d))
    exact = sum(mobius[e] * 3 ** (d // e) for e in mobius if d % e == 0) // d
    print("%d  %7d  %5d" % (d, got, exact))
    assert got == exact

# the monic count itself is q^d on the nose
for d in (2, 3, 4):
    assert sum(1 for _ in monics_of_degree(spec, d)) == 3**d
print("\nmonic counts q^d verified for d = 2, 3, 4")
