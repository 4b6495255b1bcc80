#!/usr/bin/env python3
"""Exact moment sequences and free cumulants.

Everything here is big-rational arithmetic: Fuss-Catalan numbers,
formal expansion of resolvent polynomials at infinity, and the
moment/cumulant/S-series conversions.  The last section checks, at
moment level, that the Bures measure factors as arcsine x
Marchenko-Pastur.
"""
from fractions import Fraction

from freeconv import measures, moments

# Fuss-Catalan table: row s, entry n
print("Fuss-Catalan numbers C_s(n):")
for s in (1, 2, 3, Fraction(1, 2)):
    row = [str(moments.fuss_catalan(s, n)) for n in range(7)]
    print(f"  s={s!s:>4}: ", "  ".join(row))

# the moments of mp(1)^s are exactly those rows
for s in (2, Fraction(1, 2)):
    poly = measures.build_resolvent(measures.free_power(measures.mp(1), s))
    ms = moments.moments_from_resolvent(poly, 6)
    assert all(ms[n] == moments.fuss_catalan(s, n) for n in range(7))
    print(f"moments of mp(1)^{s} match C_{s}(n) exactly")

# free cumulants of the Marchenko-Pastur measure are all one
ms = moments.moments_from_resolvent(measures.build_resolvent(measures.mp(1)), 10)
kappa = moments.cumulants_from_moments(ms)
print("mp(1) free cumulants:", [str(k) for k in kappa.values])

# arcsine: kappa_1 = 1, kappa_2 = 1/2
mas = moments.moments_from_resolvent(measures.build_resolvent(measures.arcsine()), 10)
kas = moments.cumulants_from_moments(mas)
print("arcsine cumulants:  ", [str(k) for k in kas.values[:4]], "...")

# Bures factorization at moment level: multiply the S-series of arcsine
# and Marchenko-Pastur, recover moments, compare with the cubic's own
# expansion; agreement is exact rational equality
mmp = moments.moments_from_resolvent(measures.build_resolvent(measures.mp(1)), 10)
via_product = moments.boxtimes_moments(mas, mmp, 10)
via_cubic = moments.moments_from_resolvent(
    measures.build_resolvent(measures.boxtimes(measures.arcsine(), measures.mp(1))), 10)
print("\nBures moments via S-series product:", [str(v) for v in via_product.values[:6]])
print("Bures moments via cubic expansion: ", [str(v) for v in via_cubic.values[:6]])
print("exactly equal to order 10:", via_product.values == via_cubic.values)
