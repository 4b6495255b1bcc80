#!/usr/bin/env python3
"""Radial eigenvalue profiles of isotropic random matrices.

For an isotropic matrix X = P U (P positive, U Haar unitary, free of
P), the radial CDF of the complex eigenvalues solves
S_{P^2}(F(r) - 1) = 1/r^2, where S is the S-transform of the squared
singular-value measure, so the eigenvalues fill a ring whose radii are
read off the F -> 0 and F -> 1 limits.
"""
from fractions import Fraction
from math import comb

from freeconv import isotropic, measures

# products of k Ginibre factors fill the unit disc with F(r) = r^(2/k)
for k in (1, 2, 3):
    spec = measures.free_power(measures.mp(1), k)
    r_in, r_out = isotropic.ring_radii(spec)
    print(f"{spec.label():10s}: ring radii ({r_in:.3f}, {r_out:.3f}); "
          f"F(0.5) = {isotropic.radial_cdf(spec, 0.5):.6f}")

# a squared-singular-value law bounded away from zero gives an annulus
spec = measures.mp(Fraction(1, 4))
r_in, r_out = isotropic.ring_radii(spec)
print(f"{spec.label():10s}: ring radii ({r_in:.6f}, {r_out:.3f})  "
      "(inner radius sqrt(3)/2: spectrum is a true ring)")

# the arcsine measure from sums of Haar unitaries:
#   R-transform of |U1+U2|  ->  Green's function
#   square the operator     ->  G(sqrt(z))/sqrt(z)
#   rescale to unit mean    ->  arcsine on [0, 2]
def g_u2(s):
    return isotropic.green_from_r(lambda y: isotropic.r_sum_unitaries(2, y), s)


def g_as(z):
    return isotropic.rescale_green(
        lambda u: isotropic.square_modulus_green(g_u2, u), 2.0, z)


mom = isotropic.moments_from_green(g_as, 6, center=1.0, radius=6.0)
print("\nmoments of the rescaled |U1+U2|^2 law:",
      " ".join(f"{m:.6f}" for m in mom))
print("binomial reference C(2k,k)/2^k:        ",
      " ".join(f"{comb(2 * k, k) / 2 ** k:.6f}" for k in range(7)))
