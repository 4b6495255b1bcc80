"""Measures represented by factored S-transforms.

A probability measure on [0, oo) with unit-normalised first moment is
described here only through its S-transform, written as a product of
rational factors raised to rational exponents:

    S(w) = prod_k  f_k(w) ** (p_k / q_k)

Free multiplicative convolution multiplies S-transforms, so it is just
factor-list concatenation, and free powers multiply the exponents.  The
Green's function of the measure is recovered from the functional
equation  z * w(z) * S(w(z)) = 1 + w(z);  clearing denominators and
fractional powers turns that equation into a bivariate polynomial
P(w, z) = 0 with exact rational coefficients, which the resolvent
module then solves numerically.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

from .errors import ConvergenceError, DomainError, PoleError

__all__ = [
    "MarchenkoPastur",
    "Arcsine",
    "RationalFactor",
    "MeasureSpec",
    "mp",
    "arcsine",
    "identity",
    "rational_factor",
    "s_eval",
    "boxtimes",
    "free_power",
    "build_resolvent",
    "ResolventPolynomial",
    "r_from_g",
    "s_from_r",
]


# ---------------------------------------------------------------------------
# exact univariate polynomial helpers (ascending coefficients, Fractions)
# ---------------------------------------------------------------------------

def _as_fractions(coeffs):
    return tuple(Fraction(c) for c in coeffs)


def _pmul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return tuple(out)


def _ppow(a, n):
    out = (Fraction(1),)
    base = tuple(a)
    while n:
        if n & 1:
            out = _pmul(out, base)
        base = _pmul(base, base)
        n >>= 1
    return out


def _peval(coeffs, w):
    out = 0j
    for c in reversed(coeffs):
        out = out * w + complex(c)
    return out


def _rational_coerce(x):
    """Exact rational from int, Fraction, float or string like '1/3'."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x)
    raise DomainError(f"cannot interpret {x!r} as an exact rational")


def _nth_root_fraction(value, n):
    """Exact n-th root of a positive Fraction, or None if irrational."""
    if value <= 0:
        return None

    def iroot(m):
        if m == 0:
            return 0
        r = round(m ** (1.0 / n))
        for cand in (r - 1, r, r + 1):
            if cand >= 0 and cand ** n == m:
                return cand
        return None

    p = iroot(value.numerator)
    q = iroot(value.denominator)
    if p is None or q is None:
        return None
    return Fraction(p, q)


# ---------------------------------------------------------------------------
# S-transform factors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MarchenkoPastur:
    """Marchenko-Pastur S-transform factor  S(w) = 1 / (1 + c w).

    ``c`` is the rectangularity parameter (column/row ratio of the
    underlying Ginibre block); it must be a positive rational.
    """

    c: Fraction

    def __post_init__(self):
        object.__setattr__(self, "c", _rational_coerce(self.c))
        if self.c <= 0:
            raise DomainError("Marchenko-Pastur rectangularity must be > 0")

    def numer_coeffs(self):
        return (Fraction(1),)

    def denom_coeffs(self):
        return (Fraction(1), self.c)

    def label(self):
        return f"mp({self.c})"


@dataclass(frozen=True)
class Arcsine:
    """Arcsine S-transform factor  S(w) = (w + 2) / (2 (1 + w)).

    This is the S-transform of the law of |U1 + U2|^2 / 2 for free Haar
    unitaries: density 1 / (pi sqrt(x (2 - x))) on [0, 2].
    """

    def numer_coeffs(self):
        return (Fraction(2), Fraction(1))

    def denom_coeffs(self):
        return (Fraction(2), Fraction(2))

    def label(self):
        return "as"


@dataclass(frozen=True)
class RationalFactor:
    """A general rational S-transform factor numer(w) / denom(w).

    Coefficients are ascending and exact.  Both polynomials must be
    nonzero with nonzero constant terms, so that S(0) is finite and
    nonzero and the measure has a finite nonzero first moment.
    """

    numer: tuple
    denom: tuple

    def __post_init__(self):
        num = _as_fractions(self.numer)
        den = _as_fractions(self.denom)
        while len(num) > 1 and num[-1] == 0:
            num = num[:-1]
        while len(den) > 1 and den[-1] == 0:
            den = den[:-1]
        object.__setattr__(self, "numer", num)
        object.__setattr__(self, "denom", den)
        if not any(num) or not any(den):
            raise DomainError("rational factor polynomials must be nonzero")
        if num[0] == 0 or den[0] == 0:
            raise DomainError("rational factor needs S(0) finite and nonzero")

    def numer_coeffs(self):
        return self.numer

    def denom_coeffs(self):
        return self.denom

    def label(self):
        ns = ",".join(str(c) for c in self.numer)
        ds = ",".join(str(c) for c in self.denom)
        return f"rat({ns};{ds})"


# ---------------------------------------------------------------------------
# measure specifications
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MeasureSpec:
    """A measure given as a list of (factor, rational exponent) pairs.

    The empty list is the identity measure delta(x - 1), whose
    S-transform is identically 1.
    """

    factors: tuple = ()

    def __post_init__(self):
        cleaned = []
        for factor, expo in self.factors:
            e = _rational_coerce(expo)
            if e != 0:
                cleaned.append((factor, e))
        object.__setattr__(self, "factors", tuple(cleaned))

    def __mul__(self, other):
        return boxtimes(self, other)

    def __pow__(self, s):
        return free_power(self, s)

    def label(self):
        if not self.factors:
            return "1"
        parts = []
        for factor, expo in self.factors:
            base = factor.label()
            if expo == 1:
                parts.append(base)
            elif expo.denominator == 1:
                parts.append(f"{base}^{expo}")
            else:
                parts.append(f"{base}^({expo})")
        return "*".join(parts)

    def __repr__(self):
        return f"MeasureSpec({self.label()!r})"


def mp(c=1):
    """Marchenko-Pastur measure with rectangularity ``c``."""
    return MeasureSpec(((MarchenkoPastur(c), Fraction(1)),))


def arcsine():
    """Positive arcsine measure on [0, 2]."""
    return MeasureSpec(((Arcsine(), Fraction(1)),))


def identity():
    """The neutral element of free multiplication: delta(x - 1)."""
    return MeasureSpec(())


def rational_factor(numer, denom):
    """Measure whose S-transform is the rational function numer/denom."""
    return MeasureSpec(((RationalFactor(tuple(numer), tuple(denom)), Fraction(1)),))


def boxtimes(a, b):
    """Free multiplicative convolution: concatenates the factor lists,
    so the S-transform of the result is the pointwise product."""
    return MeasureSpec(a.factors + b.factors)


def free_power(a, s):
    """Free multiplicative power: every factor exponent is scaled by s > 0."""
    s = _rational_coerce(s)
    if s <= 0:
        raise DomainError("free power exponent must be > 0")
    return MeasureSpec(tuple((f, e * s) for f, e in a.factors))


def s_eval(spec, w):
    """Evaluate S(w) as a complex number.

    Fractional exponents use the principal branch (cut along the
    negative real axis).  Raises PoleError if a factor denominator
    vanishes at ``w``.
    """
    w = complex(w)
    out = complex(1.0)
    for factor, expo in spec.factors:
        den_coeffs = factor.denom_coeffs()
        den = _peval(den_coeffs, w)
        scale = sum(abs(float(c)) * max(1.0, abs(w)) ** i
                    for i, c in enumerate(den_coeffs))
        if abs(den) <= 1e-14 * scale:
            raise PoleError(f"S-transform factor {factor.label()} has a pole at w={w}")
        val = _peval(factor.numer_coeffs(), w) / den
        if expo.denominator == 1:
            out *= val ** int(expo)
        else:
            out *= val ** float(expo)
    return out


def s0_exact(spec):
    """S(0) as an exact Fraction, or None when it is irrational."""
    q = clearing_power(spec)
    prod = Fraction(1)
    for factor, expo in spec.factors:
        e = int(expo * q)
        base = Fraction(factor.numer_coeffs()[0], factor.denom_coeffs()[0])
        prod *= base ** e
    return _nth_root_fraction(prod, q)


def first_moment(spec):
    """m1 = 1 / S(0) as a float (always available)."""
    return (1.0 / s_eval(spec, 0.0)).real


def first_moment_exact(spec):
    """m1 = 1 / S(0) as an exact Fraction, or None when irrational."""
    s0 = s0_exact(spec)
    if s0 is None or s0 == 0:
        return None
    return 1 / s0


def clearing_power(spec):
    """lcm of the exponent denominators (1 for the identity measure)."""
    dens = [e.denominator for _, e in spec.factors]
    return lcm(*dens) if dens else 1


# ---------------------------------------------------------------------------
# resolvent polynomial construction
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ResolventPolynomial:
    """Bivariate polynomial P(w, z) = sum_ij coeffs[i][j] w^i z^j.

    Constructed so that the physical branch w(z) of the functional
    equation  z w S(w) = 1 + w  is a root of P(., z).  When the
    S-transform carries fractional exponents, both sides of the
    equation are raised to ``clearing_power`` before clearing, which
    introduces spurious root branches; downstream code stays off them
    by seeding continuation on the physical sheet at large |z| and
    holding the Herglotz sign of the Green's function.
    """

    coeffs: tuple
    w_degree: int
    z_degree: int
    clearing_power: int
    source: MeasureSpec | None = None
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def coeff(self, i, j):
        """Exact coefficient of w^i z^j."""
        if 0 <= i <= self.w_degree and 0 <= j <= self.z_degree:
            return self.coeffs[i][j]
        return Fraction(0)

    def wcoeffs_at(self, z):
        """Coefficients of the univariate polynomial in w at fixed z,
        ascending, as complex floats."""
        z = complex(z)
        zp = [1.0 + 0j]
        for _ in range(self.z_degree):
            zp.append(zp[-1] * z)
        return [sum(float(cj) * zp[j] for j, cj in enumerate(row) if cj)
                for row in self.coeffs]

    def coefficient_scale_at(self, z):
        z = abs(complex(z))
        zp = max(1.0, z) ** self.z_degree
        return max(max(abs(float(cj)) for cj in row) for row in self.coeffs) * zp

    def __call__(self, w, z):
        w = complex(w)
        out = 0j
        for c in reversed(self.wcoeffs_at(z)):
            out = out * w + c
        return out

    def __repr__(self):
        src = self.source.label() if self.source is not None else "?"
        return (f"ResolventPolynomial(deg_w={self.w_degree}, deg_z={self.z_degree}, "
                f"q={self.clearing_power}, source={src!r})")


def build_resolvent(spec):
    """Clear the functional equation  z w S(w) = 1 + w  into P(w, z) = 0.

    Both sides are raised to q = lcm of the exponent denominators and
    multiplied through by all factor denominators.  The sign convention
    keeps the (1 + w)^q side positive:

        P(w, z) = (1+w)^q * prod(denoms) - z^q w^q * prod(numers)

    so for the plain Marchenko-Pastur spec this is (1+w)(1+cw) - z w.
    All coefficients are exact rationals.
    """
    q = clearing_power(spec)
    num_side = (Fraction(1),)
    one_side = (Fraction(1),)
    for factor, expo in spec.factors:
        e = int(expo * q)
        if e > 0:
            num_side = _pmul(num_side, _ppow(factor.numer_coeffs(), e))
            one_side = _pmul(one_side, _ppow(factor.denom_coeffs(), e))
        else:
            num_side = _pmul(num_side, _ppow(factor.denom_coeffs(), -e))
            one_side = _pmul(one_side, _ppow(factor.numer_coeffs(), -e))
    one_side = _pmul(one_side, _ppow((Fraction(1), Fraction(1)), q))
    # z-side coefficient of w^(i+q) z^q is num_side[i]
    w_degree = max(len(one_side) - 1, len(num_side) - 1 + q)
    rows = []
    for i in range(w_degree + 1):
        row = [Fraction(0)] * (q + 1)
        if i < len(one_side):
            row[0] += one_side[i]
        if 0 <= i - q < len(num_side):
            row[q] -= num_side[i - q]
        rows.append(tuple(row))
    while len(rows) > 1 and not any(rows[-1]):
        rows.pop()
    poly = ResolventPolynomial(
        coeffs=tuple(rows),
        w_degree=len(rows) - 1,
        z_degree=q,
        clearing_power=q,
        source=spec,
    )
    if not any(poly.coeffs[-1]):
        raise DomainError("resolvent polynomial has vanishing leading coefficient")
    return poly


# ---------------------------------------------------------------------------
# functional relations between the G, R and S transforms
# ---------------------------------------------------------------------------

def r_from_g(g, y, tol=1e-12, max_iter=200):
    """Evaluate the R-transform at ``y`` from a Green's function callable.

    Solves G(x) = y for x near the asymptote x ~ 1/y (damped Newton
    step with the leading-order derivative -y^2 frozen), then returns
    R(y) = x - 1/y.  Intended for small |y| where the inversion is
    well conditioned.
    """
    y = complex(y)
    if y == 0:
        raise DomainError("r_from_g needs y != 0; R(0) is the first cumulant")
    x = 1.0 / y
    damp = 1.0
    res = g(x) - y
    # tolerance is relative to |y|: the residual scale of G near the solution
    for _ in range(max_iter):
        if abs(res) <= tol * abs(y):
            return x - 1.0 / y
        step = res / (y * y)
        x_new = x + damp * step
        res_new = g(x_new) - y
        if abs(res_new) > abs(res):
            damp *= 0.5
            if damp < 1e-8:
                break
            continue
        x, res = x_new, res_new
        damp = min(1.0, damp * 2.0)
    raise ConvergenceError(f"r_from_g did not converge at y={y} (residual {abs(res):.2e})")


def s_from_r(r, y, tol=1e-12, max_iter=200):
    """Evaluate the S-transform at ``y`` from an R-transform callable.

    Uses the fact that z -> z S(z) and z -> z R(z) are composition
    inverses of one another when the first cumulant is nonzero: solves
    t R(t) = y by a damped fixed-point iteration seeded at t = y / k1
    and returns S(y) = t / y.
    """
    try:
        kappa1 = complex(r(0.0))
    except (ZeroDivisionError, ValueError):
        # probe near zero instead; 1e-4 keeps numerically computed
        # R-transforms (e.g. from r_from_g) well conditioned
        kappa1 = complex(r(1e-4))
    if abs(kappa1) < 1e-13:
        raise DomainError("s_from_r requires a nonzero first cumulant")
    y = complex(y)
    if y == 0:
        return 1.0 / kappa1
    t = y / kappa1
    damp = 1.0
    res = t * r(t) - y
    for _ in range(max_iter):
        if abs(res) <= tol * max(1.0, abs(y)):
            return t / y
        t_new = t - damp * res / kappa1
        res_new = t_new * r(t_new) - y
        if abs(res_new) > abs(res):
            damp *= 0.5
            if damp < 1e-8:
                break
            continue
        t, res = t_new, res_new
        damp = min(1.0, damp * 2.0)
    raise ConvergenceError(f"s_from_r did not converge at y={y} (residual {abs(res):.2e})")
