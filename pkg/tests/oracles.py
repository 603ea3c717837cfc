"""Independent test oracles, kept deliberately separate from the library.

The centerpiece is a minimal-polynomial route to deciding whether the
cosine of a rational turn fraction is rational: build the minimal
polynomial of cos(2*pi/q) from Chebyshev polynomials by dividing out the
factors contributed by the proper divisors of q, then apply rational-root
checking. cos(2*pi*p/q) with gcd(p, q) = 1 is a conjugate of cos(2*pi/q),
so it shares that polynomial; it is rational exactly when the polynomial
is linear, and the linear root is the value.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

Poly = tuple[Fraction, ...]  # dense, constant term first, no trailing zeros


def _trim(coeffs: list[Fraction]) -> Poly:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


def poly_sub(a: Poly, b: Poly) -> Poly:
    size = max(len(a), len(b))
    out = [Fraction(0)] * size
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i] -= c
    return _trim(out)


def poly_mul(a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return ()
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        for j, cb in enumerate(b):
            out[i + j] += ca * cb
    return _trim(out)


def poly_divmod(num: Poly, den: Poly) -> tuple[Poly, Poly]:
    if not den:
        raise ZeroDivisionError("polynomial division by zero")
    quotient = [Fraction(0)] * max(len(num) - len(den) + 1, 0)
    remainder = list(num)
    while len(remainder) >= len(den) and _trim(remainder):
        shift = len(remainder) - len(den)
        factor = remainder[-1] / den[-1]
        quotient[shift] = factor
        for i, c in enumerate(den):
            remainder[shift + i] -= factor * c
        remainder = list(_trim(remainder))
        if not remainder:
            break
    return _trim(quotient), _trim(remainder)


def poly_eval(poly: Poly, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(poly):
        acc = acc * x + c
    return acc


@lru_cache(maxsize=None)
def chebyshev_t(n: int) -> Poly:
    """Chebyshev polynomial of the first kind, exact integer coefficients."""
    if n == 0:
        return (Fraction(1),)
    if n == 1:
        return (Fraction(0), Fraction(1))
    two_x = (Fraction(0), Fraction(2))
    return poly_sub(poly_mul(two_x, chebyshev_t(n - 1)), chebyshev_t(n - 2))


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n) if n % d == 0]


@lru_cache(maxsize=None)
def cos_minimal_polynomial(q: int) -> Poly:
    """Monic minimal polynomial of cos(2*pi/q) over the rationals.

    T_{s+1} - T_s (odd q = 2s+1) resp. T_{s+1} - T_{s-1} (even q = 2s)
    vanishes exactly at cos(2*pi*k/q) for all k, so dividing out the
    minimal polynomials of the proper divisors of q leaves the primitive
    part.
    """
    if q < 1:
        raise ValueError("q must be a positive integer")
    s = q // 2
    if q % 2:
        numerator = poly_sub(chebyshev_t(s + 1), chebyshev_t(s))
    else:
        numerator = poly_sub(chebyshev_t(s + 1), chebyshev_t(s - 1))
    for d in _divisors(q):
        numerator, remainder = poly_divmod(numerator, cos_minimal_polynomial(d))
        assert not remainder, f"non-exact division while building q={q}"
    lead = numerator[-1]
    return tuple(c / lead for c in numerator)


def primitive_integer_form(poly: Poly) -> tuple[int, ...]:
    """Clear denominators and content, keeping the sign of the lead."""
    from math import gcd, lcm

    denominator = 1
    for c in poly:
        denominator = lcm(denominator, c.denominator)
    ints = [int(c * denominator) for c in poly]
    content = 0
    for c in ints:
        content = gcd(content, c)
    return tuple(c // content for c in ints)


def rational_roots(poly: Poly) -> list[Fraction]:
    """All rational roots by the rational-root theorem, checked exactly."""
    ints = primitive_integer_form(poly)
    constant, lead = ints[0], ints[-1]
    if constant == 0:
        inner = rational_roots(tuple(Fraction(c) for c in ints[1:]))
        return sorted(set(inner) | {Fraction(0)})
    roots = set()
    for p in _divisors_of(abs(constant)):
        for q in _divisors_of(abs(lead)):
            for candidate in (Fraction(p, q), Fraction(-p, q)):
                if poly_eval(poly, candidate) == 0:
                    roots.add(candidate)
    return sorted(roots)


def _divisors_of(n: int) -> list[int]:
    from math import isqrt

    small, large = [], []
    for d in range(1, isqrt(n) + 1):
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
    return small + large[::-1]


@lru_cache(maxsize=None)
def _classify_denominator(q: int) -> Fraction | None:
    poly = cos_minimal_polynomial(q)
    if len(poly) == 2:  # linear: the number is its own single rational root
        return -poly[0] / poly[1]
    roots = rational_roots(poly)
    assert not roots, f"minimal polynomial for q={q} unexpectedly has rational roots"
    return None


def classify_cosine_by_minimal_polynomial(turns: Fraction) -> Fraction | None:
    """Rational value of cos(2*pi*turns) or None, via the polynomial route.

    All primitive q-th turn fractions are conjugates sharing one minimal
    polynomial, so the decision depends only on the reduced denominator.
    """
    return _classify_denominator((turns % 1).denominator)
