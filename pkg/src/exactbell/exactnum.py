"""Exact scalar arithmetic: rationals, rational angles, quadratic surds,
rational-cosine classification, and ultrametric distances.

Every type in this module is an immutable value and every operation is a
pure function, so everything is safe to share across threads. Nothing here
ever touches floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

__all__ = [
    "Rational",
    "RationalAngle",
    "CosineClass",
    "QuadraticSurd",
    "IncompatibleRadicandsError",
    "DigitString",
    "as_rational",
    "parse_rational",
    "format_rational",
    "niven_classify",
    "is_perfect_square",
    "surd_mul",
    "ultrametric_distance",
    "padic_valuation",
    "padic_norm",
]

# Arbitrary-precision rational scalar. fractions.Fraction already carries the
# invariants we need: always in lowest terms, denominator > 0, zero as 0/1.
Rational = Fraction


def as_rational(value: Fraction | int | str) -> Fraction:
    """Coerce to an exact rational, refusing floats outright."""
    if isinstance(value, float):
        raise TypeError(
            "floats are not accepted in exact arithmetic; pass a Fraction, "
            "an int, or a 'p/q' string"
        )
    return Fraction(value)


def parse_rational(text: str) -> Fraction:
    """Parse 'p/q' or plain-integer text into an exact rational.

    Decimal and exponent notation are rejected on purpose: silently
    accepting '0.1' would corrupt the exactness contract of everything
    downstream.
    """
    cleaned = text.strip()
    if "." in cleaned or "e" in cleaned.lower():
        raise ValueError(
            f"{text!r} looks like a decimal; write an exact fraction "
            "such as 7071/10000 instead"
        )
    try:
        return Fraction(cleaned)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"{text!r} is not a valid rational 'p/q'") from exc


def format_rational(value: Fraction) -> str:
    """Render as 'p/q', or plain 'p' for whole numbers. Inverse of parse."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class RationalAngle:
    """An angle stored exactly as a fraction of a full turn, in [0, 1).

    Keeping the turn fraction as the representation makes "the angle is a
    rational multiple of the full circle" structural rather than something
    to test, and radians never enter the arithmetic.
    """

    turns: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "turns", as_rational(self.turns) % 1)

    def __add__(self, other: "RationalAngle") -> "RationalAngle":
        return RationalAngle(self.turns + other.turns)

    def __sub__(self, other: "RationalAngle") -> "RationalAngle":
        return RationalAngle(self.turns - other.turns)

    def midpoint(self, other: "RationalAngle") -> "RationalAngle":
        """The bisecting angle (self + other) / 2, computed without wrap."""
        return RationalAngle((self.turns + other.turns) / 2)

    def cos_sign(self) -> int:
        """Exact sign of cos(2*pi*turns), decided from the quadrant."""
        quarter = Fraction(1, 4)
        if self.turns in (quarter, 3 * quarter):
            return 0
        return 1 if self.turns < quarter or self.turns > 3 * quarter else -1

    @property
    def radians(self) -> float:
        """Float radians, for display and floating-point oracles only."""
        return 2.0 * math.pi * float(self.turns)


@dataclass(frozen=True)
class CosineClass:
    """Exact rationality classification of a cosine: a value, or irrational.

    ``value`` is None exactly when the cosine is irrational.
    """

    value: Fraction | None = None

    @property
    def is_rational(self) -> bool:
        return self.value is not None


# Complete by Niven's theorem: a rational fraction of a turn has a rational
# cosine only when the reduced denominator of the turn fraction is 1, 2, 3,
# 4 or 6, and the value then depends on that denominator alone:
#   q=1 -> cos 0 = 1        q=2 -> cos(pi) = -1
#   q=3 -> cos(2pi/3) = cos(4pi/3) = -1/2
#   q=4 -> cos(pi/2) = cos(3pi/2) = 0
#   q=6 -> cos(pi/3) = cos(5pi/3) = 1/2
_RATIONAL_COSINES = {
    1: Fraction(1),
    2: Fraction(-1),
    3: Fraction(-1, 2),
    4: Fraction(0),
    6: Fraction(1, 2),
}


def niven_classify(angle: RationalAngle) -> CosineClass:
    """Classify cos(2*pi*turns) as an exact rational or as irrational.

    Total function: every rational turn fraction lands in exactly one of
    the five rational families above or is certifiably irrational.
    """
    return CosineClass(_RATIONAL_COSINES.get(angle.turns.denominator))


def is_perfect_square(value: Fraction | int) -> Fraction | None:
    """The exact nonnegative rational square root, if one exists.

    A reduced p/q is a rational square iff p and q are both integer
    squares, so two isqrt probes decide it.
    """
    value = as_rational(value)
    if value < 0:
        raise ValueError("negative values have no real square root")
    num_root = math.isqrt(value.numerator)
    den_root = math.isqrt(value.denominator)
    if num_root * num_root == value.numerator and den_root * den_root == value.denominator:
        return Fraction(num_root, den_root)
    return None


# --- integer factoring used only to keep radicands square-free ----------

_TRIAL_BOUND = 10_000
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def _is_prime(n: int) -> bool:
    # Deterministic Miller-Rabin for n < 3.3e24 with the fixed base set.
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n: int) -> int:
    # n odd composite with no factors below _TRIAL_BOUND.
    for c in range(1, 64):
        x = y = 2
        d = 1
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = math.gcd(abs(x - y), n)
        if d != n:
            return d
    raise ArithmeticError(f"failed to split {n}")


def _factorize(n: int) -> dict[int, int]:
    factors: dict[int, int] = {}
    f = 2
    while f * f <= n and f < _TRIAL_BOUND:
        while n % f == 0:
            factors[f] = factors.get(f, 0) + 1
            n //= f
        f += 1 if f == 2 else 2
    if n == 1:
        return factors
    stack = [n]
    while stack:
        m = stack.pop()
        if _is_prime(m):
            factors[m] = factors.get(m, 0) + 1
            continue
        root = math.isqrt(m)
        if root * root == m:
            stack.extend((root, root))
            continue
        d = _pollard_rho(m)
        stack.extend((d, m // d))
    return factors


def _square_free_decompose(n: int) -> tuple[int, int]:
    """Split n >= 1 as s*s*d with d square-free; returns (s, d)."""
    if n < 1:
        raise ValueError("expected a natural number >= 1")
    square, free = 1, 1
    for prime, exponent in _factorize(n).items():
        square *= prime ** (exponent // 2)
        if exponent % 2:
            free *= prime
    return square, free


class IncompatibleRadicandsError(ValueError):
    """Raised when surds over different radicals would need to combine."""


@dataclass(frozen=True, eq=False)
class QuadraticSurd:
    """Exact value rat + coeff*sqrt(radicand) over a single radical.

    Canonical form: the radicand is square-free, and a purely rational
    value always has radicand 1 and coeff 0, so structural equality is
    value equality. The single-radical restriction keeps the type closed
    and decidable; sums over distinct radicals are refused rather than
    approximated.
    """

    rat: Fraction
    coeff: Fraction
    radicand: int = 1

    def __post_init__(self) -> None:
        rat = as_rational(self.rat)
        coeff = as_rational(self.coeff)
        radicand = self.radicand
        if not isinstance(radicand, int) or radicand < 1:
            raise ValueError("radicand must be a natural number >= 1")
        if coeff != 0 and radicand != 1:
            square, radicand = _square_free_decompose(radicand)
            coeff *= square
        if radicand == 1:
            rat += coeff
            coeff = Fraction(0)
        if coeff == 0:
            radicand = 1
        object.__setattr__(self, "rat", rat)
        object.__setattr__(self, "coeff", coeff)
        object.__setattr__(self, "radicand", radicand)

    @classmethod
    def from_rational(cls, value: Fraction | int) -> "QuadraticSurd":
        return cls(as_rational(value), Fraction(0), 1)

    @classmethod
    def sqrt(cls, value: Fraction | int) -> "QuadraticSurd":
        """Exact square root of a nonnegative rational, as a canonical surd."""
        value = as_rational(value)
        exact = is_perfect_square(value)
        if exact is not None:
            return cls.from_rational(exact)
        num_square, num_free = _square_free_decompose(value.numerator)
        den_square, den_free = _square_free_decompose(value.denominator)
        shared = math.gcd(num_free, den_free)
        radicand = (num_free // shared) * (den_free // shared)
        outer = Fraction(num_square * shared, den_square * den_free)
        return cls(Fraction(0), outer, radicand)

    @property
    def is_rational(self) -> bool:
        return self.radicand == 1

    def conjugate(self) -> "QuadraticSurd":
        return QuadraticSurd(self.rat, -self.coeff, self.radicand)

    @staticmethod
    def _lift(value: object) -> "QuadraticSurd | None":
        if isinstance(value, QuadraticSurd):
            return value
        if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
            return QuadraticSurd.from_rational(value)
        return None

    def _shared_radicand(self, other: "QuadraticSurd") -> int:
        if self.is_rational:
            return other.radicand
        if other.is_rational or other.radicand == self.radicand:
            return self.radicand
        raise IncompatibleRadicandsError(
            f"cannot combine sqrt({self.radicand}) with sqrt({other.radicand})"
        )

    def __add__(self, other: object) -> "QuadraticSurd":
        lifted = self._lift(other)
        if lifted is None:
            return NotImplemented
        radicand = self._shared_radicand(lifted)
        return QuadraticSurd(self.rat + lifted.rat, self.coeff + lifted.coeff, radicand)

    __radd__ = __add__

    def __neg__(self) -> "QuadraticSurd":
        return QuadraticSurd(-self.rat, -self.coeff, self.radicand)

    def __sub__(self, other: object) -> "QuadraticSurd":
        lifted = self._lift(other)
        if lifted is None:
            return NotImplemented
        return self + (-lifted)

    def __rsub__(self, other: object) -> "QuadraticSurd":
        lifted = self._lift(other)
        if lifted is None:
            return NotImplemented
        return lifted + (-self)

    def __mul__(self, other: object) -> "QuadraticSurd":
        lifted = self._lift(other)
        if lifted is None:
            return NotImplemented
        radicand = self._shared_radicand(lifted)
        rat = self.rat * lifted.rat + self.coeff * lifted.coeff * radicand
        coeff = self.rat * lifted.coeff + self.coeff * lifted.rat
        return QuadraticSurd(rat, coeff, radicand)

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        lifted = self._lift(other)
        if lifted is None:
            return NotImplemented
        return (self.rat, self.coeff, self.radicand) == (
            lifted.rat,
            lifted.coeff,
            lifted.radicand,
        )

    def __hash__(self) -> int:
        if self.is_rational:
            return hash(self.rat)
        return hash((self.rat, self.coeff, self.radicand))

    def __str__(self) -> str:
        if self.is_rational:
            return format_rational(self.rat)
        return f"{format_rational(self.rat)} + {format_rational(self.coeff)}*sqrt({self.radicand})"


def surd_mul(x: QuadraticSurd, y: QuadraticSurd) -> QuadraticSurd:
    """Exact canonical product; sqrt(d)*sqrt(d) collapses into the rational
    part. The factors must share a radicand unless one is purely rational.
    """
    return x * y


@dataclass(frozen=True)
class DigitString:
    """Finite base-N digit sequence: a coordinate inside an N-piece nested
    (Cantor-like) partition of state space."""

    base: int
    digits: tuple[int, ...]

    def __post_init__(self) -> None:
        if not isinstance(self.base, int) or self.base < 2:
            raise ValueError("base must be an integer >= 2")
        digits = tuple(self.digits)
        if not digits:
            raise ValueError("digit string must be non-empty")
        for d in digits:
            if not isinstance(d, int) or not 0 <= d < self.base:
                raise ValueError(f"digit {d!r} outside [0, {self.base})")
        object.__setattr__(self, "digits", digits)

    def __len__(self) -> int:
        return len(self.digits)


def ultrametric_distance(a: DigitString, b: DigitString) -> Fraction:
    """base**(-k) where k is the 1-based position of the first differing
    digit, and 0 for identical strings.

    Both strings must share base and length; callers pad the shorter one
    with trailing zeros beforehand (the CLI does this automatically).
    """
    if a.base != b.base:
        raise ValueError(f"mismatched bases {a.base} and {b.base}")
    if len(a) != len(b):
        raise ValueError(
            f"mismatched lengths {len(a)} and {len(b)}; pad with trailing zeros first"
        )
    for position, (da, db) in enumerate(zip(a.digits, b.digits), start=1):
        if da != db:
            return Fraction(1, a.base**position)
    return Fraction(0)


def _int_valuation(n: int, p: int) -> int:
    count = 0
    while n % p == 0:
        n //= p
        count += 1
    return count


def padic_valuation(value: Fraction | int, p: int) -> int | float:
    """Exponent v with value = p**v * (u/w) and p dividing neither u nor w.

    The valuation of 0 is +infinity, reported as math.inf. Composite p is
    rejected: the norm p**(-v) is multiplicative only for primes, which is
    why arbitrary bases are served by the digit-string ultrametric instead.
    """
    if not isinstance(p, int) or not _is_prime(p):
        raise ValueError(f"{p!r} is not a prime")
    value = as_rational(value)
    if value == 0:
        return math.inf
    return _int_valuation(abs(value.numerator), p) - _int_valuation(value.denominator, p)


def padic_norm(value: Fraction | int, p: int) -> Fraction:
    """p**(-valuation); the norm of 0 is 0."""
    v = padic_valuation(value, p)
    if v == math.inf:
        return Fraction(0)
    return Fraction(1, p**v) if v >= 0 else Fraction(p ** (-v))
