"""Exact scalars and canonical digit-set normalization.

Everything in this module is immutable and pure.  Rational scalars are
``fractions.Fraction`` throughout; a digit may additionally carry a multiple
of one shared symbolic irrational ``t``, which is all the downstream
classification needs (it only ever has to *detect* an irrational ratio, never
compute with one).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union


class InvalidInput(ValueError):
    """A structurally invalid argument (duplicate digits, bad weights, ...)."""


class Unsupported(ValueError):
    """Input outside the supported range (five or more digits)."""


class InternalInconsistency(RuntimeError):
    """A certificate produced internally failed its own exact verification."""


RationalLike = Union[Fraction, int, str]


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"`` or ``"p"`` into a Fraction, rejecting anything else."""
    s = text.strip()
    if not re.fullmatch(r"-?\d+(/\d+)?", s):
        raise InvalidInput(f"malformed rational: {text!r}")
    return Fraction(s)


def format_rational(x: Fraction) -> str:
    """Render a Fraction as ``p/q``, or plain ``p`` when the denominator is 1."""
    return str(x)


def as_fraction(x: RationalLike) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    raise InvalidInput(f"not a rational value: {x!r}")


_DIGIT_RE = re.compile(
    r"""^\s*
        (?:(?P<rat>-?\d+(?:/\d+)?)\s*)?            # optional rational part
        (?:(?(rat)\+\s*)                           # '+' required if both parts
           (?:(?P<coef>-?\d+(?:/\d+)?)\s*\*?\s*)?  # optional coefficient
           t)?
        \s*$""",
    re.VERBOSE,
)


@dataclass(frozen=True)
class Digit:
    """A digit value ``rational + tau_coeff * t`` for one shared irrational t.

    ``tau_coeff == 0`` gives an ordinary rational digit.  Components must be
    non-negative so the digit is non-negative for every positive ``t``.
    """

    rational: Fraction
    tau_coeff: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        if self.rational < 0 or self.tau_coeff < 0:
            raise InvalidInput(f"digit components must be non-negative: {self}")

    @property
    def is_rational(self) -> bool:
        return self.tau_coeff == 0

    @property
    def is_zero(self) -> bool:
        return self.rational == 0 and self.tau_coeff == 0

    def sort_key(self) -> tuple[Fraction, Fraction]:
        # Convention: t sorts above every rational (t is "large").
        return (self.tau_coeff, self.rational)

    def scaled(self, c: Fraction) -> "Digit":
        return Digit(self.rational * c, self.tau_coeff * c)

    def __str__(self) -> str:
        if self.tau_coeff == 0:
            return format_rational(self.rational)
        tau = f"{format_rational(self.tau_coeff)}*t"
        if self.rational == 0:
            return tau
        return f"{format_rational(self.rational)} + {tau}"


def parse_digit(text: str) -> Digit:
    """Parse a digit: ``"p/q"``, ``"p/q + r/s*t"``, ``"r/s t"``, ``"t"``, ...

    The canonical form is ``p/q + r/s*t``; the ``*`` and spaces are optional.
    """
    m = _DIGIT_RE.match(text)
    if m is None or (m.group("rat") is None and "t" not in text):
        raise InvalidInput(f"malformed digit: {text!r}")
    rat = Fraction(m.group("rat")) if m.group("rat") else Fraction(0)
    if "t" in text:
        coef = Fraction(m.group("coef")) if m.group("coef") else Fraction(1)
    else:
        coef = Fraction(0)
    return Digit(rat, coef)


def as_digit(x: Union[Digit, RationalLike]) -> Digit:
    if isinstance(x, Digit):
        return x
    if isinstance(x, str):
        return parse_digit(x)
    return Digit(as_fraction(x))


@dataclass(frozen=True)
class DigitSet:
    """A digit set {0, d1, ..., d_{m-1}}, 1 <= m <= 4, strictly increasing.

    Five or more digits are rejected with :class:`Unsupported`; masks of such
    sets can vanish only at irrational points, which the exact layer does not
    model.
    """

    digits: tuple[Digit, ...]

    def __post_init__(self) -> None:
        if len(self.digits) == 0:
            raise InvalidInput("digit set is empty")
        if len(self.digits) > 4:
            raise Unsupported(f"{len(self.digits)} digits: only 1..4 supported")
        if len(set(self.digits)) != len(self.digits):
            raise InvalidInput("duplicate digits")
        ordered = tuple(sorted(self.digits, key=Digit.sort_key))
        if ordered != self.digits:
            object.__setattr__(self, "digits", ordered)
        if not self.digits[0].is_zero:
            raise InvalidInput("0 must be a digit (translate the set first)")

    @classmethod
    def of(cls, values: Iterable[Union[Digit, RationalLike]]) -> "DigitSet":
        return cls(tuple(as_digit(v) for v in values))

    @property
    def cardinality(self) -> int:
        return len(self.digits)

    def display(self) -> tuple[str, ...]:
        return tuple(str(d) for d in self.digits)


@dataclass(frozen=True)
class NormalizedDigits:
    """Canonical integer form of a digit set: digits = scale * integers.

    ``integers`` starts at 0, is strictly increasing, and the nonzero entries
    have gcd 1.  ``scale`` is rational in the ordinary case; when every digit
    is a rational multiple of one irrational value the scale carries that
    value (classification is scale-invariant, so nothing downstream cares).
    """

    scale: Digit
    integers: tuple[int, ...]

    def __post_init__(self) -> None:
        ints = self.integers
        if not ints or ints[0] != 0:
            raise InvalidInput("normalized digits must start at 0")
        if any(b <= a for a, b in zip(ints, ints[1:])):
            raise InvalidInput("normalized digits must be strictly increasing")
        nonzero = [n for n in ints if n]
        if nonzero and math.gcd(*nonzero) != 1:
            raise InvalidInput("normalized digits must have gcd 1")
        if self.scale.is_zero:
            raise InvalidInput("scale must be positive")

    @property
    def cardinality(self) -> int:
        return len(self.integers)

    def to_json(self) -> dict:
        return {"scale": str(self.scale), "integers": list(self.integers)}


@dataclass(frozen=True)
class IrreducibleWitness:
    """Two digits whose ratio is irrational; no integer rescaling exists."""

    numerator: Digit
    denominator: Digit

    def to_json(self) -> dict:
        return {
            "irrational_ratio": {
                "numerator": str(self.numerator),
                "denominator": str(self.denominator),
            }
        }


def _normalize_rationals(values: Sequence[Fraction]) -> tuple[Fraction, tuple[int, ...]]:
    """Scale positive rationals {v_i} to coprime integers; returns (alpha, C)."""
    lcm = math.lcm(*(v.denominator for v in values))
    ints = [int(v * lcm) for v in values]
    g = math.gcd(*ints)
    alpha = Fraction(g, lcm)
    return alpha, tuple(n // g for n in ints)


def normalize_digits(d: DigitSet) -> Union[NormalizedDigits, IrreducibleWitness]:
    """Reduce a digit set to its canonical integer form, or witness failure.

    All-rational digits always normalize.  Digits carrying the symbolic
    irrational normalize exactly when every pairwise ratio of nonzero digits
    is rational (cross-ratio test p*q' == p'*q); otherwise the offending pair
    is returned as an :class:`IrreducibleWitness`.
    """
    nonzero = d.digits[1:]
    if not nonzero:
        return NormalizedDigits(Digit(Fraction(1)), (0,))

    if all(v.is_rational for v in nonzero):
        alpha, ints = _normalize_rationals([v.rational for v in nonzero])
        return NormalizedDigits(Digit(alpha), (0, *ints))

    # All pairs are checked so the witness names an actual offending ratio.
    for i, u in enumerate(nonzero):
        for v in nonzero[i + 1 :]:
            if u.rational * v.tau_coeff != v.rational * u.tau_coeff:
                return IrreducibleWitness(v, u)

    base = nonzero[0]
    ratios = []
    for v in nonzero:
        if base.tau_coeff != 0:
            ratios.append(v.tau_coeff / base.tau_coeff)
        else:
            ratios.append(v.rational / base.rational)
    alpha, ints = _normalize_rationals(ratios)
    return NormalizedDigits(base.scaled(alpha), (0, *ints))


def val2(n: int) -> tuple[int, int]:
    """2-adic valuation: n = 2**t * odd_part with t maximal; n must be >= 1."""
    if n < 1:
        raise InvalidInput(f"val2 needs a positive integer, got {n}")
    t = (n & -n).bit_length() - 1
    return t, n >> t


def decompose_even(n: int) -> tuple[int, int]:
    """Write n = 2**beta * m with m odd; n must be >= 2."""
    if n < 2:
        raise InvalidInput(f"decompose_even needs n >= 2, got {n}")
    beta, m = val2(n)
    return beta, m


def _integer_nth_root(n: int, k: int) -> int | None:
    """The exact k-th root of n >= 1, or None if n is not a perfect power."""
    r = round(n ** (1.0 / k))
    for c in (r - 1, r, r + 1):
        if c >= 1 and c**k == n:
            return c
    return None


@dataclass(frozen=True)
class ContractionRatio:
    """A contraction ratio base**(1/root_degree) in (0, 1).

    ``root_degree == 1`` is the rational case.  Construction reduces perfect
    powers, so e.g. (1/4)**(1/2) and (1/8)**(1/3) both canonicalize to the
    rational 1/2; a surviving ``root_degree >= 2`` is genuinely irrational.
    """

    base: Fraction
    root_degree: int = 1

    def __post_init__(self) -> None:
        if not (0 < self.base < 1):
            raise InvalidInput(f"ratio base must lie in (0, 1): {self.base}")
        if self.root_degree < 1:
            raise InvalidInput("root degree must be >= 1")
        base, r = self.base, self.root_degree
        changed = True
        while changed and r > 1:
            changed = False
            for d in range(r, 1, -1):
                if r % d:
                    continue
                num = _integer_nth_root(base.numerator, d)
                den = _integer_nth_root(base.denominator, d)
                if num is not None and den is not None:
                    base, r = Fraction(num, den), r // d
                    changed = True
                    break
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "root_degree", r)

    @classmethod
    def rational(cls, value: RationalLike) -> "ContractionRatio":
        return cls(as_fraction(value), 1)

    @classmethod
    def root(cls, n: int, m: int, r: int) -> "ContractionRatio":
        if m <= 0 or n <= 0:
            raise InvalidInput("root form needs positive n, m")
        return cls(Fraction(n, m), r)

    @property
    def is_rational(self) -> bool:
        return self.root_degree == 1

    def reciprocal_integer(self) -> int | None:
        """N with ratio == 1/N, or None (irrational or non-unit numerator)."""
        if self.root_degree == 1 and self.base.numerator == 1:
            return self.base.denominator
        return None

    def __str__(self) -> str:
        if self.root_degree == 1:
            return format_rational(self.base)
        return f"({format_rational(self.base)})^(1/{self.root_degree})"


@dataclass(frozen=True)
class WeightVector:
    """A probability vector: positive rational weights summing to 1."""

    weights: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if not self.weights:
            raise InvalidInput("empty weight vector")
        if any(w <= 0 for w in self.weights):
            raise InvalidInput("weights must be positive")
        if sum(self.weights) != 1:
            raise InvalidInput("weights must sum to 1")

    @classmethod
    def uniform(cls, m: int) -> "WeightVector":
        return cls((Fraction(1, m),) * m)

    @classmethod
    def of(cls, values: Iterable[RationalLike]) -> "WeightVector":
        return cls(tuple(as_fraction(v) for v in values))

    @property
    def is_uniform(self) -> bool:
        return len(set(self.weights)) == 1

    def display(self) -> tuple[str, ...]:
        return tuple(format_rational(w) for w in self.weights)
