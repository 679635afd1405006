"""Candidate spectra: truncations, exact orthogonality checks, greedy growth.

All orthogonality decisions here are exact; completeness is never claimed.
Points are taken in the units of the measure mu_{1/N, D} for the digits D as
given (scale a spectrum by 1/alpha to map back to a rescaled digit set).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .exact import InvalidInput
from .hadamard import HadamardTriple
from .zeros import DigitsLike, mask_zero_set, mu_zero_member


class DegenerateTriple(ValueError):
    """Truncation sums collided; the triple cannot generate a spectrum."""


@dataclass(frozen=True)
class SpectrumTruncation:
    base: HadamardTriple
    level: int
    points: tuple[int, ...]

    def to_json(self) -> dict:
        return {
            "triple": self.base.to_json(),
            "level": self.level,
            "points": [str(p) for p in self.points],
        }


def spectrum_truncation(triple: HadamardTriple, level: int) -> SpectrumTruncation:
    """Level-n truncation {sum N**j * l_j : l_j in L, j < n} of a triple's spectrum."""
    if level < 0:
        raise InvalidInput("level must be >= 0")
    if not triple.verify():
        raise InvalidInput("not a Hadamard triple; refusing to build a truncation")
    points = [0]
    scale = 1
    for _ in range(level):
        points = [p + scale * l for p in points for l in triple.spectrum]
        scale *= triple.n_ratio
    if len(set(points)) != len(points):
        raise DegenerateTriple("truncation sums collided")
    return SpectrumTruncation(triple, level, tuple(sorted(points)))


@dataclass(frozen=True)
class BiZeroReport:
    is_bizero: bool
    violating_pair: Optional[tuple[Fraction, Fraction]] = None


def is_bizero_set(
    points: Sequence[Union[int, Fraction]], digits: DigitsLike, n_ratio: int
) -> BiZeroReport:
    """Exact check that every nonzero difference of points lies in the
    transform's zero set; the first violating pair (scanned in sorted order)
    is reported otherwise."""
    pts = sorted(Fraction(p) for p in points)
    if Fraction(0) not in pts:
        raise InvalidInput("a bi-zero set must contain 0")
    if len(set(pts)) != len(pts):
        raise InvalidInput("points must be distinct")
    for i, low in enumerate(pts):
        for high in pts[i + 1 :]:
            if not mu_zero_member(digits, n_ratio, high - low):
                return BiZeroReport(False, (high, low))
    return BiZeroReport(True)


def greedy_bizero(
    digits: DigitsLike, n_ratio: int, bound: int, max_count: int
) -> list[Fraction]:
    """Grow a bi-zero set greedily over integer candidates with |xi| <= bound.

    Candidates are scanned as 0, 1, -1, 2, -2, ...; one accepted point is
    never revisited, so the result is maximal within the scanned range unless
    max_count stopped it early.  The output is sorted.
    """
    if max_count < 1:
        raise InvalidInput("max_count must be >= 1")
    if mask_zero_set(digits).is_empty:
        raise InvalidInput("empty mask zero set: no orthogonal pair exists")
    chosen: list[Fraction] = [Fraction(0)]
    for mag in range(1, bound + 1):
        for cand in (Fraction(mag), Fraction(-mag)):
            if len(chosen) >= max_count:
                return sorted(chosen)
            if all(mu_zero_member(digits, n_ratio, cand - y) for y in chosen):
                chosen.append(cand)
    return sorted(chosen)


def dj_example_spectrum(n: int) -> list[Fraction]:
    """The explicit spectrum (Z + {0, 1/4}) of the digits {0,1,8,9} at ratio
    1/4, truncated to integers in [-n, n]; 2*(2n+1) points, sorted."""
    if n < 0:
        raise InvalidInput("n must be >= 0")
    quarter = Fraction(1, 4)
    out = []
    for k in range(-n, n + 1):
        out.append(Fraction(k))
        out.append(k + quarter)
    return sorted(out)
