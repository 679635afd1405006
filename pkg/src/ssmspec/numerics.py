"""Certified floating-point evaluation of the transform, Q-function, Gram.

The transform of mu_{1/N, D} is the infinite product of masks at xi/N**k.
Truncating after K factors is certified by the elementary bound
|M(eta) - 1| <= 2*pi*mean(D)*|eta| together with |M| <= 1: once the geometric
tail of those linear bounds is below tolerance/2, the truncated product is
within tolerance of the true value.  Crude, but provable and cheap (the tail
decays like N**-k).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

import numpy as np

from .exact import Digit, InvalidInput, NormalizedDigits, as_fraction

DEFAULT_TOLERANCE = 1e-10

_TWO_PI = 2.0 * math.pi


def _digit_floats(digits) -> tuple[float, ...]:
    if isinstance(digits, NormalizedDigits):
        return tuple(float(n) for n in digits.integers)
    out = []
    for d in digits:
        if isinstance(d, Digit):
            if not d.is_rational:
                raise InvalidInput("numeric evaluation needs rational digits")
            out.append(float(d.rational))
        else:
            out.append(float(as_fraction(d)))
    return tuple(out)


def float_mask(digits: Sequence[float], eta) -> np.ndarray:
    """The mask (1/#D) * sum exp(-2*pi*i*d*eta) in floating point."""
    d = np.asarray(digits, dtype=float)
    eta = np.asarray(eta, dtype=float)
    return np.exp(-2j * math.pi * np.multiply.outer(eta, d)).mean(axis=-1)


@dataclass(frozen=True)
class MuHatEvaluator:
    """Evaluates the transform of mu_{1/N, digits} with certified truncation."""

    digits: tuple
    n_ratio: int
    tolerance: float = DEFAULT_TOLERANCE

    def __post_init__(self) -> None:
        object.__setattr__(self, "digits", _digit_floats(self.digits))
        if self.n_ratio < 2:
            raise InvalidInput("N must be >= 2")
        if not (0.0 < self.tolerance < 1.0):
            raise InvalidInput("tolerance must lie in (0, 1)")

    def terms_needed(self, max_abs_xi: float) -> int:
        """Smallest K with the tail bound below tolerance/2 at |xi| <= max_abs_xi."""
        mean_d = sum(self.digits) / len(self.digits)
        k = 1
        while _TWO_PI * mean_d * max_abs_xi * self.n_ratio ** (-k) / (self.n_ratio - 1) > self.tolerance / 2:
            k += 1
        return k

    def mu_hat(self, xi, extra_terms: int = 0):
        """Transform values at xi (scalar or array), within tolerance.

        The factor count is chosen from the largest |xi| in the call, so a
        fixed grid always reproduces identical bytes.  ``extra_terms`` adds
        factors on top of the certified count (used by self-consistency
        tests); accuracy only improves with it.
        """
        arr = np.asarray(xi, dtype=float)
        scalar = arr.ndim == 0
        flat = np.atleast_1d(arr).astype(float)
        kmax = self.terms_needed(float(np.max(np.abs(flat))) if flat.size else 0.0)
        kmax += max(0, extra_terms)
        out = np.ones(flat.shape, dtype=complex)
        scale = float(self.n_ratio)
        for k in range(1, kmax + 1):
            out *= float_mask(self.digits, flat / scale**k)
        if scalar:
            return complex(out[0])
        return out.reshape(arr.shape)


def mu_hat(ev: MuHatEvaluator, xi, extra_terms: int = 0):
    """Function form of :meth:`MuHatEvaluator.mu_hat`."""
    return ev.mu_hat(xi, extra_terms)


@dataclass(frozen=True)
class QSample:
    xi: float
    q_value: float
    level: int


def q_function(
    ev: MuHatEvaluator,
    points: Sequence[Union[int, Fraction]],
    xi_grid: Sequence[float],
    level: int = 0,
) -> list[QSample]:
    """Q(xi) = sum over the points of |mu_hat(xi + point)|^2 on a grid.

    For a bi-zero set Q <= 1 everywhere, with equality everywhere exactly
    when the points grow into a spectrum; values are reported, never asserted.
    """
    pts = np.asarray([float(Fraction(p)) for p in points], dtype=float)
    grid = np.asarray(xi_grid, dtype=float)
    args = grid[:, None] + pts[None, :]
    vals = np.abs(ev.mu_hat(args)) ** 2
    totals = vals.sum(axis=1)
    return [QSample(float(x), float(q), level) for x, q in zip(grid, totals)]


def gram_matrix(ev: MuHatEvaluator, points: Sequence[Union[int, Fraction]]) -> np.ndarray:
    """Gram matrix G[i, j] = mu_hat(p_i - p_j); the diagonal is exactly 1."""
    pts = np.asarray([float(Fraction(p)) for p in points], dtype=float)
    diffs = pts[:, None] - pts[None, :]
    return ev.mu_hat(diffs)


def unitarity_defect(n_ratio: int, digits: Sequence[int], spectrum: Sequence[int]) -> float:
    """Max-norm deviation from the identity of H*H for the scaled DFT
    submatrix H = exp(2*pi*i*d*l/N)/sqrt(#D); the float twin of the exact
    Hadamard-triple check."""
    d = np.asarray(digits, dtype=float)
    l = np.asarray(spectrum, dtype=float)
    if d.size != l.size:
        raise InvalidInput("digit and spectrum sets must have equal size")
    h = np.exp(2j * math.pi * np.outer(d, l) / n_ratio) / math.sqrt(d.size)
    gram = h.conj().T @ h
    return float(np.max(np.abs(gram - np.eye(d.size))))


def _g17(x: float) -> str:
    return "%.17g" % x


def q_samples_csv(samples: Sequence[QSample]) -> str:
    """CSV rendering with header xi,q,level; floats at 17 significant digits."""
    lines = ["xi,q,level"]
    for s in samples:
        lines.append(f"{_g17(s.xi)},{_g17(s.q_value)},{s.level}")
    return "\n".join(lines) + "\n"


def gram_csv(matrix: np.ndarray) -> str:
    """CSV rendering with header i,j,re,im; floats at 17 significant digits."""
    lines = ["i,j,re,im"]
    n = matrix.shape[0]
    for i in range(n):
        for j in range(n):
            z = matrix[i, j]
            lines.append(f"{i},{j},{_g17(z.real)},{_g17(z.imag)}")
    return "\n".join(lines) + "\n"
