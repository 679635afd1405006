"""Exact Hadamard triples, product-form decompositions, and tilings of Z_N.

A triple (N, D, L) with #D == #L is Hadamard when the #D x #D matrix
exp(2*pi*i*d*l/N)/sqrt(#D) is unitary, equivalently when the mask of D
vanishes at (l - l')/N for every pair of distinct rows.  All checks here are
exact (cyclotomic); the floating-point unitarity cross-check lives in the
numerics module.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .exact import InternalInconsistency, InvalidInput
from .zeros import mask_value


def _int_tuple(values: Iterable[int]) -> tuple[int, ...]:
    out = tuple(int(v) for v in values)
    if len(set(out)) != len(out):
        raise InvalidInput(f"elements must be distinct: {out}")
    return out


@lru_cache(maxsize=None)
def _mask_zero_at(digits: tuple[int, ...], num: int, den: int) -> bool:
    return mask_value(digits, Fraction(num, den)).is_zero


@lru_cache(maxsize=None)
def _check_triple(n_ratio: int, digits: tuple[int, ...], spectrum: tuple[int, ...]) -> bool:
    for i, l1 in enumerate(spectrum):
        for l2 in spectrum[i + 1 :]:
            if not _mask_zero_at(digits, l1 - l2, n_ratio):
                return False
    return True


def is_hadamard_triple(n_ratio: int, digits: Iterable[int], spectrum: Iterable[int]) -> bool:
    """Exact decision: does (N, D, L) form a Hadamard triple?"""
    if n_ratio < 2:
        raise InvalidInput("N must be >= 2")
    d = _int_tuple(digits)
    l = _int_tuple(spectrum)
    if len(d) != len(l):
        raise InvalidInput(f"#D = {len(d)} and #L = {len(l)} must agree")
    return _check_triple(n_ratio, tuple(sorted(d)), tuple(sorted(l)))


@dataclass(frozen=True)
class HadamardTriple:
    """An (N, D, L) triple; verification is exact and cached."""

    n_ratio: int
    digits: tuple[int, ...]
    spectrum: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "digits", _int_tuple(self.digits))
        object.__setattr__(self, "spectrum", _int_tuple(self.spectrum))
        if len(self.digits) != len(self.spectrum):
            raise InvalidInput("digit and spectrum sets must have equal size")

    def verify(self) -> bool:
        return is_hadamard_triple(self.n_ratio, self.digits, self.spectrum)

    def to_json(self) -> dict:
        return {
            "kind": "hadamard-triple",
            "N": self.n_ratio,
            "D": list(self.digits),
            "L": list(self.spectrum),
            "verified": self.verify(),
        }


def find_spectrum_set(n_ratio: int, digits: Iterable[int]) -> tuple[int, ...] | None:
    """Lexicographically smallest L in {0..N-1} with 0 in L making (N, D, L)
    a Hadamard triple, or None when no such spectrum set exists."""
    d = tuple(sorted(_int_tuple(digits)))
    k = len(d)
    if k > n_ratio:
        return None
    ok = [False] * n_ratio
    for delta in range(1, n_ratio):
        ok[delta] = _mask_zero_at(d, delta, n_ratio)

    def extend(partial: list[int]) -> tuple[int, ...] | None:
        if len(partial) == k:
            return tuple(partial)
        start = partial[-1] + 1
        for cand in range(start, n_ratio):
            if all(ok[cand - prev] for prev in partial):
                found = extend(partial + [cand])
                if found is not None:
                    return found
        return None

    return extend([0])


def direct_sum(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...] | None:
    """a + b with all sums distinct (full cardinality), else None."""
    sums = tuple(sorted(x + y for x in a for y in b))
    if len(set(sums)) != len(a) * len(b):
        return None
    return sums


@dataclass(frozen=True)
class StructureDecomposition:
    """Shape certificate for a spectral four-digit system.

    The digits are {0, a, 2**t * ell, a + 2**t * ell_prime} with a, ell,
    ell_prime odd; the inverse contraction ratio is N = 2**beta * m with m
    odd, and t = beta*k + r with 0 < r < beta.
    """

    a: int
    t: int
    ell: int
    ell_prime: int
    beta: int
    m: int
    k: int
    r: int

    def __post_init__(self) -> None:
        if min(self.a, self.ell, self.ell_prime) < 1 or not all(
            v % 2 for v in (self.a, self.ell, self.ell_prime, self.m)
        ):
            raise InvalidInput("a, ell, ell_prime, m must be positive odd integers")
        if self.t < 1 or self.beta < 1 or self.k < 0:
            raise InvalidInput("t >= 1, beta >= 1, k >= 0 required")
        if not (1 <= self.r <= self.beta - 1):
            raise InvalidInput("r must lie in 1..beta-1")
        if self.t != self.beta * self.k + self.r:
            raise InvalidInput("t = beta*k + r violated")

    @property
    def n_ratio(self) -> int:
        return (1 << self.beta) * self.m

    def digit_tuple(self) -> tuple[int, ...]:
        b = (1 << self.t) * self.ell
        c = self.a + (1 << self.t) * self.ell_prime
        return tuple(sorted({0, self.a, b, c}))

    def to_json(self) -> dict:
        return {
            "a": self.a,
            "t": self.t,
            "ell": self.ell,
            "ell_prime": self.ell_prime,
            "beta": self.beta,
            "m": self.m,
            "k": self.k,
            "r": self.r,
        }


@dataclass(frozen=True)
class ProductForm:
    """A product-form Hadamard decomposition.

    The encoded digit set is the disjoint union over a in A of a + N*B_a.
    Verification demands that (N, A, L1) and every (N, B_a, L2) be Hadamard
    triples, and that every (N, A (+) B_a, L1 (+) L2) be one as well, with
    both direct sums collision-free.
    """

    n_ratio: int
    a_set: tuple[int, ...]
    b_sets: tuple[tuple[int, ...], ...]
    l1: tuple[int, ...]
    l2: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.a_set) != len(self.b_sets):
            raise InvalidInput("need one B block per element of A")

    def reconstruct_digits(self) -> tuple[int, ...] | None:
        """The union of the blocks a + N*B_a, or None if any elements collide."""
        pieces = [a + self.n_ratio * b for a, bs in zip(self.a_set, self.b_sets) for b in bs]
        if len(set(pieces)) != len(pieces):
            return None
        return tuple(sorted(pieces))

    def to_json(self) -> dict:
        return {
            "kind": "product-form",
            "N": self.n_ratio,
            "A": list(self.a_set),
            "B": {str(a): list(bs) for a, bs in zip(self.a_set, self.b_sets)},
            "L1": list(self.l1),
            "L2": list(self.l2),
            "digits": list(self.reconstruct_digits() or ()),
            "verified": verify_product_form(self),
        }


def verify_product_form(pf: ProductForm) -> bool:
    """Exact check of every product-form condition; False on any failure."""
    if pf.reconstruct_digits() is None:
        return False
    if not is_hadamard_triple(pf.n_ratio, pf.a_set, pf.l1):
        return False
    lsum = direct_sum(pf.l1, pf.l2)
    if lsum is None:
        return False
    for bs in pf.b_sets:
        if not is_hadamard_triple(pf.n_ratio, bs, pf.l2):
            return False
        dsum = direct_sum(pf.a_set, bs)
        if dsum is None:
            return False
        if not is_hadamard_triple(pf.n_ratio, dsum, lsum):
            return False
    return True


def construct_product_form(dec: StructureDecomposition, n_ratio: int) -> ProductForm:
    """Build and exactly verify the product-form witness for a decomposition.

    The blocks follow the one-stage construction: A = {0, a*m**k} with the two
    B blocks {0, 2**r * ell} and {0, 2**r * ell'}, and L1 = {0, N/2}.  L2 is
    not trusted from any closed form: candidates {0, l} are searched in
    increasing l and the first fully verified product form wins.
    """
    if n_ratio != dec.n_ratio:
        raise InvalidInput(f"N = {n_ratio} does not match the decomposition (expects {dec.n_ratio})")
    a_lift = dec.a * dec.m**dec.k
    a_set = (0, a_lift)
    b_sets = ((0, (1 << dec.r) * dec.ell), (0, (1 << dec.r) * dec.ell_prime))
    l1 = (0, n_ratio // 2)
    for cand in range(1, n_ratio):
        if not all(_mask_zero_at(bs, cand, n_ratio) for bs in b_sets):
            continue
        pf = ProductForm(n_ratio, a_set, b_sets, l1, (0, cand))
        if verify_product_form(pf):
            return pf
    raise InternalInconsistency(f"no verifiable product form for {dec.to_json()} at N={n_ratio}")


def tiles_zn(c_set: Iterable[int], n_ratio: int) -> tuple[int, ...] | None:
    """A complement B with C (+) B a complete residue system mod N, or None.

    Backtracking over the candidates that can cover the smallest uncovered
    residue; complements are searched with 0 in B, which loses no generality.
    """
    c = _int_tuple(c_set)
    if n_ratio < 1 or n_ratio % len(c) != 0:
        return None
    c_mod = sorted(x % n_ratio for x in c)
    if len(set(c_mod)) != len(c_mod):
        return None
    size = n_ratio // len(c)

    def place(b_partial: list[int], covered: set[int]) -> tuple[int, ...] | None:
        if len(b_partial) == size:
            return tuple(sorted(b_partial))
        u = min(set(range(n_ratio)) - covered)
        for b in sorted({(u - x) % n_ratio for x in c_mod}):
            block = {(x + b) % n_ratio for x in c_mod}
            if len(block) == len(c_mod) and not (block & covered):
                found = place(b_partial + [b], covered | block)
                if found is not None:
                    return found
        return None

    first = {x % n_ratio for x in c_mod}
    return place([0], first)
