"""Combinatorial ground truth.

Everything here counts objects directly (partitions, lattice points,
finitely supported assignments) and never touches the q-series engine, so
it can serve as an independent check on it.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator

import numpy as np


# --- partition oracles -----------------------------------------------------


def partitions(n: int, max_part: int | None = None, allowed=None) -> Iterator[tuple]:
    """Partitions of ``n`` as non-increasing tuples, parts restricted by ``allowed``."""
    if max_part is None:
        max_part = n
    if n == 0:
        yield ()
        return
    for p in range(min(n, max_part), 0, -1):
        if allowed is not None and not allowed(p):
            continue
        for rest in partitions(n - p, p, allowed):
            yield (p,) + rest


def designated_partitions(n: int, k: int | None = None) -> Iterator[tuple]:
    """Partitions of ``n`` with one designated part per part size.

    Each item is a tuple of ``(part, is_designated)`` pairs.  ``k`` excludes
    parts divisible by ``k``.
    """
    allowed = None if k is None else (lambda p: p % k != 0)
    for lam in partitions(n, allowed=allowed):
        blocks = []
        for p in sorted(set(lam), reverse=True):
            mult = lam.count(p)
            blocks.append([tuple((p, i == d) for i in range(mult)) for d in range(mult)])
        for choice in _product(blocks):
            yield sum(choice, ())


def _product(blocks):
    if not blocks:
        yield ()
        return
    for head in blocks[0]:
        for tail in _product(blocks[1:]):
            yield (head,) + tail


@lru_cache(maxsize=None)
def _weighted(n: int, max_part: int, k: int, odd_only: bool) -> int:
    # sum over partitions of n with parts <= max_part of a per-size weight:
    # the multiplicity (designations), or 1 for odd multiplicities only
    if n == 0:
        return 1
    if max_part == 0:
        return 0
    if max_part > n:
        return _weighted(n, n, k, odd_only)
    p = max_part
    total = _weighted(n, p - 1, k, odd_only)
    if k and p % k == 0:
        return total
    mult = 1
    while mult * p <= n:
        if odd_only:
            if mult % 2:
                total += _weighted(n - mult * p, p - 1, k, odd_only)
        else:
            total += mult * _weighted(n - mult * p, p - 1, k, odd_only)
        mult += 1
    return total


def _warm(n: int, k: int, odd_only: bool) -> None:
    # fill the memo bottom-up so large n never recurse deeply
    if n > 150:
        for m in range(1, n + 1):
            for p in range(1, m + 1):
                _weighted(m, p, k, odd_only)


def oracle_pd(n: int) -> int:
    """PD(n) by enumeration: partitions weighted by the product of multiplicities."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    _warm(n, 0, False)
    return _weighted(n, n, 0, False)


def oracle_pdk(k: int, n: int) -> int:
    """PD_k(n): as :func:`oracle_pd`, with parts divisible by ``k`` excluded."""
    if k < 2:
        raise ValueError(f"k must be at least 2, got {k}")
    if n < 0:
        raise ValueError("n must be nonnegative")
    _warm(n, k, False)
    return _weighted(n, n, k, False)


def odd_multiplicity_count(n: int) -> int:
    """Number of partitions of ``n`` in which every part occurs an odd number of times."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    _warm(n, 0, True)
    return _weighted(n, n, 0, True)


@lru_cache(maxsize=8)
def odd_multiplicity_table(n_max: int) -> tuple:
    """:func:`odd_multiplicity_count` for ``n = 0..n_max``, one part size at a time."""
    table = np.zeros(n_max + 1, dtype=object)
    table[0] = 1
    for p in range(1, n_max + 1):
        new = table.copy()
        for j in range(1, n_max // p + 1, 2):
            new[j * p :] += table[: n_max + 1 - j * p]
        table = new
    return tuple(int(x) for x in table)


# --- lattice-point counters ------------------------------------------------


class Domain(enum.Enum):
    NONNEG_NOT3_OR_ZERO = "nonneg, 3 does not divide, or zero"
    PARITY_SPLIT = "any even integer, or a positive odd integer"
    ALL_INT = "any integer"
    NONNEG = "nonnegative integer"
    POSITIVE_ODD = "positive odd integer"

    def admits(self, v: int) -> bool:
        if self is Domain.NONNEG_NOT3_OR_ZERO:
            return v == 0 or (v > 0 and v % 3 != 0)
        if self is Domain.PARITY_SPLIT:
            return v % 2 == 0 or v > 0
        if self is Domain.ALL_INT:
            return True
        if self is Domain.NONNEG:
            return v >= 0
        return v > 0 and v % 2 == 1

    def values(self, bound: int) -> list:
        """Admissible ``v`` with ``|v| <= bound``."""
        return [v for v in range(-bound, bound + 1) if self.admits(v)]


@dataclass(frozen=True)
class RepresentationCounter:
    """Solutions of ``n = sum c_i v_i^2`` with each ``v_i`` in its domain."""

    terms: tuple

    def __post_init__(self):
        for c, _ in self.terms:
            if c < 1:
                raise ValueError("coefficients must be positive")

    @classmethod
    def of(cls, *terms) -> "RepresentationCounter":
        return cls(tuple(terms))

    def count(self, n: int) -> int:
        """Count for one ``n`` by nested enumeration, largest coefficient outermost."""
        if n < 0:
            return 0
        order = sorted(self.terms, key=lambda t: -t[0])
        return _nested(tuple(order), n)

    def table(self, n_max: int) -> list:
        """Counts for every ``n <= n_max`` at once, by convolving per-term histograms."""
        total = np.zeros(n_max + 1, dtype=np.int64)
        total[0] = 1
        for c, dom in self.terms:
            hist = np.zeros(n_max + 1, dtype=np.int64)
            for v in dom.values(math.isqrt(n_max // c)):
                hist[c * v * v] += 1
            total = np.convolve(total, hist)[: n_max + 1]
        return total.tolist()


def _nested(terms: tuple, n: int) -> int:
    (c, dom), rest = terms[0], terms[1:]
    if not rest:
        if n % c:
            return 0
        v = math.isqrt(n // c)
        if v * v != n // c:
            return 0
        return sum(1 for w in {v, -v} if dom.admits(w))
    total = 0
    for v in dom.values(math.isqrt(n // c)):
        total += _nested(rest, n - c * v * v)
    return total


def _a_counter(ell: int) -> RepresentationCounter:
    if ell < 1:
        raise ValueError("ell must be at least 1")
    return RepresentationCounter(tuple((2 ** m, Domain.NONNEG_NOT3_OR_ZERO) for m in range(ell)))


def _a_star_counter(ell: int) -> RepresentationCounter:
    if ell < 2:
        raise ValueError("ell must be at least 2")
    return RepresentationCounter.of((1, Domain.NONNEG_NOT3_OR_ZERO), (2 ** (ell - 1), Domain.NONNEG_NOT3_OR_ZERO))


def _e_counter(ell: int) -> RepresentationCounter:
    if ell < 1:
        raise ValueError("ell must be at least 1")
    ps = Domain.PARITY_SPLIT
    terms = [(1, ps)]
    for m in range(1, ell):
        terms += [(3 ** m, ps), (3 ** m, ps)]
    terms.append((3 ** ell, ps))
    return RepresentationCounter(tuple(terms))


def _e_star_counter(ell: int) -> RepresentationCounter:
    if ell < 2:
        raise ValueError("ell must be at least 2")
    ps = Domain.PARITY_SPLIT
    top = 3 ** (ell - 1)
    return RepresentationCounter.of((1, ps), (1, ps), (top, ps), (top, ps))


def count_a(n: int, ell: int) -> int:
    """Solutions of ``n = sum_{m<ell} 2^m k_m^2``, ``k_m >= 0`` with ``3 ∤ k_m`` or ``k_m = 0``."""
    return _a_counter(ell).count(n)


def count_a_star(n: int, ell: int) -> int:
    """Solutions of ``n = k_0^2 + 2^(ell-1) k_1^2`` over the same domain as :func:`count_a`."""
    return _a_star_counter(ell).count(n)


def count_e(n: int, ell: int) -> int:
    """Solutions of ``n = k_0^2 + sum_{0<m<ell} 3^m (k_m^2 + k_m'^2) + 3^ell k_ell^2``.

    Even values range over all of Z, odd values over the positive integers.
    """
    return _e_counter(ell).count(n)


def count_e_star(n: int, ell: int) -> int:
    """Solutions of ``n = k_0^2 + k_0'^2 + 3^(ell-1) (k_1^2 + k_1'^2)``, parity-split domains."""
    return _e_star_counter(ell).count(n)


@lru_cache(maxsize=64)
def count_a_table(n_max: int, ell: int) -> tuple:
    return tuple(_a_counter(ell).table(n_max))


@lru_cache(maxsize=64)
def count_a_star_table(n_max: int, ell: int) -> tuple:
    return tuple(_a_star_counter(ell).table(n_max))


@lru_cache(maxsize=64)
def count_e_table(n_max: int, ell: int) -> tuple:
    return tuple(_e_counter(ell).table(n_max))


@lru_cache(maxsize=64)
def count_e_star_table(n_max: int, ell: int) -> tuple:
    return tuple(_e_star_counter(ell).table(n_max))


def count_r(n: int) -> int:
    """Nonnegative solutions of ``n = k(k+1) + 3m(m+1) + 1``."""
    if n < 1:
        raise ValueError("count_r needs n >= 1")
    total = 0
    m = 0
    while 3 * m * (m + 1) + 1 <= n:
        rest = n - 1 - 3 * m * (m + 1)
        # k(k+1) = rest  <=>  (2k+1)^2 = 4 rest + 1
        s = math.isqrt(4 * rest + 1)
        if s * s == 4 * rest + 1:
            total += 1
        m += 1
    return total


def count_r_odd(n: int) -> int:
    """Positive odd solutions of ``4n = k_0^2 + 3 k_1^2``."""
    return RepresentationCounter.of((1, Domain.POSITIVE_ODD), (3, Domain.POSITIVE_ODD)).count(4 * n)


def count_d(n: int) -> int:
    """Integer pairs ``(j, k)`` with ``n = 3j(3j-1) + 3k(3k-1)``."""
    if n < 0:
        return 0
    vals = []
    j = 0
    while True:
        hit = False
        for t in (j, -j) if j else (0,):
            v = 3 * t * (3 * t - 1)
            if v <= n:
                vals.append(v)
                hit = True
        if not hit:
            break
        j += 1
    return sum(1 for v in vals for w in vals if v + w == n)


@lru_cache(maxsize=8)
def _assignment_table(n_max: int) -> tuple:
    # D(t): assignments m -> (a_m, b_m), finitely supported, with weight
    # sum m (12 a_m + b_m) = t and b_m in {0,1,2,3}
    steps = [j for j in range(1, n_max + 1) if j % 12 <= 3]
    table = np.zeros(n_max + 1, dtype=object)
    table[0] = 1
    for m in range(1, n_max + 1):
        new = table.copy()
        for j in steps:
            w = m * j
            if w > n_max:
                break
            new[w:] += table[: n_max + 1 - w]
        table = new
    return tuple(int(x) for x in table)


@lru_cache(maxsize=8)
def count_c_table(n_max: int) -> tuple:
    d = _assignment_table(n_max)
    out = []
    for n in range(n_max + 1):
        total = 0
        k0 = 0
        while 3 * k0 * (k0 + 1) // 2 <= n:
            total += d[n - 3 * k0 * (k0 + 1) // 2]
            k0 += 1
        out.append(total)
    return tuple(out)


def count_c(n: int) -> int:
    """Solutions of ``n = 3 k_0 (k_0+1)/2 + sum_m k_m (12 a_m + b_m)`` over distinct part sizes."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return count_c_table(n)[n]


def is_square(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


def pd2_closed_form(n: int) -> int:
    """1 iff ``n = 0`` or ``n = k^2`` with ``3 ∤ k``."""
    if n == 0:
        return 1
    return int(is_square(n) and math.isqrt(n) % 3 != 0)


def pd4_closed_form(n: int) -> int:
    """1 iff ``n = m k^2`` for some ``m | 6`` and ``k >= 0``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return int(any(n % m == 0 and is_square(n // m) for m in (1, 2, 3, 6)))


def psi_involution(a, b) -> tuple:
    a, b = Fraction(a), Fraction(b)
    return (a + 4 * b) / 3, (2 * a - b) / 3


def quadratic_residues(m: int) -> set:
    if m < 2:
        raise ValueError("modulus must be at least 2")
    return {x * x % m for x in range(m)}


def form_4a_8b_plus_1(bound: int) -> set:
    """``{0} ∪ {4^a (8b+1) < bound}``."""
    out = {0}
    p = 1
    while p < bound:
        v = p
        while v < bound:
            out.add(v)
            v += 8 * p
        p *= 4
    return out
