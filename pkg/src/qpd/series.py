"""Truncated formal power series in one variable ``q``.

Two coefficient lanes share one value type:

* exact lane (``modulus is None``): arbitrary-precision Python integers;
* modular lane: canonical residues in ``[0, m)``.

All values are immutable.  Binary operations truncate to the smaller
precision of their operands.  Products and quotients take a sparse path
whenever one operand has few nonzero terms (pentagonal and theta series);
the modular lane otherwise runs its dense kernels through numpy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping

import numpy as np

__all__ = [
    "SeriesError",
    "ModulusMismatch",
    "NotInvertible",
    "TruncatedSeries",
    "make_series",
    "constant",
    "monomial",
    "from_terms",
    "arith",
    "invert",
    "divide",
    "power",
    "substitute_power",
    "extract_progression",
    "reduce_mod",
    "shift",
    "truncate",
    "first_difference",
]

# int64 accumulators must stay below this bound.
_SAFE = 1 << 62


class SeriesError(ValueError):
    """Invalid series construction or operation."""


class ModulusMismatch(SeriesError):
    pass


class NotInvertible(SeriesError):
    pass


@dataclass(frozen=True)
class TruncatedSeries:
    """Coefficients of ``q^0 .. q^N``; exact modulo ``modulus`` when given."""

    coeffs: tuple
    modulus: int | None = None

    @property
    def precision(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, n):
        return self.coeffs[n]

    def __len__(self) -> int:
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    @cached_property
    def support(self) -> tuple:
        """Nonzero terms as ``(exponent, coefficient)`` pairs, ascending."""
        return tuple((i, c) for i, c in enumerate(self.coeffs) if c)

    @property
    def is_sparse(self) -> bool:
        return len(self.support) <= 4 * math.isqrt(self.precision + 1)

    def __repr__(self) -> str:
        shown = ", ".join(str(c) for c in self.coeffs[:8])
        more = ", ..." if len(self.coeffs) > 8 else ""
        mod = f", mod {self.modulus}" if self.modulus else ""
        return f"TruncatedSeries([{shown}{more}], N={self.precision}{mod})"

    # operators -------------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, TruncatedSeries):
            return other
        if isinstance(other, int):
            return constant(other, self.precision, self.modulus)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return arith(self, other, "add")

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return arith(self, other, "sub")

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return arith(other, self, "sub")

    def __neg__(self):
        return _build([-c for c in self.coeffs], self.modulus)

    def __mul__(self, other):
        if isinstance(other, int):
            return _build([other * c for c in self.coeffs], self.modulus)
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return arith(self, other, "mul")

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return divide(self, other)

    def __pow__(self, e: int):
        return power(self, e)

    # serialization ---------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "coeffs": [str(c) for c in self.coeffs],
            "precision": self.precision,
            "modulus": self.modulus,
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "TruncatedSeries":
        return make_series([int(c) for c in data["coeffs"]], int(data["precision"]), data.get("modulus"))


def _build(coeffs, modulus: int | None) -> TruncatedSeries:
    if modulus is not None:
        coeffs = [c % modulus for c in coeffs]
    return TruncatedSeries(tuple(int(c) for c in coeffs), modulus)


def make_series(coeffs: Iterable[int], precision: int, modulus: int | None = None) -> TruncatedSeries:
    """Validate and normalize a coefficient list into a series."""
    coeffs = list(coeffs)
    if precision < 0:
        raise SeriesError(f"precision must be nonnegative, got {precision}")
    if len(coeffs) != precision + 1:
        raise SeriesError(f"expected {precision + 1} coefficients, got {len(coeffs)}")
    if modulus is not None and modulus < 2:
        raise SeriesError(f"modulus must be at least 2, got {modulus}")
    return _build(coeffs, modulus)


def constant(c: int, precision: int, modulus: int | None = None) -> TruncatedSeries:
    return make_series([c] + [0] * precision, precision, modulus)


def monomial(j: int, precision: int, c: int = 1, modulus: int | None = None) -> TruncatedSeries:
    """``c * q^j``; vanishes when ``j`` exceeds the precision."""
    out = [0] * (precision + 1)
    if j <= precision:
        out[j] = c
    return make_series(out, precision, modulus)


def from_terms(terms: Mapping[int, int], precision: int, modulus: int | None = None) -> TruncatedSeries:
    """Build from an exponent -> coefficient map, dropping exponents above ``precision``."""
    out = [0] * (precision + 1)
    for e, c in terms.items():
        if 0 <= e <= precision:
            out[e] += c
    return make_series(out, precision, modulus)


def _common_modulus(a: TruncatedSeries, b: TruncatedSeries) -> int | None:
    if a.modulus != b.modulus:
        raise ModulusMismatch(f"operands have moduli {a.modulus} and {b.modulus}")
    return a.modulus


def _numpy_ok(m: int | None, terms: int) -> bool:
    return m is not None and (m - 1) ** 2 * max(terms, 1) < _SAFE


def _mul_coeffs(a, b, n: int, m: int | None) -> list:
    """Truncated product of coefficient sequences through degree ``n``."""
    a = a[: n + 1]
    b = b[: n + 1]
    sa = [(i, c) for i, c in enumerate(a) if c]
    sb = [(i, c) for i, c in enumerate(b) if c]
    if len(sb) < len(sa):
        a, b, sa, sb = b, a, sb, sa
    # rows indexed by the sparser operand
    if len(sa) > 4 * math.isqrt(n + 1) and _numpy_ok(m, n + 1):
        prod = np.convolve(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))[: n + 1] % m
        return prod.tolist()
    if _numpy_ok(m, len(sa)):
        arr = np.asarray(b, dtype=np.int64)
        out = np.zeros(n + 1, dtype=np.int64)
        for i, c in sa:
            out[i:] += c * arr[: n + 1 - i]
        return (out % m).tolist()
    out = [0] * (n + 1)
    for i, c in sa:
        out[i:] = [o + c * x for o, x in zip(out[i:], b)]
    if m is not None:
        out = [o % m for o in out]
    return out


def arith(a: TruncatedSeries, b: TruncatedSeries, kind: str) -> TruncatedSeries:
    """Coefficientwise ``add``/``sub`` or truncated ``mul``."""
    m = _common_modulus(a, b)
    if kind == "add":
        return _build([x + y for x, y in zip(a.coeffs, b.coeffs)], m)
    if kind == "sub":
        return _build([x - y for x, y in zip(a.coeffs, b.coeffs)], m)
    if kind == "mul":
        n = min(a.precision, b.precision)
        return TruncatedSeries(tuple(_mul_coeffs(a.coeffs, b.coeffs, n, m)), m)
    raise SeriesError(f"unknown operation {kind!r}")


def _unit_inverse(c: int, m: int | None) -> int:
    if m is None:
        if c not in (1, -1):
            raise NotInvertible(f"constant term {c} is not a unit in Z")
        return c
    if math.gcd(c, m) != 1:
        raise NotInvertible(f"constant term {c} is not invertible mod {m}")
    return pow(c, -1, m)


def _sparse_divide(num, den: TruncatedSeries, n: int, u: int, m: int | None) -> list:
    """Solve ``den * out = num`` term by term; cost O(n * nnz(den))."""
    sup = [(i, c) for i, c in den.support if 1 <= i <= n]
    out = [0] * (n + 1)
    active: list = []
    k = 0
    for j in range(n + 1):
        if k < len(sup) and sup[k][0] <= j:
            while k < len(sup) and sup[k][0] <= j:
                k += 1
            active = sup[:k]
        s = u * (num[j] - sum([c * out[j - i] for i, c in active]))
        out[j] = s % m if m is not None else s
    return out


def _newton_inverse(a, n: int, u: int, m: int) -> list:
    """Inverse mod ``m`` by Newton doubling ``b <- b (2 - a b)``."""
    a = np.asarray(a[: n + 1], dtype=np.int64)
    b = np.array([u], dtype=np.int64)
    prec = 1
    while prec < n + 1:
        prec = min(2 * prec, n + 1)
        e = np.convolve(a[:prec], b)[:prec] % m
        e = (-e) % m
        e[0] = (e[0] + 2) % m
        b = np.convolve(b, e)[:prec] % m
    return b.tolist()


def invert(a: TruncatedSeries) -> TruncatedSeries:
    """Multiplicative inverse to the precision of ``a``."""
    n, m = a.precision, a.modulus
    u = _unit_inverse(a.coeffs[0], m)
    if _numpy_ok(m, n + 1) and n > 64:
        return TruncatedSeries(tuple(_newton_inverse(a.coeffs, n, u, m)), m)
    return TruncatedSeries(tuple(_sparse_divide([1] + [0] * n, a, n, u, m)), m)


def divide(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """``a / b`` for ``b`` with unit constant term."""
    m = _common_modulus(a, b)
    n = min(a.precision, b.precision)
    u = _unit_inverse(b.coeffs[0], m)
    if b.is_sparse and not _numpy_ok(m, n + 1):
        return TruncatedSeries(tuple(_sparse_divide(a.coeffs, b, n, u, m)), m)
    return arith(truncate(a, n), invert(truncate(b, n)), "mul")


def power(a: TruncatedSeries, e: int) -> TruncatedSeries:
    """``a ** e`` by repeated squaring; negative ``e`` goes through :func:`invert`."""
    if e < 0:
        a, e = invert(a), -e
    result = constant(1, a.precision, a.modulus)
    base = a
    while e:
        if e & 1:
            result = arith(result, base, "mul")
        e >>= 1
        if e:
            base = arith(base, base, "mul")
    return result


def substitute_power(a: TruncatedSeries, k: int, precision: int | None = None) -> TruncatedSeries:
    """``a(q^k)``.

    By default the result keeps ``a``'s precision.  A larger ``precision`` is
    allowed up to ``k * N + k - 1``, the last degree ``a(q^k)`` determines.
    """
    if k < 1:
        raise SeriesError(f"substitution exponent must be >= 1, got {k}")
    n = a.precision if precision is None else precision
    if n > k * a.precision + k - 1:
        raise SeriesError(f"a(q^{k}) is only known through q^{k * a.precision + k - 1}, asked for {n}")
    out = [0] * (n + 1)
    out[::k] = a.coeffs[: n // k + 1]
    return TruncatedSeries(tuple(out), a.modulus)


def extract_progression(a: TruncatedSeries, A: int, r: int) -> TruncatedSeries:
    """Series whose n-th coefficient is the coefficient of ``q^(A n + r)`` in ``a``."""
    if A < 1:
        raise SeriesError(f"progression modulus must be >= 1, got {A}")
    if not 0 <= r < A:
        raise SeriesError(f"residue {r} outside [0, {A})")
    if r > a.precision:
        raise SeriesError(f"residue {r} exceeds precision {a.precision}")
    return TruncatedSeries(a.coeffs[r::A], a.modulus)


def reduce_mod(a: TruncatedSeries, m: int) -> TruncatedSeries:
    if m < 2:
        raise SeriesError(f"modulus must be at least 2, got {m}")
    if a.modulus is not None and a.modulus % m:
        raise ModulusMismatch(f"cannot reduce a series mod {a.modulus} to mod {m}")
    return _build(a.coeffs, m)


def shift(a: TruncatedSeries, j: int) -> TruncatedSeries:
    """``q^j * a`` at the same precision."""
    if j < 0:
        raise SeriesError("negative shifts would leave the power series ring")
    n = a.precision
    return TruncatedSeries(((0,) * min(j, n + 1) + a.coeffs)[: n + 1], a.modulus)


def truncate(a: TruncatedSeries, n: int) -> TruncatedSeries:
    if n > a.precision:
        raise SeriesError(f"cannot raise precision from {a.precision} to {n}")
    return TruncatedSeries(a.coeffs[: n + 1], a.modulus)


def first_difference(a: TruncatedSeries, b: TruncatedSeries) -> int | None:
    """Smallest exponent where ``a`` and ``b`` differ, within the common precision."""
    _common_modulus(a, b)
    for i, (x, y) in enumerate(zip(a.coeffs, b.coeffs)):
        if x != y:
            return i
    return None
