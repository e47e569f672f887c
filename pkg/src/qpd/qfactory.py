"""Named q-series: f_k, Pochhammer products, theta functions, pd, pd_k, g, h."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .series import (
    TruncatedSeries,
    constant,
    divide,
    from_terms,
    invert,
    make_series,
    reduce_mod,
    substitute_power,
)


@dataclass(frozen=True)
class EtaQuotientSpec:
    """The product of ``f_k ** e`` over ``factors`` (pairs ``(k, e)``)."""

    factors: tuple

    def __post_init__(self):
        if not self.factors:
            raise ValueError("eta quotient needs at least one factor")
        for k, e in self.factors:
            if k < 1:
                raise ValueError(f"eta scale must be positive, got {k}")
            if e == 0:
                raise ValueError("zero exponents are not allowed")

    @classmethod
    def of(cls, *pairs) -> "EtaQuotientSpec":
        return cls(tuple((int(k), int(e)) for k, e in pairs))


@dataclass(frozen=True)
class ThetaSpec:
    """``phi``, ``psi`` or the general ``f(s1 q^x, s2 q^y)``."""

    kind: str
    x: int = 0
    y: int = 0
    s1: int = 1
    s2: int = 1

    def __post_init__(self):
        if self.kind not in ("phi", "psi", "general"):
            raise ValueError(f"unknown theta kind {self.kind!r}")
        if self.kind == "general":
            if self.x < 1 or self.y < 1:
                raise ValueError("general theta exponents must be positive")
            if self.s1 not in (1, -1) or self.s2 not in (1, -1):
                raise ValueError("theta signs must be +1 or -1")

    @classmethod
    def general(cls, x: int, y: int, s1: int = 1, s2: int = 1) -> "ThetaSpec":
        return cls("general", x, y, s1, s2)


PHI = ThetaSpec("phi")
PSI = ThetaSpec("psi")

PD_SPEC = EtaQuotientSpec.of((6, 1), (1, -1), (2, -1), (3, -1))
G_SPEC = EtaQuotientSpec.of((1, 1), (2, 1), (3, 1), (6, -1))
H_SPEC = EtaQuotientSpec.of((1, 2), (2, -1))


def _lane(s: TruncatedSeries, modulus: int | None) -> TruncatedSeries:
    return s if modulus is None else reduce_mod(s, modulus)


def pentagonal_terms(limit: int):
    """Yield ``(exponent, sign)`` for ``j(3j-1)/2 <= limit``, ``j`` over Z, ascending."""
    yield 0, 1
    j = 1
    while True:
        lo = j * (3 * j - 1) // 2
        if lo > limit:
            return
        sign = -1 if j % 2 else 1
        yield lo, sign
        hi = j * (3 * j + 1) // 2
        if hi <= limit:
            yield hi, sign
        j += 1


@lru_cache(maxsize=64)
def euler_f1(N: int) -> TruncatedSeries:
    """``(q; q)_inf`` from the generalized pentagonal numbers."""
    if N < 0:
        raise ValueError("precision must be nonnegative")
    return from_terms(dict(pentagonal_terms(N)), N)


@lru_cache(maxsize=512)
def fk(k: int, N: int, modulus: int | None = None) -> TruncatedSeries:
    if k < 1:
        raise ValueError(f"f_k needs k >= 1, got {k}")
    return _lane(substitute_power(euler_f1(N // k), k, N), modulus)


@lru_cache(maxsize=256)
def eta_quotient(spec: EtaQuotientSpec, N: int, modulus: int | None = None) -> TruncatedSeries:
    """Expand ``prod f_k ** e`` to precision ``N``.

    Numerator factors are multiplied in one at a time and denominator factors
    divided out one at a time, so every step pairs a dense series with a
    sparse pentagonal one.
    """
    out = constant(1, N, modulus)
    for k, e in sorted(spec.factors, key=lambda f: -f[1]):
        f = fk(k, N, modulus)
        for _ in range(abs(e)):
            out = out * f if e > 0 else divide(out, f)
    return out


def pochhammer(a: int, b: int, N: int, modulus: int | None = None) -> TruncatedSeries:
    """``(q^a; q^b)_inf`` truncated at ``N``."""
    if a < 1 or b < 1:
        raise ValueError("Pochhammer exponents must be positive")
    out = [1] + [0] * N
    e = a
    while e <= N:
        # multiply by (1 - q^e), high degrees first
        for n in range(N, e - 1, -1):
            out[n] -= out[n - e]
        e += b
    return make_series(out, N, modulus)


def _theta_terms(spec: ThetaSpec, N: int) -> dict:
    terms: dict = {}

    def put(e, c):
        if e <= N:
            terms[e] = terms.get(e, 0) + c

    if spec.kind == "phi":
        n = 0
        while n * n <= N:
            put(n * n, 1 if n == 0 else 2)
            n += 1
    elif spec.kind == "psi":
        n = 0
        while n * (n + 1) // 2 <= N:
            put(n * (n + 1) // 2, 1)
            n += 1
    else:
        x, y = spec.x, spec.y
        # the exponent is convex in n and minimal at n = 0 or n = -1 (both zero)
        for step in (1, -1):
            n = 0 if step == 1 else -1
            while True:
                tn, tm = n * (n + 1) // 2, n * (n - 1) // 2
                e = x * tn + y * tm
                if e > N:
                    break
                put(e, spec.s1 ** (tn % 2) * spec.s2 ** (tm % 2))
                n += step
    return terms


def theta(spec: ThetaSpec, N: int, modulus: int | None = None) -> TruncatedSeries:
    return from_terms(_theta_terms(spec, N), N, modulus)


def jacobi_product(x: int, y: int, s1: int, s2: int, N: int, modulus: int | None = None) -> TruncatedSeries:
    """``(-a; ab)(-b; ab)(ab; ab)`` with ``a = s1 q^x``, ``b = s2 q^y``, as an explicit product."""
    out = [1] + [0] * N
    step = x + y
    s = s1 * s2

    def times(e, c):
        # multiply by (1 + c q^e)
        for n in range(N, e - 1, -1):
            out[n] += c * out[n - e]

    j = 0
    while x + j * step <= N or y + j * step <= N or (j + 1) * step <= N:
        sj = s ** j
        if x + j * step <= N:
            times(x + j * step, s1 * sj)
        if y + j * step <= N:
            times(y + j * step, s2 * sj)
        if (j + 1) * step <= N:
            times((j + 1) * step, -(s ** (j + 1)))
        j += 1
    return make_series(out, N, modulus)


@lru_cache(maxsize=64)
def pd_series(N: int, modulus: int | None = None) -> TruncatedSeries:
    """Generating function of PD(n)."""
    return eta_quotient(PD_SPEC, N, modulus)


@lru_cache(maxsize=64)
def g_series(N: int, modulus: int | None = None) -> TruncatedSeries:
    """``1 / pd(q)``."""
    return invert(pd_series(N, modulus))


@lru_cache(maxsize=64)
def h_series(N: int, modulus: int | None = None) -> TruncatedSeries:
    return eta_quotient(H_SPEC, N, modulus)


@lru_cache(maxsize=128)
def pdk_series(k: int, N: int, modulus: int | None = None) -> TruncatedSeries:
    """Generating function of PD_k(n), computed as ``g(q^k) / g(q)``."""
    if k < 2:
        raise ValueError(f"PD_k needs k >= 2, got {k}")
    gk = substitute_power(g_series(N // k, modulus), k, N)
    return gk * pd_series(N, modulus)


def pdk_genfunct_spec(k: int) -> EtaQuotientSpec:
    """The eight-factor quotient ``f6 f_k f_2k f_3k / (f1 f2 f3 f_6k)`` with cancellations merged."""
    exps: dict = {}
    for scale, e in ((6, 1), (k, 1), (2 * k, 1), (3 * k, 1), (1, -1), (2, -1), (3, -1), (6 * k, -1)):
        exps[scale] = exps.get(scale, 0) + e
    return EtaQuotientSpec(tuple(sorted((s, e) for s, e in exps.items() if e)))


def pdk_series_genfunct(k: int, N: int, modulus: int | None = None) -> TruncatedSeries:
    """Cross-check path for :func:`pdk_series` through the eta quotient."""
    if k < 2:
        raise ValueError(f"PD_k needs k >= 2, got {k}")
    return eta_quotient(pdk_genfunct_spec(k), N, modulus)
