"""Congruence registry, the mod 2 recurrence, range verification and mining."""

from __future__ import annotations

import ast
import math
import operator
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numba
import numpy as np

from . import counters as ct
from .qfactory import pd_series, pdk_series
from .report import VerificationReport
from .series import TruncatedSeries


class RegistryError(ValueError):
    pass


class InsufficientPrecision(ValueError):
    pass


# --- integer and boolean expressions over claim parameters -------------------

_BINOPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.FloorDiv: operator.floordiv,
    ast.Mod: operator.mod,
    ast.Pow: operator.pow,
}
_CMPOPS = {
    ast.Eq: operator.eq,
    ast.NotEq: operator.ne,
    ast.Lt: operator.lt,
    ast.LtE: operator.le,
    ast.Gt: operator.gt,
    ast.GtE: operator.ge,
}


def _eval_node(node, env: dict):
    if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
        return node.value
    if isinstance(node, ast.Name):
        if node.id not in env:
            raise RegistryError(f"unknown name {node.id!r}")
        return env[node.id]
    if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        return _BINOPS[type(node.op)](_eval_node(node.left, env), _eval_node(node.right, env))
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
        return -_eval_node(node.operand, env)
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.Not):
        return not _eval_node(node.operand, env)
    if isinstance(node, ast.Compare):
        left = _eval_node(node.left, env)
        for op, right_node in zip(node.ops, node.comparators):
            if type(op) not in _CMPOPS:
                break
            right = _eval_node(right_node, env)
            if not _CMPOPS[type(op)](left, right):
                return False
            left = right
        else:
            return True
    if isinstance(node, ast.BoolOp):
        values = [_eval_node(v, env) for v in node.values]
        return all(values) if isinstance(node.op, ast.And) else any(values)
    raise RegistryError(f"unsupported expression {ast.dump(node)}")


def eval_expr(text: str, env: dict | None = None):
    """Evaluate an integer or boolean expression; ``^`` means power."""
    try:
        tree = ast.parse(text.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise RegistryError(f"bad expression {text!r}") from exc
    return _eval_node(tree.body, env or {})


# --- claims ------------------------------------------------------------------


@dataclass(frozen=True)
class ParamDomain:
    name: str
    kind: str  # range | set | nonres | non4a8b1
    args: tuple
    extended_hi: str | None = None

    def values(self, env: dict, extended: bool = False) -> list:
        if self.kind == "range":
            lo = eval_expr(self.args[0], env)
            hi_text = self.extended_hi if extended and self.extended_hi else self.args[1]
            return list(range(lo, eval_expr(hi_text, env) + 1))
        if self.kind == "set":
            return [eval_expr(a, env) for a in self.args]
        M = eval_expr(self.args[0], env)
        if self.kind == "nonres":
            qr = ct.quadratic_residues(M)
            return [s for s in range(M) if s not in qr]
        excluded = ct.form_4a_8b_plus_1(M)
        return [s for s in range(M) if s not in excluded]


def _parse_param(text: str) -> ParamDomain:
    text = text.strip()
    if " in " in text:
        name, dom = (t.strip() for t in text.split(" in ", 1))
        if dom.startswith("{") and dom.endswith("}"):
            return ParamDomain(name, "set", tuple(a.strip() for a in dom[1:-1].split(",")))
        for kind in ("nonres", "non4a8b1"):
            if dom.startswith(kind + "(") and dom.endswith(")"):
                return ParamDomain(name, kind, (dom[len(kind) + 1 : -1],))
        raise RegistryError(f"unknown parameter domain {dom!r}")
    name, _, rng = text.partition("=")
    lo, sep, hi = rng.partition("..")
    if not sep:
        raise RegistryError(f"bad parameter range {text!r}")
    hi, _, ext = hi.partition("/")
    return ParamDomain(name.strip(), "range", (lo.strip(), hi.strip()), ext.strip() or None)


@dataclass(frozen=True)
class Claim:
    """``PD_k(A n + r)`` against a predicate mod ``modulus``; ``k``, ``A``, ``r`` may use parameters."""

    id: str
    series: str
    A: str
    r: str
    modulus: int
    predicate: str
    conditions: tuple = ()
    params: tuple = ()
    n_max: int = 1000
    status: str = "proven"
    source: str = ""

    def instances(self, extended: bool = False) -> list:
        """Every admissible parameter assignment, in declaration order."""
        out = [{}]
        for dom in self.params:
            out = [dict(env, **{dom.name: v}) for env in out for v in dom.values(env, extended)]
        return out

    def resolve(self, params: dict) -> tuple:
        """``(k, A, r)`` for one parameter assignment; ``k = 1`` stands for plain PD."""
        k = 1 if self.series == "pd" else eval_expr(self.series[3:], params)
        A, r = eval_expr(self.A, params), eval_expr(self.r, params)
        if A < 1 or not 0 <= r < A:
            raise RegistryError(f"{self.id}: bad progression ({A}, {r}) for {params}")
        if k != 1 and k < 2:
            raise RegistryError(f"{self.id}: PD_k needs k >= 2")
        return k, A, r

    def admits(self, n: int, params: dict) -> bool:
        env = dict(params, n=n)
        return all(eval_expr(c, env) for c in self.conditions)

    def to_line(self) -> str:
        def params_text(d: ParamDomain) -> str:
            if d.kind == "range":
                ext = f"/{d.extended_hi}" if d.extended_hi else ""
                return f"{d.name}={d.args[0]}..{d.args[1]}{ext}"
            if d.kind == "set":
                return f"{d.name} in {{{','.join(d.args)}}}"
            return f"{d.name} in {d.kind}({d.args[0]})"

        return " | ".join(
            [
                self.id,
                self.series,
                self.A,
                self.r,
                str(self.modulus),
                self.predicate,
                "; ".join(self.conditions) or "-",
                "; ".join(params_text(d) for d in self.params) or "-",
                str(self.n_max),
                self.status,
                self.source,
            ]
        )


def _counter_values(name: str, n_max: int, params: dict) -> list:
    """Values of a named counter at indices ``0..n_max``."""
    ell = params.get("l")
    if name == "a":
        return list(ct.count_a_table(n_max, ell))
    if name == "a_star":
        return list(ct.count_a_star_table(n_max, ell))
    if name == "e":
        return list(ct.count_e_table(n_max, ell))
    if name == "e_star":
        return list(ct.count_e_star_table(n_max, ell))
    if name == "c":
        return list(ct.count_c_table(n_max))
    if name == "d":
        return [ct.count_d(n) for n in range(n_max + 1)]
    if name == "r":
        return [None] + [ct.count_r(n) for n in range(1, n_max + 1)]
    if name == "b":
        return list(ct.odd_multiplicity_table(n_max))
    raise RegistryError(f"unknown counter {name!r}")


CLOSED_FORMS = {"pd2": ct.pd2_closed_form, "pd4": ct.pd4_closed_form}
COUNTERS = ("a", "a_star", "b", "c", "d", "e", "e_star", "r")
CLAIM_STATUSES = ("proven", "conjectural")


def _check_predicate(pred: str) -> None:
    if pred == "zero":
        return
    kind, _, name = pred.partition(":")
    if kind == "match" and name in COUNTERS:
        return
    if kind == "closed" and name in CLOSED_FORMS:
        return
    raise RegistryError(f"unknown predicate {pred!r}")


def parse_registry(text: str) -> list:
    claims = []
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        f = [x.strip() for x in line.split("|")]
        if len(f) != 11:
            raise RegistryError(f"registry line {lineno}: expected 11 fields, got {len(f)}")
        cid, series, A, r, mod, pred, conds, params, n_max, status, source = f
        if cid in seen:
            raise RegistryError(f"registry line {lineno}: duplicate id {cid}")
        seen.add(cid)
        if series != "pd" and not series.startswith("pd_"):
            raise RegistryError(f"registry line {lineno}: unknown series {series!r}")
        if status not in CLAIM_STATUSES:
            raise RegistryError(f"registry line {lineno}: unknown status {status!r}")
        _check_predicate(pred)
        claim = Claim(
            cid,
            series,
            A,
            r,
            int(mod),
            pred,
            tuple(c.strip() for c in conds.split(";")) if conds != "-" else (),
            tuple(_parse_param(p) for p in params.split(";")) if params != "-" else (),
            int(n_max),
            status,
            source,
        )
        for env in claim.instances():
            claim.resolve(env)
        claims.append(claim)
    return claims


def registry_text(path: str | Path | None = None) -> str:
    if path is None:
        return resources.files("qpd").joinpath("data/registry.txt").read_text(encoding="utf-8")
    return Path(path).read_text(encoding="utf-8")


def load_registry(path: str | Path | None = None) -> list:
    return parse_registry(registry_text(path))


def find_claims(claims: list, ids) -> list:
    """Select claims by id, keeping registry order; ``all`` selects everything."""
    if ids in ("all", ["all"], ("all",)):
        return list(claims)
    by_id = {c.id: c for c in claims}
    missing = [i for i in ids if i not in by_id]
    if missing:
        raise KeyError(", ".join(missing))
    wanted = set(ids)
    return [c for c in claims if c.id in wanted]


# --- the mod 2 recurrence -------------------------------------------------------


@numba.njit(cache=True)
def _recurrence_kernel(k, N, squares, out):
    rhs = np.zeros(N + 1, dtype=np.uint8)
    rhs[0] = 1
    for s in squares:
        if k * s <= N:
            rhs[k * s] = 1
    for n in range(N + 1):
        b = rhs[n]
        for s in squares:
            if s > n:
                break
            b ^= out[n - s]
        out[n] = b


def recurrence_pdk_mod2(k: int, N: int) -> np.ndarray:
    """``PD_k(n) mod 2`` for ``n = 0..N``.

    Multiplying the series by ``1 + sum_{3∤l} q^(l^2)`` leaves
    ``1 + sum_{3∤m} q^(k m^2)`` mod 2, which gives each bit from earlier ones.
    """
    if k < 2:
        raise ValueError("PD_k needs k >= 2")
    if N < 0:
        raise ValueError("N must be nonnegative")
    squares = np.array([l * l for l in range(1, math.isqrt(N) + 1) if l % 3], dtype=np.int64)
    out = np.zeros(N + 1, dtype=np.uint8)
    _recurrence_kernel(k, N, squares, out)
    return out


# --- verification -------------------------------------------------------------


def claim_series(k: int, N: int, modulus: int) -> TruncatedSeries:
    return pd_series(N, modulus) if k == 1 else pdk_series(k, N, modulus)


def verify_claim(
    claim: Claim,
    n_max: int | None = None,
    params: dict | None = None,
    series: TruncatedSeries | None = None,
) -> VerificationReport:
    """Check every progression argument ``A n + r <= n_max`` admitted by the side conditions."""
    params = dict(params or {})
    known = {d.name for d in claim.params}
    if set(params) != known:
        raise RegistryError(f"{claim.id}: parameters {sorted(known)} required, got {sorted(params)}")
    n_max = claim.n_max if n_max is None else n_max
    k, A, r = claim.resolve(params)
    if n_max < r:
        raise ValueError(f"{claim.id}: n_max {n_max} is below the first argument {r}")
    top = (n_max - r) // A
    needed = A * top + r
    m = claim.modulus
    start = time.perf_counter()
    if series is None:
        series = claim_series(k, needed, m)
    elif series.precision < needed:
        raise InsufficientPrecision(f"{claim.id}: series known to q^{series.precision}, need q^{needed}")
    elif series.modulus is not None and series.modulus % m:
        raise InsufficientPrecision(f"{claim.id}: series is reduced mod {series.modulus}, need mod {m}")

    pred = claim.predicate
    if pred.startswith("match:"):
        expected_all = _counter_values(pred[6:], top, params)
    else:
        expected_all = None
    closed = CLOSED_FORMS.get(pred[7:]) if pred.startswith("closed:") else None

    desc_k = "PD" if k == 1 else f"PD_{k}"
    report = VerificationReport(
        claim.id,
        "congruence",
        claim.status,
        m,
        (r, needed),
        params=params,
        description=f"{desc_k}({A}n+{r}) {pred} mod {m}",
    )
    for n in range(top + 1):
        if not claim.admits(n, params):
            continue
        actual = series[A * n + r] % m
        if expected_all is not None:
            expected = expected_all[n] % m
        elif closed is not None:
            expected = closed(n) % m
        else:
            expected = 0
        report.checked += 1
        if actual != expected:
            report.add_failure(A * n + r, expected, actual)
    report.elapsed = time.perf_counter() - start
    return report


def _verify_task(task):
    claim, n_max, params = task
    return verify_claim(claim, n_max, params)


def verify_registry(
    claims: list,
    n_max: int | None = None,
    extended: bool = False,
    jobs: int = 1,
) -> list:
    """Verify every instance of every claim; reports come back in registry order."""
    tasks = [(c, n_max, env) for c in claims for env in c.instances(extended)]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_verify_task, tasks, chunksize=4))
    return [_verify_task(t) for t in tasks]


def check_conjectures(n_max: int = 3000, claims: list | None = None, jobs: int = 1) -> list:
    if n_max < 100:
        raise ValueError("n_max must be at least 100")
    claims = load_registry() if claims is None else claims
    return verify_registry([c for c in claims if c.status == "conjectural"], n_max, jobs=jobs)


# --- mining -----------------------------------------------------------------------


@dataclass
class Candidate:
    k: int
    m: int
    A: int
    r: int
    support: int
    status: str  # known | conjectural
    from_index: int = 0  # 1 when n = 0 is excluded
    minimal: bool = True
    registry: tuple = field(default_factory=tuple)

    def row(self) -> dict:
        return {
            "k": self.k,
            "m": self.m,
            "A": self.A,
            "r": self.r,
            "support": self.support,
            "status": self.status,
            "from_n": self.from_index,
            "minimal": self.minimal,
            "registry": " ".join(self.registry),
        }


def _zero_instances(claims: list, k: int, m: int, extended: bool = False):
    """Resolved proven/conjectural ZERO instances for PD_k whose modulus is a multiple of m."""
    out = []
    for c in claims:
        if c.predicate != "zero" or c.modulus % m:
            continue
        for env in c.instances(extended):
            ck, A, r = c.resolve(env)
            if ck == k:
                out.append((c, env, A, r))
    return out


def _covered(x: int, instances) -> bool:
    for c, env, A, r in instances:
        if x >= r and (x - r) % A == 0 and c.admits((x - r) // A, env):
            return True
    return False


def mine_congruences(
    k: int,
    m: int,
    A_max: int,
    n_max: int | None = None,
    min_support: int = 20,
    claims: list | None = None,
) -> list:
    """Progressions ``A n + r`` (``A <= A_max``) on which ``PD_k`` vanishes mod ``m`` up to ``n_max``.

    A progression failing only at ``n = 0`` is reported with ``from_n = 1``.
    Candidates whose every tested argument lies in a proven registry family
    are ``known``; the rest are ``conjectural``.
    """
    if k < 1 or m < 2 or A_max < 2 or min_support < 10:
        raise ValueError("need k >= 1 (1 = PD), m >= 2, A_max >= 2, min_support >= 10")
    if n_max is None:
        n_max = A_max * min_support + A_max - 1
    claims = load_registry() if claims is None else claims
    coeffs = np.array([c % m for c in claim_series(k, n_max, m).coeffs], dtype=np.int64)
    nonzero = coeffs != 0
    proven = _zero_instances([c for c in claims if c.status == "proven"], k, m)
    every = _zero_instances(claims, k, m)

    found = []
    for A in range(1, A_max + 1):
        for r in range(min(A, n_max + 1)):
            row = nonzero[r::A]
            if not row[1:].any():
                start = 1 if row[0] else 0
                support = len(row) - start
                if support < min_support:
                    continue
                args = range(A * start + r, n_max + 1, A)
                status = "known" if all(_covered(x, proven) for x in args) else "conjectural"
                ids = tuple(
                    sorted({c.id for c, env, cA, cr in every if (cA, cr) == (A, r)})
                )
                found.append(Candidate(k, m, A, r, support, status, start, True, ids))

    # a family is redundant if a coarser emitted family already contains it
    by_key = {(c.A, c.r): c for c in found}
    for c in found:
        for d in range(1, c.A):
            if c.A % d == 0 and (d, c.r % d) in by_key:
                coarse = by_key[(d, c.r % d)]
                if coarse.from_index == 0 or c.from_index == 1 or c.r >= d:
                    c.minimal = False
                    break
    return found


def retest_candidates(candidates: list, n_max: int) -> list:
    """Re-check candidates on the disjoint argument range ``(n_max, 2 n_max]``.

    Returns ``(candidate, holds)`` pairs. This is statistical evidence only.
    """
    out = []
    cache: dict = {}
    for c in candidates:
        key = (c.k, c.m)
        if key not in cache:
            cache[key] = claim_series(c.k, 2 * n_max, c.m)
        s = cache[key]
        lo = n_max + 1
        first = lo + ((c.r - lo) % c.A)
        holds = all(s[x] % c.m == 0 for x in range(first, 2 * n_max + 1, c.A))
        out.append((c, holds))
    return out


def lifting_check(p: int, j: int, r: int, ell_max: int, n_max: int) -> dict:
    """If ``PD_{p^j}(p^j n + r)`` vanishes mod ``p`` up to ``n_max``, check ``PD_{p^l}`` for ``j <= l <= ell_max``.

    Returns ``{l: holds}``; an empty dict means the premise failed.
    """
    A = p**j

    def vanishes(ell):
        s = pdk_series(p**ell, n_max, p)
        return all(s[x] % p == 0 for x in range(r, n_max + 1, A))

    if not vanishes(j):
        return {}
    return {ell: vanishes(ell) for ell in range(j, ell_max + 1)}


def instance_count(claims: list, extended: bool = False) -> int:
    return sum(len(c.instances(extended)) for c in claims)


__all__ = [
    "Candidate",
    "Claim",
    "InsufficientPrecision",
    "RegistryError",
    "check_conjectures",
    "eval_expr",
    "find_claims",
    "instance_count",
    "lifting_check",
    "load_registry",
    "mine_congruences",
    "parse_registry",
    "recurrence_pdk_mod2",
    "retest_candidates",
    "verify_claim",
    "verify_registry",
]
