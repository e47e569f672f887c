"""Machine-readable outcome of checking one claim or identity."""

from __future__ import annotations

from dataclasses import dataclass, field

SCHEMA_VERSION = 1
MAX_RECORDED_FAILURES = 25


@dataclass
class VerificationReport:
    claim_id: str
    kind: str  # "congruence" | "identity"
    status: str  # proven | conjectural | stated | imported
    modulus: int | None
    n_range: tuple
    params: dict = field(default_factory=dict)
    description: str = ""
    checked: int = 0
    failures: list = field(default_factory=list)  # (n, expected, actual)
    failure_count: int = 0
    elapsed: float = 0.0

    def add_failure(self, n: int, expected: int, actual: int) -> None:
        self.failure_count += 1
        if len(self.failures) < MAX_RECORDED_FAILURES:
            self.failures.append((n, expected, actual))

    @property
    def passed(self) -> bool:
        return not self.failures

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    @property
    def conjectural(self) -> bool:
        return self.status == "conjectural"

    @property
    def label(self) -> str:
        lo, hi = self.n_range
        where = f"arguments {lo}..{hi}" if self.kind == "congruence" else f"exponents {lo}..{hi}"
        at = "argument" if self.kind == "congruence" else "exponent"
        if self.conjectural:
            if self.passed:
                return f"consistent on {where} (conjectural, not proven)"
            return f"counterexample at {at} {self.failures[0][0]} (conjecture refuted)"
        if self.passed:
            return f"verified on {where}"
        return f"failed at {at} {self.failures[0][0]}"

    def to_json(self, timings: bool = False) -> dict:
        out = {
            "schema_version": SCHEMA_VERSION,
            "claim": self.claim_id,
            "kind": self.kind,
            "status": self.status,
            "params": dict(sorted(self.params.items())),
            "modulus": self.modulus,
            "n_range": list(self.n_range),
            "description": self.description,
            "checked": self.checked,
            "verdict": self.verdict,
            "label": self.label,
            "failure_count": self.failure_count,
            "failures": [{"n": n, "expected": str(e), "actual": str(a)} for n, e, a in self.failures],
        }
        if timings:
            out["elapsed"] = round(self.elapsed, 6)
        return out

    def summary_line(self) -> str:
        params = ",".join(f"{k}={v}" for k, v in sorted(self.params.items()))
        tag = f"{self.claim_id}[{params}]" if params else self.claim_id
        return f"{self.verdict.upper():4} {tag}: {self.label} ({self.checked} checked)"
