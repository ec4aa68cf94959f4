"""Verification reports: one record per checked instance, with counters and witnesses."""

from __future__ import annotations

import time
from contextlib import contextmanager
from dataclasses import dataclass, field

SCHEMA_VERSION = 1

PASS, FAIL, SKIP = "pass", "fail", "skip"


@dataclass
class CheckResult:
    instance: str
    status: str
    detail: str = ""
    witness: object = None

    def to_dict(self) -> dict:
        out = {"instance": self.instance, "status": self.status}
        if self.detail:
            out["detail"] = self.detail
        if self.witness is not None:
            out["witness"] = _jsonable(self.witness)
        return out


def _jsonable(x):
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if hasattr(x, "item"):
        return x.item()
    if isinstance(x, (int, float, str, bool)) or x is None:
        return x
    return str(x)


@dataclass
class VerificationReport:
    """Outcome of one proposition over many instances.

    ``skipped`` counts instances whose hypotheses failed; they are never
    counted as passes.
    """

    proposition: str
    results: list = field(default_factory=list)
    timings: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    def record(self, instance: str, ok: bool, detail: str = "", witness=None) -> bool:
        self.results.append(CheckResult(instance, PASS if ok else FAIL, detail,
                                        None if ok else witness))
        return ok

    def skip(self, instance: str, reason: str):
        self.results.append(CheckResult(instance, SKIP, reason))

    def extend(self, other: "VerificationReport", prefix: str = ""):
        for r in other.results:
            inst = f"{prefix}{r.instance}" if prefix else r.instance
            self.results.append(CheckResult(inst, r.status, r.detail, r.witness))
        for k, v in other.timings.items():
            self.timings[k] = self.timings.get(k, 0.0) + v
        self.notes.extend(n for n in other.notes if n not in self.notes)

    def _count(self, status: str) -> int:
        return sum(r.status == status for r in self.results)

    @property
    def attempted(self) -> int:
        return len(self.results)

    @property
    def passed(self) -> int:
        return self._count(PASS)

    @property
    def failed(self) -> int:
        return self._count(FAIL)

    @property
    def skipped(self) -> int:
        return self._count(SKIP)

    @property
    def ok(self) -> bool:
        return self.failed == 0

    @property
    def failures(self) -> list:
        return [r for r in self.results if r.status == FAIL]

    @contextmanager
    def timed(self, key: str = "total"):
        t0 = time.perf_counter()
        try:
            yield
        finally:
            self.timings[key] = self.timings.get(key, 0.0) + time.perf_counter() - t0

    def summary(self) -> str:
        return (f"{self.proposition}: attempted {self.attempted}, passed {self.passed}, "
                f"failed {self.failed}, skipped {self.skipped}")

    def to_dict(self, include_timings: bool = True) -> dict:
        out = {
            "proposition": self.proposition,
            "attempted": self.attempted,
            "passed": self.passed,
            "failed": self.failed,
            "skipped": self.skipped,
            "failures": [r.to_dict() for r in self.failures],
            "skips": [r.to_dict() for r in self.results if r.status == SKIP],
            "notes": list(self.notes),
        }
        if include_timings:
            out["timings"] = {k: round(v, 4) for k, v in self.timings.items()}
        return out
