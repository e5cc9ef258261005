"""Structured pass/fail records shared by every verification routine."""

import functools
import time
from dataclasses import dataclass, field
from typing import Any, Optional

PASS = "pass"
FAIL = "fail"
SKIPPED = "skipped"

EXHAUSTIVE = "exhaustive"
SAMPLED = "sampled"


@dataclass
class CheckReport:
    name: str
    status: str = PASS
    mode: str = EXHAUSTIVE
    seed: Optional[int] = None
    count: int = 0
    counterexample: Optional[tuple] = None
    reason: Optional[str] = None
    details: dict = field(default_factory=dict)
    timing_ms: float = 0.0

    def __post_init__(self):
        if self.status == FAIL and self.counterexample is None:
            raise ValueError(f"failed check {self.name!r} needs a counterexample")
        if self.mode == SAMPLED and self.seed is None:
            raise ValueError(f"sampled check {self.name!r} needs a seed")

    @property
    def passed(self):
        return self.status == PASS

    @property
    def failed(self):
        return self.status == FAIL

    @property
    def skipped(self):
        return self.status == SKIPPED

    def __bool__(self):
        return self.passed

    def to_dict(self, timing=True):
        d = {
            "name": self.name,
            "status": self.status,
            "reason": self.reason,
            "mode": self.mode,
            "seed": self.seed,
            "count": self.count,
            "counterexample": _plain(self.counterexample),
            "details": _plain(self.details),
        }
        if timing:
            d["timing_ms"] = round(self.timing_ms, 3)
        return d


def _plain(obj: Any):
    """Convert numpy scalars and tuples into JSON-friendly values."""
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if hasattr(obj, "item"):
        return obj.item()
    return obj


def failure(name, witness, **kw):
    return CheckReport(name, FAIL, counterexample=tuple(witness), **kw)


def skipped(name, reason, **kw):
    return CheckReport(name, SKIPPED, reason=reason, **kw)


def timed_check(fn):
    """Decorator stamping timing_ms on the CheckReport a function returns."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        t0 = time.perf_counter()
        rep = fn(*args, **kwargs)
        rep.timing_ms = (time.perf_counter() - t0) * 1000.0
        return rep

    return wrapper
