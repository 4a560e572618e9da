"""Small value types for verification outcomes."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Any, Iterable


@dataclass(frozen=True)
class Check:
    """Outcome of one verification step."""

    name: str
    passed: bool
    counterexample: str | None = None
    detail: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out: dict[str, Any] = {"name": self.name, "pass": self.passed}
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        if self.detail:
            out["detail"] = self.detail
        return out

    def __bool__(self):
        return self.passed


def all_passed(checks: Iterable[Check]) -> bool:
    return all(c.passed for c in checks)


def as_dict(obj) -> dict:
    return asdict(obj)
