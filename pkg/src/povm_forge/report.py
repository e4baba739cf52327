"""Verification report record used by every ``check_*`` function."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass
class CheckReport:
    check: str
    max_error: float
    tolerance: float
    passed: bool
    details: dict[str, Any] = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.passed

    def to_dict(self) -> dict[str, Any]:
        out = {
            "check": self.check,
            "max_error": float(self.max_error),
            "tolerance": float(self.tolerance),
            "pass": bool(self.passed),
        }
        if self.details:
            out["details"] = _jsonable(self.details)
        return out

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.check}: max_error={self.max_error:.3e} tol={self.tolerance:.1e}"


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if hasattr(obj, "item") and getattr(obj, "ndim", 1) == 0:
        return obj.item()
    if hasattr(obj, "tolist"):
        return obj.tolist()
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj


def max_abs(a) -> float:
    import numpy as np

    a = np.asarray(a)
    return float(np.max(np.abs(a))) if a.size else 0.0
