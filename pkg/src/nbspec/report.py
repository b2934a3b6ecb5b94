"""Verification reports and their deterministic JSON form."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

PASS = "pass"
FAIL = "fail"
NOT_APPLICABLE = "not-applicable"


@dataclass
class VerificationReport:
    check: str
    status: str
    residual: float | None = None
    hypotheses: dict[str, Any] = field(default_factory=dict)
    metadata: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.status not in (PASS, FAIL, NOT_APPLICABLE):
            raise ValueError(f"unknown status {self.status!r}")
        if self.status == FAIL and self.residual is None and "counterexample" not in self.metadata:
            raise ValueError(f"{self.check}: a failing report needs a residual or counterexample")

    @property
    def passed(self) -> bool:
        return self.status == PASS

    @property
    def failed(self) -> bool:
        return self.status == FAIL

    def to_dict(self) -> dict[str, Any]:
        return {
            "check": self.check,
            "status": self.status,
            "residual": self.residual,
            "hypotheses": self.hypotheses,
            "metadata": self.metadata,
        }


def status_of(ok: bool) -> str:
    return PASS if ok else FAIL


def _clean_float(x: float) -> float | None:
    if math.isnan(x) or math.isinf(x):
        return None
    y = float(f"{x:.12g}")
    return 0.0 if y == 0 else y


def to_jsonable(obj: Any) -> Any:
    """Normalise reports, numpy data and complex numbers into plain JSON values.

    Floats keep 12 significant digits; complex numbers become [re, im] pairs.
    """
    if hasattr(obj, "to_dict"):
        return to_jsonable(obj.to_dict())
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _clean_float(float(obj))
    if isinstance(obj, (complex, np.complexfloating)):
        return [_clean_float(obj.real), _clean_float(obj.imag)]
    return obj


def dumps(obj: Any) -> str:
    """Byte-stable JSON: sorted keys, fixed float precision."""
    return json.dumps(to_jsonable(obj), sort_keys=True, indent=2)
