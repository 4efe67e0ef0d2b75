"""Verification reports and their deterministic JSON form."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

PASS = "pass"
FAIL = "fail"
HYPOTHESIS_FAILURE = "hypothesis_failure"


def _clean(value: Any) -> Any:
    # JSON has no inf/nan; numpy scalars and arrays become plain Python
    if isinstance(value, dict):
        return {str(k): _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    if isinstance(value, np.ndarray):
        return _clean(value.tolist())
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return value
    if isinstance(value, complex):
        return {"re": _clean(value.real), "im": _clean(value.imag)}
    return value


@dataclass
class VerificationReport:
    """Outcome of one verification check.

    ``margin`` is the smallest slack over all checked inequalities (negative
    means violated); ``status`` separates numerical failures from cases whose
    hypotheses were not met by the evidence.
    """

    name: str
    inputs: dict = field(default_factory=dict)
    measured: dict = field(default_factory=dict)
    bound: dict = field(default_factory=dict)
    constants: dict = field(default_factory=dict)
    passed: bool = False
    margin: float = float("nan")
    status: str = FAIL
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return _clean({
            "name": self.name,
            "inputs": self.inputs,
            "measured": self.measured,
            "bound": self.bound,
            "constants": self.constants,
            "pass": self.passed,
            "margin": self.margin,
            "status": self.status,
            "notes": self.notes,
        })

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"


def finish(report: VerificationReport, margin: float, tol: float = 0.0) -> VerificationReport:
    """Set ``margin``/``passed``/``status`` from the worst slack."""
    report.margin = float(margin)
    report.passed = bool(margin >= -tol)
    report.status = PASS if report.passed else FAIL
    return report


def hypothesis_failure(report: VerificationReport, reason: str) -> VerificationReport:
    report.passed = False
    report.status = HYPOTHESIS_FAILURE
    report.notes.append(reason)
    return report
