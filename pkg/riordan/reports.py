import json
from typing import Any, Dict, List, Optional, Sequence

import mpmath
import pandas as pd
from mpmath.libmp import prec_to_dps
from pydantic import BaseModel, ConfigDict


class ConvergenceReport(BaseModel):
    """Partial value of a constant representation against its closed-form target."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    label: str
    term_count: int
    partial_value: Any  # mpmath.mpf at precision_bits
    target: Any  # mpmath.mpf at precision_bits
    precision_bits: int
    terms: Optional[List[Any]] = None  # per-term contributions, capped

    @property
    def abs_error(self):
        with mpmath.workprec(self.precision_bits):
            return abs(self.partial_value - self.target)

    def _decimal(self, value, digits: Optional[int]) -> str:
        return mpmath.nstr(value, digits or prec_to_dps(self.precision_bits))

    def to_payload(self, digits: Optional[int] = None) -> Dict[str, Any]:
        """JSON-ready dict; values at full precision unless digits is given."""
        payload = {
            "label": self.label,
            "terms": self.term_count,
            "partial_value": self._decimal(self.partial_value, digits),
            "target": self._decimal(self.target, digits),
            "abs_error": mpmath.nstr(self.abs_error, 6),
        }
        if self.terms is not None:
            payload["per_term"] = [self._decimal(value, digits) for value in self.terms]
        return payload


def reports_to_frame(reports: Sequence[ConvergenceReport], digits: int) -> pd.DataFrame:
    return pd.DataFrame(
        [
            {
                "terms": report.term_count,
                "partial_value": mpmath.nstr(report.partial_value, digits),
                "target": mpmath.nstr(report.target, digits),
                "abs_error": mpmath.nstr(report.abs_error, 6),
            }
            for report in reports
        ]
    )


def render_table(reports: Sequence[ConvergenceReport], digits: int) -> str:
    """One row per sweep point."""
    return reports_to_frame(reports, digits).to_string(index=False)


def render_csv(reports: Sequence[ConvergenceReport], digits: int) -> str:
    return reports_to_frame(reports, digits).to_csv(index=False)


def render_json(reports: Sequence[ConvergenceReport]) -> str:
    payloads = [report.to_payload() for report in reports]
    return json.dumps(payloads[0] if len(payloads) == 1 else payloads, indent=2)
