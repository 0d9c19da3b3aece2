"""Structured errors raised by the library.

Every error carries a machine-readable ``code`` so the CLI can report it as
JSON without string matching.
"""

from __future__ import annotations


class ToricCapError(Exception):
    code = "error"

    def to_dict(self) -> dict:
        return {"error": self.code, "message": str(self)}


class InvalidParameterError(ToricCapError, ValueError):
    code = "invalid-parameter"


class InvalidDomainError(ToricCapError, ValueError):
    code = "invalid-domain"


class DegenerateEdgeError(ToricCapError):
    """A linear form is constant along a boundary edge."""

    code = "degenerate-edge"

    def __init__(self, form, edge: int):
        self.form = form
        self.edge = edge
        super().__init__(f"form {tuple(form)} is constant on edge {edge}")

    def to_dict(self) -> dict:
        d = super().to_dict()
        d["form"] = list(self.form)
        d["edge"] = self.edge
        return d


class DegenerateTangentError(ToricCapError):
    code = "degenerate-tangent"


class InvalidThresholdError(ToricCapError, ValueError):
    code = "invalid-threshold"


class SpectrumBoundaryError(ToricCapError):
    code = "spectrum-boundary"

    def __init__(self, value):
        self.value = value
        super().__init__(f"threshold {value} lies in the action spectrum")

    def to_dict(self) -> dict:
        d = super().to_dict()
        d["value"] = str(self.value)
        return d


class ContractError(ToricCapError, ValueError):
    code = "contract"


class TruncationError(ToricCapError):
    code = "truncation"
