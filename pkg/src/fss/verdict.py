"""Machine-readable outcome of a check."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


PASSING = {"subclass-cofibrant", "subclass-cofibration", "found"}


@dataclass
class Verdict:
    check: str
    result: Any
    witnesses: list = field(default_factory=list)
    spec: dict | None = None
    detail: dict = field(default_factory=dict)

    def __bool__(self):
        if isinstance(self.result, str):
            return self.result in PASSING
        return self.result is True

    def to_json(self) -> dict:
        out = {"check": self.check}
        if self.spec is not None:
            out["spec"] = self.spec
        out["result"] = self.result
        out["witnesses"] = _plain(self.witnesses)
        if self.detail:
            out["detail"] = _plain(self.detail)
        return out

    def summary(self) -> str:
        res = self.result if isinstance(self.result, str) else ("true" if self.result else "false")
        line = "%s: %s" % (self.check, res)
        if self.witnesses and not self:
            line += "  (%d witness%s; first: %s)" % (
                len(self.witnesses), "" if len(self.witnesses) == 1 else "es",
                _plain(self.witnesses[0]))
        return line


def _plain(x):
    """Convert verdict payloads (tuples, Verdicts, exact scalars) into JSON-ready values."""
    if isinstance(x, Verdict):
        return x.to_json()
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, (bool, int, float, str)) or x is None:
        return x
    return str(x)
