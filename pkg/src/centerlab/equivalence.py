"""Records of "the following statements are equivalent" checks."""

from __future__ import annotations

from dataclasses import dataclass, field

from .kernel import Value, Verdict

__all__ = ["Condition", "EquivalenceVerdict", "Status"]


class Status:
    PASS = "pass"
    DISAGREE = "disagree"
    INDETERMINATE = "indeterminate"
    SKIPPED = "skipped"


@dataclass
class Condition:
    label: str
    verdict: Verdict

    def to_json(self) -> dict:
        out = {"label": self.label, "verdict": self.verdict.value.value,
               "residual": self.verdict.ratio}
        if self.verdict.note:
            out["note"] = self.verdict.note
        return out


@dataclass
class EquivalenceVerdict:
    """One theorem evaluated on one operator.

    ``conditions`` are the statements claimed equivalent; they agree when no
    two of them are decisively opposite.  ``consequences`` are identities
    that must hold whenever the first condition holds (a decisive failure
    of one is also a disagreement).  ``hypothesis`` carries the theorem's
    standing assumption; when it fails the record is ``skipped``.
    """

    theorem: str
    n: int
    conditions: list[Condition] = field(default_factory=list)
    consequences: list[Condition] = field(default_factory=list)
    grid: list[tuple[float, float]] = field(default_factory=list)
    truncation: int | None = None
    hypothesis: Verdict | None = None

    @property
    def applicable(self) -> bool:
        return self.hypothesis is None or self.hypothesis.holds

    @property
    def agreement(self) -> bool:
        values = {c.verdict.value for c in self.conditions}
        if Value.HOLDS in values and Value.FAILS in values:
            return False
        return not any(c.verdict.fails for c in self.consequences)

    @property
    def outcome(self) -> Value:
        """The common decisive value, or indeterminate / skipped."""
        if not self.applicable:
            if self.hypothesis is not None and not self.hypothesis.fails:
                return Value.INDETERMINATE
            return Value.SKIPPED
        values = {c.verdict.value for c in self.conditions}
        if len(values) == 1:
            return values.pop()
        return Value.INDETERMINATE

    @property
    def status(self) -> str:
        if not self.applicable:
            if self.hypothesis is not None and not self.hypothesis.fails:
                return Status.INDETERMINATE
            return Status.SKIPPED
        if not self.agreement:
            return Status.DISAGREE
        if any(not c.verdict.decisive
               for c in self.conditions + self.consequences
               if c.verdict.value is not Value.SKIPPED):
            return Status.INDETERMINATE
        return Status.PASS

    def condition(self, label: str) -> Verdict:
        for c in self.conditions + self.consequences:
            if c.label == label:
                return c.verdict
        raise KeyError(label)

    def to_json(self) -> dict:
        out = {
            "theorem": self.theorem,
            "n": self.n,
            "conditions": [c.to_json() for c in self.conditions],
            "agreement": self.agreement,
            "truncation": self.truncation,
            "grid": [list(p) for p in self.grid],
            "status": self.status,
        }
        if self.consequences:
            out["consequences"] = [c.to_json() for c in self.consequences]
        if self.hypothesis is not None:
            out["hypothesis"] = self.hypothesis.to_dict()
        return out
