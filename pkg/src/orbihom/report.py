"""Verdict reports: named assertions with left and right values."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Assertion:
    """One checked statement with both compared values rendered."""

    statement: str
    left: str
    right: str
    passed: bool


@dataclass
class VerdictReport:
    """Outcome of one check: passes iff every assertion passes."""

    check: str
    subject: str
    assertions: list[Assertion] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(a.passed for a in self.assertions)

    def render(self, color: bool = False) -> str:
        def mark(ok: bool) -> str:
            word = "PASS" if ok else "FAIL"
            if not color:
                return word
            code = "32" if ok else "31"
            return f"\x1b[{code}m{word}\x1b[0m"

        lines = [f"check {self.check} on {self.subject}"]
        for a in self.assertions:
            relation = "==" if a.passed else "!="
            lines.append(f"  {mark(a.passed)} {a.statement}: "
                         f"{a.left} {relation} {a.right}")
        for note in self.notes:
            lines.append(f"  note: {note}")
        lines.append(f"RESULT {mark(self.passed)}")
        return "\n".join(lines)

    def to_json(self) -> dict:
        return {
            "check": self.check,
            "subject": self.subject,
            "passed": self.passed,
            "assertions": [
                {"statement": a.statement, "left": a.left,
                 "right": a.right, "passed": a.passed}
                for a in self.assertions
            ],
            "notes": list(self.notes),
        }
