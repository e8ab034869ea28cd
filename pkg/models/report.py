"""
Check report data models
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Iterable, List

SCHEMA_VERSION = 1


class Verdict(str, Enum):
    """Outcome of a check"""
    PASS = "pass"
    FAIL = "fail"

    @property
    def norwegian(self) -> str:
        """Get Norwegian translation of verdict"""
        return {Verdict.PASS: "GODKJENT", Verdict.FAIL: "FEILET"}[self]


@dataclass
class Clause:
    """One named condition of a check, with witnesses when it fails"""

    name: str
    passed: bool
    detail: str = ""
    witnesses: List[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        """Convert to dictionary for JSON serialization"""
        return {
            "name": self.name,
            "passed": self.passed,
            "detail": self.detail,
            "witnesses": list(self.witnesses),
        }

    def __str__(self) -> str:
        mark = "ok" if self.passed else "FAIL"
        text = f"[{mark}] {self.name}"
        if self.detail:
            text += f": {self.detail}"
        return text


@dataclass
class Report:
    """Result of a report-style operation: verdict, clauses and a structured body"""

    command: str
    clauses: List[Clause] = field(default_factory=list)
    body: Dict[str, Any] = field(default_factory=dict)

    def add(self, name: str, passed: bool, detail: str = "", witnesses: Iterable[str] = ()) -> Clause:
        clause = Clause(name=name, passed=passed, detail=detail, witnesses=list(witnesses))
        self.clauses.append(clause)
        return clause

    def add_witnessed(self, name: str, witnesses: List[str], detail: str = "") -> Clause:
        """Add a clause that passes iff no witnesses were collected"""
        if witnesses and not detail:
            detail = f"{len(witnesses)} failure(s)"
        return self.add(name, not witnesses, detail, witnesses)

    def extend(self, other: "Report", prefix: str = "") -> None:
        """Append the clauses of another report, optionally namespaced"""
        for clause in other.clauses:
            name = f"{prefix}{clause.name}" if prefix else clause.name
            self.clauses.append(Clause(name, clause.passed, clause.detail, list(clause.witnesses)))

    @property
    def verdict(self) -> Verdict:
        return Verdict.PASS if all(c.passed for c in self.clauses) else Verdict.FAIL

    @property
    def passed(self) -> bool:
        return self.verdict == Verdict.PASS

    def failing(self) -> List[Clause]:
        return [c for c in self.clauses if not c.passed]

    def clause(self, name: str) -> Clause:
        """Look up a clause by name"""
        for c in self.clauses:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        """Convert to dictionary for JSON serialization"""
        return {
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "verdict": self.verdict.value,
            "clauses": [c.to_dict() for c in self.clauses],
            "body": self.body,
        }

    def to_text(self) -> str:
        """Human readable rendering: verdict line, clauses, witnesses of failures"""
        lines = [f"{self.command}: {self.verdict.value} ({self.verdict.norwegian})"]
        for clause in self.clauses:
            lines.append(f"  {clause}")
            if not clause.passed:
                lines.extend(f"      - {w}" for w in clause.witnesses)
        return "\n".join(lines)

    def __str__(self) -> str:
        return self.to_text()
