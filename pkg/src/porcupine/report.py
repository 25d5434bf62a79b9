"""Structured outcome of an isomorphism verification."""

from __future__ import annotations

import json
from dataclasses import dataclass, field


@dataclass
class Failure:
    check: str
    at: str
    witness: str


@dataclass
class CheckSummary:
    name: str
    checked: int = 0
    failures: list[Failure] = field(default_factory=list)
    skipped: list[Failure] = field(default_factory=list)
    uncovered: int = 0

    def count(self, n: int = 1) -> None:
        self.checked += n

    def fail(self, at: str, witness: str) -> None:
        self.failures.append(Failure(self.name, at, witness))

    def skip(self, at: str, reason: str) -> None:
        # truncation artifacts, not counterexamples
        self.skipped.append(Failure(self.name, at, reason))

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_doc(self) -> dict:
        return {
            "status": "pass" if self.ok else "fail",
            "checked": self.checked,
            "failed": len(self.failures),
            "depth_insufficient": len(self.skipped),
            "failures": [{"at": f.at, "witness": f.witness} for f in self.failures],
        }


@dataclass
class IsoReport:
    depth: int
    index_bound: int
    samples: int
    seed: int
    complete: bool
    checks: dict[str, CheckSummary] = field(default_factory=dict)

    def add(self, summary: CheckSummary) -> None:
        self.checks[summary.name] = summary

    @property
    def passed(self) -> bool:
        return all(c.ok for c in self.checks.values())

    @property
    def failures(self) -> list[Failure]:
        return [f for c in self.checks.values() for f in c.failures]

    def coverage(self) -> float:
        su = self.checks.get("surjectivity")
        if su is None or su.checked == 0:
            return 1.0
        return (su.checked - su.uncovered) / su.checked

    def to_doc(self) -> dict:
        return {
            "status": "pass" if self.passed else "fail",
            "depth": self.depth,
            "index_bound": self.index_bound,
            "samples": self.samples,
            "seed": self.seed,
            "porcupine_complete": self.complete,
            "surjectivity_coverage": self.coverage(),
            "checks": {name: c.to_doc() for name, c in self.checks.items()},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_doc(), indent=2, sort_keys=True)

    def to_text(self, max_witnesses: int = 5) -> str:
        lines = [
            f"graded *-isomorphism check: {'PASS' if self.passed else 'FAIL'}",
            f"  depth={self.depth} index_bound={self.index_bound} samples={self.samples} seed={self.seed}"
            f" porcupine complete={self.complete}",
        ]
        for c in self.checks.values():
            extra = f", {len(c.skipped)} beyond depth" if c.skipped else ""
            lines.append(f"  {c.name:<20} {'ok' if c.ok else 'FAIL':<4} {c.checked} checked, {len(c.failures)} failed{extra}")
            for f in c.failures[:max_witnesses]:
                lines.append(f"      at {f.at}: {f.witness}")
        return "\n".join(lines) + "\n"
