"""Check results and reports: the package's public verification contract.

A CheckResult records one verification run: sample count, pass count,
failure certificates, bounds, and seed.  Reports aggregate results and
serialize deterministically (sorted keys, no timestamps), so reruns with
identical scenario and seed are byte-identical.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field


@dataclass
class CheckResult:
    check: str
    samples: int
    passes: int
    failures: list = field(default_factory=list)
    bounds: dict = field(default_factory=dict)
    seed: object = None
    notes: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self):
        return {
            "check": self.check,
            "samples": self.samples,
            "passes": self.passes,
            "failures": self.failures,
            "bounds": self.bounds,
            "seed": self.seed,
            "notes": self.notes,
        }

    def summary_line(self) -> str:
        verdict = "pass" if self.passed else "FAIL"
        return f"{verdict:4s}  {self.check}  ({self.passes}/{self.samples})"


@dataclass
class Report:
    results: list = field(default_factory=list)

    def add(self, result: CheckResult):
        self.results.append(result)
        return result

    def extend(self, results):
        self.results.extend(results)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def to_dict(self):
        return {
            "schema": 1,
            "passed": self.passed,
            "results": [r.to_dict() for r in self.results],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    def text_summary(self) -> str:
        lines = [r.summary_line() for r in self.results]
        lines.append(
            f"{'PASS' if self.passed else 'FAIL'}: "
            f"{sum(r.passed for r in self.results)}/{len(self.results)} checks"
        )
        return "\n".join(lines) + "\n"
