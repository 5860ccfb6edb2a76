"""Verdict plumbing shared by the solvers.

A bound check records a measured left side against a certified right side;
it passes when lhs <= rhs*(1 + 1e-9), the one relative tolerance used for
recorded verdicts across the package.
"""

from __future__ import annotations

from dataclasses import dataclass, field

PASS_SLACK = 1e-9


@dataclass(frozen=True)
class BoundCheck:
    name: str
    lhs: float
    rhs: float

    @property
    def passed(self) -> bool:
        return self.lhs <= self.rhs * (1 + PASS_SLACK)

    def as_tuple(self) -> tuple[str, float, float, bool]:
        return (self.name, self.lhs, self.rhs, self.passed)


@dataclass
class SolveReport:
    residual_sup: float
    bound_checks: list[BoundCheck] = field(default_factory=list)
    constants_measured: dict[str, float] = field(default_factory=dict)
    samples: int = 0

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.bound_checks)

    def add(self, name: str, lhs: float, rhs: float) -> BoundCheck:
        check = BoundCheck(name, float(lhs), float(rhs))
        self.bound_checks.append(check)
        return check
