"""Finitely supported exponent maps and their graded enumeration.

A multi-index is a map from coordinate labels (1-based positive integers) to
positive integer exponents; absent coordinates mean exponent zero.  A signed
index allows negative exponents and records the holomorphic/antiholomorphic
bidegree difference of a monomial.  Zero exponents are never stored, so
equality of the stored pair tuples is equality of the maps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator


def _parse_pairs(text: str, what: str) -> tuple[tuple[int, int], ...]:
    if text == "":
        return ()
    pairs = []
    last_nu = 0
    for chunk in text.split(","):
        try:
            nu_s, exp_s = chunk.split(":")
            nu, exp = int(nu_s), int(exp_s)
        except ValueError as exc:
            raise ValueError(f"malformed {what} entry {chunk!r}") from exc
        if nu <= last_nu:
            raise ValueError(f"{what} coordinates must be strictly increasing, got {text!r}")
        if nu < 1:
            raise ValueError(f"{what} coordinates are 1-based, got {nu}")
        pairs.append((nu, exp))
        last_nu = nu
    return tuple(pairs)


def _format_pairs(pairs: tuple[tuple[int, int], ...]) -> str:
    return ",".join(f"{nu}:{exp}" for nu, exp in pairs)


@dataclass(frozen=True)
class MultiIndex:
    """Finitely supported map coordinate -> positive exponent.

    The text form is ``"nu:exp,nu:exp"`` with strictly increasing coordinates;
    the empty string is the zero index.
    """

    pairs: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        last = 0
        for nu, exp in self.pairs:
            if nu <= last:
                raise ValueError("coordinates must be strictly increasing and 1-based")
            if exp < 1:
                raise ValueError("stored exponents must be positive")
            last = nu

    @classmethod
    def zero(cls) -> "MultiIndex":
        return cls(())

    @classmethod
    def from_dict(cls, d: dict[int, int]) -> "MultiIndex":
        return cls(tuple(sorted((nu, exp) for nu, exp in d.items() if exp != 0)))

    @classmethod
    def single(cls, nu: int, exp: int = 1) -> "MultiIndex":
        return cls.from_dict({nu: exp})

    @classmethod
    def parse(cls, text: str) -> "MultiIndex":
        return cls(_parse_pairs(text, "multi-index"))

    def format(self) -> str:
        return _format_pairs(self.pairs)

    def as_dict(self) -> dict[int, int]:
        return dict(self.pairs)

    def get(self, nu: int) -> int:
        for n, e in self.pairs:
            if n == nu:
                return e
        return 0

    @property
    def grade(self) -> int:
        """Total degree ||k|| = sum of exponents."""
        return sum(e for _, e in self.pairs)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(n for n, _ in self.pairs)

    @property
    def support_size(self) -> int:
        """Number of coordinates with nonzero exponent (#k)."""
        return len(self.pairs)

    def add(self, other: "MultiIndex") -> "MultiIndex":
        d = self.as_dict()
        for nu, exp in other.pairs:
            d[nu] = d.get(nu, 0) + exp
        return MultiIndex.from_dict(d)

    def increment(self, nu: int, by: int = 1) -> "MultiIndex":
        d = self.as_dict()
        d[nu] = d.get(nu, 0) + by
        if d[nu] < 0:
            raise ValueError("exponent would become negative")
        return MultiIndex.from_dict(d)

    def drop_above(self, n: int) -> "MultiIndex | None":
        """Restriction helper: None if any supported coordinate exceeds n."""
        if any(nu > n for nu, _ in self.pairs):
            return None
        return self

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(self.pairs)

    def __bool__(self) -> bool:
        return bool(self.pairs)


def log_coeff(k: MultiIndex) -> float:
    """log of the combinatorial coefficient ||k||^||k|| / k^k.

    Computed in log space as ||k|| ln||k|| - sum k_nu ln k_nu with the
    empty-product convention 0^0 = 1 (zero index gives 0.0).  The value is
    nonnegative and at most ||k|| ln(#k).
    """
    s = k.grade
    if s == 0:
        return 0.0
    return s * math.log(s) - sum(e * math.log(e) for _, e in k.pairs)


def enumerate_graded(dims: int, max_grade: int) -> list[MultiIndex]:
    """All multi-indices supported in coordinates 1..dims with grade <= max_grade.

    Graded order: ascending total degree; within a degree, ascending
    lexicographic on the dense exponent vector (k_1, ..., k_dims).  The order
    is deterministic and is the enumeration order contract for truncations.
    """
    if dims < 0 or max_grade < 0:
        raise ValueError("dims and max_grade must be nonnegative")
    out: list[MultiIndex] = []
    for grade in range(max_grade + 1):
        for vec in _compositions(grade, dims):
            out.append(MultiIndex(tuple((i + 1, e) for i, e in enumerate(vec) if e)))
    return out


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    # weak compositions of `total` into `parts` slots, lexicographically ascending
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


@dataclass(frozen=True)
class SignedIndex:
    """Finitely supported map coordinate -> nonzero integer exponent.

    Records the bidegree difference alpha - beta of a monomial z^alpha
    zbar^beta.  Same text form as MultiIndex but entries may be negative.
    """

    pairs: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        last = 0
        for nu, exp in self.pairs:
            if nu <= last:
                raise ValueError("coordinates must be strictly increasing and 1-based")
            if exp == 0:
                raise ValueError("stored exponents must be nonzero")
            last = nu

    @classmethod
    def zero(cls) -> "SignedIndex":
        return cls(())

    @classmethod
    def from_dict(cls, d: dict[int, int]) -> "SignedIndex":
        return cls(tuple(sorted((nu, exp) for nu, exp in d.items() if exp != 0)))

    @classmethod
    def from_difference(cls, alpha: MultiIndex, beta: MultiIndex) -> "SignedIndex":
        d = alpha.as_dict()
        for nu, exp in beta.pairs:
            d[nu] = d.get(nu, 0) - exp
        return cls.from_dict(d)

    @classmethod
    def parse(cls, text: str) -> "SignedIndex":
        return cls(_parse_pairs(text, "signed index"))

    def format(self) -> str:
        return _format_pairs(self.pairs)

    def as_dict(self) -> dict[int, int]:
        return dict(self.pairs)

    def get(self, nu: int) -> int:
        for n, e in self.pairs:
            if n == nu:
                return e
        return 0

    @property
    def is_nonnegative(self) -> bool:
        return all(e > 0 for _, e in self.pairs)

    @property
    def grade(self) -> int:
        """Sum of entries; for a nonnegative index this is ||k||."""
        return sum(e for _, e in self.pairs)

    @property
    def support_size(self) -> int:
        return len(self.pairs)

    @property
    def max_abs(self) -> int:
        return max((abs(e) for _, e in self.pairs), default=0)

    def positive_part(self) -> MultiIndex:
        return MultiIndex(tuple((n, e) for n, e in self.pairs if e > 0))

    def negative_part(self) -> MultiIndex:
        return MultiIndex(tuple((n, -e) for n, e in self.pairs if e < 0))

    def to_multiindex(self) -> MultiIndex:
        if not self.is_nonnegative:
            raise ValueError("signed index has negative entries")
        return MultiIndex(self.pairs)

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(self.pairs)

    def __bool__(self) -> bool:
        return bool(self.pairs)
