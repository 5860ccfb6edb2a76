"""Dominating series for solution growth on l1 balls, with rigorous enclosures.

The series attaches to a scale parameter q and a finitely supported point z
the value

    sum over multi-indices k supported in supp(z) of
        (||k||^||k|| / k^k) * |q|^(#k) * |z^k|,

with the convention 0^0 = 1 (the k = 0 term is 1).  Partial sums are graded by
total degree and computed exactly (up to float rounding) in log space; tail
bounds follow from a domination argument that majorizes the series by a
geometric one with ratio eta once a per-exponent threshold is cleared.

All quantities here are plain floats.  Upper bounds carry a declared safety
inflation (`_INFLATE`) in place of directed rounding, and partial sums used as
enclosure lower ends are deflated by the same factor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

_INFLATE = 1e-12  # declared relative safety margin on enclosure ends
_SCAN_LIMIT = 200_000


@dataclass(frozen=True)
class Point:
    """Finitely supported point of the sequence space, coords 1-based.

    Exact zeros are dropped at construction so the stored support is the
    mathematical support.  The text form is ``"nu:value,nu:value"`` with
    strictly increasing coordinates; values are Python complex literals.
    """

    coords: tuple[tuple[int, complex], ...] = ()

    def __post_init__(self) -> None:
        last = 0
        for nu, val in self.coords:
            if nu <= last:
                raise ValueError("coordinates must be strictly increasing and 1-based")
            if val == 0:
                raise ValueError("zero values must not be stored")
            last = nu

    @classmethod
    def from_dict(cls, d: dict[int, complex]) -> "Point":
        return cls(tuple(sorted((nu, complex(v)) for nu, v in d.items() if v != 0)))

    @classmethod
    def zero(cls) -> "Point":
        return cls(())

    @classmethod
    def parse(cls, text: str) -> "Point":
        if text == "":
            return cls.zero()
        d: dict[int, complex] = {}
        last = 0
        for chunk in text.split(","):
            nu_s, _, val_s = chunk.partition(":")
            try:
                nu = int(nu_s)
                val = complex(val_s)
            except ValueError as exc:
                raise ValueError(f"malformed point entry {chunk!r}") from exc
            if nu <= last:
                raise ValueError("point coordinates must be strictly increasing")
            d[nu] = val
            last = nu
        return cls.from_dict(d)

    def format(self) -> str:
        def fmt(v: complex) -> str:
            if v.imag == 0:
                return repr(v.real)
            return repr(v).strip("()")

        return ",".join(f"{nu}:{fmt(v)}" for nu, v in self.coords)

    def as_dict(self) -> dict[int, complex]:
        return dict(self.coords)

    def get(self, nu: int) -> complex:
        for n, v in self.coords:
            if n == nu:
                return v
        return 0j

    @property
    def l1_norm(self) -> float:
        return float(sum(abs(v) for _, v in self.coords))

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(n for n, _ in self.coords)

    @property
    def support_size(self) -> int:
        return len(self.coords)

    def scale(self, factor: complex) -> "Point":
        if factor == 0:
            return Point.zero()
        return Point(tuple((n, v * factor) for n, v in self.coords))

    def magnitudes(self) -> list[float]:
        return [abs(v) for _, v in self.coords]


@dataclass(frozen=True)
class DeltaEnclosure:
    """Two-sided enclosure of the series value with its certificate data."""

    lower: float
    upper: float
    degree_cap: int
    eta: float
    n_split: int
    s_eta: int

    @property
    def width(self) -> float:
        return self.upper - self.lower


def s_eta(eta: float) -> int:
    """Least exponent threshold s such that (e*eta)^t * t! <= t^t for all t >= s.

    Direct search on ln a(t) = t(1 + ln eta) + ln t! - t ln t.  The scan stops
    at the first t where a(t) <= 1 and the term ratio e*eta*(1+1/t)^(-t) has
    dropped below 1; the ratio is decreasing in t, so terms decrease from
    there on and the condition holds for every later t.  The scan then walks
    back to the start of the maximal suffix with a(t) <= 1, which is the least
    valid threshold.  A strict float margin keeps borderline cases on the
    sound side.
    """
    if not 0.0 < eta < 1.0:
        raise ValueError("eta must lie in (0, 1)")
    margin = -1e-12
    log_ea = 1.0 + math.log(eta)

    def ln_a(t: int) -> float:
        return t * log_ea + math.lgamma(t + 1) - t * math.log(t)

    anchor = None
    for t in range(1, _SCAN_LIMIT):
        if ln_a(t) <= margin and log_ea <= t * math.log1p(1.0 / t):
            anchor = t
            break
    if anchor is None:
        raise RuntimeError("threshold search did not terminate")
    s = anchor
    while s > 1 and ln_a(s - 1) <= margin:
        s -= 1
    return s


def _log_rows(magnitudes: list[float], ln_q: float, cap: int) -> list[np.ndarray]:
    # per-coordinate graded series in log space:
    # row[0] = 0, row[m] = ln|q| + m ln x - m ln m
    m = np.arange(1, cap + 1, dtype=float)
    mlogm = m * np.log(m)
    rows = []
    for x in magnitudes:
        row = np.empty(cap + 1)
        row[0] = 0.0
        row[1:] = ln_q + m * math.log(x) - mlogm
        rows.append(row)
    return rows


def _log_convolve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    cap = len(a) - 1
    out = np.empty(cap + 1)
    for j in range(cap + 1):
        out[j] = np.logaddexp.reduce(a[: j + 1] + b[j::-1])
    return out


def delta_partial(q: complex, z: Point, degree_cap: int) -> float:
    """Graded partial sum of the series through total degree `degree_cap`.

    The sum over ||k|| = j factorizes as j^j times the degree-j coefficient of
    the product over supported coordinates of 1 + |q| sum_m (|z_nu| t)^m / m^m,
    so the partial sum is a truncated product of per-coordinate series,
    accumulated in log space.  This is the defining sum regrouped by grade,
    not an approximation; the combinatorial coefficient never materializes
    outside log space, so large grades do not overflow.

    Monotone in degree_cap, |q|, and each |z_nu|; equals 1 when z = 0, q = 0,
    or degree_cap = 0.
    """
    if degree_cap < 0:
        raise ValueError("degree_cap must be nonnegative")
    mags = z.magnitudes()
    aq = abs(q)
    if not mags or aq == 0.0 or degree_cap == 0:
        return 1.0
    cap = degree_cap
    rows = _log_rows(mags, math.log(aq), cap)
    acc = rows[0]
    for row in rows[1:]:
        acc = _log_convolve(acc, row)
    j = np.arange(1, cap + 1, dtype=float)
    terms = acc.copy()
    terms[1:] += j * np.log(j)
    return float(np.exp(np.logaddexp.reduce(terms)))


def _relabeled_norm_data(z: Point) -> tuple[float, int]:
    # the series depends only on the multiset of magnitudes, so the tail split
    # may always relabel the support onto the first #z coordinates
    return z.l1_norm, z.support_size


def choose_eta(z: Point) -> float:
    """Domination ratio: cube root of the l1 norm, floored at 1/2."""
    norm = z.l1_norm
    if norm >= 1.0:
        raise ValueError("the series requires ||z||_1 < 1")
    return max(norm ** (1.0 / 3.0), 0.5)


def delta_enclose(q: complex, z: Point, degree_cap: int) -> DeltaEnclosure:
    """Two-sided enclosure: graded partial sum plus a geometric tail bound.

    The tail over grades above the cap is bounded by
    Q^n * exp(n * s_eta) * eta^(cap+1) / (1 - eta) with Q = max(1, |q|) and
    n = #z; validity needs ||z|| <= eta^3 (true for the chosen eta) and an
    empty far tail, which finite support gives after relabeling.  Ends carry
    the declared safety inflation.  A point with empty support has an exact
    enclosure of width zero.
    """
    norm, n = _relabeled_norm_data(z)
    eta = choose_eta(z)
    # eta**3 can round below the norm it was derived from; the slack is
    # covered by the inflation below, the check guards real misuse
    if norm > eta**3 * (1.0 + 1e-9):
        raise ValueError("no admissible eta < 1 for this point")
    partial = delta_partial(q, z, degree_cap)
    if n == 0:
        return DeltaEnclosure(partial, partial, degree_cap, eta, 0, 0)
    s = s_eta(eta)
    big_q = max(1.0, abs(q))
    ln_tail = (
        n * math.log(big_q)
        + n * s
        + (degree_cap + 1) * math.log(eta)
        - math.log1p(-eta)
    )
    inflate = (1.0 + _INFLATE) * (1.0 + 3e-16 * (degree_cap + n + 10))
    tail = math.exp(ln_tail) * inflate if ln_tail < 700.0 else math.inf
    lower = partial * (1.0 - _INFLATE)
    upper = partial * (1.0 + _INFLATE) + tail
    return DeltaEnclosure(lower, upper, degree_cap, eta, n, s)


def cap_for_width(q: complex, z: Point, width_target: float) -> int:
    """Degree cap making the enclosure width at most `width_target`.

    Inverts the tail bound in log space with a 10 percent interior margin so
    the inflated ends still fit the target.
    """
    if width_target <= 0:
        raise ValueError("width_target must be positive")
    _, n = _relabeled_norm_data(z)
    if n == 0:
        return 0
    eta = choose_eta(z)
    s = s_eta(eta)
    big_q = max(1.0, abs(q))
    ln_budget = math.log(0.9 * width_target) + math.log1p(-eta) - n * (math.log(big_q) + s)
    cap = math.ceil(ln_budget / math.log(eta)) - 1
    return max(cap, 0)


def corollary43_measure(
    theta: float, samples: list[tuple[complex, Point]], degree_cap: int = 60
) -> float:
    """Smallest exponential-growth constant consistent with the enclosure uppers.

    Over samples (q, z) with ||z|| < theta returns

        max over samples of (ln upper(q, z) - max(0, #z ln|q|)) / #z,

    i.e. the least c with upper <= max(1, |q|)^(#z) e^(c #z) across the batch.
    Samples with empty support carry no information and are skipped; an empty
    usable batch is an error.  The measure uses the rigorous enclosure upper
    at the given cap, so it is an upper measure of the true growth constant.
    """
    if not 0.0 < theta < 1.0:
        raise ValueError("theta must lie in (0, 1)")
    usable = [(q, z) for q, z in samples if z.support_size > 0]
    if not usable:
        raise ValueError("need at least one sample with nonempty support")
    worst = -math.inf
    for q, z in usable:
        if z.l1_norm >= theta:
            raise ValueError("each sample must satisfy ||z|| < theta")
        enc = delta_enclose(q, z, degree_cap)
        n = z.support_size
        growth = n * math.log(abs(q)) if abs(q) > 1.0 else 0.0
        worst = max(worst, (math.log(enc.upper) - growth) / n)
    return worst
