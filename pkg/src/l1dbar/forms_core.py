"""Exact polynomial and rational calculus in finitely many variables.

Functions are polynomials in coordinates z_nu and their conjugates with
Gaussian-rational coefficients, so conjugate-derivative algebra, closedness
checks, and antidifferentiation are symbolically exact; no floating residual
enters until evaluation.  Rational functions extend this with denominator
powers of (R - z_N) and (R - conj z_N) for a single distinguished coordinate,
which is the shape produced by central projection toward a slicing plane.

(0,1)-forms carry one polynomial (or rational) component per conjugate
differential.  `particular_solution` inverts the conjugate differential on
closed polynomial forms by descending antidifferentiation; the result is a
polynomial with exactly zero residual.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iter_product
from typing import Callable, Iterable, Sequence

import numpy as np

from .delta import Point
from .multiindex import MultiIndex, SignedIndex

Number = "int | float | complex | Fraction | QC"


@dataclass(frozen=True)
class QC:
    """Gaussian rational: exact complex number with Fraction parts."""

    re: Fraction
    im: Fraction

    @classmethod
    def of(cls, value) -> "QC":
        if isinstance(value, QC):
            return value
        if isinstance(value, complex):
            return cls(Fraction(value.real), Fraction(value.imag))
        return cls(Fraction(value), Fraction(0))

    @classmethod
    def zero(cls) -> "QC":
        return cls(Fraction(0), Fraction(0))

    @classmethod
    def one(cls) -> "QC":
        return cls(Fraction(1), Fraction(0))

    @property
    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def __add__(self, other) -> "QC":
        o = QC.of(other)
        return QC(self.re + o.re, self.im + o.im)

    def __sub__(self, other) -> "QC":
        o = QC.of(other)
        return QC(self.re - o.re, self.im - o.im)

    def __neg__(self) -> "QC":
        return QC(-self.re, -self.im)

    def __mul__(self, other) -> "QC":
        o = QC.of(other)
        return QC(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    def __truediv__(self, other) -> "QC":
        o = QC.of(other)
        d = o.re * o.re + o.im * o.im
        if d == 0:
            raise ZeroDivisionError("division by exact zero")
        return QC((self.re * o.re + self.im * o.im) / d, (self.im * o.re - self.re * o.im) / d)

    def __pow__(self, n: int) -> "QC":
        if n < 0:
            return QC.one() / self**-n
        out = QC.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def conj(self) -> "QC":
        return QC(self.re, -self.im)

    def to_complex(self) -> complex:
        return complex(self.re) + 1j * complex(self.im)

    def __repr__(self) -> str:
        return f"QC({self.re}, {self.im})"


TermKey = tuple[MultiIndex, MultiIndex]


def _norm_terms(terms: dict[TermKey, QC]) -> dict[TermKey, QC]:
    return {key: c for key, c in terms.items() if not c.is_zero}


class PolyFunction:
    """Polynomial in z_1..z_dim and their conjugates, exact coefficients.

    Terms map (holomorphic exponents, antiholomorphic exponents) to QC.
    """

    __slots__ = ("dim", "terms")

    def __init__(self, dim: int, terms: dict[TermKey, QC] | None = None):
        if dim < 0:
            raise ValueError("dim must be nonnegative")
        terms = _norm_terms(terms or {})
        for alpha, beta in terms:
            top = max((nu for nu, _ in tuple(alpha) + tuple(beta)), default=0)
            if top > dim:
                raise ValueError(f"coordinate {top} outside dimension {dim}")
        self.dim = dim
        self.terms = terms

    @classmethod
    def zero(cls, dim: int) -> "PolyFunction":
        return cls(dim, {})

    @classmethod
    def const(cls, dim: int, value) -> "PolyFunction":
        return cls(dim, {(MultiIndex.zero(), MultiIndex.zero()): QC.of(value)})

    @classmethod
    def coordinate(cls, dim: int, nu: int) -> "PolyFunction":
        return cls(dim, {(MultiIndex.single(nu), MultiIndex.zero()): QC.one()})

    @classmethod
    def conj_coordinate(cls, dim: int, nu: int) -> "PolyFunction":
        return cls(dim, {(MultiIndex.zero(), MultiIndex.single(nu)): QC.one()})

    @classmethod
    def monomial(cls, dim: int, alpha: MultiIndex, beta: MultiIndex, coeff=1) -> "PolyFunction":
        return cls(dim, {(alpha, beta): QC.of(coeff)})

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_holomorphic(self) -> bool:
        return all(not beta for _, beta in self.terms)

    def add(self, other: "PolyFunction") -> "PolyFunction":
        out = dict(self.terms)
        for key, c in other.terms.items():
            out[key] = out.get(key, QC.zero()) + c
        return PolyFunction(max(self.dim, other.dim), out)

    def sub(self, other: "PolyFunction") -> "PolyFunction":
        return self.add(other.scale(-1))

    def scale(self, value) -> "PolyFunction":
        c = QC.of(value)
        return PolyFunction(self.dim, {key: v * c for key, v in self.terms.items()})

    def mul(self, other: "PolyFunction") -> "PolyFunction":
        out: dict[TermKey, QC] = {}
        for (a1, b1), c1 in self.terms.items():
            for (a2, b2), c2 in other.terms.items():
                key = (a1.add(a2), b1.add(b2))
                out[key] = out.get(key, QC.zero()) + c1 * c2
        return PolyFunction(max(self.dim, other.dim), out)

    def conj(self) -> "PolyFunction":
        return PolyFunction(
            self.dim, {(beta, alpha): c.conj() for (alpha, beta), c in self.terms.items()}
        )

    def ddz(self, nu: int) -> "PolyFunction":
        out: dict[TermKey, QC] = {}
        for (alpha, beta), c in self.terms.items():
            e = alpha.get(nu)
            if e:
                key = (alpha.increment(nu, -1), beta)
                out[key] = out.get(key, QC.zero()) + c * e
        return PolyFunction(self.dim, out)

    def ddzbar(self, nu: int) -> "PolyFunction":
        out: dict[TermKey, QC] = {}
        for (alpha, beta), c in self.terms.items():
            e = beta.get(nu)
            if e:
                key = (alpha, beta.increment(nu, -1))
                out[key] = out.get(key, QC.zero()) + c * e
        return PolyFunction(self.dim, out)

    def antidiff_conj(self, nu: int) -> "PolyFunction":
        """Antiderivative in conj z_nu: conjugate derivative returns self."""
        out: dict[TermKey, QC] = {}
        for (alpha, beta), c in self.terms.items():
            e = beta.get(nu) + 1
            out[(alpha, beta.increment(nu))] = c / e
        return PolyFunction(self.dim, out)

    def dbar(self) -> "PolyForm":
        comps = {}
        for nu in range(1, self.dim + 1):
            d = self.ddzbar(nu)
            if not d.is_zero:
                comps[nu] = d
        return PolyForm(self.dim, comps)

    def substitute(self, nu: int, value) -> "PolyFunction":
        """Set z_nu to a constant (and its conjugate accordingly)."""
        v = QC.of(value)
        vbar = v.conj()
        out: dict[TermKey, QC] = {}
        for (alpha, beta), c in self.terms.items():
            c2 = c * v ** alpha.get(nu) * vbar ** beta.get(nu)
            key = (alpha.increment(nu, -alpha.get(nu)), beta.increment(nu, -beta.get(nu)))
            out[key] = out.get(key, QC.zero()) + c2
        return PolyFunction(self.dim, out)

    def restrict_to(self, n: int) -> "PolyFunction":
        """Set z_nu = 0 for every nu > n; result lives in dimension n."""
        out: dict[TermKey, QC] = {}
        for (alpha, beta), c in self.terms.items():
            if alpha.drop_above(n) is None or beta.drop_above(n) is None:
                continue
            out[(alpha, beta)] = c
        return PolyFunction(n, out)

    def fourier_split(self) -> dict[SignedIndex, "PolyFunction"]:
        """Group terms by rotation frequency alpha - beta."""
        out: dict[SignedIndex, dict[TermKey, QC]] = {}
        for (alpha, beta), c in self.terms.items():
            k = SignedIndex.from_difference(alpha, beta)
            out.setdefault(k, {})[(alpha, beta)] = c
        return {k: PolyFunction(self.dim, terms) for k, terms in out.items()}

    def eval_exact(self, values: dict[int, QC]) -> QC:
        total = QC.zero()
        for (alpha, beta), c in self.terms.items():
            term = c
            for nu, e in alpha:
                term = term * values.get(nu, QC.zero()) ** e
            for nu, e in beta:
                term = term * values.get(nu, QC.zero()).conj() ** e
            total = total + term
        return total

    def eval(self, z: "Point | dict[int, complex]") -> complex:
        zd = z.as_dict() if isinstance(z, Point) else z
        total = 0j
        for (alpha, beta), c in self.terms.items():
            term = c.to_complex()
            for nu, e in alpha:
                term *= zd.get(nu, 0j) ** e
            for nu, e in beta:
                term *= zd.get(nu, 0j).conjugate() ** e
            total += term
        return total

    def eval_arrays(self, zs: np.ndarray) -> np.ndarray:
        """Vectorized evaluation; zs has shape (..., dim), coordinate nu at
        index nu-1."""
        zs = np.asarray(zs, dtype=complex)
        total = np.zeros(zs.shape[:-1], dtype=complex)
        for (alpha, beta), c in self.terms.items():
            term = np.full(zs.shape[:-1], c.to_complex())
            for nu, e in alpha:
                term = term * zs[..., nu - 1] ** e
            for nu, e in beta:
                term = term * np.conj(zs[..., nu - 1]) ** e
            total += term
        return total

    def max_degree(self) -> int:
        return max((a.grade + b.grade for a, b in self.terms), default=0)

    def equals(self, other: "PolyFunction") -> bool:
        return self.sub(other).is_zero

    def __repr__(self) -> str:
        if not self.terms:
            return "PolyFunction(0)"
        bits = []
        for (alpha, beta), c in sorted(
            self.terms.items(), key=lambda kv: (kv[0][0].pairs, kv[0][1].pairs)
        ):
            z = f"z^({alpha.format()})" if alpha else ""
            zb = f"zbar^({beta.format()})" if beta else ""
            bits.append(f"{c}{z}{zb}")
        return "PolyFunction(" + " + ".join(bits) + ")"


class PolyForm:
    """(0,1)-form with polynomial components, one per conjugate differential."""

    __slots__ = ("dim", "comps")

    def __init__(self, dim: int, comps: dict[int, PolyFunction] | None = None):
        comps = {nu: f for nu, f in (comps or {}).items() if not f.is_zero}
        for nu in comps:
            if not 1 <= nu <= dim:
                raise ValueError(f"component index {nu} outside dimension {dim}")
        self.dim = dim
        self.comps = comps

    @classmethod
    def zero(cls, dim: int) -> "PolyForm":
        return cls(dim, {})

    def component(self, nu: int) -> PolyFunction:
        return self.comps.get(nu, PolyFunction.zero(self.dim))

    @property
    def is_zero(self) -> bool:
        return not self.comps

    def add(self, other: "PolyForm") -> "PolyForm":
        dim = max(self.dim, other.dim)
        out = {}
        for nu in set(self.comps) | set(other.comps):
            out[nu] = self.component(nu).add(other.component(nu))
        return PolyForm(dim, out)

    def sub(self, other: "PolyForm") -> "PolyForm":
        return self.add(other.scale(-1))

    def scale(self, value) -> "PolyForm":
        return PolyForm(self.dim, {nu: f.scale(value) for nu, f in self.comps.items()})

    def is_closed(self) -> bool:
        """Exact symmetry of mixed conjugate derivatives."""
        active = sorted(self.comps)
        for i, mu in enumerate(active):
            for nu in active[i + 1 :]:
                if not self.comps[mu].ddzbar(nu).equals(self.comps[nu].ddzbar(mu)):
                    return False
        # a component differentiated along a direction with no component
        # must vanish there
        for mu in active:
            for nu in range(1, self.dim + 1):
                if nu not in self.comps and not self.comps[mu].ddzbar(nu).is_zero:
                    return False
        return True

    def eval(self, z: "Point | dict[int, complex]") -> dict[int, complex]:
        return {nu: f.eval(z) for nu, f in self.comps.items()}

    def restrict_to(self, n: int) -> "PolyForm":
        out = {}
        for nu, f in self.comps.items():
            if nu <= n:
                out[nu] = f.restrict_to(n)
        return PolyForm(n, out)

    def equals(self, other: "PolyForm") -> bool:
        return self.sub(other).is_zero


def particular_solution(f: PolyForm) -> PolyFunction:
    """Exact polynomial u with conjugate differential equal to f.

    Requires f closed; antidifferentiates along the largest active conjugate
    direction and recurses on the exactly-cancelled remainder, which involves
    strictly fewer conjugate directions each round.
    """
    if not f.is_closed():
        raise ValueError("form is not closed; no polynomial solution exists")
    u = PolyFunction.zero(f.dim)
    rest = f
    while not rest.is_zero:
        nu = max(rest.comps)
        u0 = rest.comps[nu].antidiff_conj(nu)
        rest = rest.sub(u0.dbar())
        if not rest.component(nu).is_zero:
            raise AssertionError("antidifferentiation failed to cancel a component")
        u = u.add(u0)
    return u


class RationalPolyFunction:
    """PolyFunction divided by (R - z_N)^dh (R - conj z_N)^da.

    The pole sits on one distinguished coordinate N; R is an exact positive
    rational.  Closed under the arithmetic needed by central projection:
    sums, products, both first derivatives, substitution, conjugation.
    """

    __slots__ = ("num", "pole", "big_r", "dh", "da")

    def __init__(self, num: PolyFunction, pole: int, big_r, dh: int = 0, da: int = 0):
        if dh < 0 or da < 0:
            raise ValueError("denominator powers must be nonnegative")
        big_r = Fraction(big_r)
        if big_r <= 0:
            raise ValueError("R must be positive")
        if num.is_zero:
            dh = da = 0
        self.num = num
        self.pole = pole
        self.big_r = big_r
        self.dh = dh
        self.da = da

    @classmethod
    def from_poly(cls, num: PolyFunction, pole: int, big_r) -> "RationalPolyFunction":
        return cls(num, pole, big_r)

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    def _pole_factor(self, conjugate: bool) -> PolyFunction:
        coord = (
            PolyFunction.conj_coordinate(self.num.dim, self.pole)
            if conjugate
            else PolyFunction.coordinate(self.num.dim, self.pole)
        )
        return PolyFunction.const(self.num.dim, self.big_r).sub(coord)

    def lifted_num(self, dh: int, da: int) -> PolyFunction:
        """Numerator after raising to denominator powers (dh, da)."""
        if dh < self.dh or da < self.da:
            raise ValueError("cannot lower denominator powers")
        out = self.num
        for _ in range(dh - self.dh):
            out = out.mul(self._pole_factor(False))
        for _ in range(da - self.da):
            out = out.mul(self._pole_factor(True))
        return out

    def _check_compatible(self, other: "RationalPolyFunction") -> None:
        if self.pole != other.pole or self.big_r != other.big_r:
            raise ValueError("incompatible pole data")

    def add(self, other: "RationalPolyFunction") -> "RationalPolyFunction":
        self._check_compatible(other)
        dh, da = max(self.dh, other.dh), max(self.da, other.da)
        num = self.lifted_num(dh, da).add(other.lifted_num(dh, da))
        return RationalPolyFunction(num, self.pole, self.big_r, dh, da)

    def sub(self, other: "RationalPolyFunction") -> "RationalPolyFunction":
        return self.add(other.scale(-1))

    def scale(self, value) -> "RationalPolyFunction":
        return RationalPolyFunction(
            self.num.scale(value), self.pole, self.big_r, self.dh, self.da
        )

    def mul(self, other: "RationalPolyFunction") -> "RationalPolyFunction":
        self._check_compatible(other)
        return RationalPolyFunction(
            self.num.mul(other.num),
            self.pole,
            self.big_r,
            self.dh + other.dh,
            self.da + other.da,
        )

    def conj(self) -> "RationalPolyFunction":
        return RationalPolyFunction(
            self.num.conj(), self.pole, self.big_r, self.da, self.dh
        )

    def ddz(self, nu: int) -> "RationalPolyFunction":
        if nu != self.pole or self.dh == 0:
            return RationalPolyFunction(
                self.num.ddz(nu), self.pole, self.big_r, self.dh, self.da
            )
        num = self.num.ddz(nu).mul(self._pole_factor(False)).add(self.num.scale(self.dh))
        return RationalPolyFunction(num, self.pole, self.big_r, self.dh + 1, self.da)

    def ddzbar(self, nu: int) -> "RationalPolyFunction":
        if nu != self.pole or self.da == 0:
            return RationalPolyFunction(
                self.num.ddzbar(nu), self.pole, self.big_r, self.dh, self.da
            )
        num = self.num.ddzbar(nu).mul(self._pole_factor(True)).add(self.num.scale(self.da))
        return RationalPolyFunction(num, self.pole, self.big_r, self.dh, self.da + 1)

    def substitute(self, nu: int, value) -> "RationalPolyFunction":
        v = QC.of(value)
        if nu != self.pole:
            return RationalPolyFunction(
                self.num.substitute(nu, v), self.pole, self.big_r, self.dh, self.da
            )
        rq = QC(self.big_r, Fraction(0))
        denom = (rq - v) ** self.dh * (rq - v.conj()) ** self.da
        num = self.num.substitute(nu, v).scale(QC.one() / denom)
        return RationalPolyFunction(num, self.pole, self.big_r, 0, 0)

    def eval(self, z: "Point | dict[int, complex]") -> complex:
        zd = z.as_dict() if isinstance(z, Point) else z
        w = zd.get(self.pole, 0j)
        r = float(self.big_r)
        return self.num.eval(zd) / ((r - w) ** self.dh * (r - w.conjugate()) ** self.da)

    def eval_arrays(self, zs: np.ndarray) -> np.ndarray:
        zs = np.asarray(zs, dtype=complex)
        w = zs[..., self.pole - 1]
        r = float(self.big_r)
        denom = (r - w) ** self.dh * (r - np.conj(w)) ** self.da
        return self.num.eval_arrays(zs) / denom

    def equals(self, other: "RationalPolyFunction") -> bool:
        return self.sub(other).is_zero

    def __repr__(self) -> str:
        return (
            f"RationalPolyFunction({self.num!r} / "
            f"(R-z{self.pole})^{self.dh}(R-zbar{self.pole})^{self.da}, R={self.big_r})"
        )


class RationalForm:
    """(0,1)-form with rational components sharing one pole coordinate."""

    __slots__ = ("dim", "pole", "big_r", "comps")

    def __init__(
        self,
        dim: int,
        pole: int,
        big_r,
        comps: dict[int, RationalPolyFunction] | None = None,
    ):
        self.dim = dim
        self.pole = pole
        self.big_r = Fraction(big_r)
        self.comps = {nu: f for nu, f in (comps or {}).items() if not f.is_zero}

    @classmethod
    def from_polyform(cls, f: PolyForm, pole: int, big_r) -> "RationalForm":
        return cls(
            f.dim,
            pole,
            big_r,
            {nu: RationalPolyFunction.from_poly(g, pole, big_r) for nu, g in f.comps.items()},
        )

    def component(self, nu: int) -> RationalPolyFunction:
        got = self.comps.get(nu)
        if got is not None:
            return got
        return RationalPolyFunction(PolyFunction.zero(self.dim), self.pole, self.big_r)

    @property
    def is_zero(self) -> bool:
        return not self.comps

    def add(self, other: "RationalForm") -> "RationalForm":
        out = {}
        for nu in set(self.comps) | set(other.comps):
            out[nu] = self.component(nu).add(other.component(nu))
        return RationalForm(max(self.dim, other.dim), self.pole, self.big_r, out)

    def sub(self, other: "RationalForm") -> "RationalForm":
        return self.add(other.scale(-1))

    def scale(self, value) -> "RationalForm":
        return RationalForm(
            self.dim, self.pole, self.big_r, {nu: f.scale(value) for nu, f in self.comps.items()}
        )

    def is_closed(self) -> bool:
        active = sorted(self.comps)
        for i, mu in enumerate(active):
            for nu in active[i + 1 :]:
                if not self.comps[mu].ddzbar(nu).equals(self.comps[nu].ddzbar(mu)):
                    return False
        for mu in active:
            for nu in range(1, self.dim + 1):
                if nu not in self.comps and not self.comps[mu].ddzbar(nu).is_zero:
                    return False
        return True

    def eval(self, z: "Point | dict[int, complex]") -> dict[int, complex]:
        return {nu: f.eval(z) for nu, f in self.comps.items()}


class SigmaMap:
    """Holomorphic self-map with rational components sharing one pole.

    Missing coordinates act as the identity.  Components must be holomorphic:
    numerators free of conjugates and no antiholomorphic denominator power.
    """

    __slots__ = ("dim", "pole", "big_r", "comps")

    def __init__(
        self, dim: int, pole: int, big_r, comps: dict[int, RationalPolyFunction]
    ):
        for nu, f in comps.items():
            if f.da != 0 or not f.num.is_holomorphic:
                raise ValueError(f"component {nu} is not holomorphic")
        self.dim = dim
        self.pole = pole
        self.big_r = Fraction(big_r)
        self.comps = dict(comps)

    def component(self, nu: int) -> RationalPolyFunction:
        got = self.comps.get(nu)
        if got is not None:
            return got
        return RationalPolyFunction.from_poly(
            PolyFunction.coordinate(self.dim, nu), self.pole, self.big_r
        )

    def apply(self, z: "Point | dict[int, complex]") -> dict[int, complex]:
        zd = z.as_dict() if isinstance(z, Point) else z
        out = dict(zd)
        for nu in range(1, self.dim + 1):
            out[nu] = self.component(nu).eval(zd)
        return out

    def compose_poly(self, p: PolyFunction) -> RationalPolyFunction:
        """p after the substitution z -> sigma(z), conj z -> conj sigma(z)."""
        total = RationalPolyFunction(PolyFunction.zero(self.dim), self.pole, self.big_r)
        for (alpha, beta), c in p.terms.items():
            term = RationalPolyFunction.from_poly(
                PolyFunction.const(self.dim, c), self.pole, self.big_r
            )
            for nu, e in alpha:
                comp = self.component(nu)
                for _ in range(e):
                    term = term.mul(comp)
            for nu, e in beta:
                comp = self.component(nu).conj()
                for _ in range(e):
                    term = term.mul(comp)
            total = total.add(term)
        return total

    def pullback(self, f: PolyForm) -> RationalForm:
        """Pullback of a (0,1)-form: component nu is
        sum_mu (f_mu after sigma) * conj(d sigma_mu / d z_nu)."""
        out: dict[int, RationalPolyFunction] = {}
        for nu in range(1, self.dim + 1):
            total = RationalPolyFunction(PolyFunction.zero(self.dim), self.pole, self.big_r)
            for mu, fmu in f.comps.items():
                deriv = self.component(mu).ddz(nu)
                if deriv.is_zero:
                    continue
                total = total.add(self.compose_poly(fmu).mul(deriv.conj()))
            if not total.is_zero:
                out[nu] = total
        return RationalForm(self.dim, self.pole, self.big_r, out)


def ball_samples(dim: int, radius: float, count: int, seed: int = 0) -> np.ndarray:
    """Points of the open l1 ball, shape (count, dim).

    Magnitudes by a flat Dirichlet split of a radius drawn toward the
    boundary, independent phases; covers the sup reasonably without
    clustering at the center.
    """
    rng = np.random.default_rng(seed)
    mags = rng.dirichlet(np.ones(dim), size=count)
    scale = radius * (1 - 1e-9) * rng.uniform(0, 1, size=count) ** (1 / (2 * dim))
    phases = np.exp(2j * np.pi * rng.uniform(0, 1, size=(count, dim)))
    return mags * scale[:, None] * phases


ArrayFun = Callable[[np.ndarray], np.ndarray]


def seminorm_estimate(
    fns: Sequence[ArrayFun],
    dim: int,
    radius: float,
    count: int = 400,
    seed: int = 0,
    step: float = 1e-4,
) -> tuple[float, float]:
    """Sampled sup norm and first-derivative seminorm of a component family.

    Returns (sup of |fn| over ball samples, sup of centered difference
    quotients along every real coordinate direction).  Both are lower bounds
    of the true seminorms; sampling is deterministic in the seed.
    """
    zs = ball_samples(dim, radius, count, seed)
    sup0 = 0.0
    for fn in fns:
        sup0 = max(sup0, float(np.abs(fn(zs)).max()))
    inner = zs * (1 - 2 * step / radius)
    lip1 = 0.0
    for axis in range(dim):
        for direction in (1.0, 1j):
            shift = np.zeros(dim, dtype=complex)
            shift[axis] = direction * step
            for fn in fns:
                diff = fn(inner + shift) - fn(inner - shift)
                lip1 = max(lip1, float(np.abs(diff).max()) / (2 * step))
    return sup0, lip1
