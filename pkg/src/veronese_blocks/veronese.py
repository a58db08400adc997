"""Veronese quotient linearizations and the divisors D_{gamma,A} they pull back to M_{0,n}.

Covers the leg-degree function sigma, the two contraction predicates, the
F-curve intersection formula for d >= 2, and symmetric classes in the
boundary basis B_2..B_{g+1}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .core import (
    FCurve,
    IntersectionVector,
    OutOfScopeError,
    PreconditionError,
    SymmetricDivisorClass,
    as_rational,
    basis_curve,
    num_basis_curves,
    subset_sum,
)


@dataclass(frozen=True)
class WeightData:
    """An allowable linearization (d, gamma, a_1..a_n) with (d-1)gamma + sum(a) = d+1."""

    d: int
    gamma: Fraction
    weights: tuple[Fraction, ...]

    def __post_init__(self):
        gamma = as_rational(self.gamma)
        weights = tuple(as_rational(a) for a in self.weights)
        object.__setattr__(self, "gamma", gamma)
        object.__setattr__(self, "weights", weights)
        if self.d < 1:
            raise PreconditionError(f"degree d must be >= 1, got {self.d}")
        if not 0 <= gamma < 1:
            raise PreconditionError(f"need 0 <= gamma < 1, got {gamma}")
        if any(not 0 < a < 1 for a in weights):
            raise PreconditionError(f"need 0 < a_i < 1 for all i, got {weights}")
        lhs = (self.d - 1) * gamma + sum(weights)
        if lhs != self.d + 1:
            raise PreconditionError(
                f"not allowable: (d-1)gamma + sum(a) = {lhs}, expected d+1 = {self.d + 1}"
            )

    @property
    def n(self) -> int:
        return len(self.weights)

    @cached_property
    def total(self) -> Fraction:
        """w = a_[n]."""
        return sum(self.weights, Fraction(0))

    @cached_property
    def _uniform(self) -> Fraction | None:
        return self.weights[0] if len(set(self.weights)) == 1 else None

    def weight_of(self, J: Iterable[int]) -> Fraction:
        if self._uniform is not None:
            J = tuple(J)
            if any(not 1 <= j <= self.n for j in J):
                raise IndexError(f"index set {J} not inside 1..{self.n}")
            return len(J) * self._uniform
        return subset_sum(self.weights, J)

    def is_symmetric(self) -> bool:
        return len(set(self.weights)) <= 1


def standard_weights(ell: int, g: int) -> WeightData:
    """d = g+1-ell, gamma = (ell-1)/(ell+1), a = (1/(ell+1))^(2g+2)."""
    if not 1 <= ell <= g:
        raise PreconditionError(f"need 1 <= ell <= g, got ell={ell}, g={g}")
    a = Fraction(1, ell + 1)
    return WeightData(g + 1 - ell, Fraction(ell - 1, ell + 1), (a,) * (2 * g + 2))


def _phi_of_weight(aJ: Fraction, w: WeightData) -> Fraction:
    return (aJ - 1) / (1 - w.gamma)


def _sigma_of_weight(aJ: Fraction, w: WeightData) -> int:
    # a_J = 1 and a_J = a_[n]-1 fall through to the ceiling branch, which
    # gives 0 and d-1 there; both are walls (integer phi).
    if aJ < 1:
        return 0
    if aJ > w.total - 1:
        return w.d
    return math.ceil(_phi_of_weight(aJ, w))


def phi(J: Iterable[int], w: WeightData) -> Fraction:
    return _phi_of_weight(w.weight_of(J), w)


def sigma(J: Iterable[int], w: WeightData) -> int:
    """Degree carried by a tail containing exactly the points of J."""
    return _sigma_of_weight(w.weight_of(J), w)


def on_wall(J: Iterable[int], w: WeightData) -> bool:
    """True when sigma(J) is computed from an integer phi, i.e. the degree is ambiguous."""
    aJ = w.weight_of(J)
    return 1 <= aJ <= w.total - 1 and _phi_of_weight(aJ, w).denominator == 1


@dataclass(frozen=True)
class LegDegrees:
    sigma: tuple[int, int, int, int]
    pair_sigma: tuple[int, int, int]
    b: int
    c: tuple[int, int, int]

    @classmethod
    def from_sigmas(cls, d: int, legs: Sequence[int], pairs: Sequence[int]) -> "LegDegrees":
        legs, pairs = tuple(legs), tuple(pairs)
        b = d - sum(legs)
        c = tuple(pairs[i] - legs[i] - legs[3] for i in range(3))
        return cls(legs, pairs, b, c)


def leg_degrees(F: FCurve, w: WeightData) -> LegDegrees:
    _check_same_n(F, w)
    A = F.parts
    legs = [sigma(A[i], w) for i in range(4)]
    pairs = [sigma(A[i] + A[3], w) for i in range(3)]
    return LegDegrees.from_sigmas(w.d, legs, pairs)


def wall_distributions(F: FCurve, w: WeightData) -> Iterator[tuple[str, LegDegrees]]:
    """Alternative degree assignments obtained by raising one wall degree by 1.

    Each leg A_i or union A_i+A_4 whose phi is an integer may carry degree
    ceil(phi) + 1 instead of ceil(phi).  Assignments whose legs would exceed
    total degree d are skipped.
    """
    base = leg_degrees(F, w)
    A = F.parts
    sets = [(f"A{i + 1}", A[i]) for i in range(4)]
    sets += [(f"A{i + 1}+A4", A[i] + A[3]) for i in range(3)]
    values = list(base.sigma) + list(base.pair_sigma)
    for idx, (label, J) in enumerate(sets):
        if not on_wall(J, w):
            continue
        bumped = list(values)
        bumped[idx] += 1
        if sum(bumped[:4]) > w.d or bumped[idx] > w.d:
            continue
        yield label, LegDegrees.from_sigmas(w.d, bumped[:4], bumped[4:])


def _check_same_n(F: FCurve, w: WeightData):
    if F.n != w.n:
        raise PreconditionError(f"F-curve is on M_0,{F.n} but weights have n={w.n}")


def veronese_contracts(F: FCurve, w: WeightData) -> bool:
    """The spine gets degree 0, i.e. the legs absorb all of d."""
    return sum(leg_degrees(F, w).sigma) == w.d


def hassett_contracts_weights(F: FCurve, weights: Sequence[Fraction]) -> bool:
    """Contraction by the reduction map to the Hassett space with these weights.

    Some leg carries weight >= a_[n] - 1, equivalently the other three parts
    together weigh at most 1.
    """
    weights = [as_rational(a) for a in weights]
    if F.n != len(weights):
        raise PreconditionError(f"F-curve is on M_0,{F.n} but {len(weights)} weights given")
    total = sum(weights, Fraction(0))
    return any(total - subset_sum(weights, part) <= 1 for part in F.parts)


def hassett_contracts(F: FCurve, w: WeightData) -> bool:
    return hassett_contracts_weights(F, w.weights)


def intersect(F: FCurve, w: WeightData, degrees: LegDegrees | None = None) -> Fraction:
    """F . D_{gamma,A} for d >= 2.

    ``degrees`` overrides the leg degrees, for evaluating alternative
    distributions on walls; by default they come from :func:`leg_degrees`.
    """
    _check_same_n(F, w)
    if w.d == 1:
        raise OutOfScopeError("out of scope: d=1 case")
    if F.n < 5:
        raise PreconditionError("intersect needs n >= 5")
    D = leg_degrees(F, w) if degrees is None else degrees
    d = w.d
    gamma = w.gamma
    W = w.total
    wA = [w.weight_of(p) for p in F.parts]
    s, sp, b, c = D.sigma, D.pair_sigma, D.b, D.c

    term1 = sum(c[i] ** 2 for i in range(3)) * W / (2 * d)
    term2 = (wA[3] - W / d * s[3]) * b
    term3 = sum((W / d * (s[i] + s[3]) - wA[i] - wA[3]) * c[i] for i in range(3))
    term4 = -(1 + gamma) / (2 * d) * (
        sum(s[i] * (d - s[i]) for i in range(4)) - sum(sp[i] * (d - sp[i]) for i in range(3))
    )
    return term1 + term2 + term3 + term4


def jensen_closed_form(ell: int, g: int, i: int) -> Fraction:
    """F_i . D for the standard weights at level ell: 1/(ell+1) on i = ell, ell+2, ..., else 0."""
    if not 1 <= ell <= g:
        raise PreconditionError(f"need 1 <= ell <= g, got ell={ell}, g={g}")
    if not 1 <= i <= g:
        raise PreconditionError(f"need 1 <= i <= g, got i={i}, g={g}")
    if i % 2 == ell % 2 and i >= ell:
        return Fraction(1, ell + 1)
    return Fraction(0)


def jensen_vector(ell: int, g: int, method: str = "auto") -> IntersectionVector:
    """Intersections of the standard-weight divisor with F_1..F_g.

    ``method="formula"`` evaluates the intersection formula on F_{1,1,j,n-j-2};
    ``"closed"`` uses the closed form; ``"auto"`` uses the formula when d >= 2.
    """
    n = 2 * g + 2
    w = standard_weights(ell, g)
    if method == "auto":
        method = "formula" if w.d >= 2 else "closed"
    if method == "formula":
        vals = [intersect(basis_curve(n, j), w) for j in range(1, g + 1)]
    elif method == "closed":
        vals = [jensen_closed_form(ell, g, j) for j in range(1, g + 1)]
    else:
        raise ValueError(f"unknown method {method!r}")
    return IntersectionVector(n, tuple(vals))


def symmetric_class(a, n: int | None = None) -> SymmetricDivisorClass:
    """Class in the B-basis of the symmetric divisor with intersection vector ``a``."""
    if isinstance(a, IntersectionVector):
        if n is not None and n != a.n:
            raise PreconditionError(f"vector is for n={a.n}, asked for n={n}")
        n, vals = a.n, a.values
    else:
        if n is None:
            raise PreconditionError("n is required for a bare sequence")
        vals = tuple(as_rational(x) for x in a)
    if n < 4:
        raise PreconditionError(f"symmetric_class needs n >= 4, got {n}")
    g = num_basis_curves(n)
    if len(vals) != g:
        raise PreconditionError(f"expected g={g} intersection numbers for n={n}, got {len(vals)}")
    av = {j: vals[j - 1] for j in range(1, g + 1)}
    coeffs = []
    for r in range(1, g + 1):
        k = Fraction(r * (r + 1), n - 1)
        b = sum(((k - (r - j)) * av[j] for j in range(1, r)), Fraction(0))
        if n % 2 == 1:
            b += k * sum((av[j] for j in range(r, g + 1)), Fraction(0))
        else:
            b += k * sum((av[j] for j in range(r, g)), Fraction(0))
            b += Fraction(r * (r + 1), 2 * (n - 1)) * av[g]
        coeffs.append(b)
    return SymmetricDivisorClass(n, tuple(coeffs))


def _ceil_plus(x: Fraction) -> int:
    return max(math.ceil(x), 0)


def _floor_plus(x: Fraction) -> int:
    return max(math.floor(x), 0)


def jensen_app_class(ell: int, g: int) -> SymmetricDivisorClass:
    """Closed-form B-basis class of the standard-weight divisor, n = 2g+2."""
    if not 1 <= ell <= g:
        raise PreconditionError(f"need 1 <= ell <= g, got ell={ell}, g={g}")
    n = 2 * g + 2
    coeffs = []
    for r in range(1, g + 1):
        x = Fraction(r - ell + 1, 2)
        main = Fraction(r * (r + 1), n - 1) * Fraction(g - ell + 1, 2)
        coeffs.append(Fraction(1, ell + 1) * (main - _ceil_plus(x) * _floor_plus(x)))
    return SymmetricDivisorClass(n, tuple(coeffs))
