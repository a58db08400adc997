"""Shared value types: exact rationals, F-curves, and symmetric divisor data on M_{0,n}.

Every number produced by the library is a :class:`fractions.Fraction`; integers
only appear as ranks, levels, degrees and cardinalities.  Marked points are
labelled ``1..n`` and index sets are kept as sorted tuples.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Rational = Fraction


class PreconditionError(ValueError):
    """An operation was called outside the range where it is defined."""


class OutOfScopeError(PreconditionError):
    """The input is valid mathematics that this library deliberately does not compute."""


def as_rational(x) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to an exact Fraction.

    Floats are refused: a float has already lost the exact value.
    """
    if isinstance(x, bool):
        raise TypeError("bool is not a rational number")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def format_rational(q) -> str:
    """Serialize as ``"p/q"``, or ``"p"`` when the denominator is 1."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def num_basis_curves(n: int) -> int:
    # g = floor(n/2) - 1, the rank of the symmetric 1-cycle / divisor lattices
    return n // 2 - 1


@dataclass(frozen=True)
class FCurve:
    """The F-curve F(A1, A2, A3, A4) for an ordered partition of ``{1..n}``.

    Order matters only for bookkeeping: the intersection formula singles out
    the fourth part.
    """

    n: int
    parts: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        parts = tuple(tuple(sorted(int(i) for i in p)) for p in self.parts)
        object.__setattr__(self, "parts", parts)
        if self.n < 4:
            raise PreconditionError(f"F-curves need n >= 4, got n={self.n}")
        if len(parts) != 4:
            raise PreconditionError(f"an F-curve has exactly four parts, got {len(parts)}")
        if any(not p for p in parts):
            raise PreconditionError("F-curve parts must be nonempty")
        flat = [i for p in parts for i in p]
        if sorted(flat) != list(range(1, self.n + 1)):
            raise PreconditionError(f"parts must partition {{1..{self.n}}} exactly: {parts}")

    @classmethod
    def from_profile(cls, profile: Sequence[int]) -> "FCurve":
        """Consecutive blocks of the given sizes, in the given order."""
        sizes = [int(m) for m in profile]
        if len(sizes) != 4 or any(m < 1 for m in sizes):
            raise PreconditionError(f"profile must be four positive integers, got {profile}")
        parts, start = [], 1
        for m in sizes:
            parts.append(tuple(range(start, start + m)))
            start += m
        return cls(sum(sizes), tuple(parts))

    @property
    def profile(self) -> tuple[int, ...]:
        return tuple(len(p) for p in self.parts)

    def permuted(self, order: Sequence[int]) -> "FCurve":
        """Reorder the parts; ``order`` is a permutation of ``0..3``."""
        return FCurve(self.n, tuple(self.parts[i] for i in order))

    def symmetric(self) -> "SymmetricFCurve":
        return SymmetricFCurve(self.n, self.profile)


@dataclass(frozen=True)
class SymmetricFCurve:
    """The S_n-invariant class F_{n1,n2,n3,n4}; the profile is stored sorted."""

    n: int
    profile: tuple[int, ...]

    def __post_init__(self):
        prof = tuple(sorted(int(m) for m in self.profile))
        if len(prof) != 4:
            raise PreconditionError(f"profile must have four entries, got {self.profile}")
        if any(m < 1 for m in prof):
            raise PreconditionError(f"profile entries must be >= 1, got {self.profile}")
        if sum(prof) != self.n:
            raise PreconditionError(f"profile {self.profile} does not sum to n={self.n}")
        object.__setattr__(self, "profile", prof)

    def representative(self, order: Sequence[int] | None = None) -> FCurve:
        """A concrete F-curve in this class, blocks laid out in ``order`` (default: sorted)."""
        prof = self.profile if order is None else tuple(order)
        if tuple(sorted(prof)) != self.profile:
            raise PreconditionError(f"{order} is not a rearrangement of {self.profile}")
        return FCurve.from_profile(prof)

    def __str__(self):
        return "F_{" + ",".join(map(str, self.profile)) + "}"


def fcurve_from_profile(n: int, profile: Sequence[int]) -> SymmetricFCurve:
    return SymmetricFCurve(n, tuple(profile))


def basis_curve(n: int, j: int) -> FCurve:
    """F_j = F_{1,1,j,n-j-2}, laid out with the two singletons first."""
    return FCurve.from_profile((1, 1, j, n - j - 2))


def symmetric_basis(n: int) -> list[SymmetricFCurve]:
    """The basis F_1..F_g of symmetric 1-cycles, g = floor(n/2) - 1."""
    if n < 4:
        raise PreconditionError(f"symmetric_basis needs n >= 4, got {n}")
    return [fcurve_from_profile(n, (1, 1, j, n - j - 2)) for j in range(1, num_basis_curves(n) + 1)]


def _check_length(values, g, what):
    if len(values) != g:
        raise PreconditionError(f"{what} needs exactly g={g} entries, got {len(values)}")


@dataclass(frozen=True)
class IntersectionVector:
    """Intersection numbers against F_1..F_g; ``values[j-1]`` pairs with F_j."""

    n: int
    values: tuple[Fraction, ...]

    def __post_init__(self):
        vals = tuple(as_rational(v) for v in self.values)
        _check_length(vals, num_basis_curves(self.n), "IntersectionVector")
        object.__setattr__(self, "values", vals)

    @property
    def g(self) -> int:
        return num_basis_curves(self.n)

    def __getitem__(self, j: int) -> Fraction:
        if not 1 <= j <= self.g:
            raise IndexError(j)
        return self.values[j - 1]

    def zero_set(self) -> frozenset[int]:
        return frozenset(j for j, v in enumerate(self.values, start=1) if v == 0)


@dataclass(frozen=True)
class SymmetricDivisorClass:
    """Coefficients of B_2..B_{g+1}; ``coeffs[r-1]`` multiplies B_{r+1}."""

    n: int
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        cs = tuple(as_rational(c) for c in self.coeffs)
        _check_length(cs, num_basis_curves(self.n), "SymmetricDivisorClass")
        object.__setattr__(self, "coeffs", cs)

    @property
    def g(self) -> int:
        return num_basis_curves(self.n)

    def __getitem__(self, r: int) -> Fraction:
        if not 1 <= r <= self.g:
            raise IndexError(r)
        return self.coeffs[r - 1]

    def __str__(self):
        terms = [f"({format_rational(c)})B{r + 1}" for r, c in enumerate(self.coeffs, start=1)]
        return " + ".join(terms)


def subset_sum(weights: Sequence[Fraction], J: Iterable[int]) -> Fraction:
    """a_J for a 1-based index set J."""
    return sum((weights[j - 1] for j in J), Fraction(0))
