"""sl_2 conformal blocks: ranks by fusion-path counting and the F-curve numbers built from them.

A weight k*omega_1 is stored as the integer k.  Ranks are counted as walks
0 = mu_0 -> mu_1 -> ... -> mu_n = 0 on {0..ell} where each step
(mu_{i-1}, k_i, mu_i) is an allowed level-ell fusion triple.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from typing import Iterator, Sequence

from .core import PreconditionError


@dataclass(frozen=True)
class SL2WeightVector:
    level: int
    weights: tuple[int, ...]

    def __post_init__(self):
        ws = tuple(int(k) for k in self.weights)
        object.__setattr__(self, "weights", ws)
        if self.level < 1:
            raise PreconditionError(f"level must be >= 1, got {self.level}")
        bad = [k for k in ws if not 0 <= k <= self.level]
        if bad:
            raise PreconditionError(f"weights must lie in [0, {self.level}], got {bad}")

    @property
    def n(self) -> int:
        return len(self.weights)

    @property
    def total(self) -> int:
        """Lambda = sum of the k_i."""
        return sum(self.weights)


def weights(ell: int, *ks: int) -> SL2WeightVector:
    return SL2WeightVector(ell, ks)


def _fusion(a: int, b: int, c: int, ell: int) -> int:
    return int((a + b + c) % 2 == 0 and abs(a - b) <= c <= a + b and a + b + c <= 2 * ell)


def fusion3(a: int, b: int, c: int, ell: int) -> int:
    """Rank of the three-point space: 1 if (a, b, c) fuses at level ell, else 0."""
    for x in (a, b, c):
        if not 0 <= x <= ell:
            raise PreconditionError(f"weight {x} outside [0, {ell}]")
    return _fusion(a, b, c, ell)


def _step(row: Sequence[int], k: int, ell: int) -> list[int]:
    out = [0] * (ell + 1)
    for mu, count in enumerate(row):
        if not count:
            continue
        # fusion partners of (mu, k): |mu-k| <= nu <= min(mu+k, 2ell-mu-k), same parity
        for nu in range(abs(mu - k), min(mu + k, 2 * ell - mu - k) + 1, 2):
            out[nu] += count
    return out


def rank(v: SL2WeightVector) -> int:
    """r_ell(k_1, ..., k_n) by dynamic programming over intermediate weights."""
    row = [1] + [0] * v.level
    for k in v.weights:
        row = _step(row, k, v.level)
    return row[0]


@lru_cache(maxsize=None)
def _power_row(ell: int, k: int, j: int) -> tuple[int, ...]:
    if j == 0:
        return (1,) + (0,) * ell
    return tuple(_step(_power_row(ell, k, j - 1), k, ell))


def rank_power(ell: int, k: int, j: int, t: int) -> int:
    """r_ell(k^j, t): j copies of k followed by t."""
    if not (0 <= k <= ell and 0 <= t <= ell):
        raise PreconditionError(f"weights must lie in [0, {ell}], got k={k}, t={t}")
    if j < 0:
        raise PreconditionError(f"j must be >= 0, got {j}")
    # build iteratively so deep j does not hit the recursion limit
    for m in range(j + 1):
        _power_row(ell, k, m)
    # the last step (mu, t, 0) fuses only for mu = t
    return _power_row(ell, k, j)[t]


def iter_ranks(ell: int, nmax: int) -> Iterator[tuple[tuple[int, ...], int]]:
    """(weights, rank) for every vector in {0..ell}^n, n = 0..nmax, in lexicographic order per n.

    Vectors sharing a prefix share its DP row, so the sweep costs one DP
    step per vector.
    """
    if ell < 1 or nmax < 0:
        raise PreconditionError(f"need ell >= 1 and nmax >= 0, got ell={ell}, nmax={nmax}")

    def extend(prefix, row, remaining):
        if remaining == 0:
            yield tuple(prefix), row[0]
            return
        for k in range(ell + 1):
            prefix.append(k)
            yield from extend(prefix, _step(row, k, ell), remaining - 1)
            prefix.pop()

    start = [1] + [0] * ell
    for n in range(nmax + 1):
        yield from extend([], start, n)


def enumerate_paths(v: SL2WeightVector) -> Iterator[tuple[int, ...]]:
    """Every fusion path (0, mu_1, ..., mu_{n-1}, 0), found by depth-first search.

    Exponential in general; an oracle for small inputs.
    """
    ell, ks, n = v.level, v.weights, v.n

    def walk(prefix):
        i = len(prefix) - 1
        if i == n:
            if prefix[-1] == 0:
                yield tuple(prefix)
            return
        for nu in range(ell + 1):
            if _fusion(prefix[-1], ks[i], nu, ell):
                prefix.append(nu)
                yield from walk(prefix)
                prefix.pop()

    yield from walk([0])


def count_paths(v: SL2WeightVector) -> int:
    return sum(1 for _ in enumerate_paths(v))


def rank_recurrence(ell: int, j: int, t: int) -> int:
    """r_ell(1^j, t) from the Pascal-type recurrence and its seeds alone."""
    if ell < 1 or j < 0:
        raise PreconditionError(f"need ell >= 1 and j >= 0, got ell={ell}, j={j}")
    if not 0 <= t <= ell:
        raise PreconditionError(f"t must lie in [0, {ell}], got {t}")
    # table[m][s] = r_ell(1^m, s); s = ell+1 is the zero padding the recurrence reads
    table = [[0] * (ell + 2) for _ in range(j + 1)]
    for m in range(j + 1):
        for s in range(ell + 1):
            if (m + s) % 2 or s > m:
                continue
            if s == m:
                table[m][s] = 1
            else:
                left = table[m - 1][s - 1] if s >= 1 else 0
                table[m][s] = left + table[m - 1][s + 1]
    return table[j][t]


def _criterion_bruteforce(v: SL2WeightVector) -> bool:
    n, ell, lam = v.n, v.level, v.total
    if lam % 2:
        return False
    if n > 20:
        raise PreconditionError(f"subset brute force limited to n <= 20, got n={n}")
    lhs = lam - (n - 1) * ell
    for size in range(n % 2 ^ 1, n + 1, 2):
        for I in combinations(range(n), size):
            if lhs > sum(2 * v.weights[i] - ell for i in I):
                return False
    return True


def _criterion_shortcut(v: SL2WeightVector) -> bool:
    n, ell, lam = v.n, v.level, v.total
    if lam % 2:
        return False
    terms = [2 * k - ell for k in v.weights]
    # minimize sum over I with |I| = n-1 mod 2: take every negative term, then
    # fix parity by the cheaper of adding a nonnegative term or dropping a negative one
    neg = [x for x in terms if x < 0]
    nonneg = [x for x in terms if x >= 0]
    best = sum(neg)
    if len(neg) % 2 != (n - 1) % 2:
        options = []
        if nonneg:
            options.append(best + min(nonneg))
        if neg:
            options.append(best - max(neg))
        if not options:
            # n = 0: no subset has odd complement, condition is vacuous
            return True
        best = min(options)
    return lam - (n - 1) * ell <= best


def nonzero_criterion(v: SL2WeightVector, method: str = "shortcut") -> bool:
    """Whether r_ell(k_1..k_n) != 0, decided by the subset inequalities (no path counting)."""
    if method == "shortcut":
        return _criterion_shortcut(v)
    if method == "bruteforce":
        return _criterion_bruteforce(v)
    raise ValueError(f"unknown method {method!r}")


def zero_criterion_kpattern(ell: int, k: int, i: int, t: int, raw: bool = False) -> bool:
    """Whether r_ell(k^i, t) = 0 for 1 < k < ell, by the case split on 2k vs ell.

    For i in {0, 1} the answer is read off directly (r(t) = [t = 0] and
    r(k, t) = [t = k]); the case split predicts r_ell(t=0) = 0 at i = 0,
    which is false.  ``raw=True`` returns the bare case split everywhere.
    """
    if not 1 < k < ell:
        raise PreconditionError(f"need 1 < k < ell, got k={k}, ell={ell}")
    if not 0 <= t <= ell:
        raise PreconditionError(f"t must lie in [0, {ell}], got {t}")
    if i < 0:
        raise PreconditionError(f"i must be >= 0, got {i}")
    if not raw and i == 0:
        return t != 0
    if not raw and i == 1:
        return t != k
    if (k * i + t) % 2:
        return True
    if 2 * k <= ell:
        x = Fraction(t, k)
        return i < max(x, 2 - x)
    if i % 2 == 0:
        x = Fraction(t, ell - k)
    else:
        x = Fraction(ell - t, ell - k)
    return i < max(x, 2 - x)


def critical_level(v: SL2WeightVector) -> int:
    if v.total % 2:
        raise PreconditionError(f"critical level needs an even weight sum, got {v.total}")
    return v.total // 2 - 1


def is_trivial(v: SL2WeightVector) -> bool:
    """The divisor vanishes identically once the level exceeds the critical level."""
    return v.level > critical_level(v)


def cb_intersect_omega1(ell: int, g: int, i: int) -> int:
    """D(sl_2, ell, omega_1^(2g+2)) . F_i = r_ell(1^i, ell) r_ell(1^(2g-i), ell)."""
    if not 1 <= ell <= g:
        raise PreconditionError(f"need 1 <= ell <= g, got ell={ell}, g={g}")
    if not 1 <= i <= g:
        raise PreconditionError(f"need 1 <= i <= g, got i={i}")
    n = 2 * g + 2
    return rank_power(ell, 1, i, ell) * rank_power(ell, 1, n - i - 2, ell)


def cb_vector_omega1(ell: int, g: int) -> tuple[int, ...]:
    return tuple(cb_intersect_omega1(ell, g, i) for i in range(1, g + 1))


def known_deg4(ws: Sequence[int], ell: int) -> int | None:
    """Degrees of 4-point bundles V(sl_2, ell, .) that are recorded exactly; None otherwise.

    Only the patterns {0,0,ell,ell}, {0,ell,ell,ell} (degree 0) and
    {ell,ell,ell,ell} (degree ell) are known here.
    """
    key = tuple(sorted(ws))
    if key == (0, 0, ell, ell) or key == (0, ell, ell, ell):
        return 0
    if key == (ell, ell, ell, ell):
        return ell
    return None


def cb_intersect_kequalsell(ell: int, n: int, i: int) -> int:
    """D(sl_2, ell, (ell omega_1)^n) . F_i, summed over the two free attaching weights.

    Every term with nonzero ranks must have a known 4-point degree; otherwise
    this raises rather than guess.
    """
    if n % 2:
        raise PreconditionError(f"n must be even, got {n}")
    if not 1 <= i <= n // 2 - 1:
        raise PreconditionError(f"need 1 <= i <= {n // 2 - 1}, got {i}")
    total = 0
    for u1 in range(ell + 1):
        r1 = rank_power(ell, ell, n - i - 2, u1)
        if not r1:
            continue
        for u2 in range(ell + 1):
            r2 = rank_power(ell, ell, i, u2)
            if not r2:
                continue
            deg = known_deg4((u1, u2, ell, ell), ell)
            if deg is None:
                raise PreconditionError(
                    f"no recorded 4-point degree for weights {(u1, u2, ell, ell)} at level {ell}"
                )
            total += deg * r1 * r2
    return total


def deg4_nonzero_sufficient(ws: Sequence[int], ell: int) -> bool:
    """Sufficient condition for a nonzero 4-point degree: even sum with 2ell < sum < 2ell + 2 + 2 min."""
    ws = tuple(ws)
    if len(ws) != 4:
        raise PreconditionError(f"need four weights, got {ws}")
    for x in ws:
        if not 0 <= x <= ell:
            raise PreconditionError(f"weight {x} outside [0, {ell}]")
    s = sum(ws)
    return s % 2 == 0 and 2 * ell < s < 2 * ell + 2 + 2 * min(ws)


class HypothesisViolation(PreconditionError):
    """Inputs outside the range where the F-curve vanishing criterion is proven."""

    def __init__(self, message: str, note: str | None = None):
        super().__init__(message)
        self.note = note


# Known vanishings outside the proven range, keyed by (ell, k, n, sorted profile).
OUT_OF_RANGE_FACTS = {
    (4, 3, 8, (2, 2, 2, 2)): "D(sl2, 4, 3w1^8) . F(2,2,2,2) = 0",
}


def fcurve_zero_criterion(ell: int, k: int, n: int, profile: Sequence[int]) -> bool:
    """D(sl_2, ell, (k omega_1)^n) . F_{a,b,c,d} = 0 iff a+b+c <= (ell+1)/k, for a <= b <= c <= d."""
    prof = tuple(sorted(int(x) for x in profile))
    fact = OUT_OF_RANGE_FACTS.get((ell, k, n, prof))
    if not (1 < k and Fraction(k) < Fraction(3, 4) * ell):
        raise HypothesisViolation(f"need 1 < k < 3*ell/4, got k={k}, ell={ell}", fact)
    if n % 2:
        raise HypothesisViolation(f"n must be even, got {n}", fact)
    if not Fraction(ell) <= Fraction(k * n, 2) - 1:
        raise HypothesisViolation(f"need ell <= k*n/2 - 1, got ell={ell}, k={k}, n={n}", fact)
    if len(prof) != 4 or min(prof) < 1 or sum(prof) != n:
        raise PreconditionError(f"profile {profile} is not four positive parts summing to {n}")
    a, b, c, _ = prof
    return a + b + c <= Fraction(ell + 1, k)


def nonzero_term_witness(ell: int, k: int, profile: Sequence[int]) -> tuple[int, ...] | None:
    """Attaching weights u with a provably nonzero term in the F-curve sum, if any.

    Searches u in {0..ell}^4 for deg4_nonzero_sufficient(u) and
    r_ell(k^{p_i}, u_i) > 0 for every part size p_i.  A hit certifies
    D . F > 0 since every term of the sum is nonnegative.
    """
    prof = tuple(profile)
    for u in product(range(ell + 1), repeat=4):
        if not deg4_nonzero_sufficient(u, ell):
            continue
        if all(rank_power(ell, k, p, ui) for p, ui in zip(prof, u)):
            return u
    return None
