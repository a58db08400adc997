"""Mechanical checks tying the conformal-block divisors to the Veronese quotient divisors.

Everything here is checked on the symmetric F-curve basis F_1..F_g of
M_{0,2g+2}: zero patterns, exact nonnegative decompositions, and the rank
inequalities that feed them.  Each ``check_*`` returns a :class:`CheckReport`;
a failed report means a claimed identity or inequality did not hold.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations, product
from typing import Any, Iterator, Sequence

from .confblocks import (
    OUT_OF_RANGE_FACTS,
    HypothesisViolation,
    cb_intersect_kequalsell,
    cb_intersect_omega1,
    cb_vector_omega1,
    fcurve_zero_criterion,
    nonzero_term_witness,
    rank_power,
)
from .core import FCurve, IntersectionVector, PreconditionError, format_rational
from .veronese import (
    WeightData,
    hassett_contracts_weights,
    intersect,
    jensen_closed_form,
    standard_weights,
    wall_distributions,
)


class FalsificationError(RuntimeError):
    """A claimed identity or inequality failed on exact data."""


@dataclass
class CheckReport:
    name: str
    passed: bool
    inputs: dict[str, Any]
    outputs: dict[str, Any] = field(default_factory=dict)
    witness: Any = None

    def __bool__(self):
        return self.passed


@dataclass(frozen=True)
class DecompositionResult:
    """cb vector = sum over ell' of coefficients[ell'] * (standard-weight vector at level ell')."""

    ell: int
    g: int
    coefficients: dict[int, Fraction]
    residual: IntersectionVector

    @property
    def leading(self) -> Fraction:
        return self.coefficients[self.ell]


def solve_lower_triangular(M: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]) -> list[Fraction]:
    """Exact forward substitution for a square lower-triangular system."""
    size = len(M)
    x: list[Fraction] = []
    for i in range(size):
        if M[i][i] == 0:
            raise ZeroDivisionError(f"zero pivot in row {i}")
        acc = Fraction(rhs[i]) - sum((M[i][j] * x[j] for j in range(i)), Fraction(0))
        x.append(acc / M[i][i])
    return x


def poscomb_decompose(ell: int, g: int) -> DecompositionResult:
    """Write the level-ell cb vector as a combination of standard-weight vectors at levels ell, ell+2, ...

    Raises FalsificationError on a nonzero residual, a negative coefficient,
    or a non-positive leading coefficient.
    """
    if not 1 <= ell <= g:
        raise PreconditionError(f"need 1 <= ell <= g, got ell={ell}, g={g}")
    n = 2 * g + 2
    target = [Fraction(x) for x in cb_vector_omega1(ell, g)]
    levels = list(range(ell, g + 1, 2))
    for j in range(1, g + 1):
        if j % 2 != ell % 2 and target[j - 1] != 0:
            raise FalsificationError(f"cb vector nonzero off parity at j={j}: {target[j - 1]}")
    # rows: coordinates j = ell, ell+2, ...; columns: levels; entry nonzero iff j >= level
    rows = levels
    M = [[jensen_closed_form(lv, g, j) for lv in levels] for j in rows]
    coeffs = solve_lower_triangular(M, [target[j - 1] for j in rows])
    coefficients = dict(zip(levels, coeffs))

    recon = [
        sum((c * jensen_closed_form(lv, g, j) for lv, c in coefficients.items()), Fraction(0))
        for j in range(1, g + 1)
    ]
    residual = IntersectionVector(n, tuple(t - r for t, r in zip(target, recon)))
    result = DecompositionResult(ell, g, coefficients, residual)
    if any(residual.values):
        raise FalsificationError(f"nonzero residual {residual.values} for ell={ell}, g={g}")
    negative = {lv: c for lv, c in coefficients.items() if c < 0}
    if negative:
        raise FalsificationError(f"negative coefficients {negative} for ell={ell}, g={g}")
    if result.leading <= 0:
        raise FalsificationError(f"leading coefficient {result.leading} not positive for ell={ell}, g={g}")
    return result


def check_poscomb(ell: int, g: int) -> CheckReport:
    inputs = {"ell": ell, "g": g}
    try:
        res = poscomb_decompose(ell, g)
    except FalsificationError as exc:
        return CheckReport("poscomb", False, inputs, witness=str(exc))
    outputs = {
        "coefficients": {str(lv): format_rational(c) for lv, c in res.coefficients.items()},
        "residual": [format_rational(x) for x in res.residual.values],
    }
    return CheckReport("poscomb", True, inputs, outputs)


def check_increasing(ell: int, g: int) -> CheckReport:
    """Nonzero cb intersections are nondecreasing in steps of 2; off-parity ones vanish."""
    if not 1 <= ell <= g:
        raise PreconditionError(f"need 1 <= ell <= g, got ell={ell}, g={g}")
    inputs = {"ell": ell, "g": g}
    vec = cb_vector_omega1(ell, g)
    outputs = {"vector": list(vec)}
    for i in range(1, g + 1):
        if i % 2 != ell % 2 and vec[i - 1] != 0:
            return CheckReport("increasing", False, inputs, outputs, {"i": i, "value": vec[i - 1]})
    for i in range(ell, g - 1, 2):
        if vec[i - 1] > vec[i + 1]:
            return CheckReport(
                "increasing", False, inputs, outputs, {"i": i, "F_i": vec[i - 1], "F_i+2": vec[i + 1]}
            )
    return CheckReport("increasing", True, inputs, outputs)


def check_determinant_lemma(ell: int, imax: int) -> CheckReport:
    """r(1^i1, j1) r(1^i2, j2) - r(1^i1, j2) r(1^i2, j1) >= 0 over all same-parity i1<i2, j1<j2."""
    if ell < 1 or imax < 2:
        raise PreconditionError(f"need ell >= 1 and imax >= 2, got ell={ell}, imax={imax}")
    inputs = {"ell": ell, "imax": imax}
    checked = 0
    for i1, i2, j1, j2 in product(range(imax + 1), range(imax + 1), range(ell + 1), range(ell + 1)):
        if not (i1 < i2 and j1 < j2):
            continue
        if len({i1 % 2, i2 % 2, j1 % 2, j2 % 2}) != 1:
            continue
        checked += 1
        det = rank_power(ell, 1, i1, j1) * rank_power(ell, 1, i2, j2) - rank_power(
            ell, 1, i1, j2
        ) * rank_power(ell, 1, i2, j1)
        if det < 0:
            return CheckReport(
                "determinant", False, inputs, {"checked": checked},
                {"i1": i1, "i2": i2, "j1": j1, "j2": j2, "det": det},
            )
    return CheckReport("determinant", True, inputs, {"checked": checked})


def proportionality_ratio(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction | None:
    """The c with u = c*v exactly, or None if the vectors are not proportional."""
    ratio = None
    for a, b in zip(u, v):
        a, b = Fraction(a), Fraction(b)
        if b == 0:
            if a != 0:
                return None
            continue
        q = a / b
        if ratio is None:
            ratio = q
        elif q != ratio:
            return None
    return ratio if ratio is not None else Fraction(0)


def check_same_face(ell: int, g: int) -> CheckReport:
    """Same zero pattern on F_1..F_g and a valid nonnegative decomposition."""
    d = g + 1 - ell
    if not 1 <= ell <= g or d < 2:
        raise PreconditionError(f"need 1 <= ell <= g and d = g+1-ell >= 2, got ell={ell}, g={g}")
    inputs = {"ell": ell, "g": g}
    cb = cb_vector_omega1(ell, g)
    w = standard_weights(ell, g)
    n = 2 * g + 2
    jensen = [intersect(FCurve.from_profile((1, 1, j, n - j - 2)), w) for j in range(1, g + 1)]
    cb_zero = [j for j in range(1, g + 1) if cb[j - 1] == 0]
    jensen_zero = [j for j in range(1, g + 1) if jensen[j - 1] == 0]
    ratio = proportionality_ratio(cb, jensen)
    outputs = {
        "cb_vector": list(cb),
        "veronese_vector": [format_rational(x) for x in jensen],
        "cb_zero_set": cb_zero,
        "veronese_zero_set": jensen_zero,
        "proportional": ratio is not None,
        "ratio": None if ratio is None else format_rational(ratio),
    }
    if cb_zero != jensen_zero:
        return CheckReport("same-face", False, inputs, outputs, {"cb_zero": cb_zero, "veronese_zero": jensen_zero})
    try:
        res = poscomb_decompose(ell, g)
    except FalsificationError as exc:
        return CheckReport("same-face", False, inputs, outputs, str(exc))
    outputs["leading_coefficient"] = format_rational(res.leading)
    return CheckReport("same-face", True, inputs, outputs)


def level_shadow_holds(ell: int, t: int) -> bool:
    """r_ell(ell^t, ell) equals the level-1 rank r_1(1^t, 1)."""
    return rank_power(ell, ell, t, ell) == rank_power(1, 1, t, 1)


def check_kequalsell(ell: int, n: int) -> CheckReport:
    """D(sl_2, ell, (ell w_1)^n) . F_i = ell * D(sl_2, 1, w_1^n) . F_i for every basis index i."""
    if n % 2 or n < 6:
        raise PreconditionError(f"need even n >= 6, got {n}")
    g = n // 2 - 1
    inputs = {"ell": ell, "n": n}
    lhs = [cb_intersect_kequalsell(ell, n, i) for i in range(1, g + 1)]
    rhs = [ell * cb_intersect_omega1(1, g, i) for i in range(1, g + 1)]
    outputs = {"level_ell": lhs, "ell_times_level_1": rhs}
    for i, (a, b) in enumerate(zip(lhs, rhs), start=1):
        if a != b:
            return CheckReport("kequalsell", False, inputs, outputs, {"i": i, "lhs": a, "rhs": b})
    return CheckReport("kequalsell", True, inputs, outputs)


def iter_fcurves(n: int, symmetric: bool) -> Iterator[FCurve]:
    """F-curves on M_{0,n} up to what the weights can distinguish.

    For symmetric weights only the ordered profile matters, so each ordered
    composition of n into four parts gives one curve; otherwise every ordered
    partition of {1..n} is produced.
    """
    if symmetric:
        for a in range(1, n - 2):
            for b in range(1, n - a - 1):
                for c in range(1, n - a - b):
                    yield FCurve.from_profile((a, b, c, n - a - b - c))
        return
    for labels in product(range(4), repeat=n):
        parts = [tuple(i + 1 for i in range(n) if labels[i] == p) for p in range(4)]
        if all(parts):
            yield FCurve(n, tuple(parts))


def check_wall_independence(w: WeightData, nmax_curves: int = 100_000) -> CheckReport:
    """The intersection number does not depend on which degree a wall leg takes."""
    if w.d < 2:
        raise PreconditionError(f"need d >= 2, got d={w.d}")
    inputs = {
        "d": w.d,
        "gamma": format_rational(w.gamma),
        "weights": [format_rational(a) for a in w.weights],
        "nmax_curves": nmax_curves,
    }
    examined = walls = variants = 0
    for F in iter_fcurves(w.n, w.is_symmetric()):
        if examined >= nmax_curves:
            break
        examined += 1
        alternatives = list(wall_distributions(F, w))
        if not alternatives:
            continue
        walls += 1
        base = intersect(F, w)
        for label, degrees in alternatives:
            variants += 1
            value = intersect(F, w, degrees)
            if value != base:
                witness = {
                    "parts": [list(p) for p in F.parts],
                    "bumped": label,
                    "base": format_rational(base),
                    "bumped_value": format_rational(value),
                }
                return CheckReport("wall", False, inputs, {"examined": examined}, witness)
    outputs = {"examined": examined, "curves_on_walls": walls, "variants_checked": variants}
    return CheckReport("wall", True, inputs, outputs)


def check_contraction(ell: int, k: int, n: int) -> CheckReport:
    """Vanishing criterion vs Hassett contraction vs an explicit nonzero term, on every symmetric F-curve.

    Inside the proven range: the criterion must agree with contraction by the
    Hassett map with weights (k/(ell+1))^n, and a non-contracted curve must
    have a certified nonzero term.  Outside it, the input is refused and any
    recorded fact about the excluded case is returned in the report.
    """
    inputs = {"ell": ell, "k": k, "n": n}
    profiles = sorted(
        {tuple(sorted(p)) for p in product(range(1, n), repeat=4) if sum(p) == n}
    )
    try:
        fcurve_zero_criterion(ell, k, n, profiles[0])
    except HypothesisViolation as exc:
        excluded = {
            ",".join(map(str, key[3])): fact
            for key, fact in OUT_OF_RANGE_FACTS.items()
            if key[:3] == (ell, k, n)
        }
        outputs = {"excluded": True, "reason": str(exc), "recorded_facts": excluded}
        return CheckReport("contraction", True, inputs, outputs)
    hassett = [Fraction(k, ell + 1)] * n
    rows = []
    for prof in profiles:
        zero = fcurve_zero_criterion(ell, k, n, prof)
        contracted = hassett_contracts_weights(FCurve.from_profile(prof), hassett)
        witness = nonzero_term_witness(ell, k, prof)
        rows.append(",".join(map(str, prof)))
        if zero != contracted or zero == (witness is not None):
            return CheckReport(
                "contraction", False, inputs, {"profiles_checked": len(rows)},
                {"profile": list(prof), "criterion_zero": zero, "hassett": contracted,
                 "nonzero_term": None if witness is None else list(witness)},
            )
    return CheckReport("contraction", True, inputs, {"excluded": False, "profiles_checked": len(rows)})


def check_part_symmetry(F: FCurve, w: WeightData) -> CheckReport:
    """intersect gives one value under all 24 orderings of the parts."""
    values = {}
    for order in permutations(range(4)):
        values[order] = intersect(F.permuted(order), w)
    distinct = sorted(set(values.values()))
    inputs = {"parts": [list(p) for p in F.parts]}
    outputs = {"values": [format_rational(v) for v in distinct]}
    if len(distinct) != 1:
        return CheckReport("part-symmetry", False, inputs, outputs)
    return CheckReport("part-symmetry", True, inputs, outputs)
