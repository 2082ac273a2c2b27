"""Construction pipelines: hypothesis gate, recipe synthesis, sign
enumeration, the multi-prime solver, and the moduli-component bound.

The pipeline certifies lower bounds on the number of connected
components of the moduli space of symplectic forms: the divisibility of
the first Chern class is invariant under diffeomorphisms and
deformations, so forms on one smooth record whose c1 divisibilities
differ must live in different components. Only exact divisibility
reports are counted, which keeps the bound sound when the tracked
pairing cannot pin a value down.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from random import Random
from typing import Optional, Sequence

from .errors import EnumerationCapError, MathematicalInconsistencyError, RecipeError
from .fourman import LAGRANGIAN, SYMPLECTIC, EmbeddedTorus, FourManifold, build_t4
from .gompfsum import (
    FormClass,
    Gluing,
    SumRecipe,
    flat_signs,
    recipe_violations,
    sum_c1,
    sum_invariants,
)
from .intlat import divisibility_bounds, gcd_content, rank

__all__ = [
    "HypothesisReport",
    "EnumerationResult",
    "SolveResult",
    "check_hypotheses",
    "build_theorem_recipe",
    "mcmullen_taubes_recipe",
    "enumerate_forms",
    "solve_signs",
    "pi0_lower_bound",
    "DEFAULT_ENUMERATION_CAP",
]

DEFAULT_ENUMERATION_CAP = 2**20


@dataclass(frozen=True)
class HypothesisReport:
    """Outcome of the three-part gate for the inequivalent-forms recipe.

    Condition 1: the torus classes are square-zero and span an
    r-dimensional subspace with r > 1 (the declared sum class being
    dependent on them). Condition 2: the first torus is Lagrangian so
    its orientation is a free choice, the others and the sum torus admit
    positively oriented symplectic representatives, with declared
    disjointness. Condition 3: n divides the divisibility of c1 of the
    base while n does not divide 2d, d the exact divisibility of the
    first torus class.
    """

    condition1: bool
    rank: int
    condition1_reasons: tuple[str, ...]
    condition2: bool
    condition2_reasons: tuple[str, ...]
    condition3: bool
    n: int
    torus_divisibility: Optional[int]
    n_divides_2d: Optional[bool]
    condition3_reasons: tuple[str, ...]
    overall: bool

    def __post_init__(self) -> None:
        if self.overall != (self.condition1 and self.condition2 and self.condition3):
            raise ValueError("overall flag must be the conjunction of the conditions")


@dataclass(frozen=True)
class EnumerationResult:
    """All form classes of a recipe over the flippable sign assignments."""

    forms: tuple[FormClass, ...]
    distinct_divisibilities: tuple[int, ...]
    pi0_lower_bound: int
    inexact_count: int
    divisibility_inconclusive: bool
    flippable_copies: int
    assignments_evaluated: int
    sampled: bool

    def __post_init__(self) -> None:
        if self.pi0_lower_bound != len(self.distinct_divisibilities):
            raise ValueError("component bound must count the distinct exact divisibilities")


@dataclass(frozen=True)
class SolveResult:
    """Multi-prime construction: one manifold, one sign assignment per prime."""

    recipe: SumRecipe
    manifold: FourManifold
    n: int
    lagrangian_copies: int
    assignments: dict[int, tuple[int, ...]]
    sign_sums: dict[int, int]


def check_hypotheses(
    manifold: FourManifold,
    tori: Sequence[EmbeddedTorus],
    n: int,
    sum_torus: EmbeddedTorus,
) -> HypothesisReport:
    """Run the three-part gate; fails safe on indeterminate divisibility."""
    if n <= 2:
        raise ValueError("the construction needs n > 2")
    if not tori:
        raise ValueError("at least one torus is required")

    # Condition 1: square-zero classes spanning a subspace of full count,
    # more than one of them, with the sum class dependent as it must be.
    reasons1: list[str] = []
    for torus in tori:
        sq = manifold.pairing.pair(torus.klass, torus.klass)
        if sq is None:
            reasons1.append(f"{torus.label}: self-pairing untracked")
        elif sq != 0:
            reasons1.append(f"{torus.label}: not square-zero")
    klasses = [t.klass for t in tori]
    r = rank(klasses)
    if r != len(tori):
        reasons1.append(f"classes span rank {r}, expected {len(tori)}")
    if len(tori) <= 1:
        reasons1.append("need more than one torus")
    if rank(klasses + [sum_torus.klass]) != r:
        reasons1.append("sum torus class is independent of the summands")
    condition1 = not reasons1

    # Condition 2: orientation-flip freedom on the first torus only;
    # positive symplectic representatives for the rest. A Lagrangian
    # torus counts because a small perturbation of the form makes it
    # positively symplectic without moving c1. Disjointness is a
    # property of the declared embeddings, taken on trust here.
    reasons2: list[str] = []
    first = tori[0]
    if first.kind != LAGRANGIAN:
        reasons2.append(f"first torus {first.label} must be Lagrangian, is {first.kind}")
    for torus in list(tori[1:]) + [sum_torus]:
        if torus.kind not in (SYMPLECTIC, LAGRANGIAN):
            reasons2.append(f"{torus.label}: no symplectic representative ({torus.kind})")
    expected_sum = klasses[0]
    for k in klasses[1:]:
        expected_sum = expected_sum + k
    if sum_torus.klass != expected_sum:
        reasons2.append(
            f"sum torus {sum_torus.label} carries {tuple(sum_torus.klass)}, "
            f"expected {tuple(expected_sum)}"
        )
    for torus in list(tori) + [sum_torus]:
        if not torus.oriented:
            reasons2.append(f"{torus.label}: missing orientation")
    condition2 = not reasons2

    # Condition 3: n | div(c1) but n does not divide 2d.
    reasons3: list[str] = []
    duals = [t.dual for t in list(tori) + [sum_torus] if t.dual is not None]
    c1_content = gcd_content(manifold.c1)
    if c1_content % n != 0:
        reasons3.append(f"n = {n} does not divide the c1 divisibility {c1_content}")
    report = divisibility_bounds(tori[0].klass, manifold.pairing, duals)
    d: Optional[int] = None
    n_div_2d: Optional[bool] = None
    if report.undefined:
        reasons3.append(f"first torus {first.label} is null-homologous")
    elif not report.exact:
        reasons3.append(
            f"divisibility of {first.label} indeterminate "
            f"(bounds {report.lower}..{report.upper or 'unconstrained'})"
        )
    else:
        d = report.lower
        n_div_2d = (2 * d) % n == 0
        if n_div_2d:
            reasons3.append(f"n = {n} divides 2d = {2 * d}")
    condition3 = not reasons3

    return HypothesisReport(
        condition1=condition1,
        rank=r,
        condition1_reasons=tuple(reasons1),
        condition2=condition2,
        condition2_reasons=tuple(reasons2),
        condition3=condition3,
        n=n,
        torus_divisibility=d,
        n_divides_2d=n_div_2d,
        condition3_reasons=tuple(reasons3),
        overall=condition1 and condition2 and condition3,
    )


def build_theorem_recipe(
    manifold: FourManifold,
    tori: Sequence[EmbeddedTorus],
    n: int,
    sum_torus: EmbeddedTorus,
    *,
    require_hypotheses: bool = True,
    name: Optional[str] = None,
) -> SumRecipe:
    """One copy of E(1) along each torus plus n-1 parallel copies along
    the sum torus, all signs positive.

    With require_hypotheses=False the recipe is built even when the gate
    fails; that is how known negative controls are constructed.
    """
    if require_hypotheses:
        report = check_hypotheses(manifold, tori, n, sum_torus)
        if not report.overall:
            reasons = (
                report.condition1_reasons
                + report.condition2_reasons
                + report.condition3_reasons
            )
            raise RecipeError("hypotheses not satisfied: " + "; ".join(reasons))
    elif n < 2:
        raise ValueError("need n >= 2 to build a recipe")
    gluings = [Gluing(t.label, 1, (1,)) for t in tori]
    if n - 1 >= 1:
        gluings.append(Gluing(sum_torus.label, n - 1, (1,) * (n - 1)))
    recipe = SumRecipe(
        base=manifold,
        tori=tuple(tori) + (sum_torus,),
        gluings=tuple(gluings),
        name=name or f"{manifold.name}-n{n}",
    )
    violations = recipe_violations(recipe)
    if violations:
        raise RecipeError("; ".join(violations))
    return recipe


def mcmullen_taubes_recipe() -> SumRecipe:
    """Four-torus summed along the three coordinate tori and one diagonal
    copy. The gate rejects n = 2 (2 divides 2d), so this is built as the
    negative control: distinct forms whose divisibilities all agree."""
    manifold, (tx, ty, tz, tw) = build_t4()
    return build_theorem_recipe(
        manifold, (tz, tx, ty), 2, tw, require_hypotheses=False, name="mcmullen-taubes"
    )


def _flippable_positions(recipe: SumRecipe) -> list[int]:
    table = recipe.torus_table
    positions: list[int] = []
    flat_index = 0
    for gluing in recipe.gluings:
        torus = table[gluing.torus_label]
        for _ in range(gluing.copies):
            if torus.kind == LAGRANGIAN:
                positions.append(flat_index)
            flat_index += 1
    return positions


def enumerate_forms(
    recipe: SumRecipe,
    *,
    cap: int = DEFAULT_ENUMERATION_CAP,
    sample: bool = False,
    seed: int = 0,
) -> EnumerationResult:
    """Evaluate every sign assignment on the Lagrangian-glued copies.

    2^k assignments for k flippable copies, exhaustively below the cap;
    beyond the cap, a deterministic seeded sample of cap assignments is
    drawn when sampling is enabled, otherwise the enumeration refuses to
    run. Forms are deduplicated by c1 vector. Only exact divisibility
    reports feed the component bound; inexact ones are kept in the form
    list and counted separately.
    """
    violations = recipe_violations(recipe)
    if violations:
        raise RecipeError("; ".join(violations))
    manifold = sum_invariants(recipe.base, recipe.gluings, recipe.tori, name=recipe.name)
    table = recipe.torus_table
    duals = [t.dual for t in recipe.tori if t.dual is not None]
    positions = _flippable_positions(recipe)
    k = len(positions)
    base_signs = list(flat_signs(recipe))

    exhaustive = 2**k <= cap
    if not exhaustive and not sample:
        raise EnumerationCapError(
            f"enumeration too large: 2^{k} assignments exceed the cap {cap}"
        )

    def assignment_signs(bits: tuple[int, ...]) -> tuple[int, ...]:
        signs = list(base_signs)
        for pos, s in zip(positions, bits):
            signs[pos] = s
        return tuple(signs)

    if exhaustive:
        assignments = [assignment_signs(bits) for bits in product((1, -1), repeat=k)]
        evaluated = 2**k
    else:
        rng = Random(f"fibresum-enumerate-{seed}")
        seen_bits = {tuple(base_signs[p] for p in positions)}
        while len(seen_bits) < cap:
            seen_bits.add(tuple(rng.choice((1, -1)) for _ in range(k)))
        assignments = [assignment_signs(bits) for bits in sorted(seen_bits, reverse=True)]
        evaluated = len(assignments)

    forms: list[FormClass] = []
    seen_c1: set[tuple[int, ...]] = set()
    exact_divisibilities: set[int] = set()
    exact_c1: set[tuple[int, ...]] = set()
    inexact = 0
    for signs in assignments:
        gluings = _regroup(recipe, signs)
        c1 = sum_c1(recipe.base.c1, gluings, table)
        key = c1.coords
        if key in seen_c1:
            continue
        seen_c1.add(key)
        report = divisibility_bounds(c1, manifold.pairing, duals)
        forms.append(FormClass(manifold=manifold, signs_flat=signs, c1=c1, divisibility=report))
        if report.exact:
            exact_divisibilities.add(report.lower)
            exact_c1.add(key)
        else:
            inexact += 1
    distinct = tuple(sorted(exact_divisibilities))
    return EnumerationResult(
        forms=tuple(forms),
        distinct_divisibilities=distinct,
        pi0_lower_bound=len(distinct),
        inexact_count=inexact,
        divisibility_inconclusive=len(exact_c1) > len(distinct),
        flippable_copies=k,
        assignments_evaluated=evaluated,
        sampled=not exhaustive,
    )


def _regroup(recipe: SumRecipe, signs_flat: Sequence[int]) -> tuple[Gluing, ...]:
    gluings = []
    pos = 0
    for gluing in recipe.gluings:
        chunk = tuple(signs_flat[pos : pos + gluing.copies])
        pos += gluing.copies
        gluings.append(Gluing(gluing.torus_label, gluing.copies, chunk))
    return tuple(gluings)


def _is_odd_prime(p: int) -> bool:
    if p < 3 or p % 2 == 0:
        return False
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


def solve_signs(primes: Sequence[int]) -> SolveResult:
    """Realize, for each prime, a form whose c1 divisibility is exactly it.

    With n the product of the given distinct odd primes, the recipe sums
    the four-torus with one positive copy along each of Tx and Ty, k
    parallel copies along the Lagrangian Tz, and n-1 copies along the
    diagonal torus Tw. An assignment keeping Ty positive whose Tz signs
    sum to s gives c1 = (-n, -n, -(n-1)-s) in torus coordinates, with
    divisibility gcd(n, n-1+s). For each prime the first workable s is
    found by scanning odd s upward from -(n-2); s = p - n + 1 always
    hits, and every returned assignment is re-verified through the full
    divisibility report rather than trusted from the arithmetic.
    """
    primes = tuple(int(p) for p in primes)
    if not primes:
        raise ValueError("at least one odd prime is required")
    if len(set(primes)) != len(primes):
        raise ValueError("primes must be distinct")
    for p in primes:
        if not _is_odd_prime(p):
            raise ValueError(f"{p} is not an odd prime")
    n = math.prod(primes)

    sign_sums: dict[int, int] = {}
    for p in primes:
        found = None
        for s in range(-(n - 2), n - 1, 2):
            if math.gcd(n, n - 1 + s) == p:
                found = s
                break
        if found is None:
            raise MathematicalInconsistencyError(
                f"no sign sum below {n - 2} realizes divisibility {p}"
            )
        sign_sums[p] = found
    k = max(abs(s) for s in sign_sums.values())

    manifold, (tx, ty, tz, tw) = build_t4()
    gluings = (
        Gluing(tx.label, 1, (1,)),
        Gluing(ty.label, 1, (1,)),
        Gluing(tz.label, k, (1,) * k),
        Gluing(tw.label, n - 1, (1,) * (n - 1)),
    )
    recipe = SumRecipe(
        base=manifold,
        tori=(tx, ty, tz, tw),
        gluings=gluings,
        name=f"primes-{'x'.join(str(p) for p in primes)}",
    )
    summed = sum_invariants(recipe.base, recipe.gluings, recipe.tori, name=recipe.name)
    duals = [t.dual for t in recipe.tori if t.dual is not None]

    assignments: dict[int, tuple[int, ...]] = {}
    for p, s in sign_sums.items():
        plus = (k + s) // 2
        if plus * 2 - k != s or not 0 <= plus <= k:
            raise MathematicalInconsistencyError(
                f"sign sum {s} is not realizable with {k} copies"
            )
        tz_signs = (1,) * plus + (-1,) * (k - plus)
        signs = (1, 1) + tz_signs + (1,) * (n - 1)
        c1 = sum_c1(recipe.base.c1, _regroup(recipe, signs), recipe.torus_table)
        report = divisibility_bounds(c1, summed.pairing, duals)
        if not report.exact or report.lower != p:
            raise MathematicalInconsistencyError(
                f"assignment for prime {p} yields divisibility "
                f"{report.lower}..{report.upper} (exact={report.exact})"
            )
        for q in primes:
            if q != p and report.lower % q == 0:
                raise MathematicalInconsistencyError(
                    f"divisibility for prime {p} is also divisible by {q}"
                )
        assignments[p] = signs
    return SolveResult(
        recipe=recipe,
        manifold=summed,
        n=n,
        lagrangian_copies=k,
        assignments=assignments,
        sign_sums=sign_sums,
    )


def pi0_lower_bound(forms: Sequence[FormClass]) -> int:
    """Distinct exact c1 divisibilities over forms on one manifold record.

    Divisibility of c1 is preserved by diffeomorphisms and deformations,
    so this count bounds the number of components of the moduli space of
    symplectic forms from below. Inexact reports are ignored.
    """
    records = {f.manifold for f in forms}
    if len(records) > 1:
        raise ValueError("forms live on different manifold records")
    return len({f.divisibility.lower for f in forms if f.divisibility.exact})
