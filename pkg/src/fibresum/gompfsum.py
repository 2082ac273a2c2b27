"""Fibre sums with rational elliptic pieces, at the invariant level.

Each glued copy is a normal fibre sum with one copy of E(1) along a
declared square-zero torus of the base, the fibre glued to the torus.
The smooth result depends only on the torus orientations and normal
trivialisations, so one manifold record is shared by every sign
assignment; the signs select a symplectic structure and enter only
through the first Chern class.

Per copy glued along torus T with sign e (e = +1 when the perturbed
form orients T positively, -1 otherwise, allowed only for Lagrangian
tori): the Chern class gains e*[F] - 2*e*[T], with the fibre class [F]
identified with [T] by the gluing. The net contribution is -e*[T]; the
two-step form is kept in `c1_contributions` for traceable reports.

Euler characteristics add (a torus neighbourhood has zero Euler
characteristic) and signatures add by Novikov additivity across the
T^3 splitting hypersurface, giving +12 and -8 per copy.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence

from .errors import OrientationError, RecipeError
from .fourman import LAGRANGIAN, EmbeddedTorus, FourManifold
from .intlat import DivisibilityReport, IntVector, divisibility_bounds

__all__ = [
    "Gluing",
    "SumRecipe",
    "FormClass",
    "CheckReport",
    "recipe_violations",
    "sum_c1",
    "c1_contributions",
    "sum_invariants",
    "perform_recipe",
    "flat_signs",
    "with_signs",
    "check_c1_identities",
]

EULER_PER_COPY = 12
SIGNATURE_PER_COPY = -8


@dataclass(frozen=True)
class Gluing:
    """Copies of E(1) glued along one torus, with a sign per copy."""

    torus_label: str
    copies: int
    signs: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "signs", tuple(int(s) for s in self.signs))
        if self.copies < 1:
            raise RecipeError(f"gluing along {self.torus_label}: copies must be positive")
        if len(self.signs) != self.copies:
            raise RecipeError(
                f"gluing along {self.torus_label}: {self.copies} copies need "
                f"{self.copies} signs, got {len(self.signs)}"
            )
        if any(s not in (1, -1) for s in self.signs):
            raise RecipeError(f"gluing along {self.torus_label}: signs must be +1 or -1")


@dataclass(frozen=True)
class SumRecipe:
    """Ordered gluings of a base manifold with copies of E(1)."""

    base: FourManifold
    tori: tuple[EmbeddedTorus, ...]
    gluings: tuple[Gluing, ...]
    name: str = "recipe"

    def __post_init__(self) -> None:
        object.__setattr__(self, "tori", tuple(self.tori))
        object.__setattr__(self, "gluings", tuple(self.gluings))

    @property
    def torus_table(self) -> dict[str, EmbeddedTorus]:
        return {t.label: t for t in self.tori}

    @property
    def total_copies(self) -> int:
        return sum(g.copies for g in self.gluings)


@dataclass(frozen=True)
class FormClass:
    """One symplectic structure on the summed manifold."""

    manifold: FourManifold
    signs_flat: tuple[int, ...]
    c1: IntVector
    divisibility: DivisibilityReport


@dataclass(frozen=True)
class CheckReport:
    """Outcome of a consistency-check battery."""

    passed: tuple[str, ...]
    failed: tuple[str, ...]
    skipped: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.failed


def recipe_violations(recipe: SumRecipe) -> list[str]:
    """Structural problems with a recipe (empty list = valid)."""
    violations: list[str] = []
    table: dict[str, EmbeddedTorus] = {}
    for torus in recipe.tori:
        if torus.label in table:
            violations.append(f"torus {torus.label}: declared twice")
        table[torus.label] = torus
        if len(torus.klass) != recipe.base.rank:
            violations.append(
                f"torus {torus.label}: class length {len(torus.klass)} != "
                f"tracked rank {recipe.base.rank}"
            )
    for gluing in recipe.gluings:
        torus = table.get(gluing.torus_label)
        if torus is None:
            violations.append(f"gluing references undeclared torus {gluing.torus_label}")
            continue
        if -1 in gluing.signs and torus.kind != LAGRANGIAN:
            violations.append(
                f"gluing along {torus.label}: orientation not flippable "
                f"({torus.kind} torus)"
            )
        if gluing.copies > 1 and not torus.parallel_copies_available:
            violations.append(
                f"gluing along {torus.label}: {gluing.copies} parallel copies "
                "requested but none declared available"
            )
    return violations


def _require_valid(recipe: SumRecipe) -> None:
    violations = recipe_violations(recipe)
    if violations:
        raise RecipeError("; ".join(violations))


def _resolve(tori: "Mapping[str, EmbeddedTorus] | Sequence[EmbeddedTorus]") -> dict[str, EmbeddedTorus]:
    if isinstance(tori, Mapping):
        return dict(tori)
    return {t.label: t for t in tori}


def c1_contributions(
    gluings: Sequence[Gluing],
    tori: "Mapping[str, EmbeddedTorus] | Sequence[EmbeddedTorus]",
) -> list[dict]:
    """Per-copy Chern contributions in two-step form.

    Each record carries the fibre term e*[F] (written in base
    coordinates through the identification [F] = [T]) and the normal
    correction -2*e*[T]; their sum is the net contribution -e*[T].
    """
    table = _resolve(tori)
    out: list[dict] = []
    for gluing in gluings:
        torus = table[gluing.torus_label]
        for copy_index, sign in enumerate(gluing.signs):
            if sign == -1 and torus.kind != LAGRANGIAN:
                raise OrientationError(
                    f"orientation not flippable on {torus.kind} torus {torus.label}"
                )
            fibre_term = sign * torus.klass
            normal_term = (-2 * sign) * torus.klass
            out.append(
                {
                    "torus": torus.label,
                    "copy": copy_index,
                    "sign": sign,
                    "fibre_term": fibre_term,
                    "normal_term": normal_term,
                    "net": fibre_term + normal_term,
                }
            )
    return out


def sum_c1(
    c1_base: IntVector,
    gluings: Sequence[Gluing],
    tori: "Mapping[str, EmbeddedTorus] | Sequence[EmbeddedTorus]",
) -> IntVector:
    """First Chern class of the summed structure for the given signs."""
    total = c1_base
    for record in c1_contributions(gluings, tori):
        total = total + record["net"]
    return total


def _dual_block_indices(tori: Iterable[EmbeddedTorus]) -> set[int]:
    dual_support: set[int] = set()
    klass_support: set[int] = set()
    for torus in tori:
        klass_support |= set(torus.klass.support())
        if torus.dual is not None:
            dual_support |= set(torus.dual.support())
    return dual_support - klass_support


def sum_invariants(
    base: FourManifold,
    gluings: Sequence[Gluing],
    tori: Sequence[EmbeddedTorus],
    *,
    name: Optional[str] = None,
) -> FourManifold:
    """Invariant record of the sum; identical for every sign assignment.

    The record's own c1 is the one computed from the gluings as given
    (sign-flipped variants are carried by FormClass values instead).
    Torus classes and their pairings against everything survive the sum;
    dual classes survive but get capped inside the elliptic pieces, so
    every pairing between two dual classes is downgraded to untracked.

    The sum is simply connected when the base is, or when the declared
    tori normally generate its fundamental group and each is glued at
    least once (every loop on a glued torus dies in the fibre
    complement, whose fundamental group is trivial). For a sum that is
    not certified simply connected, b1 is carried over from the base and
    b2 follows from Poincare duality given that b1; the carried b1 can
    overcount when gluings kill part of H1, so those two fields are
    best-effort rather than certified.
    """
    total = sum(g.copies for g in gluings)
    if total == 0:
        return base
    table = _resolve(tori)
    for gluing in gluings:
        if gluing.torus_label not in table:
            raise RecipeError(f"gluing references undeclared torus {gluing.torus_label}")
    euler = base.euler + EULER_PER_COPY * total
    signature = base.signature + SIGNATURE_PER_COPY * total
    glued = {g.torus_label for g in gluings}
    simply_connected = base.simply_connected or (
        base.pi1_normally_generated_by_tori
        and all(t.label in glued for t in tori)
    )
    if simply_connected:
        b1, b2 = 0, euler - 2
    else:
        b1 = base.b1
        b2 = euler - 2 + 2 * b1
    pairing = base.pairing.masked(_dual_block_indices(tori))
    c1 = sum_c1(base.c1, gluings, table)
    return FourManifold(
        name=name or f"{base.name}+{total}xE1",
        euler=euler,
        signature=signature,
        b1=b1,
        b2=b2,
        lattice_basis_labels=base.lattice_basis_labels,
        pairing=pairing,
        c1=c1,
        pi1_normally_generated_by_tori=base.pi1_normally_generated_by_tori,
        simply_connected=simply_connected,
    )


def flat_signs(recipe: SumRecipe) -> tuple[int, ...]:
    """All per-copy signs in gluing order."""
    out: list[int] = []
    for gluing in recipe.gluings:
        out.extend(gluing.signs)
    return tuple(out)


def with_signs(recipe: SumRecipe, signs_flat: Sequence[int]) -> SumRecipe:
    """Copy of the recipe with the flat sign vector redistributed."""
    signs = [int(s) for s in signs_flat]
    if len(signs) != recipe.total_copies:
        raise RecipeError(
            f"sign vector length {len(signs)} != total copies {recipe.total_copies}"
        )
    gluings = []
    pos = 0
    for gluing in recipe.gluings:
        chunk = tuple(signs[pos : pos + gluing.copies])
        pos += gluing.copies
        gluings.append(Gluing(gluing.torus_label, gluing.copies, chunk))
    return SumRecipe(recipe.base, recipe.tori, tuple(gluings), recipe.name)


def perform_recipe(recipe: SumRecipe) -> tuple[FourManifold, FormClass]:
    """Evaluate a recipe: summed invariants plus the resulting form class."""
    _require_valid(recipe)
    manifold = sum_invariants(recipe.base, recipe.gluings, recipe.tori, name=recipe.name)
    duals = [t.dual for t in recipe.tori if t.dual is not None]
    report = divisibility_bounds(manifold.c1, manifold.pairing, duals)
    form = FormClass(
        manifold=manifold,
        signs_flat=flat_signs(recipe),
        c1=manifold.c1,
        divisibility=report,
    )
    return manifold, form


def check_c1_identities(
    manifold: FourManifold,
    form: FormClass,
    extra_classes: "Mapping[str, IntVector] | None" = None,
) -> CheckReport:
    """Almost-complex consistency checks on a form class.

    Verifies <c1, c1> = 2e + 3*sigma and the characteristic property
    <c1, x> = <x, x> (mod 2) for every tracked basis class, plus any
    extra named classes. Checks needing untracked pairings are reported
    as skipped rather than silently dropped.
    """
    if not manifold.simply_connected:
        raise ValueError("c1 identity checks require a simply connected record")
    passed: list[str] = []
    failed: list[str] = []
    skipped: list[str] = []
    c1 = form.c1
    square = manifold.pairing.pair(c1, c1)
    target = 2 * manifold.euler + 3 * manifold.signature
    label = f"<c1,c1> = 2e + 3sigma = {target}"
    if square is None:
        skipped.append(label + " (pairing untracked)")
    elif square == target:
        passed.append(label)
    else:
        failed.append(f"<c1,c1> = {square}, expected {target}")

    classes: list[tuple[str, IntVector]] = [
        (name, manifold.basis_vector(i))
        for i, name in enumerate(manifold.lattice_basis_labels)
    ]
    if extra_classes:
        classes.extend(extra_classes.items())
    for name, vec in classes:
        self_pairing = manifold.pairing.pair(vec, vec)
        label = f"parity of <c1, {name}>"
        if self_pairing is None:
            skipped.append(label + " (self-pairing untracked)")
            continue
        cp = manifold.pairing.pair(c1, vec)
        if cp is None:
            skipped.append(label + " (c1 pairing untracked)")
            continue
        if (cp - self_pairing) % 2 == 0:
            passed.append(label)
        else:
            failed.append(
                f"characteristic parity fails on {name}: "
                f"<c1, {name}> = {cp}, <{name}, {name}> = {self_pairing}"
            )
    return CheckReport(tuple(passed), tuple(failed), tuple(skipped))
