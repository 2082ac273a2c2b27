"""Report assembly: human-readable tables and the machine document.

The machine document is a single JSON object with stable field names and
every integer rendered as an exact decimal string, so reports can be
diffed byte-for-byte in CI. Nothing time- or environment-dependent goes
in. Table output carries the same numeric content in aligned text.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

from .construct import EnumerationResult, HypothesisReport, SolveResult
from .fourman import FourManifold, form_parity
from .gompfsum import CheckReport, FormClass, SumRecipe
from .intlat import DivisibilityReport, IntVector

__all__ = ["ReportBuilder", "vector_doc", "manifold_doc", "form_doc"]


def _s(x: int) -> str:
    return str(int(x))


def vector_doc(v: IntVector) -> list[str]:
    return [_s(c) for c in v]


def divisibility_doc(r: DivisibilityReport) -> dict:
    return {
        "lower": _s(r.lower),
        "upper": _s(r.upper),
        "exact": r.exact,
        "undefined": r.undefined,
    }


def manifold_doc(m: FourManifold) -> dict:
    return {
        "name": m.name,
        "euler": _s(m.euler),
        "signature": _s(m.signature),
        "b1": _s(m.b1),
        "b2": _s(m.b2),
        "simply_connected": m.simply_connected,
        "basis": list(m.lattice_basis_labels),
        "pairing": [
            ["?" if e is None else _s(e) for e in row] for row in m.pairing.entries
        ],
        "c1": vector_doc(m.c1),
        "form_parity": form_parity(m),
    }


def form_doc(f: FormClass) -> dict:
    return {
        "signs": [_s(s) for s in f.signs_flat],
        "c1": vector_doc(f.c1),
        "divisibility": divisibility_doc(f.divisibility),
    }


def check_entries(name: str, report: CheckReport) -> list[dict]:
    out = []
    for msg in report.passed:
        out.append({"check": f"{name}: {msg}", "status": "pass"})
    for msg in report.failed:
        out.append({"check": f"{name}: {msg}", "status": "fail"})
    for msg in report.skipped:
        out.append({"check": f"{name}: {msg}", "status": "skipped"})
    return out


def _sign_string(signs) -> str:
    return "".join("+" if s > 0 else "-" for s in signs)


@dataclass
class ReportBuilder:
    """Accumulates task results and renders both output formats."""

    seed: int
    cap: int
    manifold: Optional[dict] = None
    forms: list[dict] = field(default_factory=list)
    divisibilities: list[str] = field(default_factory=list)
    pi0_lower_bound: Optional[str] = None
    checks: list[dict] = field(default_factory=list)
    tasks: list[dict] = field(default_factory=list)
    table_lines: list[str] = field(default_factory=list)
    errors: list[str] = field(default_factory=list)

    # -- table helpers ----------------------------------------------------

    def line(self, text: str = "") -> None:
        self.table_lines.append(text)

    def heading(self, text: str) -> None:
        if self.table_lines:
            self.line()
        self.line(text)
        self.line("-" * len(text))

    def note_error(self, message: str) -> None:
        self.errors.append(message)
        self.line(f"error: {message}")

    # -- task results ------------------------------------------------------

    def add_check(self, name: str, status: str, detail: str = "") -> None:
        entry = {"check": name, "status": status}
        if detail:
            entry["detail"] = detail
        self.checks.append(entry)
        self.line(f"  [{status:>7}] {name}" + (f" ({detail})" if detail else ""))

    def add_hypothesis_report(self, task_name: str, report: HypothesisReport) -> None:
        self.heading(f"hypothesis report ({task_name})")
        doc = {
            "task": "verify",
            "name": task_name,
            "condition1": {"pass": report.condition1, "rank": _s(report.rank),
                           "reasons": list(report.condition1_reasons)},
            "condition2": {"pass": report.condition2, "reasons": list(report.condition2_reasons)},
            "condition3": {
                "pass": report.condition3,
                "n": _s(report.n),
                "d": None if report.torus_divisibility is None else _s(report.torus_divisibility),
                "n_divides_2d": report.n_divides_2d,
                "reasons": list(report.condition3_reasons),
            },
            "overall": report.overall,
        }
        self.tasks.append(doc)
        self.add_check(
            f"{task_name}: condition 1 (rank {report.rank})",
            "pass" if report.condition1 else "fail",
            "; ".join(report.condition1_reasons),
        )
        self.add_check(
            f"{task_name}: condition 2 (orientation freedom)",
            "pass" if report.condition2 else "fail",
            "; ".join(report.condition2_reasons),
        )
        d_text = "?" if report.torus_divisibility is None else str(report.torus_divisibility)
        self.add_check(
            f"{task_name}: condition 3 (n = {report.n}, d = {d_text})",
            "pass" if report.condition3 else "fail",
            "; ".join(report.condition3_reasons),
        )
        self.add_check(f"{task_name}: overall", "pass" if report.overall else "fail")

    def add_recipe(self, recipe: SumRecipe, manifold: FourManifold, contributions: list[dict]) -> None:
        self.heading(f"recipe {recipe.name}")
        gluing_docs = []
        for gluing in recipe.gluings:
            gluing_docs.append(
                {
                    "torus": gluing.torus_label,
                    "copies": _s(gluing.copies),
                    "signs": [_s(s) for s in gluing.signs],
                }
            )
            self.line(
                f"  glue {gluing.torus_label} x{gluing.copies} signs {_sign_string(gluing.signs)}"
            )
        self.line(f"  total copies: {recipe.total_copies}")
        trace = [
            {
                "torus": c["torus"],
                "copy": _s(c["copy"]),
                "sign": _s(c["sign"]),
                "fibre_term": vector_doc(c["fibre_term"]),
                "normal_term": vector_doc(c["normal_term"]),
                "net": vector_doc(c["net"]),
            }
            for c in contributions
        ]
        self.tasks.append(
            {
                "task": "build",
                "name": recipe.name,
                "gluings": gluing_docs,
                "total_copies": _s(recipe.total_copies),
                "manifold": manifold_doc(manifold),
                "c1_trace": trace,
            }
        )
        self.set_manifold(manifold)

    def set_manifold(self, manifold: FourManifold) -> None:
        self.manifold = manifold_doc(manifold)
        self.line(
            f"  manifold {manifold.name}: e = {manifold.euler}, "
            f"sigma = {manifold.signature}, b2 = {manifold.b2}, "
            f"simply connected: {manifold.simply_connected}, "
            f"parity: {form_parity(manifold)}"
        )

    def add_enumeration(self, name: str, manifold: FourManifold, result: EnumerationResult) -> None:
        self.heading(f"enumeration {name}")
        self.set_manifold(manifold)
        self.line(
            f"  flippable copies: {result.flippable_copies}, assignments "
            f"evaluated: {result.assignments_evaluated}"
            + (" (sampled)" if result.sampled else "")
        )
        sign_width = max([5] + [len(f.signs_flat) for f in result.forms])
        c1_width = max(
            [2] + [len("(" + ", ".join(str(c) for c in f.c1) + ")") for f in result.forms]
        )
        self.line(f"  {'signs':<{sign_width}} {'c1':<{c1_width}} divisibility")
        for f in result.forms:
            d = f.divisibility
            div_text = (
                "undefined"
                if d.undefined
                else (f"{d.lower}" if d.exact else f"{d.lower}..{d.upper or 'unconstrained'}")
            )
            c1_text = "(" + ", ".join(str(c) for c in f.c1) + ")"
            self.line(f"  {_sign_string(f.signs_flat):<{sign_width}} {c1_text:<{c1_width}} {div_text}")
        divs = [_s(d) for d in result.distinct_divisibilities]
        self.line(f"  distinct exact divisibilities: {{{', '.join(divs)}}}")
        self.line(f"  pi0 lower bound: {result.pi0_lower_bound}")
        if result.inexact_count:
            self.line(f"  inexact divisibility reports: {result.inexact_count} (excluded)")
        if result.divisibility_inconclusive:
            self.line("  note: divisibility inconclusive (distinct c1 vectors share a value)")
        self.forms = [form_doc(f) for f in result.forms]
        self.divisibilities = divs
        self.pi0_lower_bound = _s(result.pi0_lower_bound)
        self.tasks.append(
            {
                "task": "enumerate",
                "name": name,
                "forms": self.forms,
                "divisibilities": divs,
                "pi0_lower_bound": self.pi0_lower_bound,
                "inexact_count": _s(result.inexact_count),
                "divisibility_inconclusive": result.divisibility_inconclusive,
                "flippable_copies": _s(result.flippable_copies),
                "assignments_evaluated": _s(result.assignments_evaluated),
                "sampled": result.sampled,
            }
        )

    def add_solve(self, result: SolveResult) -> None:
        self.heading(f"sign solver (n = {result.n})")
        self.line(
            f"  recipe {result.recipe.name}: {result.recipe.total_copies} copies, "
            f"{result.lagrangian_copies} parallel Lagrangian copies"
        )
        assignments_doc = {}
        for p in sorted(result.assignments):
            signs = result.assignments[p]
            assignments_doc[_s(p)] = {
                "signs": [_s(s) for s in signs],
                "sign_sum": _s(result.sign_sums[p]),
            }
            self.line(
                f"  prime {p}: sign sum {result.sign_sums[p]:+d}, "
                f"signs {_sign_string(signs)}"
            )
        self.tasks.append(
            {
                "task": "solve",
                "name": result.recipe.name,
                "n": _s(result.n),
                "lagrangian_copies": _s(result.lagrangian_copies),
                "assignments": assignments_doc,
                "realization": "parallel Lagrangian copies of Tz",
            }
        )

    def add_linking(
        self,
        name: str,
        matrix: list[list[int]],
        axis_coords: Optional[list[int]],
        relation: Optional[list[int]],
    ) -> None:
        self.heading(f"linking report ({name})")
        doc: dict = {
            "task": "linking",
            "name": name,
            "pairwise_linking": [[_s(v) for v in row] for row in matrix],
        }
        for i, row in enumerate(matrix):
            self.line(f"  component {i}: " + " ".join(f"{v:>3}" for v in row))
        if axis_coords is not None:
            doc["axis_linking"] = [_s(v) for v in axis_coords]
            self.line(f"  axis linking: ({', '.join(str(v) for v in axis_coords)})")
        if relation is not None:
            doc["relation"] = [_s(v) for v in relation]
            self.line(f"  torus relation: ({', '.join(str(v) for v in relation)})")
        self.tasks.append(doc)

    # -- final documents ---------------------------------------------------

    def machine_document(self) -> dict:
        return {
            "schema": "fibresum-report/1",
            "seed": _s(self.seed),
            "cap": _s(self.cap),
            "manifold": self.manifold,
            "forms": self.forms,
            "divisibilities": self.divisibilities,
            "pi0_lower_bound": self.pi0_lower_bound,
            "checks": self.checks,
            "tasks": self.tasks,
            "errors": self.errors,
        }

    def render_machine(self) -> str:
        return json.dumps(self.machine_document(), indent=2, sort_keys=True)

    def render_table(self) -> str:
        return "\n".join(self.table_lines)
