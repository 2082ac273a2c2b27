"""Command-line interface: subcommand dispatch and task execution.

Exit codes: 0 success, 2 validation failure (bad config, unresolved
reference, failed hypothesis gate), 3 mathematical inconsistency (an
internal invariant check failed, so the run's results must not be
trusted).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import construct, linkgeom
from .config import (
    BuildTask,
    EnumerateTask,
    LinkingTask,
    RunConfig,
    SolveTask,
    Task,
    VerifyTask,
    bundled_path,
    parse_config,
    recipe_config_section,
)
from .errors import (
    ConfigError,
    EnumerationCapError,
    FibresumError,
    MathematicalInconsistencyError,
    RecipeError,
)
from .gompfsum import c1_contributions, check_c1_identities, sum_invariants
from .reports import ReportBuilder, check_entries

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_INCONSISTENT = 3


class _TaskFailure(Exception):
    def __init__(self, code: int, message: str) -> None:
        super().__init__(message)
        self.code = code


def _run_verify(task: VerifyTask, config: RunConfig, report: ReportBuilder) -> None:
    manifold = config.manifolds[task.manifold]
    tori = tuple(config.torus(task.manifold, label) for label in task.tori)
    sum_torus = config.torus(task.manifold, task.sum_torus)
    hypothesis = construct.check_hypotheses(manifold, tori, task.n, sum_torus)
    report.add_hypothesis_report(f"{task.manifold} n={task.n}", hypothesis)
    if not hypothesis.overall:
        raise _TaskFailure(EXIT_VALIDATION, "hypothesis gate failed")


def _run_build(task: BuildTask, config: RunConfig, report: ReportBuilder) -> None:
    manifold = config.manifolds[task.manifold]
    tori = tuple(config.torus(task.manifold, label) for label in task.tori)
    sum_torus = config.torus(task.manifold, task.sum_torus)
    recipe = construct.build_theorem_recipe(manifold, tori, task.n, sum_torus)
    summed = sum_invariants(recipe.base, recipe.gluings, recipe.tori, name=recipe.name)
    trace = c1_contributions(recipe.gluings, recipe.torus_table)
    report.add_recipe(recipe, summed, trace)
    snippet = recipe_config_section(recipe, task.manifold)
    report.line("  config section:")
    for line in snippet.rstrip().splitlines():
        report.line(f"    {line}")
    report.tasks[-1]["config_section"] = snippet


def _check_forms(name: str, result, manifold, recipe, report: ReportBuilder) -> None:
    extras = {t.label: t.klass for t in recipe.tori}
    any_failed = False
    for form in result.forms:
        identity = check_c1_identities(manifold, form, extras)
        label = f"{name} signs {''.join('+' if s > 0 else '-' for s in form.signs_flat)}"
        report.checks.extend(check_entries(label, identity))
        if not identity.ok:
            any_failed = True
            for msg in identity.failed:
                report.line(f"  [   fail] {label}: {msg}")
    summary = "pass" if not any_failed else "fail"
    report.add_check(f"{name}: c1 identities over all forms", summary)
    if any_failed:
        raise MathematicalInconsistencyError("c1 identity check failed")


def _run_enumerate(task: EnumerateTask, config: RunConfig, report: ReportBuilder) -> None:
    recipe = config.recipes[task.recipe]
    result = construct.enumerate_forms(
        recipe,
        cap=config.enumeration_cap,
        sample=config.sample_beyond_cap,
        seed=config.seed,
    )
    manifold = result.forms[0].manifold if result.forms else recipe.base
    report.add_enumeration(task.recipe, manifold, result)
    if manifold.simply_connected:
        _check_forms(task.recipe, result, manifold, recipe, report)


def _run_solve(task: SolveTask, config: RunConfig, report: ReportBuilder) -> None:
    result = construct.solve_signs(task.primes)
    report.add_solve(result)
    for p in sorted(result.assignments):
        report.add_check(f"solve: prime {p} realized with exact divisibility {p}", "pass")
    enumeration = construct.enumerate_forms(
        result.recipe,
        cap=config.enumeration_cap,
        sample=config.sample_beyond_cap,
        seed=config.seed,
    )
    report.add_enumeration(result.recipe.name, result.manifold, enumeration)
    missing = [p for p in task.primes if p not in enumeration.distinct_divisibilities]
    if missing and not enumeration.sampled:
        # Every solved assignment was verified directly, so an exhaustive
        # enumeration that misses one is a genuine contradiction.
        raise MathematicalInconsistencyError(
            f"enumeration lost solved divisibilities: {missing}"
        )
    if result.manifold.simply_connected:
        _check_forms(result.recipe.name, enumeration, result.manifold, result.recipe, report)


def _run_linking(task: LinkingTask, config: RunConfig, report: ReportBuilder) -> None:
    link_path = config.resolve_file(task.link)
    try:
        link = linkgeom.load_link(link_path)
    except (ValueError, FibresumError) as exc:
        raise ConfigError(f"bad link file {task.link}: {exc}", path=config.path) from None
    components = link.surgery_components()
    matrix = [
        [
            0
            if i == j
            else linkgeom.linking_number_verified(a, b, seed=config.seed)
            for j, b in enumerate(components)
        ]
        for i, a in enumerate(components)
    ]
    axis_coords = None
    relation = None
    if task.axis is not None:
        axis_path = config.resolve_file(task.axis)
        try:
            axis = linkgeom.load_curve(axis_path)
        except (ValueError, FibresumError) as exc:
            raise ConfigError(f"bad axis file {task.axis}: {exc}", path=config.path) from None
        axis_coords = [
            linkgeom.linking_number_verified(axis, comp, seed=config.seed)
            for comp in components
        ]
        if len(components) == 3:
            relation = list(linkgeom.derive_torus_relation(link, axis, seed=config.seed))
    report.add_linking(Path(task.link).name, matrix, axis_coords, relation)
    report.add_check("linking: crossing count agrees with Gauss integral", "pass")


_RUNNERS = {
    VerifyTask: _run_verify,
    BuildTask: _run_build,
    EnumerateTask: _run_enumerate,
    SolveTask: _run_solve,
    LinkingTask: _run_linking,
}

_TASK_NAMES = {
    VerifyTask: "verify",
    BuildTask: "build",
    EnumerateTask: "enumerate",
    SolveTask: "solve",
    LinkingTask: "linking",
}


def run(config: RunConfig, kinds: Optional[set[str]] = None, stream=None) -> int:
    """Execute the config's tasks in order; returns the exit code.

    Partial results accumulated before an error are still emitted.
    """
    stream = stream or sys.stdout
    report = ReportBuilder(seed=config.seed, cap=config.enumeration_cap)
    selected = [
        t for t in config.tasks if kinds is None or _TASK_NAMES[type(t)] in kinds
    ]
    code = EXIT_OK
    if not selected:
        wanted = ", ".join(sorted(kinds)) if kinds else "any"
        report.note_error(f"no matching tasks in config (wanted: {wanted})")
        code = EXIT_VALIDATION
    try:
        for task in selected:
            _RUNNERS[type(task)](task, config, report)
    except _TaskFailure as exc:
        report.note_error(str(exc))
        code = exc.code
    except MathematicalInconsistencyError as exc:
        report.note_error(f"mathematical inconsistency: {exc}")
        code = EXIT_INCONSISTENT
    except (ConfigError, RecipeError, EnumerationCapError, ValueError) as exc:
        report.note_error(str(exc))
        code = EXIT_VALIDATION
    if config.output_format == "machine":
        print(report.render_machine(), file=stream)
    else:
        print(report.render_table(), file=stream)
    return code


def _load_config(args: argparse.Namespace) -> RunConfig:
    if args.config is None:
        raise ConfigError("a --config file is required for this subcommand")
    path = Path(args.config)
    if not path.exists():
        bundled = bundled_path(args.config)
        if bundled is not None:
            path = bundled
    config = parse_config(path)
    _apply_overrides(config, args)
    return config


def _apply_overrides(config: RunConfig, args: argparse.Namespace) -> None:
    if getattr(args, "output", None):
        config.output_format = args.output
    if getattr(args, "seed", None) is not None:
        config.seed = args.seed
    if getattr(args, "cap", None) is not None:
        config.enumeration_cap = args.cap
    if getattr(args, "sample", False):
        config.sample_beyond_cap = True


def _synthetic_config(args: argparse.Namespace, tasks: list[Task]) -> RunConfig:
    config = RunConfig(tasks=tasks, base_dir=Path.cwd(), path="<args>")
    _apply_overrides(config, args)
    return config


def _add_common_flags(parser: argparse.ArgumentParser, *, config_required: bool) -> None:
    parser.add_argument(
        "--config",
        metavar="PATH",
        required=config_required,
        help="configuration file (bundled names like corollary15.cfg also resolve)",
    )
    parser.add_argument(
        "--output", choices=("table", "machine"), default=None, help="report format"
    )
    parser.add_argument("--seed", type=int, default=None, metavar="N", help="random seed")
    parser.add_argument(
        "--cap", type=int, default=None, metavar="N", help="sign enumeration cap"
    )
    parser.add_argument(
        "--sample",
        action="store_true",
        help="sample sign assignments deterministically when 2^k exceeds the cap",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fibresum",
        description=(
            "Exact bookkeeping for torus fibre sums of four-manifolds: "
            "hypothesis checks, Chern class sign enumeration, divisibility "
            "certificates, and polygonal linking numbers."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    for name, help_text in (
        ("verify", "run the hypothesis gate for the config's verify tasks"),
        ("build", "synthesize recipes for the config's build tasks"),
        ("enumerate", "enumerate sign assignments for the config's enumerate tasks"),
        ("run", "run every task in the config, in order"),
    ):
        p = sub.add_parser(name, help=help_text)
        _add_common_flags(p, config_required=True)

    p = sub.add_parser("solve", help="realize one divisibility per prime")
    _add_common_flags(p, config_required=False)
    p.add_argument("--primes", metavar="P1,P2,...", help="distinct odd primes")

    p = sub.add_parser("linking", help="linking numbers and the torus relation")
    _add_common_flags(p, config_required=False)
    p.add_argument("--link", metavar="PATH", help="link file (surgery components)")
    p.add_argument("--axis", metavar="PATH", help="axis curve file")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "solve" and args.primes:
            primes = tuple(int(p) for p in args.primes.replace(",", " ").split())
            config = _synthetic_config(args, [SolveTask(primes)])
            return run(config, {"solve"})
        if args.command == "linking" and args.link:
            config = _synthetic_config(args, [LinkingTask(args.link, args.axis)])
            return run(config, {"linking"})
        config = _load_config(args)
        kinds = None if args.command == "run" else {args.command}
        return run(config, kinds)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except FibresumError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
