import io
import json
import subprocess
import sys

import pytest

from fibresum.cli import main, run
from fibresum.config import bundled_path, parse_config, parse_config_text
from fibresum.errors import ConfigError


def test_bundled_corollary_config_parses_to_five_gluings():
    config = parse_config(bundled_path("corollary15.cfg"))
    recipe = config.recipes["cor15"]
    assert recipe.total_copies == 5
    kinds = [type(t).__name__ for t in config.tasks]
    assert kinds == ["VerifyTask", "EnumerateTask"]
    assert config.seed == 0


def test_empty_config_rejected():
    with pytest.raises(ConfigError, match="no tasks"):
        parse_config_text("")


def test_flip_on_symplectic_torus_rejected_at_load_time():
    text = """
    [manifold T4]
    builtin = T4

    [recipe bad]
    manifold = T4
    glue = Tx -

    [task enumerate]
    recipe = bad
    """
    with pytest.raises(ConfigError, match="not flippable"):
        parse_config_text(text)


def test_unresolved_references_are_named():
    with pytest.raises(ConfigError, match="ghost"):
        parse_config_text(
            "[manifold T4]\nbuiltin = T4\n\n[recipe r]\nmanifold = T4\nglue = ghost +\n"
            "\n[task enumerate]\nrecipe = r\n"
        )
    with pytest.raises(ConfigError, match="missing"):
        parse_config_text("[manifold T4]\nbuiltin = T4\n\n[task enumerate]\nrecipe = missing\n")


def test_schema_errors_carry_line_numbers():
    with pytest.raises(ConfigError, match=":2"):
        parse_config_text("# comment\nnot a pair\n", path="cfg")
    with pytest.raises(ConfigError, match="seed"):
        parse_config_text("seed = -1\n[task solve]\nprimes = 3\n")


def test_custom_manifold_and_torus_sections():
    text = """
    [manifold M]
    euler = 12
    signature = -8
    b1 = 0
    b2 = 10
    basis = F S
    c1 = 1 0
    pairing_row = 0 1
    pairing_row = 1 -1
    pi1_tori_generate = true
    simply_connected = true

    [torus F]
    manifold = M
    class = 1 0
    kind = symplectic
    dual = 0 1
    parallel = true

    [recipe double]
    manifold = M
    glue = F + +

    [task enumerate]
    recipe = double
    """
    config = parse_config_text(text)
    recipe = config.recipes["double"]
    assert recipe.base.name == "M"
    assert recipe.total_copies == 2
    out = io.StringIO()
    assert run(config, {"enumerate"}, stream=out) == 0
    assert "pi0 lower bound: 1" in out.getvalue()


def test_invalid_custom_manifold_rejected():
    text = """
    [manifold M]
    euler = 3
    signature = -8
    b1 = 0
    b2 = 10
    basis = F S
    pairing_row = 0 1
    pairing_row = 1 -1
    simply_connected = true

    [task solve]
    primes = 3
    """
    with pytest.raises(ConfigError, match="inconsistent"):
        parse_config_text(text)


def test_unknown_pairing_entries_parse():
    text = """
    [manifold M]
    euler = 4
    signature = 0
    b1 = 0
    b2 = 2
    basis = A B
    pairing_row = 0 ?
    pairing_row = ? -2
    simply_connected = true

    [task solve]
    primes = 3
    """
    config = parse_config_text(text)
    assert config.manifolds["M"].pairing.entries[0][1] is None


def test_machine_reports_are_byte_identical_across_runs():
    config_path = bundled_path("corollary15.cfg")

    def render():
        config = parse_config(config_path)
        config.output_format = "machine"
        out = io.StringIO()
        assert run(config, None, stream=out) == 0
        return out.getvalue()

    first, second = render(), render()
    assert first == second
    doc = json.loads(first)
    assert doc["divisibilities"] == ["1", "3"]
    assert doc["pi0_lower_bound"] == "2"
    assert doc["manifold"]["euler"] == "60"


def test_table_and_machine_agree_on_numbers():
    config_path = bundled_path("corollary15.cfg")
    config = parse_config(config_path)
    table_out = io.StringIO()
    run(config, {"enumerate"}, stream=table_out)
    config = parse_config(config_path)
    config.output_format = "machine"
    machine_out = io.StringIO()
    run(config, {"enumerate"}, stream=machine_out)
    table = table_out.getvalue()
    doc = json.loads(machine_out.getvalue())
    assert f"pi0 lower bound: {doc['pi0_lower_bound']}" in table
    for form in doc["forms"]:
        c1_text = "(" + ", ".join(form["c1"]) + ")"
        assert c1_text in table
    divis = "{" + ", ".join(doc["divisibilities"]) + "}"
    assert divis in table
    assert f"e = {doc['manifold']['euler']}" in table


def test_cli_verify_and_enumerate_exit_codes():
    assert main(["verify", "--config", "corollary15.cfg"]) == 0
    assert main(["enumerate", "--config", "corollary15.cfg"]) == 0
    assert main(["run", "--config", "corollary15.cfg"]) == 0


def test_cli_failing_verify_exits_2(capsys):
    failing = """
    [manifold T4]
    builtin = T4

    [task verify]
    manifold = T4
    tori = Tz
    sum = Tz
    n = 3
    """
    import tempfile, pathlib

    with tempfile.TemporaryDirectory() as tmp:
        path = pathlib.Path(tmp) / "failing.cfg"
        path.write_text(failing)
        assert main(["verify", "--config", str(path)]) == 2
    out = capsys.readouterr().out
    assert "fail" in out


def test_build_task_reports_recipe_and_manifold():
    text = """
    [manifold T4]
    builtin = T4

    [task build]
    manifold = T4
    tori = Tz Tx Ty
    sum = Tw
    n = 3
    """
    config = parse_config_text(text)
    out = io.StringIO()
    assert run(config, {"build"}, stream=out) == 0
    rendered = out.getvalue()
    assert "total copies: 5" in rendered
    assert "e = 60" in rendered


def test_recipe_round_trips_through_config_section():
    from fibresum.config import recipe_config_section

    config = parse_config(bundled_path("corollary15.cfg"))
    recipe = config.recipes["cor15"]
    section = recipe_config_section(recipe, "T4")
    text = (
        "[manifold T4]\nbuiltin = T4\n\n"
        + section
        + "\n[task enumerate]\nrecipe = cor15\n"
    )
    reparsed = parse_config_text(text)
    again = reparsed.recipes["cor15"]
    assert again.gluings == recipe.gluings
    assert again.base == recipe.base


def test_inconsistent_custom_record_trips_the_alarm():
    # Structurally valid data whose claimed c1 is not characteristic:
    # the tracked class C has odd square but pairs evenly with c1. The
    # identity check must fail and surface as exit code 3.
    text = """
    [manifold M]
    euler = 12
    signature = -8
    b1 = 0
    b2 = 10
    basis = A B C
    c1 = 0 0 0
    pairing_row = 0 1 0
    pairing_row = 1 0 0
    pairing_row = 0 0 1
    pi1_tori_generate = true
    simply_connected = true

    [torus F]
    manifold = M
    class = 1 0 0
    kind = symplectic
    dual = 0 1 0

    [recipe sum]
    manifold = M
    glue = F +

    [task enumerate]
    recipe = sum
    """
    config = parse_config_text(text)
    out = io.StringIO()
    assert run(config, {"enumerate"}, stream=out) == 3
    rendered = out.getvalue()
    assert "mathematical inconsistency" in rendered
    assert "parity" in rendered


def test_cli_solve_includes_all_divisibilities(capsys):
    assert main(["solve", "--primes", "3,5", "--output", "machine"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert {"3", "5", "15"} <= set(doc["divisibilities"])
    assert doc["manifold"]["euler"] == "324"


def test_cli_linking_reports_relation(capsys):
    assert main(["linking", "--link", "borromean.lnk", "--axis", "axis.lnk"]) == 0
    out = capsys.readouterr().out
    assert "torus relation: (1, 1, 1)" in out
    assert main(
        ["linking", "--link", "borromean.lnk", "--axis", "axis.lnk", "--output", "machine"]
    ) == 0
    doc = json.loads(capsys.readouterr().out)
    linking_tasks = [t for t in doc["tasks"] if t["task"] == "linking"]
    assert linking_tasks[0]["relation"] == ["1", "1", "1"]
    assert linking_tasks[0]["axis_linking"] == ["1", "1", "1"]


def test_cli_missing_config_is_validation_error(capsys):
    assert main(["enumerate", "--config", "does-not-exist.cfg"]) == 2
    assert "error" in capsys.readouterr().err


def test_sampling_fallback_reachable_from_config_and_flag(capsys):
    text = """
    cap = 16
    sample = true

    [manifold T4]
    builtin = T4

    [recipe wide]
    manifold = T4
    glue = Tz + + + + + + + +

    [task enumerate]
    recipe = wide
    """
    config = parse_config_text(text)
    out = io.StringIO()
    assert run(config, {"enumerate"}, stream=out) == 0
    assert "(sampled)" in out.getvalue()
    # Without sampling the same recipe refuses to enumerate.
    no_sample = parse_config_text(text.replace("sample = true", ""))
    out = io.StringIO()
    assert run(no_sample, {"enumerate"}, stream=out) == 2
    assert "enumeration too large" in out.getvalue()


def test_cli_solve_input_errors_exit_2(capsys):
    assert main(["solve", "--primes", "4"]) == 2
    assert "odd prime" in capsys.readouterr().out
    assert main(["solve"]) == 2
    assert "--config" in capsys.readouterr().err


def test_bundled_negative_control_and_solver_configs_run():
    out = io.StringIO()
    assert run(parse_config(bundled_path("mcmullen_taubes.cfg")), None, stream=out) == 0
    assert "divisibility inconclusive" in out.getvalue()
    assert "pi0 lower bound: 1" in out.getvalue()
    out = io.StringIO()
    assert run(parse_config(bundled_path("solve35.cfg")), None, stream=out) == 0
    assert "{1, 3, 5, 15}" in out.getvalue()


def test_cli_subcommand_with_no_matching_tasks(capsys):
    assert main(["solve", "--config", "corollary15.cfg"]) == 2
    assert "no matching tasks" in capsys.readouterr().out


def test_module_entry_point_runs():
    import os
    import pathlib

    src = str(pathlib.Path(__file__).resolve().parents[1] / "src")
    env = dict(os.environ)
    env["PYTHONPATH"] = src + os.pathsep + env.get("PYTHONPATH", "")
    proc = subprocess.run(
        [sys.executable, "-m", "fibresum", "verify", "--config", "corollary15.cfg"],
        capture_output=True,
        text=True,
        env=env,
    )
    assert proc.returncode == 0
    assert "overall" in proc.stdout
