import math

import pytest

from . import cli, enc
from .explorer import OPTIMAL_RECIPE
from .states import maximally_mixed


def run_json(capsys, *argv):
    code = cli.main(list(argv))
    return code, enc.decode_json(capsys.readouterr().out)


def test_simulate_defaults(capsys):
    code, report = run_json(capsys, "simulate")
    assert code == cli.EXIT_OK
    assert report["schema_version"] == cli.SCHEMA_VERSION
    assert report["command"] == "simulate"
    assert report["recipe"] == OPTIMAL_RECIPE.to_json()
    assert report["params"]["theta_a"] == pytest.approx(math.pi / 4)
    assert report["initial_population_down_down"] == pytest.approx(0.25)
    assert report["yield"] == pytest.approx(0.25)
    assert math.prod(report["pass_probabilities"]) == pytest.approx(0.25)
    assert report["concurrence"] == pytest.approx(1.0)
    assert report["fidelity_to_target"] == pytest.approx(1.0)
    assert len(report["final_state"]) == 4


def test_simulate_angles(capsys):
    code, report = run_json(capsys, "simulate", "--theta-a-pi", "0.25", "--theta-b", "0.25pi")
    assert code == cli.EXIT_OK
    assert report["concurrence"] == pytest.approx(2 * math.sqrt(2) / 3)
    assert report["yield"] == pytest.approx(0.25 * 3 / 8)


def test_simulate_impossible(capsys):
    code, report = run_json(capsys, "simulate", "--state", "basis:uu")
    assert code == cli.EXIT_IMPOSSIBLE
    assert report["error"] == "impossible-outcome"
    code, report = run_json(capsys, "simulate", "--theta-a", "0")
    assert code == cli.EXIT_IMPOSSIBLE
    assert report["probability"] == pytest.approx(0.0, abs=1e-12)


def test_simulate_free_evolution(capsys):
    _code, report = run_json(capsys, "simulate", "--state", "random:3")
    code, free_report = run_json(
        capsys, "simulate", "--state", "random:3", "--include-free", "--omega-t", "1.3"
    )
    assert code == cli.EXIT_OK
    assert free_report["params"]["include_free"] is True
    assert free_report["yield"] == pytest.approx(report["yield"], abs=1e-10)
    assert free_report["concurrence"] == pytest.approx(report["concurrence"], abs=1e-8)


def test_deterministic(capsys):
    argv = ["simulate", "--state", "random:7", "--theta-a", "0.4", "--theta-b", "2.1"]
    assert cli.main(argv) == cli.EXIT_OK
    first = capsys.readouterr().out
    assert cli.main(argv) == cli.EXIT_OK
    assert capsys.readouterr().out == first


def test_state_and_recipe_files(capsys, tmp_path):
    state_path = tmp_path / "state.json"
    state_path.write_text(enc.encode_json(maximally_mixed(2)))
    code, report = run_json(capsys, "simulate", "--state", str(state_path))
    assert code == cli.EXIT_OK
    assert report["yield"] == pytest.approx(0.25)

    # the extracted pair has no |down down> population left to extract from
    final_path = tmp_path / "final.json"
    assert cli.main(["simulate", "--out", str(final_path)]) == cli.EXIT_OK
    code, report = run_json(capsys, "simulate", "--state", str(final_path))
    assert code == cli.EXIT_IMPOSSIBLE
    code, report = run_json(capsys, "init-demo", "--state", str(final_path))
    assert code == cli.EXIT_OK
    assert report["fidelity_to_up_up"] == pytest.approx(1.0)

    recipe_path = tmp_path / "recipe.json"
    recipe_path.write_text(enc.encode_json(OPTIMAL_RECIPE.to_json()))
    code, report = run_json(capsys, "simulate", "--recipe", str(recipe_path))
    assert code == cli.EXIT_OK
    assert report["yield"] == pytest.approx(0.25)


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["teleport"],
        ["simulate", "--recipe", "rlx"],
        ["simulate", "--state", "basis:uud"],
        ["simulate", "--state", "random:x"],
        ["simulate", "--state", "bogus"],
        ["simulate", "--theta-a", "1", "--theta-a-pi", "0.5"],
        ["simulate", "--theta-a", "nan"],
        ["sweep", "--grid", "1:0:0.1"],
        ["sweep", "--workers", "0"],
        ["sweep", "--format", "xml"],
        ["simulate", "--state", "random:-5"],
        ["simulate", "--state", f"random:{2 ** 32}"],
        ["verify", "--seed", "-1"],
        ["verify", "--seed", str(2 ** 32 - 1)],
    ],
)
def test_input_errors(capsys, argv):
    assert cli.main(argv) == cli.EXIT_INPUT
    assert "error" in capsys.readouterr().err


def test_unwritable_output(capsys, tmp_path):
    out = tmp_path / "missing" / "report.json"
    assert cli.main(["simulate", "--out", str(out)]) == cli.EXIT_INPUT


def test_sweep_single_point(capsys):
    assert cli.main(["sweep", "--grid", "0.25pi"]) == cli.EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "theta_a,theta_b,concurrence,normalized_yield"
    assert len(lines) == 2
    theta_a, theta_b, concurrence, normalized_yield = (float(x) for x in lines[1].split(","))
    assert theta_a == theta_b == pytest.approx(math.pi / 4)
    assert concurrence == pytest.approx(2 * math.sqrt(2) / 3)
    assert normalized_yield == pytest.approx(3 / 8)


def test_sweep_json(capsys, tmp_path):
    out = tmp_path / "sweep.json"
    assert cli.main(["sweep", "--grid", "0.25pi:0.75pi:0.25pi", "--format", "json", "--out", str(out)]) == cli.EXIT_OK
    report = enc.load_json_file(str(out))
    assert report["command"] == "sweep"
    assert len(report["records"]) == 9
    optimum = [
        r
        for r in report["records"]
        if r["theta_a"] == pytest.approx(math.pi / 4) and r["theta_b"] == pytest.approx(math.pi / 2)
    ]
    assert optimum[0]["concurrence"] == pytest.approx(1.0)
    assert optimum[0]["normalized_yield"] == pytest.approx(1.0)


def test_recipes(capsys):
    code, report = run_json(capsys, "recipes", "--grid", "0.25pi:0.75pi:0.25pi")
    assert code == cli.EXIT_OK
    assert [r["recipe"] for r in report["recipes"]] == ["rrr", "rlr", "lrr", "llr"]
    assert report["optimal"] == ["rlr"]
    best = report["recipes"][1]["best_point"]
    assert (best["theta_a"], best["theta_b"]) == pytest.approx((math.pi / 4, math.pi / 2))


def test_recipes_csv(capsys):
    assert cli.main(["recipes", "--grid", "0.5pi", "--format", "csv"]) == cli.EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == ",".join(cli.RECIPES_CSV_HEADER)
    assert len(lines) == 5
    assert all(line.split(",")[5] == "false" for line in lines[1:])


def test_verify(capsys):
    assert cli.main(["verify", "--seed", "0"]) == cli.EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert all(line.startswith("PASS") for line in lines[:-1])
    assert lines[-1].startswith("13/13 checks passed")
    names = [line.split()[1] for line in lines[:-1]]
    assert "kraus_completeness" in names
    assert "excitation_conservation" in names
    assert cli.main(["verify", "--tol", "1e-30"]) == cli.EXIT_VERIFY
    assert "FAIL" in capsys.readouterr().out


def test_init_demo(capsys):
    code, report = run_json(capsys, "init-demo", "--state", "random:11")
    assert code == cli.EXIT_OK
    assert report["params"]["theta_a"] == pytest.approx(math.pi / 2)
    assert report["fidelity_to_up_up"] == pytest.approx(1.0, abs=1e-10)


def test_sweep_default_grid(capsys, tmp_path):
    out = tmp_path / "sweep.csv"
    assert cli.main(["sweep", "--out", str(out)]) == cli.EXIT_OK
    parallel_out = tmp_path / "sweep_parallel.csv"
    assert cli.main(["sweep", "--workers", "4", "--out", str(parallel_out)]) == cli.EXIT_OK
    text = out.read_text()
    assert parallel_out.read_text() == text
    rows = [line.split(",") for line in text.splitlines()[1:]]
    assert len(rows) == 199 * 199
    optimum = [
        row
        for row in rows
        if float(row[0]) == pytest.approx(math.pi / 4) and float(row[1]) == pytest.approx(math.pi / 2)
    ]
    (row,) = optimum
    assert float(row[2]) == pytest.approx(1.0)
    assert float(row[3]) == pytest.approx(1.0)


def test_simulate_builtin_name(capsys):
    code, report = run_json(
        capsys,
        "simulate",
        "--recipe",
        "fig2",
        "--theta-a",
        "0.7853981634",
        "--theta-b",
        "1.5707963268",
        "--state",
        "maximally-mixed",
    )
    assert code == cli.EXIT_OK
    assert report["recipe"] == OPTIMAL_RECIPE.to_json()
    assert report["yield"] == pytest.approx(0.25)
    assert report["concurrence"] == pytest.approx(1.0)


def test_fidelity_only_for_optimal_recipe(capsys):
    code, report = run_json(capsys, "simulate", "--recipe", "rrr")
    assert code == cli.EXIT_OK
    assert report["yield"] > 0
    assert report["fidelity_to_target"] is None


def test_recipe_name_before_path(capsys, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    (tmp_path / "rlr").write_text("not a recipe")
    code, report = run_json(capsys, "simulate", "--recipe", "rlr")
    assert code == cli.EXIT_OK
    assert report["yield"] == pytest.approx(0.25)
