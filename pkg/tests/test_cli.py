from udgl.cli import main
from udgl.model import Instance, Problem, parse_file
from udgl.solver import parse_solutions
from tests.conftest import FIXTURE_DIR


def run(*argv) -> int:
    return main([str(a) for a in argv])


def test_generate_writes_parseable_instance(tmp_path):
    out = tmp_path / "a.udgl"
    assert run("generate", "--grid", 100, "--radius-sq", 625, "--nodes", 100,
               "--anchors", 5, "--seed", 7, "-o", out) == 0
    inst = parse_file(out.read_bytes())
    assert isinstance(inst, Instance)
    assert inst.n_anchors == 5


def test_generate_is_byte_deterministic(tmp_path):
    a, b = tmp_path / "a.udgl", tmp_path / "b.udgl"
    args = ("generate", "--grid", 30, "--radius-sq", 64, "--nodes", 20, "--anchors", 4, "--seed", 3)
    assert run(*args, "-o", a) == 0
    assert run(*args, "-o", b) == 0
    assert a.read_bytes() == b.read_bytes()


def test_generate_problem_variants(tmp_path):
    out = tmp_path / "p.udgl"
    args = ("generate", "--grid", 20, "--radius-sq", 50, "--nodes", 10, "--anchors", 3, "--seed", 1)
    assert run(*args, "-o", out, "--problem") == 0
    prob = parse_file(out.read_bytes())
    assert isinstance(prob, Problem) and prob.grid_side is None
    assert run(*args, "-o", out, "--problem", "--keep-bounds") == 0
    prob = parse_file(out.read_bytes())
    assert isinstance(prob, Problem) and prob.grid_side == 20


def test_generate_failure_maps_to_exit_2(tmp_path):
    assert run("generate", "--grid", 10, "--radius-sq", 1, "--nodes", 20,
               "--anchors", 3, "--seed", 1, "-o", tmp_path / "x.udgl") == 2


def test_solve_round_trip(tmp_path, capsys):
    inst_file = tmp_path / "a.udgl"
    assert run("generate", "--grid", 100, "--radius-sq", 625, "--nodes", 100,
               "--anchors", 5, "--seed", 7, "-o", inst_file) == 0
    assert run("solve", inst_file, "--rules", "unit-disk", "--ordering", "most-connected", "--all") == 0
    out = capsys.readouterr().out
    solutions = parse_solutions(out)
    truth = parse_file(inst_file.read_bytes()).assignment()
    assert truth in solutions
    # every reported solution verifies, and the instance is its own valid solution
    sol_file = tmp_path / "sols.txt"
    sol_file.write_text(out)
    assert run("verify", inst_file, sol_file, "--rules", "unit-disk") == 0
    assert run("verify", inst_file, inst_file, "--rules", "unit-disk") == 0


def test_solve_fixture_counts(capsys):
    f1 = FIXTURE_DIR / "fixture_f1.udgl"
    assert run("solve", f1, "--rules", "conventional", "--all") == 0
    assert capsys.readouterr().out.startswith("solutions 2\n")
    assert run("solve", f1, "--rules", "unit-disk", "--all") == 0
    assert capsys.readouterr().out.startswith("solutions 1\n")


def test_solve_output_file_deterministic(tmp_path):
    f1 = FIXTURE_DIR / "fixture_f1.udgl"
    a, b = tmp_path / "a.out", tmp_path / "b.out"
    assert run("solve", f1, "--rules", "conventional", "-o", a) == 0
    assert run("solve", f1, "--rules", "conventional", "-o", b) == 0
    assert a.read_bytes() == b.read_bytes()


def test_solve_exit_3_on_budget_exhaustion(capsys):
    f2 = FIXTURE_DIR / "fixture_f2.udgl"
    assert run("solve", f2, "--rules", "unit-disk", "--budget", 1) == 3
    out = capsys.readouterr().out
    assert "budget_exhausted 1" in out
    assert out.startswith("solutions 0\n")


def test_solve_exit_4_when_unsolvable(tmp_path, capsys):
    # two anchors within range but not adjacent: unit-disk rules are unsatisfiable
    text = (
        "udgl 1\n"
        "radius_sq 16\n"
        "nodes 4\n"
        "node 0 anchor 0 0\n"
        "node 1 anchor 0 3\n"
        "node 2 anchor 4 0\n"
        "node 3 unknown\n"
        "edges 2\n"
        "edge 0 2 16\n"
        "edge 2 3 1\n"
    )
    path = tmp_path / "unsat.udgl"
    path.write_text(text)
    assert run("solve", path, "--rules", "unit-disk") == 4
    capsys.readouterr()
    assert run("solve", path, "--rules", "conventional") == 0


def test_verify_detects_corruption(tmp_path, capsys):
    f1 = FIXTURE_DIR / "fixture_f1.udgl"
    assert run("solve", f1, "--rules", "conventional", "-o", tmp_path / "sols.txt") == 0
    assert run("verify", f1, tmp_path / "sols.txt", "--rules", "conventional") == 0
    # the conventional solution list contains the mirror, invalid under unit-disk rules
    assert run("verify", f1, tmp_path / "sols.txt", "--rules", "unit-disk") == 2
    assert "violation no_edge" in capsys.readouterr().out


def test_verify_rejects_problem_as_solution(tmp_path):
    inst_file = tmp_path / "a.udgl"
    prob_file = tmp_path / "p.udgl"
    args = ("generate", "--grid", 20, "--radius-sq", 50, "--nodes", 10, "--anchors", 3, "--seed", 1)
    assert run(*args, "-o", inst_file) == 0
    assert run(*args, "-o", prob_file, "--problem") == 0
    assert run("verify", inst_file, prob_file) == 2


def test_bench_subcommand(tmp_path, capsys):
    spec = tmp_path / "sweep.spec"
    spec.write_text(
        "grid_side 14\nn_nodes 8\nradius_sq_values 40\nanchor_counts 3\n"
        "rule_sets unit-disk,conventional\norderings most-connected\n"
        "trials 2\nbase_seed 5\nbudget 50000\n"
    )
    csv_a, csv_b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run("bench", "--spec", spec, "-o", csv_a) == 0
    assert run("bench", "--spec", spec, "-o", csv_b) == 0
    lines_a = csv_a.read_text().splitlines()
    assert lines_a[0].startswith("grid,nodes,anchors,radius_sq,")
    assert len(lines_a) == 3
    # identical except the wall-clock column
    strip_wall = lambda text: [",".join(l.split(",")[:-1]) for l in text.splitlines()]
    assert strip_wall(csv_a.read_text()) == strip_wall(csv_b.read_text())


def test_bench_bad_spec_exits_2(tmp_path):
    spec = tmp_path / "bad.spec"
    spec.write_text("grid_side 14\n")
    assert run("bench", "--spec", spec, "-o", tmp_path / "out.csv") == 2


def test_fixture_subcommand_matches_checked_in_file(tmp_path):
    out = tmp_path / "f1.udgl"
    assert run("fixture", "f1", "--max-grid", 10, "-o", out) == 0
    assert out.read_bytes() == (FIXTURE_DIR / "fixture_f1.udgl").read_bytes()


def test_fixture_not_found_exits_4(tmp_path):
    assert run("fixture", "f1", "--max-grid", 2, "-o", tmp_path / "none.udgl") == 4


def test_usage_errors_exit_1():
    assert run("solve") == 1
    assert run("frobnicate") == 1
    assert run("generate", "--grid", 10) == 1


def test_parse_errors_exit_2(tmp_path):
    bad = tmp_path / "bad.udgl"
    bad.write_text("udgl 2\n")
    assert run("solve", bad) == 2
    missing = tmp_path / "missing.udgl"
    assert run("solve", missing) == 2


def test_help_exits_0(capsys):
    assert run("--help") == 0
    capsys.readouterr()
