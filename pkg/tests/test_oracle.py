import random

import pytest

from udgl.model import Edge, GenerationError, Problem, generate_instance, strip_instance, write_file
from udgl.oracle import (
    CapExceededError,
    FixtureNotFoundError,
    SearchBox,
    brute_force_solutions,
    find_fixture_f1,
    reach_box,
    satisfies,
)
from udgl.solver import RuleSet, SolverConfig, solve, verify
from tests.conftest import FIXTURE_DIR


def canon(solutions):
    return {tuple(sorted(s.items())) for s in solutions}


def small_instances(count, combos, seed0=0, max_attempts=40):
    seed = seed0
    made = 0
    while made < count:
        grid, r2, n, m = combos[seed % len(combos)]
        try:
            inst = generate_instance(grid, r2, n, m, seed=seed, max_attempts=max_attempts)
        except GenerationError:
            seed += 1
            continue
        seed += 1
        made += 1
        yield inst


def test_zero_unknowns_returns_anchor_assignment():
    anchors = {0: (0, 0), 1: (2, 0), 2: (0, 2)}
    prob = Problem(n_nodes=3, radius_sq=2, anchors=anchors, edges=())
    for rules in RuleSet:
        assert brute_force_solutions(prob, rules) == [anchors]


def test_fixture_f1_certification(fixture_f1):
    prob = strip_instance(fixture_f1)
    conv = brute_force_solutions(prob, RuleSet.CONVENTIONAL)
    ud = brute_force_solutions(prob, RuleSet.UNIT_DISK)
    assert len(conv) == 2
    assert len(ud) == 1
    assert ud[0] == fixture_f1.assignment()
    assert canon(ud) <= canon(conv)


def test_find_fixture_f1_matches_checked_in_fixture():
    inst = find_fixture_f1(10)
    assert write_file(inst) == (FIXTURE_DIR / "fixture_f1.udgl").read_bytes()


def test_find_fixture_f1_not_found_on_tiny_grids():
    with pytest.raises(FixtureNotFoundError):
        find_fixture_f1(2)


def test_oracle_solver_agreement():
    combos = [(8, 18, 4, 3), (10, 26, 5, 4), (12, 40, 7, 4), (10, 13, 6, 3), (12, 18, 7, 4)]
    for inst in small_instances(60, combos, seed0=500):
        prob = strip_instance(inst)
        truth = inst.assignment()
        counts = {}
        for rules in RuleSet:
            got = solve(prob, SolverConfig(rules=rules))
            want = brute_force_solutions(prob, rules, work_limit=10**10)
            assert canon(got.solutions) == canon(want)
            assert truth in want
            counts[rules] = len(want)
        assert counts[RuleSet.UNIT_DISK] <= counts[RuleSet.CONVENTIONAL]


def test_reach_box_contains_every_solver_solution():
    combos = [(10, 13, 6, 3), (12, 18, 7, 4), (12, 10, 6, 3)]
    for inst in small_instances(25, combos, seed0=900):
        prob = strip_instance(inst)
        for rules in RuleSet:
            result = solve(prob, SolverConfig(rules=rules))
            for sol in result.solutions:
                for u in prob.unknown_ids:
                    assert reach_box(prob, u).contains(sol[u])


def test_explicit_search_box_restricts_enumeration(fixture_f1):
    prob = strip_instance(fixture_f1)
    full = brute_force_solutions(prob, RuleSet.CONVENTIONAL)
    assert len(full) == 2
    truth = fixture_f1.assignment()
    u = prob.unknown_ids[0]
    tight = SearchBox(truth[u].x, truth[u].y, truth[u].x, truth[u].y)
    only_truth = brute_force_solutions(prob, RuleSet.CONVENTIONAL, search_box=tight)
    assert only_truth == [truth]


def test_unknown_cap_and_work_limit():
    inst = next(iter(small_instances(1, [(10, 30, 9, 4)], seed0=50)))
    prob = strip_instance(inst)  # five unknowns
    with pytest.raises(ValueError):
        brute_force_solutions(prob, RuleSet.UNIT_DISK)
    inst2 = next(iter(small_instances(1, [(10, 30, 7, 4)], seed0=60)))
    prob2 = strip_instance(inst2)
    with pytest.raises(CapExceededError):
        brute_force_solutions(prob2, RuleSet.UNIT_DISK, work_limit=10)


def test_satisfies_cross_checks_verify():
    rng = random.Random(123)
    for inst in small_instances(15, [(10, 26, 5, 3), (12, 30, 6, 4)], seed0=700):
        prob = strip_instance(inst)
        truth = inst.assignment()
        box = reach_box(prob, prob.unknown_ids[0])
        for _ in range(20):
            assignment = dict(truth)
            if rng.random() < 0.7:  # perturb some unknowns
                for u in prob.unknown_ids:
                    if rng.random() < 0.5:
                        assignment[u] = (rng.randint(box.xmin, box.xmax), rng.randint(box.ymin, box.ymax))
            for rules in RuleSet:
                expected = verify(prob, assignment, rules) is None
                assert satisfies(prob, assignment, rules) == expected


def test_unit_disk_inconsistent_anchors_give_empty_oracle():
    prob = Problem(
        n_nodes=4,
        radius_sq=16,
        anchors={0: (0, 0), 1: (0, 3), 2: (4, 0)},
        edges=(Edge(0, 2, 16), Edge(2, 3, 1)),
    )
    assert brute_force_solutions(prob, RuleSet.UNIT_DISK) == []
    got = solve(prob, SolverConfig(rules=RuleSet.UNIT_DISK))
    assert got.solutions == []
    conv_oracle = brute_force_solutions(prob, RuleSet.CONVENTIONAL)
    conv_solver = solve(prob, SolverConfig(rules=RuleSet.CONVENTIONAL))
    assert canon(conv_oracle) == canon(conv_solver.solutions)
