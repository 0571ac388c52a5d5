"""Experiment harness: anchor-count and radius sweeps across rule sets and orderings.

A sweep cell is one (radius_sq, anchor count, rule set, ordering) combination.
Trial t of every cell reuses the instance generated with seed base_seed + t,
so rule sets and orderings are compared on identical inputs. Search outputs
are deterministic for a fixed spec; only the wall-clock column varies.
"""

from __future__ import annotations

import math
import sys
import time
from dataclasses import dataclass
from typing import Callable, TextIO

from .model import GenerationError, Instance, generate_instance, strip_instance
from .solver import Ordering, RuleSet, SolutionSet, SolverConfig, solve

CSV_HEADER = (
    "grid,nodes,anchors,radius_sq,rules,ordering,trials,"
    "mean_visits_per_unknown,mean_checks_per_unknown,"
    "unique_fraction,censored_fraction,wall_s"
)

# Callback invoked once per completed trial: (instance, config, trial, result).
TrialHook = Callable[[Instance, SolverConfig, int, SolutionSet], None]


def anchor_count_for_fraction(fraction: float, n_nodes: int) -> int:
    """Anchor count for a requested anchor percentage, floored at the 3-anchor minimum."""
    return max(3, round(fraction * n_nodes))


@dataclass(frozen=True)
class SweepSpec:
    grid_side: int
    n_nodes: int
    radius_sq_values: tuple[int, ...]
    anchor_counts: tuple[int, ...]
    rule_sets: tuple[RuleSet, ...] = (RuleSet.UNIT_DISK, RuleSet.CONVENTIONAL)
    orderings: tuple[Ordering, ...] = (Ordering.MOST_CONNECTED, Ordering.RANDOM)
    trials: int = 20
    base_seed: int = 0
    budget: int = 10**8
    find_all: bool = True

    def __post_init__(self):
        object.__setattr__(self, "radius_sq_values", tuple(self.radius_sq_values))
        object.__setattr__(self, "anchor_counts", tuple(self.anchor_counts))
        object.__setattr__(self, "rule_sets", tuple(self.rule_sets))
        object.__setattr__(self, "orderings", tuple(self.orderings))
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if not self.radius_sq_values or not self.anchor_counts:
            raise ValueError("radius_sq_values and anchor_counts must be non-empty")
        if not self.rule_sets or not self.orderings:
            raise ValueError("rule_sets and orderings must be non-empty")
        for m in self.anchor_counts:
            if not 3 <= m < self.n_nodes:
                raise ValueError(f"anchor count {m} outside [3, {self.n_nodes})")


@dataclass(frozen=True)
class CellResult:
    """Aggregates of one cell; censored (budget-exhausted) runs are excluded from means."""

    grid_side: int
    n_nodes: int
    n_anchors: int
    radius_sq: int
    rules: RuleSet
    ordering: Ordering
    trials: int
    mean_visits_per_unknown: float
    mean_checks_per_unknown: float
    unique_fraction: float
    censored_fraction: float
    wall_seconds: float
    generation_failures: int = 0


def run_sweep(
    spec: SweepSpec,
    on_result: TrialHook | None = None,
    log: TextIO | None = None,
) -> list[CellResult]:
    """Run every cell of the sweep; cell order follows the spec's field order.

    Trials whose instance generation fails are counted per cell and excluded;
    budget-exhausted trials are counted in censored_fraction and excluded from
    the traversal means so censoring never deflates them.
    """
    if log is None:
        log = sys.stderr
    instances: dict[tuple[int, int, int], Instance | None] = {}
    results: list[CellResult] = []
    for radius_sq in spec.radius_sq_values:
        for n_anchors in spec.anchor_counts:
            n_unknowns = spec.n_nodes - n_anchors
            for rules in spec.rule_sets:
                for ordering in spec.orderings:
                    sum_visits = 0.0
                    sum_checks = 0.0
                    unique = 0
                    censored = 0
                    gen_failed = 0
                    wall = 0.0
                    for t in range(spec.trials):
                        key = (radius_sq, n_anchors, t)
                        if key not in instances:
                            try:
                                instances[key] = generate_instance(
                                    spec.grid_side, radius_sq, spec.n_nodes, n_anchors,
                                    seed=spec.base_seed + t,
                                )
                            except GenerationError:
                                instances[key] = None
                        inst = instances[key]
                        if inst is None:
                            gen_failed += 1
                            continue
                        problem = strip_instance(inst, keep_bounds=False)
                        config = SolverConfig(
                            rules=rules,
                            ordering=ordering,
                            seed=spec.base_seed + t,
                            find_all=spec.find_all,
                            budget=spec.budget,
                        )
                        t0 = time.perf_counter()
                        result = solve(problem, config)
                        wall += time.perf_counter() - t0
                        if on_result is not None:
                            on_result(inst, config, t, result)
                        if result.stats.budget_exhausted:
                            censored += 1
                            continue
                        sum_visits += result.stats.instances_visited / n_unknowns
                        sum_checks += result.stats.candidates_checked / n_unknowns
                        if len(result.solutions) == 1:
                            unique += 1
                    completed = spec.trials - gen_failed
                    uncensored = completed - censored
                    cell = CellResult(
                        grid_side=spec.grid_side,
                        n_nodes=spec.n_nodes,
                        n_anchors=n_anchors,
                        radius_sq=radius_sq,
                        rules=rules,
                        ordering=ordering,
                        trials=spec.trials,
                        mean_visits_per_unknown=sum_visits / uncensored if uncensored else math.nan,
                        mean_checks_per_unknown=sum_checks / uncensored if uncensored else math.nan,
                        unique_fraction=unique / uncensored if uncensored else math.nan,
                        censored_fraction=censored / completed if completed else math.nan,
                        wall_seconds=wall,
                        generation_failures=gen_failed,
                    )
                    results.append(cell)
                    r_over_c = math.sqrt(radius_sq) / spec.grid_side
                    print(
                        f"cell radius_sq={radius_sq} (r/C={r_over_c:.3f}) anchors={n_anchors} "
                        f"rules={rules.value} ordering={ordering.value}: "
                        f"visits/unknown={_fmt(cell.mean_visits_per_unknown)} "
                        f"censored={censored}/{completed} gen_failures={gen_failed} "
                        f"wall={wall:.2f}s",
                        file=log,
                    )
    return results


# ---------------------------------------------------------------------------
# CSV output
# ---------------------------------------------------------------------------


def _fmt(value: float) -> str:
    """Fixed 6-significant-digit decimal rendering, no exponent notation."""
    if math.isnan(value):
        return "nan"
    if value == 0:
        return "0.00000"
    decimals = 5 - math.floor(math.log10(abs(value)))
    if decimals <= 0:
        return f"{round(value, decimals):.0f}"
    return f"{value:.{decimals}f}"


def write_csv(results: list[CellResult]) -> bytes:
    """Serialize cell results; byte-deterministic for a given result list."""
    lines = [CSV_HEADER]
    for c in results:
        lines.append(
            ",".join(
                (
                    str(c.grid_side),
                    str(c.n_nodes),
                    str(c.n_anchors),
                    str(c.radius_sq),
                    c.rules.value,
                    c.ordering.value,
                    str(c.trials),
                    _fmt(c.mean_visits_per_unknown),
                    _fmt(c.mean_checks_per_unknown),
                    _fmt(c.unique_fraction),
                    _fmt(c.censored_fraction),
                    _fmt(c.wall_seconds),
                )
            )
        )
    return ("\n".join(lines) + "\n").encode("utf-8")


# ---------------------------------------------------------------------------
# Sweep spec files (one `key value` pair per line, lists comma-separated)
# ---------------------------------------------------------------------------

_RULE_TOKENS = {r.value: r for r in RuleSet}
_ORDERING_TOKENS = {o.value: o for o in Ordering}


def parse_sweep_spec(text: bytes | str) -> SweepSpec:
    """Parse a sweep spec file mirroring the SweepSpec fields.

    Required keys: grid_side, n_nodes, radius_sq_values, anchor_counts.
    Optional keys with defaults: rule_sets, orderings, trials, base_seed,
    budget, find_all.
    """
    if isinstance(text, (bytes, bytearray)):
        text = text.decode("utf-8")
    values: dict[str, str] = {}
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split(None, 1)
        if len(parts) != 2:
            raise ValueError(f"spec line {no}: expected 'key value', got {line!r}")
        key, value = parts
        if key in values:
            raise ValueError(f"spec line {no}: duplicate key {key!r}")
        values[key] = value

    def want(key: str) -> str:
        if key not in values:
            raise ValueError(f"spec is missing required key {key!r}")
        return values.pop(key)

    def int_list(raw: str, key: str) -> tuple[int, ...]:
        try:
            return tuple(int(v) for v in raw.split(","))
        except ValueError:
            raise ValueError(f"spec key {key!r} must be comma-separated integers, got {raw!r}") from None

    kwargs: dict = {
        "grid_side": int(want("grid_side")),
        "n_nodes": int(want("n_nodes")),
        "radius_sq_values": int_list(want("radius_sq_values"), "radius_sq_values"),
        "anchor_counts": int_list(want("anchor_counts"), "anchor_counts"),
    }
    if "rule_sets" in values:
        kwargs["rule_sets"] = tuple(
            _parse_token(v, _RULE_TOKENS, "rule set") for v in values.pop("rule_sets").split(",")
        )
    if "orderings" in values:
        kwargs["orderings"] = tuple(
            _parse_token(v, _ORDERING_TOKENS, "ordering") for v in values.pop("orderings").split(",")
        )
    if "trials" in values:
        kwargs["trials"] = int(values.pop("trials"))
    if "base_seed" in values:
        kwargs["base_seed"] = int(values.pop("base_seed"))
    if "budget" in values:
        kwargs["budget"] = int(values.pop("budget"))
    if "find_all" in values:
        raw = values.pop("find_all").lower()
        if raw not in ("0", "1", "true", "false"):
            raise ValueError(f"spec key 'find_all' must be 0/1/true/false, got {raw!r}")
        kwargs["find_all"] = raw in ("1", "true")
    if values:
        raise ValueError(f"spec contains unknown key(s): {sorted(values)}")
    return SweepSpec(**kwargs)


def _parse_token(raw: str, table: dict, what: str):
    token = raw.strip()
    if token not in table:
        raise ValueError(f"unknown {what} {token!r} (expected one of {sorted(table)})")
    return table[token]
