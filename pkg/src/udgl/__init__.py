"""udgl: localization of integer-lattice unit-disk networks by pruned tree search."""

from .bench import (
    CellResult,
    SweepSpec,
    anchor_count_for_fraction,
    parse_sweep_spec,
    run_sweep,
    write_csv,
)
from .geometry import Point, circle_size, collinear, dist2, lattice_circle
from .model import (
    Edge,
    GenerationError,
    Instance,
    ParseError,
    Problem,
    generate_instance,
    parse_file,
    strip_instance,
    write_file,
)
from .oracle import (
    CapExceededError,
    FixtureNotFoundError,
    SearchBox,
    brute_force_solutions,
    find_fixture_f1,
    reach_box,
    satisfies,
)
from .solver import (
    AnchorMismatchError,
    MissingNodeError,
    NoEligibleNodeError,
    Ordering,
    PartialRealization,
    RuleSet,
    SearchStats,
    SolutionSet,
    SolverConfig,
    Violation,
    format_solution_set,
    parse_solutions,
    realization_order,
    solve,
    sub_locations,
    verify,
)

__version__ = "0.1.0"

__all__ = [
    "AnchorMismatchError",
    "CapExceededError",
    "CellResult",
    "Edge",
    "FixtureNotFoundError",
    "GenerationError",
    "Instance",
    "MissingNodeError",
    "NoEligibleNodeError",
    "Ordering",
    "ParseError",
    "PartialRealization",
    "Point",
    "Problem",
    "RuleSet",
    "SearchBox",
    "SearchStats",
    "SolutionSet",
    "SolverConfig",
    "SweepSpec",
    "Violation",
    "anchor_count_for_fraction",
    "brute_force_solutions",
    "circle_size",
    "collinear",
    "dist2",
    "find_fixture_f1",
    "format_solution_set",
    "generate_instance",
    "lattice_circle",
    "parse_file",
    "parse_solutions",
    "parse_sweep_spec",
    "reach_box",
    "realization_order",
    "run_sweep",
    "satisfies",
    "solve",
    "strip_instance",
    "sub_locations",
    "verify",
    "write_csv",
    "write_file",
]
