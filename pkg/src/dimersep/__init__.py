"""Separable eigenstates and entanglement of dimer spin chains."""

from .chain import (
    ChainError,
    ChainSpec,
    CouplingTable,
    FieldProfile,
    FrustrationError,
    build_collective_pair,
    build_dimer_chain,
    load_spec,
    dump_spec,
)
from .collective import collective_ground_states, collective_pair_concurrences
from .entanglement import RdmError, pair_rdm, single_site
from .factorization import FactorizationError, alternating_solution, uniform_solution
from .harness import factorizing_point, find_transitions, side_limit_probe, strong_field_check, sweep, validate
from .jw import sector_ground_state as jw_ground_state, spin_correlators
from .limits import dimer_side_limits, pair_limit
from .pair import FieldRay, pair_crossing, pair_spectrum
from .solvers import solve_both, solve_sector

__all__ = [
    "ChainError", "ChainSpec", "CouplingTable", "FieldProfile", "FrustrationError",
    "build_collective_pair", "build_dimer_chain", "load_spec", "dump_spec",
    "collective_ground_states", "collective_pair_concurrences",
    "RdmError", "pair_rdm", "single_site",
    "FactorizationError", "alternating_solution", "uniform_solution",
    "factorizing_point", "find_transitions", "side_limit_probe", "strong_field_check", "sweep", "validate",
    "jw_ground_state", "spin_correlators", "dimer_side_limits", "pair_limit",
    "FieldRay", "pair_crossing", "pair_spectrum", "solve_both", "solve_sector",
]
