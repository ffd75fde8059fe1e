"""Stabilizer ground states and weak-measurement imaginary time evolution."""

from ._core import (  # noqa: F401
    CapacityError,
    ConfigError,
    DimensionError,
    DomainError,
    Error,
    Hamiltonian,
    ParseError,
    SearchFailure,
    ValidationError,
    __version__,
    analysis,
    cli,
    commutes,
    degeneracy_count,
    eigenvalues,
    enumerate_generator_sets,
    find_min_groups,
    group_energy,
    multiply,
    preparation_circuit,
    prepare_state,
    run_mite,
    solve_osgs,
    stabilizer_state_count,
    tfim,
)
