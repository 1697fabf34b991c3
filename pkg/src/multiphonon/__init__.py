"""Steady states of a laser-driven optomechanical cavity in the polaron frame.

The cavity-mirror coupling is removed by a photon-number dependent
displacement of the mirror; the residual drive term is expanded to order
chi^(2N) and only secular (energy-conserving) phonon processes are kept.
"""
from .liouvillian import (
    ReducedGenerator,
    appendix_b_liouvillian,
    build_generators,
    full_liouvillian,
    phonon_diagonal_generator,
    transformed_hamiltonian,
    transformed_liouvillian,
)
from .observables import (
    Distribution,
    ObservablesRecord,
    PositivityError,
    appendix_b_residual,
    distribution,
    fixed_mirror_reference,
    observables_from_distribution,
)
from .operators import polaron_unitary, to_polaron_frame
from .params import (
    FIG1,
    ConfigError,
    FockCutoffs,
    RunConfig,
    SystemParams,
    load_config,
    parse_config,
    validate_regime,
)
from .secular import (
    TermDescriptor,
    chi4_reference_superop,
    enumerate_damping_terms,
    secular_damping_superop,
)
from .solver import (
    ConvergenceError,
    PropagationError,
    SolveReport,
    SteadyStateError,
    converge_cutoffs,
    propagate,
    steady_state,
)
from .sweep import (
    COLUMNS,
    PeakReport,
    SweepSpec,
    detect_peaks,
    emit_plot_script,
    peaks_from_rows,
    read_csv,
    run_sweep,
    solve_point,
    write_csv,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
