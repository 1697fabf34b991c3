"""Quick cross-check suite: golden chi^4 terms, analytic limits, frame equivalence.

Every check returns a :class:`Check`; the CLI prints one PASS/FAIL line each.
Cutoffs are small so the whole suite runs in well under a minute.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import operators as ops
from .liouvillian import (
    appendix_b_liouvillian,
    full_liouvillian,
    phonon_diagonal_generator,
    transformed_liouvillian,
)
from .observables import distribution, fixed_mirror_reference, observables_from_distribution
from .params import FIG1, FockCutoffs, SystemParams
from .secular import chi4_reference_superop, enumerate_damping_terms, secular_damping_superop
from .solver import steady_state


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.name}: {self.detail}"


def term_counts(max_order: int = 3) -> dict[int, int]:
    """Number of secular sandwich terms generated at each order N."""
    return {N: len(enumerate_damping_terms(N)) for N in range(max_order + 1)}


def check_golden_chi4(cutoffs=FockCutoffs(6, 8), chis=(0.05, 0.1, 0.2)) -> Check:
    dev = max(
        float(abs(secular_damping_superop(chi, 2, cutoffs) - chi4_reference_superop(chi, cutoffs)).max())
        for chi in chis
    )
    counts = ", ".join(f"N={k}: {v}" for k, v in term_counts().items())
    return Check("chi^4 golden terms", dev <= 1e-12, f"max deviation {dev:.2e}; term counts {counts}")


def check_trace_preservation(params: SystemParams = FIG1, cutoffs=FockCutoffs(3, 6)) -> Check:
    worst = ops.adjoint_on_identity(full_liouvillian(params, cutoffs))
    for N in range(4):
        worst = max(worst, ops.adjoint_on_identity(transformed_liouvillian(params, cutoffs, N)))
        R = phonon_diagonal_generator(params, cutoffs, N)
        worst = max(worst, float(np.max(np.abs(R.matrix.T @ R.trace_weights()))))
    return Check("trace preservation", worst <= 1e-12, f"max |L^dag(I)| = {worst:.2e} for N <= 3")


def check_appendix_b(params: SystemParams = FIG1, cutoffs=FockCutoffs(3, 6)) -> Check:
    """Generated chi^2 generator against the hand-built one, off the top phonon level."""
    diff = (transformed_liouvillian(params, cutoffs, 1) - appendix_b_liouvillian(params, cutoffs)).tocoo()
    D, md = cutoffs.dim, cutoffs.m_dim
    top = md - 1
    touches = lambda k: ((k % D) % md == top) | ((k // D) % md == top)
    interior = ~(touches(diff.row) | touches(diff.col))
    dev = float(np.max(np.abs(diff.data[interior]), initial=0.0))
    return Check("chi^2 hand-built generator", dev <= 1e-12, f"max deviation below top phonon level {dev:.2e}")


def check_fixed_mirror(params: SystemParams = FIG1, cutoffs=FockCutoffs(40, 0)) -> Check:
    worst = 0.0
    for delta in np.linspace(0.01, 0.1, 10):
        p = params.replace(delta=float(delta), g=0.0)
        rec = observables_from_distribution(
            distribution(steady_state(phonon_diagonal_generator(p, cutoffs, 1))), 0.0
        )
        ref, _ = fixed_mirror_reference(p)
        worst = max(worst, abs(rec.mean_photon / ref - 1), abs(rec.g2_a - 1))
    return Check("rigid-mirror limit", worst <= 1e-6, f"max relative deviation {worst:.2e}")


def check_thermal(cutoffs=FockCutoffs(0, 120)) -> Check:
    worst = 0.0
    for nbar in (0.5, 1.0, 2.0):
        p = SystemParams(delta=0.05, epsilon=0.0, g=0.0, kappa_a=2e-3, kappa_b=2e-5, nbar=nbar)
        rec = observables_from_distribution(
            distribution(steady_state(phonon_diagonal_generator(p, cutoffs, 1))), 0.0
        )
        worst = max(worst, abs(rec.mean_phonon - nbar), abs(rec.g2_b - 2) / 2,
                    abs(rec.g3_b - 6) / 6, abs(rec.g4_b - 24) / 24)
    return Check("thermal-phonon limit", worst <= 1e-6, f"max deviation {worst:.2e}")


def frame_distances(params: SystemParams, cutoffs: FockCutoffs, orders=(1, 2, 3)) -> list[float]:
    """L1 distances between the polaron-frame image of the lab steady state and the order-N model."""
    lab = steady_state(full_liouvillian(params, cutoffs))
    rho_bar = ops.to_polaron_frame(lab.state, params.chi(), cutoffs)
    P_lab = distribution(rho_bar, cutoffs).table
    return [
        float(np.abs(P_lab - distribution(steady_state(phonon_diagonal_generator(params, cutoffs, N))).table).sum())
        for N in orders
    ]


def check_frame_equivalence(params: SystemParams | None = None, cutoffs=FockCutoffs(4, 10)) -> Check:
    params = params or FIG1.replace(delta=0.03, g=0.05)
    d = frame_distances(params, cutoffs)
    ok = all(a > b for a, b in zip(d, d[1:])) and d[-1] <= 0.05
    return Check("frame equivalence", ok, "L1 distance N=1,2,3: " + ", ".join(f"{x:.6e}" for x in d))


def check_reduced_vs_full(params: SystemParams = FIG1, cutoffs=FockCutoffs(3, 6), N: int = 2) -> Check:
    full = steady_state(transformed_liouvillian(params, cutoffs, N))
    red = steady_state(phonon_diagonal_generator(params, cutoffs, N))
    a = observables_from_distribution(distribution(full.state, cutoffs), params.chi())
    b = observables_from_distribution(distribution(red), params.chi())
    dev = max(abs(getattr(a, k) - getattr(b, k)) for k in ("mean_photon", "mean_phonon", "g2_a", "g2_b"))
    return Check("reduced vs full generator", dev <= 1e-9, f"max observable deviation {dev:.2e}")


ALL_CHECKS = (
    check_golden_chi4,
    check_trace_preservation,
    check_appendix_b,
    check_fixed_mirror,
    check_thermal,
    check_reduced_vs_full,
    check_frame_equivalence,
)


def run_checks(params: SystemParams | None = None) -> list[Check]:
    results = []
    for fn in ALL_CHECKS:
        if params is not None and fn in (check_trace_preservation, check_appendix_b, check_reduced_vs_full):
            results.append(fn(params))
        else:
            results.append(fn())
    return results
