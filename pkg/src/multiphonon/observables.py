"""Photon-phonon distribution and the observables derived from it."""
from __future__ import annotations

from dataclasses import asdict, dataclass
from math import comb

import numpy as np

from .params import FockCutoffs, SystemParams

NEGATIVE_FLOOR = -1e-10


class PositivityError(ValueError):
    pass


@dataclass(frozen=True)
class Distribution:
    """Joint occupations ``P[n, m]`` in the polaron frame, normalized to one."""

    table: np.ndarray
    cutoffs: FockCutoffs

    @property
    def photon_marginal(self) -> np.ndarray:
        return self.table.sum(axis=1)

    @property
    def phonon_marginal(self) -> np.ndarray:
        return self.table.sum(axis=0)


def distribution(state, cutoffs: FockCutoffs | None = None) -> Distribution:
    """Extract ``P[n, m] = Re <n, m|rho|n, m>`` and renormalize.

    ``state`` may be a dense density matrix (``cutoffs`` required) or a
    :class:`~multiphonon.solver.SolveReport`.
    """
    from .solver import SolveReport
    from .liouvillian import ReducedGenerator

    if isinstance(state, SolveReport):
        gen = state.generator
        if isinstance(gen, ReducedGenerator):
            blocks = gen.blocks(state.state)
            cutoffs = gen.cutoffs
            table = np.real(np.diagonal(blocks, axis1=1, axis2=2)).T.copy()
            return _normalized(table, cutoffs)
        cutoffs = cutoffs or state.cutoffs_used
        state = state.state
    if cutoffs is None:
        raise ValueError("cutoffs are required for a dense density matrix")
    rho = np.asarray(state)
    if rho.shape != (cutoffs.dim, cutoffs.dim):
        raise ValueError(f"density matrix shape {rho.shape} does not match cutoffs {cutoffs}")
    table = np.real(np.diagonal(rho)).reshape(cutoffs.n_dim, cutoffs.m_dim).copy()
    return _normalized(table, cutoffs)


def _normalized(table, cutoffs):
    low = table.min()
    if low < NEGATIVE_FLOOR:
        n, m = np.unravel_index(np.argmin(table), table.shape)
        raise PositivityError(f"negative occupation {low:.3e} at n={n}, m={m}")
    return Distribution(table / table.sum(), cutoffs)


@dataclass(frozen=True)
class ObservablesRecord:
    """Steady-state observables; correlation entries are ``None`` when undefined."""

    mean_photon: float
    mean_phonon: float
    g2_a: float | None
    g2_b: float | None
    g3_b: float | None
    g4_b: float | None
    appendix_b_residual: float | None = None

    def as_dict(self) -> dict:
        return asdict(self)


def lab_phonon_moment(P: Distribution, chi: float, k: int) -> float:
    """``<b†^k b^k>`` of the lab-frame phonon, evaluated in the polaron frame.

    With ``b = B - chi n`` (``B`` the displaced-frame phonon, ``n = a†a``),
    only the terms of ``(B† - chi n)^k (B - chi n)^k`` with as many ``B†``
    as ``B`` survive on a phonon-diagonal state, giving
    ``sum_i C(k, i)^2 (chi n)^(2(k-i)) m!/(m-i)!``.
    """
    n = np.arange(P.cutoffs.n_dim, dtype=float)[:, None]
    m = np.arange(P.cutoffs.m_dim, dtype=float)[None, :]
    total = np.zeros_like(P.table)
    for i in range(k + 1):
        falling = np.ones_like(m)
        for j in range(i):
            falling = falling * (m - j)
        total = total + comb(k, i) ** 2 * (chi * n) ** (2 * (k - i)) * falling
    return float(np.sum(total * P.table))


def photon_factorial_moment(P: Distribution, k: int) -> float:
    n = np.arange(P.cutoffs.n_dim, dtype=float)
    falling = np.ones_like(n)
    for j in range(k):
        falling = falling * (n - j)
    return float(falling @ P.photon_marginal)


def _ratio(num, mean, k):
    return None if mean == 0 else num / mean**k


def observables_from_distribution(P: Distribution, chi: float, params: SystemParams | None = None) -> ObservablesRecord:
    n = np.arange(P.cutoffs.n_dim, dtype=float)[:, None]
    m = np.arange(P.cutoffs.m_dim, dtype=float)[None, :]
    T = P.table
    mean_photon = float(np.sum(n * T))
    mean_phonon = float(np.sum((m + chi**2 * n**2) * T))
    g2_a = _ratio(float(np.sum(n * (n - 1) * T)), mean_photon, 2)
    g2_b = _ratio(float(np.sum((m * (m - 1) + 4 * chi**2 * m * n**2 + chi**4 * n**4) * T)), mean_phonon, 2)
    g3_b = _ratio(lab_phonon_moment(P, chi, 3), mean_phonon, 3)
    g4_b = _ratio(lab_phonon_moment(P, chi, 4), mean_phonon, 4)
    resid = appendix_b_residual(P, params) if params is not None else None
    return ObservablesRecord(mean_photon, mean_phonon, g2_a, g2_b, g3_b, g4_b, resid)


def fixed_mirror_reference(params: SystemParams) -> tuple[float, float | None]:
    """Closed-form cavity occupation and g2 for a rigid mirror (g = 0).

    The correlation is ``None`` when the cavity is empty.
    """
    mean = params.epsilon**2 / (params.delta**2 + (params.kappa_a / 2) ** 2)
    return mean, (1.0 if mean > 0 else None)


def appendix_b_residual(P: Distribution, params: SystemParams) -> float:
    """Deviation from the linear phonon-photon relation of the chi^2 model.

    Compares the mean lab phonon number with
    ``nbar + chi^2 (kappa_a/kappa_b) <n> + chi^2 <n(n-1)>``.
    """
    chi = params.chi()
    n = np.arange(P.cutoffs.n_dim, dtype=float)[:, None]
    m = np.arange(P.cutoffs.m_dim, dtype=float)[None, :]
    lhs = float(np.sum((m + chi**2 * n**2) * P.table))
    rhs = (
        params.nbar
        + chi**2 * params.kappa_a / params.kappa_b * photon_factorial_moment(P, 1)
        + chi**2 * photon_factorial_moment(P, 2)
    )
    return abs(lhs - rhs)
