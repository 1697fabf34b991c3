"""Stationary states: direct null-space solve, time propagation, cutoff escalation."""
from __future__ import annotations

import time
import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla
from scipy.integrate import solve_ivp

from . import operators as ops
from .liouvillian import ReducedGenerator, phonon_diagonal_generator
from .params import FockCutoffs, SystemParams, check_order

RESIDUAL_TOL = 1e-9
DENSE_NULLSPACE_LIMIT = 2500


class SteadyStateError(RuntimeError):
    pass


class PropagationError(RuntimeError):
    pass


class ConvergenceError(RuntimeError):
    def __init__(self, message, trace):
        super().__init__(message)
        self.trace = trace


@dataclass
class SolveReport:
    """Outcome of a stationary solve.

    ``state`` is a dense density matrix for full generators and a reduced
    coordinate vector for :class:`ReducedGenerator` inputs.
    """

    state: np.ndarray
    residual: float
    min_eigenvalue: float
    cutoffs_used: FockCutoffs | None
    wall_time: float
    generator: object = field(default=None, repr=False)
    rounds: int = 1

    def density_matrix(self) -> np.ndarray:
        if isinstance(self.generator, ReducedGenerator):
            return self.generator.to_density_matrix(self.state)
        return self.state


def _operator_and_weights(L):
    if isinstance(L, ReducedGenerator):
        return L.matrix, L.trace_weights(), L.cutoffs
    L = sp.csr_matrix(L)
    dim = int(round(np.sqrt(L.shape[0])))
    if dim * dim != L.shape[0]:
        raise ValueError(f"superoperator of size {L.shape[0]} is not D^2 x D^2")
    return L, ops.trace_row(dim), None


def _nullspace_estimate(M) -> str:
    if M.shape[0] <= DENSE_NULLSPACE_LIMIT:
        s = np.linalg.svd(M.toarray(), compute_uv=False)
        tol = max(s[0], 1.0) * M.shape[0] * np.finfo(float).eps
        return str(int(np.sum(s <= tol)))
    return ">= 2"


def _hermitize(L, x):
    if isinstance(L, ReducedGenerator):
        blocks = L.blocks(x)
        blocks = 0.5 * (blocks + blocks.conj().transpose(0, 2, 1))
        trace = np.trace(blocks, axis1=1, axis2=2).sum().real
        blocks = blocks / trace
        lam = min(np.linalg.eigvalsh(B)[0] for B in blocks)
        return L.from_blocks(blocks), float(lam)
    rho = ops.unvec(x)
    rho = 0.5 * (rho + rho.conj().T)
    rho = rho / np.trace(rho).real
    return rho, float(np.linalg.eigvalsh(rho)[0])


def steady_state(L, tol: float = RESIDUAL_TOL) -> SolveReport:
    """Trace-one kernel vector of ``L`` by row replacement and sparse LU.

    The equation for the first diagonal element is redundant for a
    trace-preserving generator, so it is replaced by ``trace(rho) = 1``.
    The residual bound is ``tol * max(1, max|L|)``.
    """
    t0 = time.perf_counter()
    M, w, cutoffs = _operator_and_weights(L)
    n = M.shape[0]
    pivot = int(np.flatnonzero(w)[0])
    keep = np.ones(n)
    keep[pivot] = 0.0
    A = sp.diags(keep) @ M + sp.csr_matrix((w, (np.full(n, pivot), np.arange(n))), shape=(n, n))
    rhs = np.zeros(n, dtype=complex)
    rhs[pivot] = 1.0
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("error", spla.MatrixRankWarning)
            lu = spla.splu(A.tocsc().astype(complex))
            x = lu.solve(rhs)
    except (RuntimeError, spla.MatrixRankWarning) as exc:
        raise SteadyStateError(
            f"steady state is not unique: null-space dimension estimate {_nullspace_estimate(M)} ({exc})"
        ) from None
    if not np.all(np.isfinite(x)):
        raise SteadyStateError(
            f"steady state is not unique: null-space dimension estimate {_nullspace_estimate(M)}"
        )
    state, lam = _hermitize(L, x)
    xv = state if isinstance(L, ReducedGenerator) else ops.vec(state)
    residual = float(np.linalg.norm(M @ xv))
    scale = max(1.0, float(abs(M).max())) if M.nnz else 1.0
    if residual > tol * scale:
        raise SteadyStateError(
            f"residual {residual:.3e} exceeds {tol:g} * {scale:.3g}; min eigenvalue {lam:.3e}"
        )
    if cutoffs is None and isinstance(L, ReducedGenerator):
        cutoffs = L.cutoffs
    return SolveReport(state, residual, lam, cutoffs, time.perf_counter() - t0, generator=L)


_IMPLICIT = ("BDF", "Radau", "LSODA")


def propagate(L, rho0, t_final: float, tol: float = 1e-10, method: str = "DOP853"):
    """Integrate ``d vec(rho)/dt = L vec(rho)`` with an adaptive scheme.

    The default explicit method suits short times; for relaxation over
    many mechanical damping times pass ``method="BDF"``, which receives
    the generator itself as the exact Jacobian.

    ``rho0`` is a density matrix for full generators or a coordinate vector
    for a :class:`ReducedGenerator`; the result has the same form.
    """
    if not t_final > 0:
        raise ValueError("t_final must be positive")
    M, w, _ = _operator_and_weights(L)
    reduced = isinstance(L, ReducedGenerator)
    x0 = np.asarray(rho0, dtype=complex)
    x0 = x0.copy() if reduced else ops.vec(x0).copy()
    if M.nnz == 0:
        return rho0.copy()
    M = M.astype(complex).tocsc()
    extra = {"jac": M} if method in _IMPLICIT else {}
    sol = solve_ivp(
        lambda t, y: M @ y, (0.0, t_final), x0,
        method=method, rtol=tol, atol=tol * 1e-2, t_eval=[t_final], **extra,
    )
    if sol.status != 0:
        raise PropagationError(f"integration failed at t={sol.t[-1] if sol.t.size else 0.0:g}: {sol.message}")
    x = sol.y[:, -1]
    drift = abs(w @ x - w @ x0)
    if drift > 1e-9:
        raise PropagationError(f"trace drifted by {drift:.3e}")
    return x if reduced else ops.unvec(x)


# -- cutoff escalation ------------------------------------------------------

CONVERGENCE_KEYS = ("mean_photon", "mean_phonon", "g2_a", "g2_b")


def _relative_change(old, new):
    if old is None or new is None:
        return 0.0 if old is None and new is None else np.inf
    return abs(new - old) / max(abs(old), 1e-300) if old != new else 0.0


def converge_cutoffs(
    params: SystemParams,
    N: int,
    obs_tol: float = 1e-3,
    start: FockCutoffs = FockCutoffs(6, 16),
    step: tuple[int, int] = (2, 4),
    max_rounds: int = 8,
    tol: float = RESIDUAL_TOL,
    tail_tol: float = 1e-12,
) -> SolveReport:
    """Grow the cutoffs until the headline observables stop moving.

    Each round solves the phonon-diagonal generator; convergence requires
    the relative change of mean photon and phonon numbers and of both
    second-order correlations to drop below ``obs_tol``.  A mode whose
    top-level occupation is already below ``tail_tol`` keeps its cutoff
    (unless neither mode qualifies, in which case both grow).  The report
    of the last, largest solve is returned.
    """
    from .observables import distribution, observables_from_distribution

    N = check_order(N)
    if not obs_tol > 0:
        obs_tol = 0.0
    cut = start
    previous = None
    history = []
    for rounds in range(1, max_rounds + 1):
        gen = phonon_diagonal_generator(params, cut, N)
        report = steady_state(gen, tol=tol)
        P = distribution(report)
        rec = observables_from_distribution(P, params.chi())
        values = {k: getattr(rec, k) for k in CONVERGENCE_KEYS}
        history.append((cut, values))
        if previous is not None:
            drift = max(_relative_change(previous[k], values[k]) for k in CONVERGENCE_KEYS)
            if drift < obs_tol:
                report.rounds = rounds
                return report
        previous = values
        grow_n = P.photon_marginal[-1] > tail_tol
        grow_m = P.phonon_marginal[-1] > tail_tol
        if not (grow_n or grow_m):
            grow_n = grow_m = True
        cut = cut.grow(step[0] if grow_n else 0, step[1] if grow_m else 0)
    lines = "; ".join(
        f"({c.n_max},{c.m_max}): " + ", ".join(f"{k}={v}" for k, v in vals.items())
        for c, vals in history
    )
    raise ConvergenceError(f"observables not converged to {obs_tol:g} after {max_rounds} rounds: {lines}", history)
