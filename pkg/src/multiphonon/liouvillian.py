"""Generators of the optomechanical master equation.

* :func:`full_liouvillian` - lab-frame model with the radiation-pressure
  coupling, used as the brute-force oracle.
* :func:`transformed_liouvillian` - polaron-frame secular model at order N.
* :func:`phonon_diagonal_generator` - the same secular model restricted to
  states diagonal in the phonon number, assembled block-wise.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from . import operators as ops
from .params import FockCutoffs, SystemParams, check_order
from .secular import (
    jump_norm,
    phonon_transfer_matrix,
    secular_damping_superop,
    secular_exponent_operator,
)


def full_liouvillian(params: SystemParams, cutoffs: FockCutoffs) -> sp.csr_matrix:
    a, b = ops.mode_operators(cutoffs)
    ad, bd = a.T.tocsr(), b.T.tocsr()
    na = ad @ a
    H = (
        params.delta * na
        + bd @ b
        + params.epsilon * (a + ad)
        + params.g * na @ (b + bd)
    )
    L = ops.commutator_superop(H) + params.kappa_a * ops.dissipator(a)
    L = L + params.kappa_b * (1 + params.nbar) * ops.dissipator(b)
    L = L + params.kappa_b * params.nbar * ops.dissipator(bd)
    return L.tocsr()


def transformed_hamiltonian(params: SystemParams, cutoffs: FockCutoffs, N: int) -> sp.csr_matrix:
    chi = params.chi()
    a = ops.annihilation(cutoffs.n_dim)
    na = ops.number(cutoffs.n_dim)
    S = secular_exponent_operator(chi, N, cutoffs.m_dim)
    Im = ops.identity(cutoffs.m_dim)
    H = sp.kron(params.delta * na - chi**2 * (na @ na), Im)
    H = H + sp.kron(ops.identity(cutoffs.n_dim), ops.number(cutoffs.m_dim))
    H = H + params.epsilon * sp.kron(a + a.T, S)
    return H.tocsr()


def transformed_liouvillian(params: SystemParams, cutoffs: FockCutoffs, N: int) -> sp.csr_matrix:
    """Secular polaron-frame generator keeping terms through ``chi**(2N)``."""
    N = check_order(N)
    chi = params.chi()
    a, b = ops.mode_operators(cutoffs)
    bd = b.T.tocsr()
    na = ops.number(cutoffs.n_dim)
    loss = sp.kron(na, jump_norm(chi, N, cutoffs.m_dim), format="csr")

    L = ops.commutator_superop(transformed_hamiltonian(params, cutoffs, N))
    L = L + params.kappa_a * (
        secular_damping_superop(chi, N, cutoffs) - 0.5 * ops.spre(loss) - 0.5 * ops.spost(loss)
    )
    L = L + params.kappa_b * (1 + params.nbar) * ops.dissipator(b)
    L = L + params.kappa_b * params.nbar * ops.dissipator(bd)
    if N >= 1:
        na_full = ops.embed(na, ops.PHOTON, cutoffs)
        L = L + chi**2 * params.kappa_b * (1 + 2 * params.nbar) * ops.dissipator(na_full)
    return L.tocsr()


def appendix_b_liouvillian(params: SystemParams, cutoffs: FockCutoffs) -> sp.csr_matrix:
    """Hand-built chi^2 polaron-frame generator, written in commutator form.

    The photon loss term is the bare ``a†a`` (no truncation-edge
    correction), so this generator leaks trace at the top phonon level.
    """
    chi = params.chi()
    a, b = ops.mode_operators(cutoffs)
    ad, bd = a.T.tocsr(), b.T.tocsr()
    na = (ad @ a).tocsr()
    md = cutoffs.m_dim
    In = ops.identity(cutoffs.n_dim)
    Im = ops.identity(md)
    nb = sp.kron(In, ops.number(md), format="csr")
    bbd = sp.kron(In, ops.phonon_word(1, 1, md), format="csr")
    I = ops.identity(cutoffs.dim)

    H = (
        params.delta * na
        + bd @ b
        + params.epsilon * (a + ad) @ (I - chi**2 * (nb + bbd) / 2)
        - chi**2 * (na @ na)
    )
    pre, post, sand = ops.spre, ops.spost, ops.superop_sandwich

    def comm_plus_hc(A, B):
        # [A, B rho] + H.c.  with A, B such that (B rho)^† = rho B†
        AB = (A @ B).tocsr()
        Bd, Ad = B.T.conj().tocsr(), A.T.conj().tocsr()
        return pre(AB) - sand(B, A) + post((Bd @ Ad).tocsr()) - sand(Ad, Bd)

    one_minus = sp.kron(In, Im - 2 * ops.phonon_word(1, 1, md), format="csr")
    jump = sand(a, ad)
    jump = jump + chi**2 / 2 * (sand(one_minus @ a, ad) + sand(a, ad @ one_minus))
    jump = jump + chi**2 * (sand(b @ a, ad @ bd) + sand(bd @ a, ad @ b))

    L = -1j * (pre(H) - post(H))
    L = L - params.kappa_a / 2 * (pre(na) - jump) - params.kappa_a / 2 * (post(na) - jump)
    L = L - params.kappa_b / 2 * (1 + params.nbar) * (comm_plus_hc(bd, b) + chi**2 * comm_plus_hc(na, na))
    L = L - params.kappa_b / 2 * params.nbar * (comm_plus_hc(b, bd) + chi**2 * comm_plus_hc(na, na))
    return L.tocsr()


@dataclass(frozen=True)
class ReducedGenerator:
    """Generator acting on phonon-diagonal coordinates ``<n1, m|rho|n2, m>``.

    The coordinate vector is ordered as ``x[m, n2, n1]`` (row-major), i.e.
    each phonon level ``m`` carries the column-major vectorization of the
    photon block ``rho_m``.
    """

    matrix: sp.csr_matrix
    cutoffs: FockCutoffs

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def trace_weights(self) -> np.ndarray:
        return np.tile(ops.trace_row(self.cutoffs.n_dim), self.cutoffs.m_dim)

    def blocks(self, x: np.ndarray) -> np.ndarray:
        """Photon blocks ``rho_m`` as an array of shape (m_dim, n_dim, n_dim)."""
        nd = self.cutoffs.n_dim
        return np.asarray(x).reshape(self.cutoffs.m_dim, nd, nd).transpose(0, 2, 1)

    def from_blocks(self, blocks: np.ndarray) -> np.ndarray:
        return np.ascontiguousarray(np.asarray(blocks).transpose(0, 2, 1)).reshape(-1)

    def full_indices(self) -> np.ndarray:
        """Positions of the reduced coordinates inside ``vec(rho)``."""
        c = self.cutoffs
        m, n2, n1 = np.meshgrid(
            np.arange(c.m_dim), np.arange(c.n_dim), np.arange(c.n_dim), indexing="ij"
        )
        row = n1 * c.m_dim + m
        col = n2 * c.m_dim + m
        return (row + col * c.dim).reshape(-1)

    def to_density_matrix(self, x: np.ndarray) -> np.ndarray:
        D = self.cutoffs.dim
        full = np.zeros(D * D, dtype=complex)
        full[self.full_indices()] = x
        return ops.unvec(full, D)

    def from_density_matrix(self, rho: np.ndarray) -> np.ndarray:
        return ops.vec(rho)[self.full_indices()]


def phonon_diagonal_generator(params: SystemParams, cutoffs: FockCutoffs, N: int) -> ReducedGenerator:
    """Assemble the secular generator directly on the phonon-diagonal subspace."""
    N = check_order(N)
    chi = params.chi()
    nd, md = cutoffs.n_dim, cutoffs.m_dim
    a = ops.annihilation(nd)
    ad = a.T.tocsr()
    na = ops.number(nd)
    In = ops.identity(nd)
    Im = ops.identity(md)
    m = np.arange(md, dtype=float)
    S = secular_exponent_operator(chi, N, md).diagonal()
    K = jump_norm(chi, N, md).diagonal()
    T = phonon_transfer_matrix(chi, N, md)

    # per-block photon pieces; Kerr and detuning are m independent
    h0 = params.delta * na - chi**2 * (na @ na)
    L = sp.kron(Im, ops.commutator_superop(h0))
    L = L + params.epsilon * sp.kron(sp.diags(S), ops.commutator_superop(a + ad))

    jump = ops.superop_sandwich(a, ad)
    anti = ops.spre(na) + ops.spost(na)
    L = L + params.kappa_a * (sp.kron(T, jump) - 0.5 * sp.kron(sp.diags(K), anti))

    # mechanical damping moves whole photon blocks between neighbouring m
    down = sp.diags(m[1:], 1, shape=(md, md))   # m+1 -> m with weight m+1
    up = sp.diags(m[1:], -1, shape=(md, md))    # m -> m+1 with weight m+1
    up_loss = np.where(m < md - 1, m + 1, 0.0)
    Ipho = ops.identity(nd * nd)
    L = L + params.kappa_b * (1 + params.nbar) * sp.kron(down - sp.diags(m), Ipho)
    L = L + params.kappa_b * params.nbar * sp.kron(up - sp.diags(up_loss), Ipho)
    if N >= 1:
        L = L + chi**2 * params.kappa_b * (1 + 2 * params.nbar) * sp.kron(Im, ops.dissipator(na))
    return ReducedGenerator(sp.csr_matrix(L), cutoffs)


@dataclass(frozen=True)
class GeneratorBundle:
    full: sp.csr_matrix
    transformed: sp.csr_matrix
    reduced: ReducedGenerator
    params: SystemParams
    cutoffs: FockCutoffs
    N: int


def build_generators(params: SystemParams, cutoffs: FockCutoffs, N: int) -> GeneratorBundle:
    return GeneratorBundle(
        full=full_liouvillian(params, cutoffs),
        transformed=transformed_liouvillian(params, cutoffs, N),
        reduced=phonon_diagonal_generator(params, cutoffs, N),
        params=params,
        cutoffs=cutoffs,
        N=N,
    )
