"""Ladder operators, product-space embedding and superoperator builders.

Conventions used everywhere in the package:

* product basis index ``idx(n, m) = n * (m_max + 1) + m`` (photon slow,
  phonon fast), i.e. operators are ``kron(photon_op, phonon_op)``;
* density matrices are vectorized column-major, so
  ``vec(A @ rho @ B) == kron(B.T, A) @ vec(rho)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.linalg
import scipy.sparse as sp

from .params import FockCutoffs

PHOTON = "photon"
PHONON = "phonon"

RHO_TRACE_TOL = 1e-12
RHO_HERM_TOL = 1e-12
RHO_POSITIVITY_FLOOR = -1e-8


def annihilation(dim: int) -> sp.csr_matrix:
    """Truncated bosonic lowering operator with ``A[k-1, k] = sqrt(k)``."""
    if dim < 1:
        raise ValueError("dimension must be at least 1")
    return sp.diags(np.sqrt(np.arange(1, dim, dtype=float)), 1, shape=(dim, dim), format="csr")


def number(dim: int) -> sp.csr_matrix:
    return sp.diags(np.arange(dim, dtype=float), 0, format="csr")


def identity(dim: int) -> sp.csr_matrix:
    return sp.identity(dim, format="csr")


def adjoint(op):
    return op.conj().T


def embed(op, subsystem: str, cutoffs: FockCutoffs) -> sp.csr_matrix:
    """Lift a single-mode operator onto the photon-phonon product space."""
    op = sp.csr_matrix(op)
    if subsystem == PHOTON:
        if op.shape != (cutoffs.n_dim, cutoffs.n_dim):
            raise ValueError(f"photon operator must be {cutoffs.n_dim}x{cutoffs.n_dim}, got {op.shape}")
        return sp.kron(op, identity(cutoffs.m_dim), format="csr")
    if subsystem == PHONON:
        if op.shape != (cutoffs.m_dim, cutoffs.m_dim):
            raise ValueError(f"phonon operator must be {cutoffs.m_dim}x{cutoffs.m_dim}, got {op.shape}")
        return sp.kron(identity(cutoffs.n_dim), op, format="csr")
    raise ValueError(f"unknown subsystem {subsystem!r}")


def mode_operators(cutoffs: FockCutoffs):
    """Return the embedded photon and phonon lowering operators ``(a, b)``."""
    a = embed(annihilation(cutoffs.n_dim), PHOTON, cutoffs)
    b = embed(annihilation(cutoffs.m_dim), PHONON, cutoffs)
    return a, b


@lru_cache(maxsize=512)
def _phonon_word(r: int, s: int, dim: int) -> sp.csr_matrix:
    ext = dim + s
    b = annihilation(ext)
    word = identity(ext)
    for _ in range(s):
        word = b.T @ word
    for _ in range(r):
        word = b @ word
    return sp.csr_matrix(word[:dim, :dim])


def phonon_word(r: int, s: int, dim: int) -> sp.csr_matrix:
    """Matrix of the word ``b^r b†^s`` on a ``dim``-level phonon space.

    The elements are those of the untruncated operator: the raising part
    is evaluated on an extended space before projecting back, so e.g.
    ``b b†`` is ``diag(1, ..., dim)`` rather than having a zero top entry.
    Returned matrices are cached and shared; do not modify them in place.
    """
    if r < 0 or s < 0:
        raise ValueError("word exponents must be non-negative")
    return _phonon_word(int(r), int(s), int(dim))


# -- superoperators ---------------------------------------------------------

def vec(rho: np.ndarray) -> np.ndarray:
    return np.asarray(rho).reshape(-1, order="F")


def unvec(x: np.ndarray, dim: int | None = None) -> np.ndarray:
    x = np.asarray(x)
    if dim is None:
        dim = int(round(np.sqrt(x.size)))
    if dim * dim != x.size:
        raise ValueError(f"vector of length {x.size} is not a vectorized {dim}x{dim} matrix")
    return x.reshape((dim, dim), order="F")


def superop_sandwich(A, B) -> sp.csr_matrix:
    """Superoperator of ``rho -> A @ rho @ B``."""
    A = sp.csr_matrix(A)
    B = sp.csr_matrix(B)
    if A.shape[0] != A.shape[1] or B.shape[0] != B.shape[1] or A.shape != B.shape:
        raise ValueError(f"operands must be square and equal-sized, got {A.shape} and {B.shape}")
    return sp.kron(B.T, A, format="csr")


def spre(A) -> sp.csr_matrix:
    return superop_sandwich(A, identity(A.shape[0]))


def spost(B) -> sp.csr_matrix:
    return superop_sandwich(identity(B.shape[0]), B)


def commutator_superop(H) -> sp.csr_matrix:
    """``rho -> -i [H, rho]``."""
    return -1j * (spre(H) - spost(H))


def dissipator(X) -> sp.csr_matrix:
    """Lindblad dissipator ``X rho X† - {X†X, rho}/2``."""
    X = sp.csr_matrix(X)
    Xd = adjoint(X).tocsr()
    XdX = (Xd @ X).tocsr()
    return superop_sandwich(X, Xd) - 0.5 * spre(XdX) - 0.5 * spost(XdX)


def trace_row(dim: int) -> np.ndarray:
    """Row vector ``w`` with ``w @ vec(rho) == trace(rho)``."""
    w = np.zeros(dim * dim)
    w[np.arange(dim) * (dim + 1)] = 1.0
    return w


def adjoint_on_identity(L, dim: int | None = None) -> float:
    """Max-norm of the adjoint generator applied to the identity.

    Zero exactly when ``L`` preserves the trace of every input.
    """
    if dim is None:
        dim = int(round(np.sqrt(L.shape[0])))
    w = trace_row(dim)
    return float(np.max(np.abs(L.T @ w))) if L.nnz else 0.0


# -- polaron transformation -------------------------------------------------

@dataclass(frozen=True)
class PolaronTransform:
    """Block-diagonal polaron unitary and its measured unitarity defect."""

    unitary: sp.csr_matrix
    defect: float


def displacement_block(alpha: float, dim: int) -> np.ndarray:
    """``exp[alpha (b - b†)]`` on a ``dim``-level space via dense expm."""
    b = annihilation(dim).toarray()
    return scipy.linalg.expm(alpha * (b - b.T))


def polaron_unitary(chi: float, cutoffs: FockCutoffs) -> PolaronTransform:
    """Build ``U = exp[chi a†a (b - b†)]`` photon block by photon block.

    Block ``n`` acts on the phonon space as ``exp[chi n (b - b†)]``.
    """
    if not np.isfinite(chi):
        raise ValueError("chi must be finite")
    blocks = [displacement_block(chi * n, cutoffs.m_dim) for n in range(cutoffs.n_dim)]
    eye = np.eye(cutoffs.m_dim)
    defect = max(float(np.max(np.abs(B.T @ B - eye))) for B in blocks)
    U = sp.block_diag(blocks, format="csr")
    return PolaronTransform(U, defect)


def to_polaron_frame(rho: np.ndarray, chi: float, cutoffs: FockCutoffs) -> np.ndarray:
    """Express a lab-frame state in the displaced frame, ``U† rho U``.

    With this convention ``U† b U = b - chi a†a``, which is what removes the
    radiation-pressure coupling from the Hamiltonian.
    """
    U = polaron_unitary(chi, cutoffs).unitary.toarray()
    return U.conj().T @ rho @ U


# -- density matrices -------------------------------------------------------

def density_matrix_violations(rho: np.ndarray) -> list[str]:
    """List the density-matrix invariants that ``rho`` violates."""
    problems = []
    tr = np.trace(rho)
    if abs(tr - 1.0) > RHO_TRACE_TOL:
        problems.append(f"trace {tr.real:.3e}{tr.imag:+.3e}j differs from 1")
    herm = np.max(np.abs(rho - rho.conj().T)) if rho.size else 0.0
    if herm > RHO_HERM_TOL:
        problems.append(f"not Hermitian (max deviation {herm:.3e})")
    else:
        lam = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))[0]
        if lam < RHO_POSITIVITY_FLOOR:
            problems.append(f"minimum eigenvalue {lam:.3e} below {RHO_POSITIVITY_FLOOR:g}")
    return problems


def fock_state(n: int, m: int, cutoffs: FockCutoffs) -> np.ndarray:
    rho = np.zeros((cutoffs.dim, cutoffs.dim), dtype=complex)
    i = cutoffs.index(n, m)
    rho[i, i] = 1.0
    return rho


def thermal_populations(nbar: float, dim: int) -> np.ndarray:
    """Untruncated geometric law ``nbar^m / (1 + nbar)^(m+1)``."""
    m = np.arange(dim)
    if nbar == 0:
        return (m == 0).astype(float)
    return nbar**m / (1.0 + nbar) ** (m + 1)
