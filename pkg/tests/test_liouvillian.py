import numpy as np
import pytest
import scipy.sparse as sp
from hypothesis import given, settings, strategies as st

from multiphonon import operators as ops
from multiphonon.liouvillian import (
    appendix_b_liouvillian,
    build_generators,
    full_liouvillian,
    phonon_diagonal_generator,
    transformed_hamiltonian,
    transformed_liouvillian,
)
from multiphonon.params import FIG1, FockCutoffs
from multiphonon.solver import propagate

CUT = FockCutoffs(3, 6)


@pytest.mark.parametrize("N", [0, 1, 2, 3])
def test_trace_preserved_at_every_order(N):
    assert ops.adjoint_on_identity(transformed_liouvillian(FIG1, CUT, N)) <= 1e-12
    R = phonon_diagonal_generator(FIG1, CUT, N)
    assert np.abs(R.matrix.T @ R.trace_weights()).max() <= 1e-12


def test_full_liouvillian_trace_preserving():
    assert ops.adjoint_on_identity(full_liouvillian(FIG1, CUT)) <= 1e-12


@given(chi=st.floats(0.01, 0.3), N=st.integers(0, 3), delta=st.floats(-0.2, 0.2), nbar=st.floats(0, 3))
@settings(max_examples=20, deadline=None)
def test_reduced_generator_is_restriction(chi, N, delta, nbar):
    p = FIG1.replace(chi=chi, delta=delta, nbar=nbar)
    L = transformed_liouvillian(p, CUT, N).toarray()
    R = phonon_diagonal_generator(p, CUT, N)
    idx = R.full_indices()
    np.testing.assert_allclose(L[np.ix_(idx, idx)], R.matrix.toarray(), atol=1e-13)
    # nothing leaks out of the phonon-diagonal subspace
    others = np.setdiff1d(np.arange(L.shape[0]), idx)
    assert np.abs(L[np.ix_(others, idx)]).max(initial=0.0) <= 1e-13


def test_reduced_coordinates_roundtrip():
    R = phonon_diagonal_generator(FIG1, CUT, 1)
    rng = np.random.default_rng(0)
    x = rng.normal(size=R.dim) + 1j * rng.normal(size=R.dim)
    np.testing.assert_allclose(R.from_density_matrix(R.to_density_matrix(x)), x)
    blocks = R.blocks(x)
    assert blocks.shape == (CUT.m_dim, CUT.n_dim, CUT.n_dim)
    np.testing.assert_allclose(R.from_blocks(blocks), x)


def test_hamiltonian_is_hermitian_and_block_diagonal_in_phonons():
    H = transformed_hamiltonian(FIG1, CUT, 2).toarray()
    np.testing.assert_allclose(H, H.conj().T)
    n_of = np.repeat(np.arange(CUT.n_dim), CUT.m_dim)
    m_of = np.tile(np.arange(CUT.m_dim), CUT.n_dim)
    off = m_of[:, None] != m_of[None, :]
    assert np.abs(H[off]).max() == 0.0
    assert n_of.size == CUT.dim


def test_first_order_matches_hand_built_generator_off_edge():
    cut = FockCutoffs(3, 7)
    diff = (transformed_liouvillian(FIG1, cut, 1) - appendix_b_liouvillian(FIG1, cut)).toarray()
    D, md = cut.dim, cut.m_dim
    k = np.arange(D * D)
    edge = ((k % D) % md == md - 1) | ((k // D) % md == md - 1)
    assert np.abs(diff[np.ix_(~edge, ~edge)]).max() <= 1e-12
    # at the edge the difference is the loss-term correction kappa_a/2 chi^2 (M+1) n
    chi, M = FIG1.chi(), cut.m_max
    rho = ops.fock_state(2, M, cut)
    delta_rho = ops.unvec(diff @ ops.vec(rho))
    i = cut.index(2, M)
    assert delta_rho[i, i].real == pytest.approx(FIG1.kappa_a * chi**2 * (M + 1) * 2, rel=1e-12)


def test_hand_built_generator_leaks_trace_only_at_edge():
    cut = FockCutoffs(3, 7)
    L = appendix_b_liouvillian(FIG1, cut)
    leak = np.abs(L.T @ ops.trace_row(cut.dim))
    assert leak.max() > 1e-8
    D, md = cut.dim, cut.m_dim
    k = np.arange(D * D)
    edge = ((k % D) % md == md - 1) & ((k // D) % md == md - 1)
    assert leak[~edge].max() <= 1e-15


def test_zero_coupling_models_coincide():
    p = FIG1.replace(g=0.0)
    full = full_liouvillian(p, CUT)
    for N in (0, 1, 3):
        assert abs(full - transformed_liouvillian(p, CUT, N)).max() <= 1e-13


def test_diagonal_states_stay_diagonal_under_propagation():
    cut = FockCutoffs(3, 5)
    L = transformed_liouvillian(FIG1, cut, 2)
    rho0 = np.zeros((cut.dim, cut.dim), complex)
    for n, m, w in [(0, 0, 0.5), (1, 2, 0.3), (2, 4, 0.2)]:
        rho0[cut.index(n, m), cut.index(n, m)] = w
    rho = propagate(L, rho0, 50.0)
    m_of = np.tile(np.arange(cut.m_dim), cut.n_dim)
    off = m_of[:, None] != m_of[None, :]
    assert np.linalg.norm(rho[off]) <= 1e-10
    assert np.trace(rho).real == pytest.approx(1.0, abs=1e-10)


def test_bundle():
    bundle = build_generators(FIG1, CUT, 2)
    assert bundle.full.shape == bundle.transformed.shape == (CUT.dim**2,) * 2
    assert bundle.reduced.dim == CUT.n_dim**2 * CUT.m_dim
    assert sp.issparse(bundle.full)
