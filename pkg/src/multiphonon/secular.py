"""Secular multiphonon expansion of the polaron-frame generator.

Two series are produced here:

* the phonon-diagonal (time-independent) part of the displacement
  exponentials that dress the drive term, and
* the enumerated sandwich terms ``W_L (a rho a†) W_R`` of the dressed
  photon-jump term, filtered by the zero-net-phonon-phase rule.

Words ``b^r b†^s`` are materialized with :func:`operators.phonon_word`.
Coefficients are exact rationals (per unit chi) and are multiplied by
``chi**order`` only at assembly time, so chi sweeps reuse one enumeration.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

import numpy as np
import scipy.sparse as sp

from .operators import annihilation, identity, phonon_word, superop_sandwich
from .params import FockCutoffs, check_order


@dataclass(frozen=True)
class TermDescriptor:
    """One sandwich term ``coeff * chi**order * W_L (a rho a†) W_R``.

    ``left_word`` and ``right_word`` are exponent pairs ``(r, s)`` standing
    for ``b^r b†^s``.
    """

    n1: int
    n2: int
    k1: int
    k2: int
    r1: int
    r2: int
    coeff: Fraction

    @property
    def order(self) -> int:
        return self.n1 + self.n2

    @property
    def left_word(self) -> tuple[int, int]:
        return (self.r1, self.k1 - self.r1)

    @property
    def right_word(self) -> tuple[int, int]:
        return (self.r2, self.k2 - self.r2)

    @property
    def phase(self) -> int:
        """Net multiple of the mechanical frequency the term oscillates at."""
        return (self.k1 - 2 * self.r1) + (self.k2 - 2 * self.r2)


def _parity_ks(n: int):
    """Allowed reduced word lengths k for an n-th power: k <= n, k = n mod 2."""
    return range(n % 2, n + 1, 2)


def _ordering_weight(n: int, k: int) -> Fraction:
    """``(1/2)^p / (k! p!)`` with ``p = (n - k)/2`` from reordering ``(-b + b†)^n``."""
    p = (n - k) // 2
    return Fraction(1, factorial(k) * factorial(p) * 2**p)


@lru_cache(maxsize=None)
def _enumerate(N: int) -> tuple[TermDescriptor, ...]:
    terms = []
    for n1 in range(2 * N + 1):
        for n2 in range(2 * N + 1 - n1):
            sign = -1 if n1 % 2 else 1
            for k1 in _parity_ks(n1):
                for k2 in _parity_ks(n2):
                    base = sign * _ordering_weight(n1, k1) * _ordering_weight(n2, k2)
                    for r1 in range(k1 + 1):
                        for r2 in range(k2 + 1):
                            if (k1 - 2 * r1) + (k2 - 2 * r2) != 0:
                                continue
                            c = base * (-1) ** (r1 + r2) * comb(k1, r1) * comb(k2, r2)
                            terms.append(TermDescriptor(n1, n2, k1, k2, r1, r2, c))
    return tuple(terms)


def enumerate_damping_terms(N: int) -> list[TermDescriptor]:
    """All secular sandwich terms with total chi power ``n1 + n2 <= 2N``.

    Terms come out in lexicographic order of ``(n1, n2, k1, k2, r1, r2)``.
    """
    return list(_enumerate(check_order(N)))


@lru_cache(maxsize=None)
def collected_damping_terms(N: int) -> tuple[tuple[tuple[int, int], tuple[int, int], int, Fraction], ...]:
    """Terms merged by ``(left_word, right_word, order)``; zero sums dropped."""
    acc = defaultdict(Fraction)
    for t in _enumerate(check_order(N)):
        acc[(t.left_word, t.right_word, t.order)] += t.coeff
    return tuple((lw, rw, order, c) for (lw, rw, order), c in acc.items() if c != 0)


def _collect_by_words(chi: float, N: int):
    pairs = defaultdict(float)
    for lw, rw, order, c in collected_damping_terms(N):
        pairs[(lw, rw)] += float(c) * chi**order
    return pairs


def secular_exponent_operator(chi: float, N: int, m_dim: int) -> sp.csr_matrix:
    """Phonon-diagonal part of ``exp[±chi (b - b†)]`` through order ``chi**(2N)``.

    Returns the sum over ``n <= N`` and ``m <= n`` of
    ``(-1)^m chi^(2n) / ((m!)^2 (n-m)! 2^(n-m)) * b^m b†^m``.
    """
    N = check_order(N)
    diag = np.zeros(m_dim)
    for n in range(N + 1):
        for m in range(n + 1):
            c = (-1) ** m / (factorial(m) ** 2 * factorial(n - m) * 2 ** (n - m))
            diag += c * chi ** (2 * n) * phonon_word(m, m, m_dim).diagonal()
    return sp.diags(diag, 0, format="csr")


def secular_damping_superop(chi: float, N: int, cutoffs: FockCutoffs) -> sp.csr_matrix:
    """Superoperator of the secular part of ``e^{chi(b-b†)} a rho a† e^{-chi(b-b†)}``."""
    N = check_order(N)
    a = annihilation(cutoffs.n_dim)
    ad = a.T.tocsr()
    total = sp.csr_matrix((cutoffs.dim**2, cutoffs.dim**2), dtype=float)
    for (lw, rw), c in sorted(_collect_by_words(chi, N).items()):
        if c == 0.0:
            continue
        left = sp.kron(a, phonon_word(*lw, cutoffs.m_dim), format="csr")
        right = sp.kron(ad, phonon_word(*rw, cutoffs.m_dim), format="csr")
        total = total + c * superop_sandwich(left, right)
    return total.tocsr()


def jump_norm(chi: float, N: int, m_dim: int) -> sp.csr_matrix:
    """Phonon operator ``K = sum c W_R W_L`` paired with the jump terms.

    For untruncated modes ``K`` is the identity at every order. In a
    truncated space it deviates from the identity on the top ``2N`` phonon
    levels; using ``a†a ⊗ K`` in the anticommutator keeps the generator
    exactly trace preserving.
    """
    K = sp.csr_matrix((m_dim, m_dim), dtype=float)
    for (lw, rw), c in sorted(_collect_by_words(chi, check_order(N)).items()):
        if c != 0.0:
            K = K + c * (phonon_word(*rw, m_dim) @ phonon_word(*lw, m_dim))
    return K.tocsr()


def phonon_transfer_matrix(chi: float, N: int, m_dim: int) -> sp.csr_matrix:
    """Phonon-population transfer induced by the secular jump terms.

    Entry ``[m_out, m_in]`` is the weight with which ``a rho_m a†`` from
    phonon block ``m_in`` lands in block ``m_out`` when ``rho`` is diagonal
    in the phonon index.
    """
    T = sp.csr_matrix((m_dim, m_dim), dtype=float)
    for (lw, rw), c in sorted(_collect_by_words(chi, check_order(N)).items()):
        if c != 0.0:
            WL = phonon_word(*lw, m_dim)
            WR = phonon_word(*rw, m_dim)
            T = T + c * WL.multiply(WR.T)
    return T.tocsr()


def chi4_reference_superop(chi: float, cutoffs: FockCutoffs) -> sp.csr_matrix:
    """Hand transcription of the chi^4 secular jump term, line by line.

    Used only as a golden reference for ``secular_damping_superop(chi, 2, ...)``.
    """
    md = cutoffs.m_dim
    a = annihilation(cutoffs.n_dim)
    ad = a.T.tocsr()
    I = identity(md)
    b = phonon_word(1, 0, md)
    bd = phonon_word(0, 1, md)
    bbd = phonon_word(1, 1, md)
    b2bd2 = phonon_word(2, 2, md)
    b_bd2 = phonon_word(1, 2, md)
    b2_bd = phonon_word(2, 1, md)
    b2 = phonon_word(2, 0, md)
    bd2 = phonon_word(0, 2, md)

    def term(left, right):
        return superop_sandwich(sp.kron(a, left, format="csr"), sp.kron(ad, right, format="csr"))

    c2, c4 = chi**2, chi**4
    bracket = c2 / 2 * (I - 2 * bbd) + c4 / 24 * (6 * b2bd2 - 12 * bbd + 3 * I)
    one_minus = I - 2 * bbd
    L = term(I, I)
    L = L + term(I, bracket) + term(bracket, I)
    L = L + c2 * (1 + c2) * (term(b, bd) + term(bd, b))
    L = L - c4 / 2 * (term(b, b_bd2) + term(bd, b2_bd) + term(b2_bd, bd) + term(b_bd2, b))
    L = L + c4 / 4 * (term(b2, bd2) + term(one_minus, one_minus) + term(bd2, b2))
    return L.tocsr()
