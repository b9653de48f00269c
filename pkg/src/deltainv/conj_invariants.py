"""Conjugation-invariant theory: trace words, the wedge-commutant
polynomial, adjugate-product tuples, and Jacobian-rank certificates.

Numeric helpers work over exact rationals or a prime field; symbolic
constructions reuse the sparse polynomial matrices from :mod:`multipoly`.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

from .exact_linalg import ExactMatrix, rank
from .multipoly import MatrixPoly, MultiPoly, charpoly_coeffs, \
    generic_sym_matrix, adjugate
from .quad_invariants import binary_discriminant


# ---------------------------------------------------------------------------
# numeric matrix helpers (lists of scalars)
# ---------------------------------------------------------------------------

def _mat_mul(A, B, field=None):
    g = len(A)
    out = [[sum(A[i][k] * B[k][j] for k in range(g)) for j in range(g)]
           for i in range(g)]
    if field is not None:
        out = [[x % field for x in row] for row in out]
    return out


def _num_det(rows, field=None):
    n = len(rows)
    if n == 1:
        return rows[0][0] % field if field is not None else rows[0][0]
    total = 0
    for i in range(n):
        if not rows[i][0]:
            continue
        minor = [r[1:] for k, r in enumerate(rows) if k != i]
        term = rows[i][0] * _num_det(minor, field)
        total = total + term if i % 2 == 0 else total - term
    return total % field if field is not None else total


def _num_adjugate(M, field=None):
    g = len(M)
    out = [[0] * g for _ in range(g)]
    for i in range(g):
        for j in range(g):
            minor = [[M[r][c] for c in range(g) if c != j]
                     for r in range(g) if r != i]
            cof = _num_det(minor, field) if minor else 1
            if (i + j) % 2:
                cof = -cof
            out[j][i] = cof % field if field is not None else cof
    return out


def _num_inverse(M):
    det = _num_det(M)
    if det == 0:
        raise ZeroDivisionError("matrix is singular")
    adj = _num_adjugate(M)
    return [[Fraction(x, 1) / det for x in row] for row in adj]


def _num_wedge(M, q, field=None):
    g = len(M)
    subsets = list(combinations(range(g), q))
    out = []
    for S in subsets:
        row = []
        for T in subsets:
            row.append(_num_det([[M[r][c] for c in T] for r in S], field))
        out.append(row)
    return out


def _principal_minor_sum(M, j, field=None):
    g = len(M)
    total = 0
    for S in combinations(range(g), j):
        total += _num_det([[M[r][c] for c in S] for r in S], field)
    return total % field if field is not None else total


# ---------------------------------------------------------------------------
# actions and trace words
# ---------------------------------------------------------------------------

def conj_act(L, mats):
    """Apply M -> L M L^(-1) to each matrix in the tuple."""
    Linv = _num_inverse(L)
    return [_mat_mul(_mat_mul(L, M), Linv) for M in mats]


def trace_word(j: int, word, mats):
    """j-th characteristic coefficient of the product along the word."""
    g = len(mats[0])
    P = [[1 if a == b else 0 for b in range(g)] for a in range(g)]
    for w in word:
        P = _mat_mul(P, mats[w])
    return _principal_minor_sum(P, j)


def phi_q(M0, M1, q: int, field=None):
    """Determinant of the commutator of the q-th exterior powers."""
    A = _num_wedge(M0, q, field)
    B = _num_wedge(M1, q, field)
    AB = _mat_mul(A, B, field)
    BA = _mat_mul(B, A, field)
    C = [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(AB, BA)]
    return _num_det(C, field)


def pi_n(Qs):
    """Adjugate-product tuple: (Q_0 Q_1*, Q_1 Q_2*, ..., Q_(n-1) Q_n*)."""
    return [_mat_mul(Qs[i], _num_adjugate(Qs[i + 1]))
            for i in range(len(Qs) - 1)]


# ---------------------------------------------------------------------------
# symbolic cyclic products
# ---------------------------------------------------------------------------

def cyclic_matrix_product(levels, g: int) -> MatrixPoly:
    """Alternating product of matrices and adjugates along a cyclic word.

    The k-th factor uses the level ``max(levels[k], levels[k+1])`` (indices
    cyclic), plain for odd positions and adjugated for even positions.
    """
    levels = tuple(levels)
    n = len(levels)
    out = None
    for k in range(n):
        m = max(levels[k], levels[(k + 1) % n])
        Q = generic_sym_matrix(g, m, family="Q")
        factor = Q if k % 2 == 0 else adjugate(Q)
        out = factor if out is None else out @ factor
    return out


def y_invariant(j: int, levels, g: int) -> MultiPoly:
    """j-th characteristic coefficient of the cyclic product."""
    return charpoly_coeffs(cyclic_matrix_product(levels, g))[j]


# ---------------------------------------------------------------------------
# Jacobian ranks and discriminants
# ---------------------------------------------------------------------------

def jacobian_rank(polys, point: dict, field=None) -> int:
    """Rank of the Jacobian of the polynomial family at the given point."""
    vars_ = sorted({v for f in polys for v in f.variables()})
    rows = []
    for f in polys:
        row = []
        for v in vars_:
            val = f.derivative(v).evaluate(point)
            row.append(val % field if field is not None else val)
        rows.append(row)
    return rank(ExactMatrix(rows, field=field))


def disc0(coeffs):
    """Discriminant of the monic polynomial with the given coefficients."""
    return binary_discriminant(coeffs)
