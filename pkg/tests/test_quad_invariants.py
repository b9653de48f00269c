"""Tests for the congruence-invariant theory of tuples of symmetric matrices.

Oracles: exhaustive monomial enumeration for torus slices, sympy determinants,
direct evaluation at random tuples over Q and prime fields, binomial closed
forms recomputed with math.comb, and brute-force solution counting over F_q.
"""

import itertools
import random
from fractions import Fraction
from math import comb

import pytest
import sympy

from deltainv.multipoly import MultiPoly, Tvar, VarId, uvar, vvar
from deltainv.quad_invariants import (
    BadLevels,
    b0_count,
    binary_discriminant,
    congruence_act,
    hilbert_closed,
    invariant_dimension,
    jmath,
    pluecker_y,
    relation_check,
    separating_F0,
    sl_annihilates,
    tact_invariant,
    theta,
    theta_multidegrees,
    torus_slice,
    upsilon,
    xi_lift,
    xi_target,
)


def _rand_sl2(rng):
    a, b = rng.randrange(-3, 4), rng.randrange(-3, 4)
    # product of elementary matrices, always determinant 1
    return [[1 + a * b, a], [b, 1]]


def _sym_tuple_point(g, r, rng, span=7):
    point = {}
    for l in range(r + 1):
        for i in range(1, g + 1):
            for j in range(i, g + 1):
                point[VarId("T", l, i, j)] = Fraction(rng.randrange(-span, span + 1))
    return point


def _transform_point(point, lam, g, r):
    """Congruence-transform a T-point by lam, returning the new point."""
    out = {}
    for l in range(r + 1):
        M = [[point[VarId("T", l, min(i, j), max(i, j))] for j in range(1, g + 1)]
             for i in range(1, g + 1)]
        new = congruence_act(lam, [M])[0]
        for i in range(1, g + 1):
            for j in range(i, g + 1):
                out[VarId("T", l, i, j)] = new[i - 1][j - 1]
    return out


# ---------------------------------------------------------------- action

def test_congruence_act_identity():
    M = [[1, 2], [2, 5]]
    assert congruence_act([[1, 0], [0, 1]], [M]) == [M]


def test_congruence_act_torus():
    lam = Fraction(3)
    L = [[lam, 0], [0, 1 / lam]]
    M = [[Fraction(1), Fraction(1)], [Fraction(1), Fraction(1)]]
    (out,) = congruence_act(L, [M])
    assert out[0][0] == lam ** 2 and out[1][1] == lam ** -2 and out[0][1] == 1


def test_congruence_preserves_det():
    rng = random.Random(8)
    for _ in range(5):
        L = _rand_sl2(rng)
        M = [[rng.randrange(-4, 5) for _ in range(2)] for _ in range(2)]
        M = [[M[0][0], M[0][1]], [M[0][1], M[1][1]]]
        (out,) = congruence_act(L, [M])
        assert out[0][0] * out[1][1] - out[0][1] * out[1][0] == M[0][0] * M[1][1] - M[0][1] ** 2


# ---------------------------------------------------------------- torus slice

def _index_count(key, m):
    total = 0
    for vid, e in key:
        total += e * ((vid.i == m) + (vid.j == m))
    return total


def _slice_oracle(g, r, s):
    """Exhaustive enumeration of degree g*s monomials with balanced indices."""
    gs = int(g * s)
    vars_ = [VarId("T", l, i, j)
             for l in range(r + 1)
             for i in range(1, g + 1) for j in range(i, g + 1)]
    found = set()
    for combo in itertools.combinations_with_replacement(vars_, gs):
        key = []
        for v in sorted(set(combo)):
            key.append((v, combo.count(v)))
        key = tuple(key)
        if all(_index_count(key, m) == 2 * s for m in range(1, g + 1)):
            found.add(key)
    return found


def test_slice_g1_all_monomials():
    mons = torus_slice(1, 1, 2)
    assert {next(iter(m.terms)) for m in mons} == _slice_oracle(1, 1, 2)
    assert len(mons) == 3  # T^2, T T', T'^2


def test_slice_small_cases():
    got = {next(iter(m.terms)) for m in torus_slice(2, 0, 1)}
    assert got == _slice_oracle(2, 0, 1)
    assert len(got) == 2   # T11 T22 and T12^2

    got_half = {next(iter(m.terms)) for m in torus_slice(2, 1, Fraction(1, 2))}
    assert got_half == {
        ((VarId("T", 0, 1, 2), 1),),
        ((VarId("T", 1, 1, 2), 1),),
    }


def test_slice_random_case_against_oracle():
    got = {next(iter(m.terms)) for m in torus_slice(2, 1, 1)}
    assert got == _slice_oracle(2, 1, 1)


def test_slice_rejects_non_integral_total_degree():
    with pytest.raises(ValueError):
        torus_slice(3, 1, Fraction(1, 2))


# ---------------------------------------------------------------- dimensions

def test_dimension_constants():
    for g, r in ((2, 0), (2, 1), (3, 0)):
        assert invariant_dimension(g, r, 0).dimension == 1


def test_dimension_single_quadratic_pair():
    assert invariant_dimension(2, 1, 1).dimension == 3


def test_dimension_half_integer_vanishes():
    assert invariant_dimension(2, 1, Fraction(1, 2)).dimension == 0


def test_basis_members_transform_correctly():
    rng = random.Random(15)
    basis = invariant_dimension(2, 1, 1)
    assert len(basis.polys) == 3
    for f in basis.polys:
        for _ in range(5):
            point = _sym_tuple_point(2, 1, rng)
            lam = _rand_sl2(rng)
            moved = _transform_point(point, lam, 2, 1)
            assert f.evaluate(point) == f.evaluate(moved)


# ---------------------------------------------------------------- theta

def T(l, i, j):
    return Tvar(l, i, j)


def test_theta_pure_slot_is_det():
    assert theta(2, (2, 0)) == T(0, 1, 1) * T(0, 2, 2) - T(0, 1, 2) ** 2
    assert theta(2, (0, 2)) == T(1, 1, 1) * T(1, 2, 2) - T(1, 1, 2) ** 2


def test_theta_mixed_polarization():
    expect = (T(0, 1, 1) * T(1, 2, 2) + T(0, 2, 2) * T(1, 1, 1)
              - T(0, 1, 2) * T(1, 1, 2) * 2)
    assert theta(2, (1, 1)) == expect


def test_theta_count():
    for g, r in ((2, 1), (2, 2), (2, 3), (3, 1), (3, 2)):
        assert len(theta_multidegrees(g, r)) == comb(g + r, r)


def test_theta_is_invariant():
    rng = random.Random(99)
    for g, r in ((2, 1), (3, 1)):
        for md in theta_multidegrees(g, r):
            f = theta(g, md)
            assert sl_annihilates(f, g)


def test_theta_evaluates_as_det_coefficient():
    # oracle: sympy expansion of det(y0 A + y1 B) on a random integer pair
    rng = random.Random(2)
    A = sympy.Matrix(2, 2, lambda i, j: rng.randrange(-4, 5))
    A = (A + A.T) / 2 * 2
    B = sympy.Matrix(2, 2, lambda i, j: rng.randrange(-4, 5))
    B = (B + B.T) / 2 * 2
    y0, y1 = sympy.symbols("y0 y1")
    poly = sympy.expand((y0 * A + y1 * B).det())
    point = {}
    for i in range(1, 3):
        for j in range(i, 3):
            point[VarId("T", 0, i, j)] = Fraction(int(A[i - 1, j - 1]))
            point[VarId("T", 1, i, j)] = Fraction(int(B[i - 1, j - 1]))
    assert theta(2, (1, 1)).evaluate(point) == Fraction(int(poly.coeff(y0 * y1)))


# ---------------------------------------------------------------- upsilon

def test_upsilon_rejects_repeats():
    with pytest.raises(BadLevels):
        upsilon(2, (0, 0, 1))


def test_upsilon_g1():
    assert upsilon(1, (3,)) == T(3, 1, 1)


def test_upsilon_g2_against_sympy():
    rows = []
    syms = {}
    for i, j in ((1, 1), (1, 2), (2, 2)):
        row = []
        for q in (0, 1, 2):
            s = sympy.Symbol(f"T{q}_{i}{j}")
            syms[VarId("T", q, i, j)] = s
            row.append(s)
        rows.append(row)
    expect = sympy.expand(sympy.Matrix(rows).det())
    got = upsilon(2, (0, 1, 2))
    expr = sympy.Integer(0)
    for key, coeff in got.terms.items():
        term = sympy.Integer(coeff) if not isinstance(coeff, Fraction) else sympy.Rational(coeff)
        for vid, e in key:
            term *= syms[vid] ** e
        expr += term
    assert sympy.expand(expr - expect) == 0


# ---------------------------------------------------------------- jmath and xi

def test_jmath_kills_det():
    for l in (0, 1, 3):
        det = T(l, 1, 1) * T(l, 2, 2) - T(l, 1, 2) ** 2
        assert jmath(det).is_zero()


def test_jmath_on_entries():
    assert jmath(T(0, 1, 1)) == uvar(0) * uvar(0)
    assert jmath(T(2, 2, 2)) == vvar(2) * vvar(2)
    assert jmath(T(1, 1, 2)) == uvar(1) * vvar(1)


def test_jmath_of_mixed_theta_is_pluecker_square():
    y01 = pluecker_y(0, 1)
    assert jmath(theta(2, (1, 1))) == y01 * y01


def test_xi_two_cycle_is_theta():
    assert xi_lift((0, 1)) == theta(2, (1, 1))
    assert jmath(xi_lift((0, 1))) == xi_target((0, 1))


def test_xi_three_cycles_are_upsilon():
    assert xi_lift((0, 1, 2)) == upsilon(2, (0, 1, 2))
    assert xi_lift((0, 2, 1)) == upsilon(2, (0, 1, 2)) * (-1)


def test_xi_target_is_minus_circular_product():
    y01, y12, y20 = pluecker_y(0, 1), pluecker_y(1, 2), pluecker_y(2, 0)
    assert xi_target((0, 1, 2)) == y01 * y12 * y20 * (-1)


# ---------------------------------------------------------------- relations

def test_relation_rejects_repeated_indices():
    with pytest.raises(ValueError):
        relation_check("cyclic", indices=(0, 1, 1, 2), split=3)


def test_cyclic_relation_smallest_case():
    holds, witness = relation_check("cyclic", indices=(0, 1, 2, 3), split=3)
    assert holds
    assert witness["residual_terms"] == 0


def test_plucker_kernel_slice():
    holds, witness = relation_check("plucker", indices=(0, 1, 2, 3))
    assert holds
    assert witness["kernel_dimension"] == 1


# ---------------------------------------------------------------- hilbert series

def test_hilbert_even_r1_r2():
    assert hilbert_closed(1, 5) == [comb(s + 2, 2) for s in range(5)]
    assert hilbert_closed(2, 5) == [comb(s + 5, 5) for s in range(5)]


def test_hilbert_even_r3():
    expect = [sum(comb(s + i, 8) for i in range(5, 9)) for s in range(5)]
    assert hilbert_closed(3, 5) == expect
    assert hilbert_closed(3, 3)[1] == 10
    assert hilbert_closed(3, 3)[2] == 55


def test_hilbert_even_r4_series():
    # (1 + 3x + 6x^2 + 10x^3) / (1-x)^12 expanded by hand
    num = [1, 3, 6, 10]
    expect = [sum(num[j] * comb(s - j + 11, 11) for j in range(4) if s - j >= 0)
              for s in range(6)]
    got = hilbert_closed(4, 6)
    assert got == expect
    assert got[1] == 15 and got[2] == 120


def test_hilbert_grassmannian_r3():
    # (1 + x) / (1-x)^5
    expect = [comb(s + 4, 4) + (comb(s + 3, 4) if s >= 1 else 0) for s in range(3)]
    assert hilbert_closed(3, 3, variant="grassmannian") == expect
    assert expect == [1, 6, 20]


# ---------------------------------------------------------------- b0 counts

def test_b0_g2():
    out = b0_count(2, 101, trials=50, seed=1)
    assert out["max_count"] == 2
    assert all(c <= 2 for c in out["counts"])


def test_b0_g2_zero_discriminant():
    # d12 = 0 admits exactly the solution q12 = 0
    out = b0_count(2, 101, trials=1, seed=0, force_zero=True)
    assert out["counts"] == [1]


def test_b0_g3_matches_exhaustive_oracle():
    import numpy as np

    q = 11
    rng = random.Random(5)
    for _ in range(3):
        alpha, beta, gamma = (rng.randrange(1, q) for _ in range(3))
        nu = rng.choice([x for x in range(2, q)])
        xs = np.arange(q)
        X, Y, Z = np.meshgrid(xs, xs, xs, indexing="ij")
        rhs1 = (alpha ** 2 + beta ** 2 + gamma ** 2) % q
        rhs2 = (beta ** 2 + nu * gamma ** 2) % q
        rhs3 = (alpha * beta * gamma - gamma ** 2) % q
        ok = ((X ** 2 + Y ** 2 + Z ** 2) % q == rhs1)
        ok &= ((Y ** 2 + nu * Z ** 2) % q == rhs2)
        ok &= ((X * Y * Z - Z ** 2) % q == rhs3)
        expect = int(ok.sum())
        got = b0_count(3, q, trials=1, seed=None,
                       draw=(alpha, beta, gamma, nu))["counts"][0]
        assert got == expect


# ---------------------------------------------------------------- discriminants

def test_binary_discriminant_quadratic():
    b, c = Fraction(7), Fraction(3)
    assert binary_discriminant([1, b, c]) == b * b - 4 * c


def test_tact_invariant_values():
    J = tact_invariant(2)
    point_eq = {}
    point_ne = {}
    for i in range(1, 3):
        for j in range(i, 3):
            point_eq[VarId("T", 0, i, j)] = Fraction(1 if i == j else 0)
            point_eq[VarId("T", 1, i, j)] = Fraction(1 if i == j else 0)
            point_ne[VarId("T", 0, i, j)] = Fraction(1 if i == j else 0)
            point_ne[VarId("T", 1, i, j)] = Fraction((1 if i == 1 else 2) if i == j else 0)
    assert J.evaluate(point_eq) == 0
    # oracle: discriminant of (y0 + y1)(y0 + 2 y1) = y0^2 + 3 y0 y1 + 2 y1^2
    assert J.evaluate(point_ne) == Fraction(3) ** 2 - 4 * 2


def test_tact_invariant_theta_degree():
    # degree 2g-2 in the thetas means T-degree g(2g-2)
    assert tact_invariant(2).degree() == 2 * (2 * 2 - 2)


def test_separating_polynomial():
    F0 = separating_F0(2, 3)
    point = {}
    for i in range(1, 3):
        for j in range(i, 3):
            point[VarId("T", 0, i, j)] = Fraction(1 if i == j else 0)
            point[VarId("T", 1, i, j)] = Fraction((1 if i == 1 else 2) if i == j else 0)
    assert F0.evaluate(point) != 0
    # vanishes when the slot-0 determinant does
    point[VarId("T", 0, 2, 2)] = Fraction(0)
    assert F0.evaluate(point) == 0
