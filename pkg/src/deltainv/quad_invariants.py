"""Invariants of tuples of symmetric matrices under congruence.

A tuple (T^(0), ..., T^(r)) of symmetric g x g matrices carries the action
M -> L M L^t of SL_g.  This module computes graded dimensions of the
invariant ring, the determinant-coefficient generators (theta), the moment
determinants (upsilon), the rank-one substitution map and its lifts (xi),
the known relations between them, Hilbert series, and point counts on the
fibres of the separating invariants.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from math import comb

from .exact_linalg import ExactMatrix, kernel_basis, solve
from .multipoly import (
    MatrixPoly,
    MultiPoly,
    VarId,
    substitute,
    sym_det,
    uvar,
    vvar,
)


class BadLevels(Exception):
    """Level tuple with repeats or of the wrong length."""


# ---------------------------------------------------------------------------
# the action
# ---------------------------------------------------------------------------

def congruence_act(L, mats):
    """Apply M -> L M L^t to each matrix in the tuple."""
    g = len(L)
    out = []
    for M in mats:
        LM = [[sum(L[i][k] * M[k][j] for k in range(g)) for j in range(g)]
              for i in range(g)]
        out.append([[sum(LM[i][k] * L[j][k] for k in range(g))
                     for j in range(g)] for i in range(g)])
    return out


def _entry_derivative_images(v: VarId, a: int, b: int):
    """Images of the entry T_{ij} under the elementary generator E_{ab}.

    The infinitesimal action is T -> E T + T E^t, so the entry (i, j) moves
    by [i == a] T_{bj} + [j == a] T_{ib}.
    """
    out = []
    if v.i == a:
        out.append(VarId(v.family, v.level, min(b, v.j), max(b, v.j)))
    if v.j == a:
        out.append(VarId(v.family, v.level, min(v.i, b), max(v.i, b)))
    return out


def _apply_derivation(f: MultiPoly, a: int, b: int) -> MultiPoly:
    total = MultiPoly.constant(0)
    for v in f.variables():
        images = _entry_derivative_images(v, a, b)
        for w in images:
            total = total + f.derivative(v) * MultiPoly.var(w)
    return total


def sl_annihilates(f: MultiPoly, g: int) -> bool:
    """True when every elementary trace-free derivation kills f."""
    for a in range(1, g + 1):
        for b in range(1, g + 1):
            if a != b and not _apply_derivation(f, a, b).is_zero():
                return False
    return True


# ---------------------------------------------------------------------------
# torus slice and graded dimensions
# ---------------------------------------------------------------------------

def torus_slice(g: int, r: int, s):
    """Monomials of degree g*s whose every index appears exactly 2*s times."""
    s = Fraction(s)
    gs = g * s
    if gs.denominator != 1:
        raise ValueError(f"total degree {gs} is not an integer")
    gs = int(gs)
    target = 2 * s
    vars_ = [VarId("T", l, i, j) for l in range(r + 1)
             for i in range(1, g + 1) for j in range(i, g + 1)]
    out = []
    for combo in itertools.combinations_with_replacement(vars_, gs):
        counts = [Fraction(0)] * (g + 1)
        for v in combo:
            counts[v.i] += 1
            counts[v.j] += 1
        if all(counts[m] == target for m in range(1, g + 1)):
            key = tuple(sorted((v, combo.count(v)) for v in set(combo)))
            out.append(MultiPoly({key: 1}))
    return out


class InvariantBasis:
    def __init__(self, dimension, polys):
        self.dimension = dimension
        self.polys = polys


def invariant_dimension(g: int, r: int, s) -> InvariantBasis:
    """Dimension (and a basis) of the invariants in one graded slice."""
    monomials = torus_slice(g, r, s)
    if not monomials:
        return InvariantBasis(0, [])
    columns = {next(iter(m.terms)): idx for idx, m in enumerate(monomials)}
    rows = {}
    for idx, m in enumerate(monomials):
        for a in range(1, g + 1):
            for b in range(1, g + 1):
                if a == b:
                    continue
                img = _apply_derivation(m, a, b)
                for key, coeff in img.terms.items():
                    row = rows.setdefault((a, b, key), {})
                    row[idx] = row.get(idx, 0) + coeff
    A = ExactMatrix(list(rows.values()), ncols=len(monomials))
    basis = kernel_basis(A)
    polys = []
    for vec in basis:
        f = MultiPoly.constant(0)
        for key, idx in columns.items():
            if vec[idx]:
                f = f + MultiPoly({key: vec[idx]})
        polys.append(f)
    return InvariantBasis(len(basis), polys)


# ---------------------------------------------------------------------------
# theta and upsilon generators
# ---------------------------------------------------------------------------

def theta_multidegrees(g: int, r: int):
    """All (r+1)-part multidegrees of total degree g, lexicographic."""
    out = []
    for combo in itertools.combinations_with_replacement(range(r + 1), g):
        m = [0] * (r + 1)
        for c in combo:
            m[c] += 1
        out.append(tuple(m))
    return sorted(out, reverse=True)


def theta(g: int, mdeg) -> MultiPoly:
    """Coefficient of prod y_l^(m_l) in det(sum_l y_l T^(l))."""
    mdeg = tuple(mdeg)
    if sum(mdeg) != g:
        raise ValueError("multidegree must sum to the matrix size")
    r = len(mdeg) - 1
    rows = []
    for i in range(1, g + 1):
        row = []
        for j in range(1, g + 1):
            e = MultiPoly.constant(0)
            for l in range(r + 1):
                e = e + MultiPoly.var(VarId("s", l, 0, 0)) * \
                    MultiPoly.var(VarId("T", l, min(i, j), max(i, j)))
            row.append(e)
        rows.append(row)
    det = sym_det(MatrixPoly(rows))
    out = {}
    for key, coeff in det.terms.items():
        svars = {v.level: e for v, e in key if v.family == "s"}
        if all(svars.get(l, 0) == mdeg[l] for l in range(r + 1)):
            rest = tuple((v, e) for v, e in key if v.family != "s")
            out[rest] = out.get(rest, 0) + coeff
    return MultiPoly(out)


def upsilon(g: int, levels) -> MultiPoly:
    """Determinant of the matrix of entry-columns at the given levels."""
    levels = tuple(levels)
    n = g * (g + 1) // 2
    if len(set(levels)) != len(levels):
        raise BadLevels(f"levels must be distinct, got {levels}")
    if len(levels) != n:
        raise BadLevels(f"need {n} levels for size {g}, got {len(levels)}")
    pairs = [(i, j) for i in range(1, g + 1) for j in range(i, g + 1)]
    rows = [[MultiPoly.var(VarId("T", q, i, j)) for q in levels]
            for (i, j) in pairs]
    return sym_det(MatrixPoly(rows))


# ---------------------------------------------------------------------------
# the rank-one substitution map and xi lifts (g = 2)
# ---------------------------------------------------------------------------

def jmath(f: MultiPoly) -> MultiPoly:
    """Substitute the rank-one parametrization T^(l) = (u_l, v_l)^t (u_l, v_l)."""
    sigma = {}
    for v in f.variables():
        if v.family != "T" or v.j > 2:
            raise ValueError("the substitution map is defined for size 2")
        if (v.i, v.j) == (1, 1):
            sigma[v] = uvar(v.level) * uvar(v.level)
        elif (v.i, v.j) == (2, 2):
            sigma[v] = vvar(v.level) * vvar(v.level)
        else:
            sigma[v] = uvar(v.level) * vvar(v.level)
    return substitute(f, sigma)


def pluecker_y(i: int, j: int) -> MultiPoly:
    return uvar(i) * vvar(j) - vvar(i) * uvar(j)


def xi_target(cycle) -> MultiPoly:
    """Minus the circular product of pair brackets along the cycle."""
    cycle = tuple(cycle)
    out = MultiPoly.constant(-1)
    for k, q in enumerate(cycle):
        out = out * pluecker_y(q, cycle[(k + 1) % len(cycle)])
    return out


def xi_lift(cycle) -> MultiPoly:
    """The unique multilinear preimage of ``xi_target(cycle)``."""
    cycle = tuple(cycle)
    if len(set(cycle)) != len(cycle):
        raise BadLevels(f"cycle entries must be distinct, got {cycle}")
    target = xi_target(cycle)
    # candidate monomials: one entry variable from each level of the cycle
    choices = [(1, 1), (1, 2), (2, 2)]
    columns = []
    images = []
    for pick in itertools.product(choices, repeat=len(cycle)):
        mono = MultiPoly.constant(1)
        for level, (i, j) in zip(cycle, pick):
            mono = mono * MultiPoly.var(VarId("T", level, i, j))
        columns.append(mono)
        images.append(jmath(mono))
    keys = sorted({k for f in images + [target] for k in f.terms})
    row_of = {k: idx for idx, k in enumerate(keys)}
    A = [[0] * len(columns) for _ in keys]
    for c, f in enumerate(images):
        for k, coeff in f.terms.items():
            A[row_of[k]][c] = coeff
    b = [0] * len(keys)
    for k, coeff in target.terms.items():
        b[row_of[k]] = coeff
    x = solve(ExactMatrix(A), b)
    if x is None:
        raise ValueError(f"no multilinear preimage for cycle {cycle}")
    out = MultiPoly.constant(0)
    for c, coeff in enumerate(x):
        if coeff:
            out = out + columns[c] * coeff
    return out


# ---------------------------------------------------------------------------
# relations
# ---------------------------------------------------------------------------

def _pluecker_products(indices):
    """The six quartic pair-products on four levels, as pair lists."""
    i0, i1, i2, i3 = indices
    return [
        [(i0, i1), (i0, i1), (i2, i3), (i2, i3)],
        [(i0, i2), (i0, i2), (i1, i3), (i1, i3)],
        [(i0, i3), (i0, i3), (i1, i2), (i1, i2)],
        [(i0, i1), (i1, i2), (i2, i3), (i0, i3)],
        [(i0, i1), (i1, i3), (i2, i3), (i0, i2)],
        [(i0, i2), (i1, i2), (i1, i3), (i0, i3)],
    ]


def relation_check(kind: str, indices=(0, 1, 2, 3), split=None):
    """Verify one of the known relations; returns (holds, witness)."""
    indices = tuple(indices)
    if len(set(indices)) != len(indices):
        raise ValueError(f"indices must be distinct, got {indices}")
    if kind == "cyclic":
        if split is None or not 2 <= split <= len(indices) - 1:
            raise ValueError("cyclic relation needs a split position")
        s = split
        q = (None,) + indices          # 1-based access q[1..m]
        m = len(indices)
        lhs = xi_lift(indices) + \
            xi_lift((q[1],) + tuple(q[k] for k in range(s + 1, m + 1))) * \
            xi_lift(tuple(q[k] for k in range(2, s + 1)))
        reordered = (q[1],) + tuple(q[k] for k in range(s, 1, -1)) + \
            tuple(q[k] for k in range(s + 1, m + 1))
        rhs = xi_lift(reordered) * ((-1) ** s)
        residual = lhs - rhs
        return residual.is_zero(), {"residual_terms": len(residual.terms)}
    if kind == "plucker":
        products = _pluecker_products(indices)
        images = []
        for pairs in products:
            f = MultiPoly.constant(1)
            for pair in pairs:
                f = f * xi_target(pair)
            images.append(f)
        keys = sorted({k for f in images for k in f.terms})
        col = {k: i for i, k in enumerate(keys)}
        rows = []
        for f in images:
            row = [0] * len(keys)
            for k, c in f.terms.items():
                row[col[k]] = c
            rows.append(row)
        kern = kernel_basis(ExactMatrix([[rows[i][j] for i in range(6)]
                                         for j in range(len(keys))]))
        witness = {"kernel_dimension": len(kern)}
        holds = len(kern) == 1
        if holds:
            vec = kern[0]
            den = 1
            for v in vec:
                if isinstance(v, Fraction):
                    den = den * v.denominator // _gcd(den, v.denominator)
            ints = [int(v * den) for v in vec]
            norm = 0
            for v in ints:
                norm = _gcd(norm, v)
            ints = [v // norm for v in ints]
            if ints[0] < 0:
                ints = [-v for v in ints]
            witness["combination"] = [
                (c, pairs) for c, pairs in zip(ints, products)]
        return holds, witness
    raise ValueError(f"unknown relation kind: {kind}")


def _gcd(a, b):
    from math import gcd
    return gcd(a, b)


# ---------------------------------------------------------------------------
# Hilbert series
# ---------------------------------------------------------------------------

_EVEN_NUMERATORS = {1: [1], 2: [1], 3: [1, 1, 1, 1], 4: [1, 3, 6, 10]}


def hilbert_closed(r: int, terms: int, variant: str = "even"):
    """First coefficients of the closed-form Hilbert series (g = 2)."""
    if variant == "even":
        if r not in _EVEN_NUMERATORS:
            raise ValueError(f"no closed form stored for r = {r}")
        num = _EVEN_NUMERATORS[r]
        d = 3 * r
    elif variant == "grassmannian":
        if r < 2:
            raise ValueError("need at least two levels")
        num = [Fraction(comb(r - 1, j) * comb(r - 1, j - 1), r - 1)
               for j in range(1, r)]
        d = 2 * r - 1
    else:
        raise ValueError(f"unknown variant: {variant}")
    out = []
    for s in range(terms):
        val = sum(num[j] * comb(s - j + d - 1, d - 1)
                  for j in range(len(num)) if s - j >= 0)
        out.append(int(val))
    return out


# ---------------------------------------------------------------------------
# discriminants and the separating invariant
# ---------------------------------------------------------------------------

def _disc_generic(g: int) -> MultiPoly:
    """Discriminant of a degree-g binary form in its coefficient variables.

    Built as the Sylvester resultant of f and df/dt divided by the leading
    coefficient, with the usual alternating sign.
    """
    cs = [MultiPoly.var(VarId("c", j, 0, 0)) for j in range(g + 1)]
    n = 2 * g - 1
    rows = []
    for k in range(g - 1):                     # rows of f
        row = [MultiPoly.constant(0)] * n
        for j in range(g + 1):
            row[k + j] = cs[j]
        rows.append(row)
    for k in range(g):                         # rows of f'
        row = [MultiPoly.constant(0)] * n
        for j in range(g):
            row[k + j] = cs[j] * (g - j)
        rows.append(row)
    res = sym_det(MatrixPoly(rows))
    lead = VarId("c", 0, 0, 0)
    out = {}
    for key, coeff in res.terms.items():
        exps = dict(key)
        if exps.get(lead, 0) < 1:
            raise ValueError("resultant not divisible by the leading term")
        exps[lead] -= 1
        new = tuple(sorted((v, e) for v, e in exps.items() if e))
        out[new] = out.get(new, 0) + coeff
    sign = (-1) ** (g * (g - 1) // 2)
    return MultiPoly(out) * sign


def binary_discriminant(coeffs):
    """Discriminant of the binary form with the given coefficient list."""
    g = len(coeffs) - 1
    disc = _disc_generic(g)
    values = {VarId("c", j, 0, 0): coeffs[j] for j in range(g + 1)}
    return disc.evaluate(values)


def tact_invariant(g: int) -> MultiPoly:
    """Discriminant of det(y0 T + y1 T'), expanded in the theta generators."""
    disc = _disc_generic(g)
    sigma = {VarId("c", j, 0, 0): theta(g, (g - j, j)) for j in range(g + 1)}
    return substitute(disc.map_coeffs(Fraction), sigma)


def separating_F0(g: int, p: int) -> MultiPoly:
    """The invariant whose non-vanishing separates generic pairs."""
    f = theta(g, (g, 0)) * tact_invariant(g)
    if p == 2:
        f = f * theta(g, (g - 1, 1))
    return f


# ---------------------------------------------------------------------------
# point counts
# ---------------------------------------------------------------------------

def _sqrt_table(q: int):
    table = {}
    for x in range(q):
        table.setdefault(x * x % q, []).append(x)
    return table


def _count_g3(q, alpha, beta, gamma, nu):
    rhs1 = (alpha * alpha + beta * beta + gamma * gamma) % q
    rhs2 = (beta * beta + nu * gamma * gamma) % q
    rhs3 = (alpha * beta * gamma - gamma * gamma) % q
    roots = _sqrt_table(q)
    count = 0
    for z in range(q):
        y2 = (rhs2 - nu * z * z) % q
        for y in roots.get(y2, ()):
            x2 = (rhs1 - y2 - z * z) % q
            for x in roots.get(x2, ()):
                if (x * y * z - z * z) % q == rhs3:
                    count += 1
    return count


def b0_count(g: int, q: int, trials: int = 100, seed=None, draw=None,
             force_zero: bool = False):
    """Solution counts on random fibres of the separating invariants."""
    rng = random.Random(seed)
    counts = []
    for _ in range(trials):
        if g == 2:
            if force_zero:
                d = 0
            elif draw is not None:
                d = draw * draw % q
            else:
                d = rng.randrange(q) ** 2 % q
            roots = _sqrt_table(q)
            counts.append(len(roots.get(d, ())))
        elif g == 3:
            if draw is not None:
                alpha, beta, gamma, nu = draw
            else:
                alpha = rng.randrange(1, q)
                beta = rng.randrange(1, q)
                gamma = rng.randrange(1, q)
                nu = rng.randrange(2, q)
            counts.append(_count_g3(q, alpha, beta, gamma, nu))
        else:
            raise ValueError(f"point counts implemented for sizes 2 and 3")
    return {"counts": counts, "max_count": max(counts)}
