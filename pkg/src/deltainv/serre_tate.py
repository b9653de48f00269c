"""Truncated p-adic expansion engine.

The basic object is the entrywise series
``psi(t, t') = (1/p) log((1 + t^phi) / (1 + t)^p)`` where ``t^phi`` is the
Frobenius lift ``t^p + p t'``.  Everything is computed as a polynomial
truncated at a total degree D, with coefficients either exact rationals or
truncated p-adic residues at precision N.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb

from .delta_calculus import frobenius_lift
from .exact_arith import TruncatedPadic, rational_reduce
from .multipoly import (
    MatrixPoly,
    MultiPoly,
    VarId,
    adjugate,
    charpoly_coeffs,
    generic_sym_matrix,
    homogeneous_component,
    substitute,
)


def reduce_rational_poly(f: MultiPoly, p: int, N: int) -> MultiPoly:
    """Reduce every coefficient to a truncated p-adic residue."""
    return f.map_coeffs(lambda c: rational_reduce(c, p, N))


def club(f: MultiPoly, d: int) -> MultiPoly:
    """Homogeneous component of total degree d."""
    return homogeneous_component(f, d)


# ---------------------------------------------------------------------------
# the scalar series and its twists
# ---------------------------------------------------------------------------

def _entry_log_series(i: int, j: int, a: int, p: int, D: int) -> MultiPoly:
    """``(1/p) log((1 + tau_a) / (1 + tau_(a-1))^p)`` with exact rational
    coefficients, truncated at degree D.

    ``tau_k`` is the k-fold Frobenius lift of the level-0 entry variable.
    """
    t = MultiPoly.var(VarId("T", 0, min(i, j), max(i, j))).truncate(D)
    tau = t
    for _ in range(a - 1):
        tau = frobenius_lift(tau, p).truncate(D)
    B = tau
    A = frobenius_lift(tau, p).truncate(D)
    # A - ((1+B)^p - 1) = phi(1 + tau) - (1 + tau)^p is divisible by p
    num = A - ((MultiPoly.constant(1).truncate(D) + B) ** p - 1)
    num = num.map_coeffs(lambda c: _exact_div(c, p))
    # (1 + B)^(-p) expanded binomially
    inv = MultiPoly.constant(0).truncate(D)
    Bk = MultiPoly.constant(1).truncate(D)
    for k in range(D + 1):
        inv = inv + Bk * ((-1) ** k * comb(p + k - 1, k))
        Bk = Bk * B
    u = num * inv
    out = MultiPoly.constant(Fraction(0)).truncate(D)
    un = MultiPoly.constant(1).truncate(D)
    for n in range(1, D + 1):
        un = un * u
        if un.is_zero():
            break
        out = out + un * Fraction((-1) ** (n + 1) * p ** (n - 1), n)
    return out


def _exact_div(c, p):
    q, r = divmod(c, p)
    if r:
        raise ArithmeticError(f"coefficient {c} not divisible by {p}")
    return q


class ExpansionSeries:
    """A symmetric matrix of truncated series with p-adic coefficients."""

    def __init__(self, mat: MatrixPoly, p: int, N: int, D: int):
        self.mat = mat
        self.g = mat.g
        self.p = p
        self.N = N
        self.D = D

    def entry(self, i: int, j: int) -> MultiPoly:
        return self.mat.entry(i, j)

    def scale(self, c) -> "ExpansionSeries":
        return ExpansionSeries(self.mat.scale(c), self.p, self.N, self.D)

    def __add__(self, other: "ExpansionSeries") -> "ExpansionSeries":
        return ExpansionSeries(self.mat + other.mat, self.p, self.N, self.D)


def psi_phi_direct(a: int, g: int, p: int, N: int, D: int) -> ExpansionSeries:
    """The (a-1)-fold twisted series, built directly from Frobenius iterates."""
    rows = []
    for i in range(1, g + 1):
        row = []
        for j in range(1, g + 1):
            f = _entry_log_series(i, j, a, p, D)
            row.append(reduce_rational_poly(f, p, N))
        rows.append(row)
    return ExpansionSeries(MatrixPoly(rows), p, N, D)


def psi(g: int, p: int, N: int, D: int) -> ExpansionSeries:
    """The basic entrywise series in the level-0 and level-1 variables."""
    return psi_phi_direct(1, g, p, N, D)


def phi_twist(S: ExpansionSeries) -> ExpansionSeries:
    """Apply the Frobenius lift to every variable of every entry."""
    p, D = S.p, S.D

    def twist(f):
        sigma = {v: (MultiPoly.var(v) ** p +
                     MultiPoly.var(VarId(v.family, v.level + 1, v.i, v.j)) * p)
                 for v in f.variables()}
        return substitute(f, sigma, D)

    return ExpansionSeries(S.mat.map_entries(twist), p, S.N, D)


# ---------------------------------------------------------------------------
# expansions of the basic forms
# ---------------------------------------------------------------------------

def expansion_basic(kind: str, index: int, g: int, p: int, N: int,
                    D: int) -> ExpansionSeries:
    if kind == "f_partial":
        one = TruncatedPadic(p, N, 1)
        rows = [[MultiPoly.constant(one if i == j else one * 0)
                 for j in range(g)] for i in range(g)]
        return ExpansionSeries(MatrixPoly(rows), p, N, D)
    if kind == "f_angle":
        return psi_phi_direct(index, g, p, N, D)
    if kind in ("f_r", "f_bracket"):
        acc = None
        for i in range(index):
            term = psi_phi_direct(index - i, g, p, N, D).scale(p ** i)
            acc = term if acc is None else acc + term
        return acc
    raise ValueError(f"unknown expansion kind: {kind}")


# ---------------------------------------------------------------------------
# suit maps
# ---------------------------------------------------------------------------

def diamond_realize(F: MultiPoly, r: int, g: int, p: int, N: int,
                    D: int) -> MultiPoly:
    """Substitute the (level)-fold twisted series for each slot of F."""
    series = {}
    sigma = {}
    for v in F.variables():
        if v.level >= r:
            raise ValueError(f"slot {v.level} needs r > {v.level}")
        if v.level not in series:
            series[v.level] = psi_phi_direct(v.level + 1, g, p, N, D)
        sigma[v] = series[v.level].entry(v.i, v.j)
    G = F.map_coeffs(lambda c: rational_reduce(c, p, N))
    return substitute(G, sigma, D)


def _entrywise_log(i: int, j: int, D: int) -> MultiPoly:
    t = MultiPoly.var(VarId("T", 0, min(i, j), max(i, j))).truncate(D)
    out = MultiPoly.constant(Fraction(0)).truncate(D)
    tn = MultiPoly.constant(1).truncate(D)
    for n in range(1, D + 1):
        tn = tn * t
        out = out + tn * Fraction((-1) ** (n + 1), n)
    return out


def spade(F: MultiPoly, r: int, g: int, D: int, p: int = 3) -> MultiPoly:
    """Slot 0 becomes the entrywise logarithm; slot k >= 1 the rational
    (k-1)-fold twisted series."""
    rational_series = {}
    sigma = {}
    for v in F.variables():
        if v.level == 0:
            sigma[v] = _entrywise_log(v.i, v.j, D)
        else:
            key = (v.level, v.i, v.j)
            if key not in rational_series:
                rational_series[key] = _entry_log_series(v.i, v.j, v.level,
                                                         p, D)
            sigma[v] = rational_series[key]
    return substitute(F.map_coeffs(Fraction), sigma, D)


def difference_substitution(F: MultiPoly, r: int, g: int, p: int) -> MultiPoly:
    """Replace each slot-l variable by ``p^l`` times the next-level difference."""
    sigma = {}
    for v in F.variables():
        up = VarId(v.family, v.level + 1, v.i, v.j)
        sigma[v] = (MultiPoly.var(up) - MultiPoly.var(v)) * \
            Fraction(p ** v.level)
    return substitute(F.map_coeffs(Fraction), sigma)


def initial_form_identity_check(F: MultiPoly, r: int, g: int, D: int) -> bool:
    """The lowest-degree form of the slot substitution of F equals F applied
    to (T, T'-T, p(T''-T'), ...), for every small prime."""
    d = F.degree()
    for p in (2, 3, 5):
        lhs = homogeneous_component(spade(F, r, g, max(D, d), p), d)
        sigma = {}
        for v in F.variables():
            if v.level == 0:
                sigma[v] = MultiPoly.var(v).map_coeffs(Fraction)
            else:
                up = VarId(v.family, v.level, v.i, v.j)
                dn = VarId(v.family, v.level - 1, v.i, v.j)
                sigma[v] = (MultiPoly.var(up) - MultiPoly.var(dn)) * \
                    Fraction(p ** (v.level - 1))
        rhs = substitute(F.map_coeffs(Fraction), sigma)
        if not lhs == rhs:
            return False
    return True


# ---------------------------------------------------------------------------
# cyclic word comparison
# ---------------------------------------------------------------------------

def cyclic_word_check(levels, j: int, g: int, p: int, D: int) -> dict:
    """Compare the cyclic product of basic-form expansions with the
    corresponding one-term word in the twisted matrices, modulo p.

    The comparison lives in the polynomial ring whose variables are the
    entries of the symmetric matrices ``Q^(m)`` (one matrix per level,
    entries algebraically independent over the integers).  Each cycle edge
    (a, b) contributes the factor ``Q^(hi) + p Q^(hi-1) + ... + p^(hi-lo-1)
    Q^(lo+1)`` with hi = max(a, b), lo = min(a, b); every second factor is
    adjugated.  The single-word side keeps only ``Q^(max(a, b))`` in each
    slot.  The check asserts that the two j-th characteristic-polynomial
    coefficients agree modulo p and that the single-word side is nonzero
    modulo p.  ``D`` is accepted for interface uniformity; the computation
    is exact and needs no degree truncation.
    """
    levels = tuple(levels)
    if len(levels) % 2 or len(levels) < 2:
        raise ValueError("cycle must have positive even length")
    n = len(levels)
    for k in range(n):
        if levels[k] == levels[(k + 1) % n]:
            raise ValueError(f"cycle entries must alternate, got {levels}")

    matrices = {}

    def Q(m):
        if m not in matrices:
            matrices[m] = generic_sym_matrix(g, level=m, family="Q")
        return matrices[m]

    def pair_sum(a, b):
        lo, hi = min(a, b), max(a, b)
        acc = None
        for i in range(hi - lo):
            term = Q(hi - i).scale(p ** i)
            acc = term if acc is None else acc + term
        return acc

    F = None
    Y = None
    for k in range(n):
        a, b = levels[k], levels[(k + 1) % n]
        Ef = pair_sum(a, b)
        Qm = Q(max(a, b))
        if k % 2 == 1:
            Ef = adjugate(Ef)
            Qm = adjugate(Qm)
        F = Ef if F is None else F @ Ef
        Y = Qm if Y is None else Y @ Qm
    cF = charpoly_coeffs(F)[j]
    cY = charpoly_coeffs(Y)[j]
    equal = (cF - cY).map_coeffs(lambda c: c % p).is_zero()
    nonzero = not cY.map_coeffs(lambda c: c % p).is_zero()
    if equal and nonzero:
        status = "verified"
    elif equal:
        status = "inconclusive"
    else:
        status = "failed"
    return {"equal": equal, "nonzero": nonzero, "status": status}
