"""Batch command-line front end.

Every subcommand runs one computation and emits a single JSON document on
standard output (or to ``--out FILE``).  Exit codes: 0 on success, 1 when a
verification suite reports failures, 2 on usage errors.  Randomized
subcommands draw from ``--seed``; when the flag is absent the environment
variable ``DELTA_INV_SEED`` is consulted, and 0 is the final fallback.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from fractions import Fraction

from .delta_calculus import canonical_delta, delta_bracket
from .conj_invariants import jacobian_rank
from .multipoly import MultiPoly, Tvar, sym_det, generic_sym_matrix
from .quad_invariants import (
    b0_count,
    hilbert_closed,
    invariant_dimension,
    relation_check,
    theta,
    theta_multidegrees,
    upsilon,
    xi_lift,
)
from .serre_tate import (
    club,
    diamond_realize,
    expansion_basic,
    initial_form_identity_check,
    phi_twist,
    psi_phi_direct,
    reduce_rational_poly,
)


def _int_tuple(text: str):
    return tuple(int(part) for part in text.split(","))


def _resolve_seed(args) -> int:
    if getattr(args, "seed", None) is not None:
        return args.seed
    env = os.environ.get("DELTA_INV_SEED")
    return int(env) if env else 0


def _emit(doc: dict, out_path) -> None:
    text = json.dumps(doc, indent=2) + "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _matrix_entries(series) -> list:
    entries = []
    for i in range(1, series.g + 1):
        for j in range(1, series.g + 1):
            entries.append({"row": i, "col": j,
                            "terms": series.entry(i, j).serialize()})
    return entries


# ---------------------------------------------------------------------------
# subcommand handlers
# ---------------------------------------------------------------------------

def _cmd_dims(args, out):
    s = Fraction(args.s)
    basis = invariant_dimension(args.g, args.r, s)
    _emit({"g": args.g, "r": args.r, "s": str(args.s),
           "dimension": basis.dimension}, out)
    return 0


def _cmd_hilbert(args, out):
    coeffs = hilbert_closed(args.r, args.terms, variant=args.variant)
    _emit({"variant": args.variant, "r": args.r, "terms": args.terms,
           "coefficients": list(coeffs)}, out)
    return 0


def _cmd_theta(args, out):
    mdeg = _int_tuple(args.multidegree)
    poly = theta(args.g, mdeg)
    _emit({"g": args.g, "multidegree": list(mdeg),
           "polynomial": poly.serialize()}, out)
    return 0


def _cmd_upsilon(args, out):
    levels = _int_tuple(args.levels)
    poly = upsilon(args.g, levels)
    _emit({"g": args.g, "levels": list(levels),
           "polynomial": poly.serialize()}, out)
    return 0


def _cmd_xi(args, out):
    cycle = _int_tuple(args.cycle)
    poly = xi_lift(cycle)
    _emit({"cycle": list(cycle), "polynomial": poly.serialize()}, out)
    return 0


def _cmd_relations(args, out):
    indices = _int_tuple(args.indices)
    holds, witness = relation_check(args.kind, indices, split=args.split)
    doc = {"kind": args.kind, "indices": list(indices), "holds": holds}
    if args.split is not None:
        doc["split"] = args.split
    for key, value in witness.items():
        doc[key] = value if isinstance(value, (int, bool)) else str(value)
    _emit(doc, out)
    return 0


def _cmd_expand(args, out):
    series = expansion_basic(args.kind, args.index, args.g, args.p,
                             args.prec, args.deg)
    _emit({"kind": args.kind, "index": args.index, "g": args.g,
           "p": args.p, "N": args.prec, "D": args.deg,
           "entries": _matrix_entries(series)}, out)
    return 0


def _cmd_diamond(args, out):
    if args.multidegree:
        mdeg = _int_tuple(args.multidegree)
        invariant = theta(args.g, mdeg)
        label = {"invariant": "theta", "multidegree": list(mdeg)}
        r = len(mdeg)
    else:
        invariant = sym_det(generic_sym_matrix(args.g, level=0))
        label = {"invariant": "det"}
        r = 1
    poly = diamond_realize(invariant, r, args.g, args.p, args.prec, args.deg)
    doc = {"g": args.g, "r": r, "p": args.p, "N": args.prec, "D": args.deg}
    doc.update(label)
    doc["polynomial"] = poly.serialize()
    _emit(doc, out)
    return 0


def _cmd_rank(args, out):
    field = (1 << 31) - 1
    seed = _resolve_seed(args)
    rng = random.Random(seed)
    if args.r == 1:
        polys = [theta(args.g, m) for m in theta_multidegrees(args.g, 1)]
        expected = args.g + 1
    elif args.g == 2:
        polys = [theta(2, m) for m in theta_multidegrees(2, args.r)
                 if sum(1 for c in m[2:] if c) <= 1]
        expected = 3 * args.r
    else:
        raise ValueError("rank families available for r = 1 or g = 2")
    point = {v: rng.randrange(1, field) for f in polys for v in f.variables()}
    rank = jacobian_rank(polys, point, field=field)
    _emit({"g": args.g, "r": args.r, "rank": rank, "expected": expected,
           "field": field, "seed": seed}, out)
    return 0


def _cmd_b0(args, out):
    seed = _resolve_seed(args)
    result = b0_count(args.g, args.q, trials=args.trials, seed=seed)
    _emit({"g": args.g, "q": args.q, "trials": args.trials, "seed": seed,
           "max_count": result["max_count"], "counts": result["counts"]}, out)
    return 0


# ---------------------------------------------------------------------------
# verification suites
# ---------------------------------------------------------------------------

def _random_int_poly(rng, nvars: int, terms: int) -> MultiPoly:
    gens = [Tvar(0, 1, 1), Tvar(0, 1, 2), Tvar(0, 2, 2)][:nvars]
    acc = MultiPoly.constant(rng.randrange(-3, 4))
    for _ in range(terms):
        mono = MultiPoly.constant(rng.randrange(-3, 4))
        for _ in range(rng.randrange(1, 3)):
            mono = mono * rng.choice(gens)
        acc = acc + mono
    return acc


def _suite_delta(args):
    p = args.p
    rng = random.Random(_resolve_seed(args))
    checks = []

    def record(name, passed):
        checks.append({"name": name, "passed": bool(passed)})

    for trial in range(3):
        F = _random_int_poly(rng, 3, 3)
        G = _random_int_poly(rng, 3, 3)
        corr = (F ** p + G ** p - (F + G) ** p).map_coeffs(
            lambda c: Fraction(c, p))
        additivity = canonical_delta(F + G, p) == (
            canonical_delta(F, p) + canonical_delta(G, p) + corr)
        record(f"sum-rule-{trial}", additivity)
        product = canonical_delta(F * G, p) == (
            F ** p * canonical_delta(G, p) + G ** p * canonical_delta(F, p)
            + canonical_delta(F, p) * canonical_delta(G, p) * p)
        record(f"product-rule-{trial}", product)

    a, b = Tvar(0, 1, 1), Tvar(0, 1, 2)
    record("bracket-antisymmetry",
           delta_bracket(a, b, p) == -delta_bracket(b, a, p))
    record("constant-has-zero-image",
           canonical_delta(MultiPoly.constant(1), p).is_zero())
    return checks


def _suite_expansions(args):
    p, N, D = args.p, args.prec, args.deg
    checks = []

    def record(name, passed):
        checks.append({"name": name, "passed": bool(passed)})

    base = psi_phi_direct(1, 2, p, N, D)
    linear = reduce_rational_poly(
        Tvar(1, 1, 1, one=Fraction(1)) - Tvar(0, 1, 1, one=Fraction(1)), p, N)
    record("linear-part", club(base.entry(1, 1), 1) == linear)
    record("twist-route",
           psi_phi_direct(2, 2, p, N, D).mat == phi_twist(base).mat)
    angle = expansion_basic("f_angle", 1, 2, p, N, D)
    record("angle-is-base-series", angle.mat == base.mat)
    partial = expansion_basic("f_partial", 0, 2, p, N, D)
    record("partial-is-identity",
           all(partial.entry(i, i).constant_value() for i in (1, 2))
           and partial.entry(1, 2).is_zero())
    det0 = sym_det(generic_sym_matrix(2, level=0))
    record("initial-form-det", initial_form_identity_check(det0, 1, 2, 2))
    return checks


def _cmd_verify(args, out):
    suites = {"delta": _suite_delta, "expansions": _suite_expansions}
    if args.suite not in suites:
        raise ValueError(f"unknown suite: {args.suite}")
    checks = suites[args.suite](args)
    failed = sum(1 for c in checks if not c["passed"])
    _emit({"suite": args.suite, "total": len(checks),
           "passed": len(checks) - failed, "failed": failed,
           "checks": checks}, out)
    return 1 if failed else 0


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="delta-inv", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, handler, **flags):
        cmd = sub.add_parser(name)
        cmd.set_defaults(handler=handler)
        cmd.add_argument("--out", default=None)
        for flag, spec in flags.items():
            cmd.add_argument(f"--{flag}", **spec)
        return cmd

    add("dims", _cmd_dims,
        g={"type": int, "required": True},
        r={"type": int, "required": True},
        s={"required": True})
    add("hilbert", _cmd_hilbert,
        variant={"choices": ("even", "grassmannian"), "default": "even"},
        r={"type": int, "default": 4},
        terms={"type": int, "default": 4})
    add("theta", _cmd_theta,
        g={"type": int, "required": True},
        multidegree={"required": True})
    add("upsilon", _cmd_upsilon,
        g={"type": int, "required": True},
        levels={"required": True})
    add("xi", _cmd_xi,
        cycle={"required": True})
    add("relations", _cmd_relations,
        kind={"choices": ("cyclic", "plucker"), "required": True},
        indices={"default": "0,1,2,3"},
        split={"type": int, "default": None})
    add("expand", _cmd_expand,
        kind={"choices": ("f_partial", "f_angle", "f_r", "f_bracket"),
              "required": True},
        index={"type": int, "default": 1},
        g={"type": int, "default": 2},
        p={"type": int, "default": 3},
        prec={"type": int, "default": 3},
        deg={"type": int, "default": 4})
    add("diamond", _cmd_diamond,
        g={"type": int, "default": 2},
        multidegree={"default": None},
        p={"type": int, "default": 3},
        prec={"type": int, "default": 3},
        deg={"type": int, "default": 4})
    add("rank", _cmd_rank,
        g={"type": int, "required": True},
        r={"type": int, "required": True},
        seed={"type": int, "default": None})
    add("b0", _cmd_b0,
        g={"type": int, "required": True},
        q={"type": int, "required": True},
        trials={"type": int, "default": 100},
        seed={"type": int, "default": None})
    add("verify", _cmd_verify,
        suite={"choices": ("delta", "expansions"), "required": True},
        p={"type": int, "default": 3},
        prec={"type": int, "default": 3},
        deg={"type": int, "default": 4},
        seed={"type": int, "default": None})
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.handler(args, args.out)
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
