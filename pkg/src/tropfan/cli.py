"""Batch JSON command line interface.

Exit codes: 0 success, 1 input or usage error, 2 violated mathematical
invariant (unbalanced cycle, discontinuous piecewise polynomial, ...).
Output is canonical JSON, byte-identical across runs on equal inputs.
"""

import argparse
import json
import sys

from . import serialize as ser
from .polyhedra import Fan, cone_from_rays, fan_validate, unimodular_refinement
from .cycles import check_balancing, equals_mod_refinement, push_forward, star_cycle
from .functions import divisor
from .pwpoly import (
    PiecewisePolynomial,
    decompose,
    invert_duality,
    katz_payne,
    pp_intersect,
    to_products,
    validate_pp,
)
from .matroid import (
    bergman_fan,
    cut_subcycle,
    rank_cut_functions,
    verify_codim1_duality,
)


class InvariantError(Exception):
    """A mathematical invariant failed; carries the result payload."""

    def __init__(self, payload):
        self.payload = payload


def _load(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as e:
        raise ser.SchemaError(f"cannot read {path}: {e.strerror}") from e
    except json.JSONDecodeError as e:
        raise ser.SchemaError(f"{path} is not valid JSON: {e}") from e


def _violation_json(v):
    return {"kind": getattr(v, "kind", "balancing"), "detail": str(v)}


def _maybe_refine(fan, args):
    if fan.is_unimodular():
        return fan
    if getattr(args, "refine", None) == "unimodular":
        return unimodular_refinement(fan)
    raise ser.SchemaError(
        "fan is not unimodular; rerun with --refine unimodular to refine it"
    )


def _refit_pp(f, fan):
    """Transfer the pieces of f onto the cones of a refinement of its fan."""
    return PiecewisePolynomial(
        f.ambient_dim, f.degree, tuple((c, f.piece_at(c)) for c in fan.maximal)
    )


def _weights_block(cycle):
    out = {}
    for c, w in cycle.weighted:
        if not c.rays and not c.lineality:
            key = "origin"
        else:
            key = json.dumps([list(r) for r in c.rays + c.lineality])
        out[key] = str(w)
    return out


# ---------------------------------------------------------------------------
# subcommand handlers; each returns the output document


def cmd_validate_fan(args):
    fan = ser.fan_from_json(_load(args.fan))
    v = fan_validate(fan)
    doc = {
        "valid": v is None,
        "certificates": {"fan_structure": "ok" if v is None else str(v)},
    }
    if v is not None:
        raise InvariantError(doc)
    return doc


def cmd_balance(args):
    cycle = ser.cycle_from_json(_load(args.cycle))
    v = check_balancing(cycle)
    doc = {
        "balanced": v is None,
        "certificates": {
            "balancing": "ok"
            if v is None
            else {
                "cone_rays": [list(r) for r in v.tau.rays],
                "defect": [str(x) for x in v.defect],
            }
        },
    }
    if v is not None:
        raise InvariantError(doc)
    return doc


def cmd_divisor(args):
    phi = ser.function_from_json(_load(args.function))
    cycle = ser.cycle_from_json(_load(args.cycle))
    out = divisor(phi, cycle)
    bal = check_balancing(out)
    return {
        "cycle": ser.cycle_to_json(out),
        "certificates": {"balancing": "ok" if bal is None else str(bal)},
    }


def cmd_pp_validate(args):
    f = ser.pp_from_json(_load(args.pp))
    v = validate_pp(f)
    doc = {
        "valid": v is None,
        "certificates": {
            "continuity": "ok" if v is None else {"kind": v.kind, "detail": v.detail}
        },
    }
    if v is not None:
        raise InvariantError(doc)
    return doc


def cmd_pp_intersect(args):
    f = ser.pp_from_json(_load(args.pp))
    cycle = ser.cycle_from_json(_load(args.cycle))
    out = pp_intersect(f, cycle)
    bal = check_balancing(out)
    doc = {
        "cycle": ser.cycle_to_json(out),
        "weights": _weights_block(out),
        "certificates": {"balancing": "ok" if bal is None else str(bal)},
    }
    if args.verbose:
        from .pwpoly import _refined_weighted_structure

        _, f_ref, fan = _refined_weighted_structure(f, cycle)
        rep = decompose(f_ref, fan)
        doc["audit"] = {
            "psi_representation": ser.psi_representation_to_json(rep),
            "product_form": ser.product_form_to_json(to_products(rep, fan)),
        }
    return doc


def cmd_katz_payne(args):
    f = ser.pp_from_json(_load(args.pp))
    fan = ser.fan_from_json(_load(args.fan)) if args.fan else f.fan
    fan = _maybe_refine(fan, args)
    out = katz_payne(f, fan)
    bal = check_balancing(out)
    return {
        "cycle": ser.cycle_to_json(out),
        "weights": _weights_block(out),
        "certificates": {"balancing": "ok" if bal is None else str(bal)},
    }


def cmd_decompose(args):
    f = ser.pp_from_json(_load(args.pp))
    fan = ser.fan_from_json(_load(args.fan)) if args.fan else f.fan
    fan = _maybe_refine(fan, args)
    if fan is not f.fan:
        f = _refit_pp(f, fan)
    rep = decompose(f, fan)
    doc = {
        "psi_representation": ser.psi_representation_to_json(rep),
        "certificates": {"residual": "zero"},
    }
    if args.verbose:
        doc["audit"] = {"product_form": ser.product_form_to_json(to_products(rep, fan))}
    return doc


def cmd_invert(args):
    fan = ser.fan_from_json(_load(args.fan))
    fan = _maybe_refine(fan, args)
    cycle = ser.cycle_from_json(_load(args.cycle))
    f = invert_duality(fan, cycle)
    back = katz_payne(f, fan)
    if not equals_mod_refinement(back, cycle):
        raise InvariantError(
            {"error": "recovered weights disagree with the input cycle"}
        )
    return {
        "pp": ser.pp_to_json(f),
        "certificates": {"round_trip": "verified"},
    }


def cmd_bergman(args):
    m = ser.matroid_from_json(_load(args.matroid))
    cycle = bergman_fan(m)
    bal = check_balancing(cycle)
    return {
        "cycle": ser.cycle_to_json(cycle),
        "certificates": {"balancing": "ok" if bal is None else str(bal)},
    }


def cmd_rank_cut(args):
    m = ser.matroid_from_json(_load(args.matroid))
    nmat = ser.matroid_from_json(_load(args.sub))
    fns = rank_cut_functions(m, nmat)
    return {
        "functions": [ser.function_to_json(phi) for phi in fns],
        "certificates": {"count": len(fns)},
    }


def cmd_cut(args):
    m = ser.matroid_from_json(_load(args.matroid))
    cycle = ser.cycle_from_json(_load(args.cycle))
    f = cut_subcycle(m, cycle)
    return {
        "pp": ser.pp_to_json(f),
        "certificates": {"residual": "zero", "reproduces_input": "verified"},
    }


def cmd_pushforward(args):
    matrix = ser.matrix_from_json(_load(args.matrix))
    cycle = ser.cycle_from_json(_load(args.cycle))
    out = push_forward(matrix, cycle)
    bal = check_balancing(out)
    return {
        "cycle": ser.cycle_to_json(out),
        "certificates": {"balancing": "ok" if bal is None else str(bal)},
    }


def cmd_verify_duality(args):
    m = ser.matroid_from_json(_load(args.matroid))
    phi = ser.function_from_json(_load(args.function))
    cert = verify_codim1_duality(m, phi)
    doc = {
        "divisor_is_zero": cert.divisor_is_zero,
        "criterion_holds": cert.criterion_holds,
        "certificates": {
            "witness_linear_form": [str(x) for x in cert.witness],
            "nonzero_divisor": None
            if cert.divisor_is_zero
            else ser.cycle_to_json(cert.nonzero_divisor),
        },
    }
    if cert.divisor_is_zero and not cert.criterion_holds:
        raise InvariantError(doc)
    return doc


def cmd_star(args):
    cycle = ser.cycle_from_json(_load(args.cycle))
    cj = _load(args.cone)
    n = cycle.ambient_dim
    tau = cone_from_rays(
        [tuple(r) for r in cj.get("rays", [])],
        [tuple(l) for l in cj.get("lineality", [])],
        n,
    )
    out = star_cycle(cycle, tau)
    return {"cycle": ser.cycle_to_json(out), "certificates": {}}


# ---------------------------------------------------------------------------


def _build_parser():
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--out", help="output file (default: stdout)")
    shared.add_argument("--format", choices=["json"], default="json")
    shared.add_argument("--verbose", action="store_true")
    shared.add_argument("--refine", choices=["unimodular"])
    p = argparse.ArgumentParser(prog="tropfan", parents=[shared])
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, **arguments):
        sp = sub.add_parser(name, parents=[shared])
        for arg, req in arguments.items():
            sp.add_argument("--" + arg.replace("_", "-"), required=req)
        sp.set_defaults(handler=fn)

    add("validate-fan", cmd_validate_fan, fan=True)
    add("balance", cmd_balance, cycle=True)
    add("divisor", cmd_divisor, function=True, cycle=True)
    add("pp-validate", cmd_pp_validate, pp=True)
    add("pp-intersect", cmd_pp_intersect, pp=True, cycle=True)
    add("katz-payne", cmd_katz_payne, pp=True, fan=False)
    add("decompose", cmd_decompose, pp=True, fan=False)
    add("invert", cmd_invert, fan=True, cycle=True)
    add("bergman", cmd_bergman, matroid=True)
    add("rank-cut", cmd_rank_cut, matroid=True, sub=True)
    add("cut", cmd_cut, matroid=True, cycle=True)
    add("pushforward", cmd_pushforward, matrix=True, cycle=True)
    add("verify-duality", cmd_verify_duality, matroid=True, function=True)
    add("star", cmd_star, cycle=True, cone=True)
    return p


def _emit(doc, args):
    text = ser.dumps(doc)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        doc = args.handler(args)
    except InvariantError as e:
        _emit(e.payload, args)
        return 2
    except (ser.SchemaError, ValueError) as e:
        _emit({"error": str(e)}, args)
        return 1
    except RuntimeError as e:
        _emit({"error": str(e), "kind": "invariant"}, args)
        return 2
    _emit(doc, args)
    return 0


if __name__ == "__main__":
    sys.exit(main())
