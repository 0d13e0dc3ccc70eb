"""JSON encodings for fans, cycles, functions, piecewise polynomials and
matroids.

All weights and coefficients are decimal strings so nothing overflows at a
tool boundary; rational covector entries use "p/q" strings.  Serialization
is canonical: dumps of equal objects are byte-identical.
"""

import json
from fractions import Fraction

from .polyhedra import Cone, Fan, cone_from_rays
from .cycles import TropicalCycle, make_cycle
from .functions import RationalFanFunction, TropicalPolynomialSpec, from_ray_values
from .polynomials import HomPolynomial
from .pwpoly import PiecewisePolynomial, PsiRepresentation, ProductForm
from .matroid import Matroid, make_matroid


class SchemaError(ValueError):
    pass


def dumps(obj):
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def _num(x):
    f = Fraction(x)
    if f.denominator == 1:
        return str(f.numerator)
    return f"{f.numerator}/{f.denominator}"


def _parse_num(s):
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as e:
        raise SchemaError(f"bad number {s!r}") from e


def _parse_int(s):
    f = _parse_num(s)
    if f.denominator != 1:
        raise SchemaError(f"expected an integer, got {s!r}")
    return int(f)


# ---------------------------------------------------------------------------
# fans


def _common_lineality(cones):
    lins = {c.lineality for c in cones}
    if len(lins) > 1:
        raise SchemaError("fan has cones with different lineality spaces")
    return next(iter(lins)) if lins else ()


def fan_to_json(fan):
    lin = _common_lineality(fan.maximal)
    rays = list(fan.rays)
    index = {r: i for i, r in enumerate(rays)}
    return {
        "ambient_dim": fan.ambient_dim,
        "rays": [list(r) for r in rays],
        "lineality": [list(l) for l in lin],
        "cones": [[index[r] for r in c.rays] for c in fan.maximal],
    }


def _cones_from_json(d):
    """(ambient_dim, cones in the order listed in the document)."""
    try:
        n = d["ambient_dim"]
        rays = [tuple(_as_int_vec(r, n)) for r in d["rays"]]
        lin = [tuple(_as_int_vec(l, n)) for l in d.get("lineality", [])]
        cones = d["cones"]
    except (KeyError, TypeError) as e:
        raise SchemaError(f"malformed fan: {e}") from e
    maximal = []
    for idxs in cones:
        try:
            cr = [rays[i] for i in idxs]
        except (IndexError, TypeError) as e:
            raise SchemaError(f"bad ray index in cone {idxs}") from e
        maximal.append(cone_from_rays(cr, lin, n))
    return n, maximal


def fan_from_json(d):
    n, maximal = _cones_from_json(d)
    return Fan(maximal, n)


def _as_int_vec(v, n):
    if not isinstance(v, list) or len(v) != n:
        raise SchemaError(f"expected a length-{n} integer vector, got {v!r}")
    out = []
    for x in v:
        if isinstance(x, bool) or not isinstance(x, int):
            raise SchemaError(f"non-integer vector entry {x!r}")
        out.append(x)
    return out


# ---------------------------------------------------------------------------
# cycles


def cycle_to_json(cycle):
    fan = cycle.fan
    fj = fan_to_json(fan)
    weights = {}
    for i, c in enumerate(fan.maximal):
        w = cycle.weight_of(c)
        if w:
            weights[str(i)] = _num(w)
    fj["weights"] = weights
    fj["dim"] = cycle.dim
    return fj


def cycle_from_json(d):
    n, cones = _cones_from_json(d)
    try:
        dim = d["dim"]
        weights = d["weights"]
    except KeyError as e:
        raise SchemaError(f"cycle is missing {e}") from e
    weighted = []
    for k, w in weights.items():
        i = _parse_int(k)
        if not 0 <= i < len(cones):
            raise SchemaError(f"weight index {k} out of range")
        weighted.append((cones[i], _parse_int(w)))
    return make_cycle(weighted, n, dim)


# ---------------------------------------------------------------------------
# rational fan functions


def function_to_json(phi):
    fan = phi.fan
    fj = fan_to_json(fan)
    parts = {}
    for i, c in enumerate(fan.maximal):
        parts[str(i)] = [_num(x) for x in phi.form_at(c)]
    fj["linear_parts"] = parts
    return fj


def function_from_json(d):
    if "max_of" in d:
        n = d["ambient_dim"]
        forms = tuple(tuple(_as_int_vec(f, n)) for f in d["max_of"])
        from .functions import from_tropical_polynomial

        _, phi = from_tropical_polynomial(TropicalPolynomialSpec(forms), n)
        return phi
    n, cones = _cones_from_json(d)
    if "ray_values" in d:
        fan = Fan(cones, n)
        values = {
            tuple(_as_int_vec(json.loads(k), n)): _parse_int(v)
            for k, v in d["ray_values"].items()
        }
        return from_ray_values(fan, values)
    try:
        parts = d["linear_parts"]
    except KeyError as e:
        raise SchemaError("function needs linear_parts, ray_values or max_of") from e
    pieces = []
    for i, c in enumerate(cones):
        form = parts.get(str(i))
        if form is None:
            raise SchemaError(f"missing linear part for cone {i}")
        pieces.append((c, tuple(_parse_num(x) for x in form)))
    return RationalFanFunction(n, tuple(pieces))


# ---------------------------------------------------------------------------
# polynomials and piecewise polynomials


def poly_to_json(p):
    return {
        "degree": p.degree,
        "terms": [
            {"exps": list(e), "coeff": _num(c)} for e, c in p.terms
        ],
    }


def poly_from_json(d, nvars):
    try:
        deg = d["degree"]
        terms = d["terms"]
    except (KeyError, TypeError) as e:
        raise SchemaError(f"malformed polynomial: {e}") from e
    td = {}
    for t in terms:
        exps = tuple(_as_int_vec(t["exps"], nvars))
        td[exps] = td.get(exps, 0) + _parse_int(t["coeff"])
    try:
        return HomPolynomial.from_dict(nvars, deg, td)
    except ValueError as e:
        raise SchemaError(str(e)) from e


def pp_to_json(f):
    fan = f.fan
    fj = fan_to_json(fan)
    pieces = {}
    for i, c in enumerate(fan.maximal):
        pieces[str(i)] = poly_to_json(f.piece_at(c))
    fj["pieces"] = pieces
    fj["degree"] = f.degree
    return fj


def pp_from_json(d):
    n, cones = _cones_from_json(d)
    try:
        deg = d["degree"]
        pieces = d["pieces"]
    except KeyError as e:
        raise SchemaError(f"piecewise polynomial is missing {e}") from e
    out = []
    for i, c in enumerate(cones):
        pj = pieces.get(str(i))
        if pj is None:
            raise SchemaError(f"missing piece for cone {i}")
        out.append((c, poly_from_json(pj, n)))
    return PiecewisePolynomial(n, deg, tuple(out))


def psi_representation_to_json(rep):
    return {
        "degree": rep.degree,
        "terms": [
            {
                "rays": [list(r) for r in tau.rays],
                "lineality": [list(l) for l in tau.lineality],
                "coefficient": poly_to_json(a),
            }
            for tau, a in rep.terms
        ],
    }


def product_form_to_json(pf):
    return {
        "degree": pf.degree,
        "summands": [
            {
                "coeff": _num(c),
                "factors": [function_to_json(fn) for fn in fns],
            }
            for c, fns in pf.summands
        ],
    }


# ---------------------------------------------------------------------------
# matroids


def matroid_to_json(m):
    return {"n": m.n, "bases": [list(b) for b in m.bases]}


def matroid_from_json(d):
    try:
        return make_matroid(d["n"], [tuple(b) for b in d["bases"]])
    except (KeyError, TypeError, ValueError) as e:
        raise SchemaError(f"malformed matroid: {e}") from e


def matrix_from_json(d):
    if not isinstance(d, list) or not d:
        raise SchemaError("matrix must be a nonempty list of rows")
    width = len(d[0])
    return tuple(tuple(_as_int_vec(row, width)) for row in d)
