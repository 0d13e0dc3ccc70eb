"""Rational fan functions (cone-wise integer-linear) and the divisor product.

A function is stored as pieces (cone, linear form); forms are ambient
covectors, exact rationals allowed internally, integral on the lattice of
each cone for honest inputs.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .intlinalg import (
    dot,
    mat_mul_vec,
    rank,
    saturation_basis,
    solve,
    transpose,
    vadd,
    vscale,
)
from .polyhedra import (
    Fan,
    cone_from_inequalities,
    cone_from_rays,
    faces,
    is_cone_simplicial,
    normal_vector,
)
from .cycles import collect_hyperplanes, make_cycle, slice_cone


@dataclass(frozen=True)
class RationalFanFunction:
    ambient_dim: int
    pieces: tuple  # ((Cone, form), ...) over the maximal cones of a fan

    @property
    def fan(self):
        return Fan([c for c, _ in self.pieces], self.ambient_dim)

    def eval(self, point):
        for c, form in self.pieces:
            if c.contains(point):
                return sum(Fraction(a) * Fraction(x) for a, x in zip(form, point))
        raise ValueError("point outside the function's domain")

    def form_at(self, cone):
        """The linear form valid on a cone contained in one of the pieces."""
        for c, form in self.pieces:
            if c.contains_cone(cone):
                return form
        raise ValueError("cone not contained in any piece of the function")


def global_linear(coeffs, ambient_dim):
    """A globally linear function (one piece: all of R^n)."""
    from .intlinalg import identity

    full = cone_from_rays([], identity(ambient_dim), ambient_dim)
    return RationalFanFunction(ambient_dim, ((full, tuple(coeffs)),))


def _solve_form(gens, values, n):
    """An ambient covector taking the given values on the generators."""
    if not gens:
        return (0,) * n
    c = solve(tuple(gens), tuple(values))
    if c is None:
        raise ValueError("inconsistent values on the cone's generators")
    return tuple(c)


def from_ray_values(fan, values, lin_form=None):
    """The cone-wise linear function with the given values on the fan's rays.

    `values` maps canonical primitive ray vectors to integers; `lin_form`
    (an ambient covector) supplies the linear values taken on lineality
    directions, defaulting to zero.
    """
    if not fan.is_simplicial():
        raise ValueError("ray-value functions require a simplicial fan")
    pieces = []
    for c in fan.maximal:
        gens = list(c.rays) + list(c.lineality)
        vals = [values[r] for r in c.rays]
        for l in c.lineality:
            vals.append(dot(lin_form, l) if lin_form is not None else 0)
        pieces.append((c, _solve_form(gens, vals, fan.ambient_dim)))
    return RationalFanFunction(fan.ambient_dim, tuple(pieces))


def psi_ray(fan, r):
    """The indicator function of a ray of a unimodular fan."""
    r = tuple(r)
    if r not in fan.rays:
        raise ValueError("not a ray of the fan")
    return _psi_ray_cached(fan, r)


@lru_cache(maxsize=None)
def _psi_ray_cached(fan, r):
    if not fan.is_unimodular():
        raise ValueError("psi functions require a unimodular fan")
    values = {s: (1 if s == r else 0) for s in fan.rays}
    return from_ray_values(fan, values)


def express_in_psi(phi, fan=None):
    """Ray values of the function; reconstruction through from_ray_values
    recovers the function pointwise on a unimodular fan."""
    fan = phi.fan if fan is None else fan
    return {r: phi.eval(r) for r in fan.rays}


@dataclass(frozen=True)
class TropicalPolynomialSpec:
    forms: tuple  # linear forms; the function is their pointwise max

    def __post_init__(self):
        if not self.forms:
            raise ValueError("empty tropical polynomial")


def from_tropical_polynomial(spec, ambient_dim):
    """Complete fan of linearity regions of max(l_1, ..., l_s) plus the
    function that is linear on each region."""
    pieces = []
    seen = set()
    for i, li in enumerate(spec.forms):
        ineqs = [
            tuple(a - b for a, b in zip(li, lj))
            for j, lj in enumerate(spec.forms)
            if j != i
        ]
        c = cone_from_inequalities([], ineqs, ambient_dim)
        if c.dim == ambient_dim and c not in seen:
            seen.add(c)
            pieces.append((c, tuple(li)))
    fan = Fan([c for c, _ in pieces], ambient_dim)
    return fan, RationalFanFunction(ambient_dim, tuple(pieces))


def pullback_function(matrix, phi, source_dim):
    """Composition with an integer linear map: x -> phi(matrix @ x)."""
    cols = transpose(matrix)
    pieces = []
    for c, form in phi.pieces:
        eqs = [mat_mul_vec(cols, e) for e in c.span_eqs]
        ineqs = [mat_mul_vec(cols, f) for f in c.facets]
        pre = cone_from_inequalities(eqs, ineqs, source_dim)
        if pre.dim >= 0 and (pre.rays or pre.lineality or pre.dim == 0):
            pieces.append((pre, tuple(mat_mul_vec(cols, form))))
    return RationalFanFunction(source_dim, tuple(pieces))


def add_functions(a, b):
    """Pointwise sum on the common refinement of the two fans."""
    hs = collect_hyperplanes([c for c, _ in a.pieces] + [c for c, _ in b.pieces])
    pieces = []
    for c, form in a.pieces:
        for piece in slice_cone(c, hs):
            other = b.form_at(piece)
            pieces.append((piece, tuple(Fraction(x) + Fraction(y) for x, y in zip(form, other))))
    return RationalFanFunction(a.ambient_dim, tuple(pieces))


# ---------------------------------------------------------------------------
# the divisor product phi . X


def _refine_cycle_by(phi, cycle):
    """Slice the cycle's weighted cones by the function's hyperplanes and
    attach the valid linear form to each piece.

    The fast path (no slicing) applies only when every weighted cone sits
    inside a single linearity region, so the pieces always form a complex.
    """
    direct = []
    for sigma, w in cycle.weighted:
        form = next((f for c, f in phi.pieces if c.contains_cone(sigma)), None)
        if form is None:
            break
        direct.append((sigma, w, form))
    else:
        return direct
    refined = []
    hs = collect_hyperplanes([c for c, _ in phi.pieces])
    for sigma, w in cycle.weighted:
        for piece in slice_cone(sigma, hs):
            refined.append((piece, w, phi.form_at(piece)))
    return refined


def divisor(phi, cycle):
    """The intersection product of a rational fan function with a cycle.

    Weight formula at each codimension-1 cone tau:
        sum_sigma w(sigma) phi_sigma(v_{sigma/tau})
        - phi_tau(sum_sigma w(sigma) v_{sigma/tau}).
    """
    if cycle.dim == 0:
        raise ValueError("cannot intersect a rational function with a 0-cycle")
    if cycle.is_zero():
        return make_cycle([], cycle.ambient_dim, cycle.dim - 1)
    refined = _refine_cycle_by(phi, cycle)
    d = cycle.dim
    adjacency = {}
    for sigma, w, form in refined:
        for f in faces(sigma):
            if f.dim == d - 1:
                adjacency.setdefault(f, []).append((sigma, w, form))
    out = []
    for tau, adj in adjacency.items():
        total = Fraction(0)
        defect = (0,) * cycle.ambient_dim
        for sigma, w, form in adj:
            v = normal_vector(sigma, tau)
            total += w * sum(Fraction(a) * x for a, x in zip(form, v))
            defect = vadd(defect, vscale(w, v))
        tau_form = adj[0][2]
        total -= sum(Fraction(a) * x for a, x in zip(tau_form, defect))
        if total != 0:
            assert total.denominator == 1, "non-integral divisor weight"
            out.append((tau, int(total)))
    return make_cycle(out, cycle.ambient_dim, d - 1)
