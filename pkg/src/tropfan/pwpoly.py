"""Piecewise polynomials on fans and their intersection with cycles.

Implements the Psi-basis decomposition, the product representation, the
local intersection product, the Katz-Payne weight formula on complete
unimodular fans and its inverse (Poincare duality on R^n).
"""

from dataclasses import dataclass
from fractions import Fraction

from .intlinalg import (
    complete_to_unimodular,
    dot,
    inverse,
    saturation_basis,
    solve_int,
    transpose,
)
from .polynomials import HomPolynomial
from .polyhedra import Fan, cone_from_rays, faces, is_face
from .cycles import (
    TropicalCycle,
    check_balancing,
    collect_hyperplanes,
    cycle_add,
    cycle_scale,
    make_cycle,
    slice_cone,
    zero_cycle,
)
from .functions import RationalFanFunction, divisor, global_linear, psi_ray


@dataclass(frozen=True)
class PiecewisePolynomial:
    ambient_dim: int
    degree: int
    pieces: tuple  # ((Cone, HomPolynomial), ...) over maximal cones

    @property
    def fan(self):
        return Fan([c for c, _ in self.pieces], self.ambient_dim)

    def eval(self, point):
        for c, p in self.pieces:
            if c.contains(point):
                return p.eval(point)
        raise ValueError("point outside the piecewise polynomial's domain")

    def piece_at(self, cone):
        for c, p in self.pieces:
            if c.contains_cone(cone):
                return p
        raise ValueError("cone not contained in any piece")

    def is_zero(self):
        return all(
            _restricted_zero(c, p) for c, p in self.pieces
        )


def _restricted_zero(cone, poly):
    """Does the polynomial vanish identically on the cone's span?"""
    basis = saturation_basis(cone.generators)
    if not basis:
        return True
    return poly.restrict_to_span(basis).is_zero()


def _pieces_agree_on(cone, p, q):
    basis = saturation_basis(cone.generators)
    if not basis:
        return True
    return (p - q).restrict_to_span(basis).is_zero()


@dataclass(frozen=True)
class PPViolation:
    kind: str
    detail: str


def validate_pp(f):
    """Homogeneity, integrality and face-consistency of all pieces."""
    from .polyhedra import cone_intersection

    for c, p in f.pieces:
        if not p.is_zero() and p.degree != f.degree:
            return PPViolation("degree mismatch", f"piece on cone with rays {c.rays}")
        if p.nvars != f.ambient_dim:
            return PPViolation("arity mismatch", f"piece on cone with rays {c.rays}")
    pcs = list(f.pieces)
    for i in range(len(pcs)):
        for j in range(i + 1, len(pcs)):
            ci, pi = pcs[i]
            cj, pj = pcs[j]
            inter = cone_intersection(ci, cj)
            if inter.dim >= 0 and not _pieces_agree_on(inter, pi, pj):
                return PPViolation(
                    "discontinuity", f"pieces {i} and {j} disagree on their common face"
                )
    return None


def pp_from_function(phi):
    """A rational fan function as a degree-1 piecewise polynomial."""
    pieces = []
    for c, form in phi.pieces:
        coeffs = []
        for a in form:
            fa = Fraction(a)
            if fa.denominator != 1:
                raise ValueError("function is not integral in ambient coordinates")
            coeffs.append(int(fa))
        pieces.append((c, HomPolynomial.from_linear_form(tuple(coeffs))))
    return PiecewisePolynomial(phi.ambient_dim, 1, tuple(pieces))


def _combine(f, g, op, degree):
    """Pointwise combination on the common refinement of the two domains
    (the pairwise intersections of pieces; the common support when the two
    domains differ)."""
    from .polyhedra import cone_intersection

    inters = []
    top = -1
    for c1, p in f.pieces:
        for c2, q in g.pieces:
            inter = cone_intersection(c1, c2)
            top = max(top, inter.dim)
            inters.append((inter, p, q))
    out = []
    seen = set()
    for inter, p, q in inters:
        if inter.dim == top and inter not in seen:
            seen.add(inter)
            out.append((inter, op(p, q)))
    return PiecewisePolynomial(f.ambient_dim, degree, tuple(out))


def pp_add(f, g):
    if f.degree != g.degree:
        raise ValueError("degree mismatch in piecewise polynomial addition")
    return _combine(f, g, lambda p, q: p + q, f.degree)


def pp_mul(f, g):
    return _combine(f, g, lambda p, q: p * q, f.degree + g.degree)


def pp_scale(k, f):
    return PiecewisePolynomial(
        f.ambient_dim, f.degree, tuple((c, p.scale(k)) for c, p in f.pieces)
    )


def pp_product_of_functions(fns, fan=None):
    """The piecewise polynomial given by a product of rational functions."""
    f = pp_from_function(fns[0])
    for phi in fns[1:]:
        f = pp_mul(f, pp_from_function(phi))
    return f


def psi_cone(fan, tau):
    """Psi_tau: the product of the ray indicator functions of tau's rays."""
    if tau not in fan.cones:
        raise ValueError("cone not in fan")
    if not tau.rays:
        raise ValueError("psi_cone requires a cone with at least one ray")
    fns = [psi_ray(fan, r) for r in tau.rays]
    return pp_product_of_functions(fns)


# ---------------------------------------------------------------------------
# Psi decomposition


@dataclass(frozen=True)
class PsiRepresentation:
    ambient_dim: int
    degree: int
    terms: tuple  # ((Cone tau, HomPolynomial a_tau), ...)


@dataclass(frozen=True)
class ProductForm:
    ambient_dim: int
    degree: int
    summands: tuple  # ((int coeff, (RationalFanFunction, ...)), ...)


def decompose(f, fan=None):
    """Represent f as a sum over cones tau of a_tau * Psi_tau.

    The fan must be unimodular; cones are processed by increasing
    dimension, extracting at each cone the exactly divisible quotient of
    the residual in the cone's dual-basis coordinates.
    """
    fan = f.fan if fan is None else fan
    if not fan.is_unimodular():
        raise ValueError("decomposition requires a unimodular fan")
    n = f.ambient_dim
    k = f.degree
    residual = {c: p for c, p in f.pieces}
    maximal = list(residual)
    psi_forms = {}  # ray -> RationalFanFunction
    for r in fan.rays:
        psi_forms[r] = psi_ray(fan, r)
    terms = []
    cones = sorted(
        (c for c in fan.cones if 1 <= c.dim - len(c.lineality) and c.dim - len(c.lineality) <= k),
        key=lambda c: (c.dim, c.rays, c.lineality),
    )
    for tau in cones:
        p = len(tau.rays)
        sigma0 = next(s for s in maximal if s.contains_cone(tau))
        gens = tuple(tau.rays) + tuple(tau.lineality)
        g = residual[sigma0].restrict_to_span(gens)
        if g.is_zero():
            continue
        # divide by t_1 * ... * t_p in the cone's own coordinates
        t_mono = HomPolynomial.from_dict(
            len(gens), p, {tuple(1 if i < p else 0 for i in range(len(gens))): 1}
        )
        quotient = g.divide_exact(t_mono)
        # lift the quotient to an ambient polynomial through the dual basis
        full = complete_to_unimodular(gens)
        dual = inverse(transpose(full))
        dual_forms = [tuple(int(x) for x in row) for row in dual]
        a_tau = quotient.compose_linear(dual_forms[: len(gens)])
        terms.append((tau, a_tau))
        # subtract a_tau * Psi_tau from the residual, cone by cone
        for sigma in maximal:
            if not sigma.contains_cone(tau):
                continue
            prod = a_tau
            for r in tau.rays:
                form = psi_forms[r].form_at(sigma)
                coeffs = tuple(int(Fraction(x)) for x in form)
                prod = prod * HomPolynomial.from_linear_form(coeffs)
            residual[sigma] = residual[sigma] - prod
    for sigma, rem in residual.items():
        if not _restricted_zero(sigma, rem):
            raise RuntimeError(
                "exactness sequence violated: nonzero residual after decomposition"
            )
    return PsiRepresentation(n, k, tuple(terms))


def to_products(rep, fan):
    """Expand a Psi representation into sums of products of rational
    functions: each coefficient monomial becomes coordinate linear forms,
    each Psi_tau becomes the ray indicator functions of tau."""
    n = rep.ambient_dim
    psi_cache = {}
    summands = []
    for tau, a in rep.terms:
        psi_fns = []
        for r in tau.rays:
            if r not in psi_cache:
                psi_cache[r] = psi_ray(fan, r)
            psi_fns.append(psi_cache[r])
        if a.degree == 0:
            for exps, coeff in a.terms or (((0,) * n, 0),):
                if coeff:
                    summands.append((coeff, tuple(psi_fns)))
            continue
        for exps, coeff in a.terms:
            fns = []
            for i, e in enumerate(exps):
                coord = tuple(1 if j == i else 0 for j in range(n))
                fns.extend([global_linear(coord, n)] * e)
            summands.append((coeff, tuple(fns) + tuple(psi_fns)))
    return ProductForm(n, rep.degree, tuple(summands))


# ---------------------------------------------------------------------------
# intersection of piecewise polynomials with cycles


def _refined_weighted_structure(f, cycle):
    """A unimodular weighted fan structure of the cycle on which f is
    cone-wise polynomial; returns (weighted list, pp on that structure)."""
    from .polyhedra import unimodular_refinement

    from .intlinalg import identity

    f_cones = [c for c, _ in f.pieces]
    cyc_cones = [c for c, _ in cycle.weighted]
    hs = collect_hyperplanes(f_cones + cyc_cones)
    if any(c.lineality for c in f_cones + cyc_cones):
        # pointed pieces; psi decompositions vanish on lineality spaces
        hs = tuple(sorted(set(hs) | set(identity(cycle.ambient_dim))))
    sliced = []
    for sigma, w in cycle.weighted:
        for piece in slice_cone(sigma, hs):
            sliced.append((piece, w))
    fan = unimodular_refinement(Fan([c for c, _ in sliced], cycle.ambient_dim))
    weighted = []
    pieces = []
    for c in fan.maximal:
        ip = c.relative_interior_point()
        w = next(w for s, w in sliced if s.contains(ip))
        weighted.append((c, w))
        pieces.append((c, f.piece_at(c)))
    f_ref = PiecewisePolynomial(f.ambient_dim, f.degree, tuple(pieces))
    return weighted, f_ref, fan


def pp_intersect(f, cycle):
    """The intersection product f . X via a product representation."""
    if f.degree < 1:
        raise ValueError("intersection requires degree at least 1")
    if f.degree > cycle.dim:
        raise ValueError("degree exceeds the cycle's dimension")
    if cycle.is_zero():
        return zero_cycle(cycle.ambient_dim, cycle.dim - f.degree)
    weighted, f_ref, fan = _refined_weighted_structure(f, cycle)
    x_ref = make_cycle(weighted, cycle.ambient_dim, cycle.dim)
    rep = decompose(f_ref, fan)
    prods = to_products(rep, fan)
    total = zero_cycle(cycle.ambient_dim, cycle.dim - f.degree)
    for coeff, fns in prods.summands:
        cur = x_ref
        for phi in fns:
            cur = divisor(phi, cur)
        total = cycle_add(total, cycle_scale(coeff, cur))
    return total


def germ_intersect(f, star):
    """Intersect the germ of a piecewise polynomial with a star cycle at
    the origin (constants already dropped)."""
    return pp_intersect(f, star)


def complete_refinement(cones, n):
    """A complete unimodular fan of R^n refining the given cones: slice the
    full space by every facet and span hyperplane, then refine."""
    from .intlinalg import identity
    from .polyhedra import unimodular_refinement

    full = cone_from_rays([], identity(n), n)
    # the coordinate hyperplanes keep every piece pointed
    hs = tuple(sorted(set(collect_hyperplanes(cones)) | set(identity(n))))
    pieces = slice_cone(full, hs)
    return unimodular_refinement(Fan(pieces, n))


def pp_pullback(matrix, f, source_dim):
    """Composition with an integer linear map: x -> f(matrix @ x)."""
    from .intlinalg import mat_mul_vec
    from .polyhedra import cone_from_inequalities

    cols = transpose(matrix)
    pieces = []
    for c, p in f.pieces:
        eqs = [mat_mul_vec(cols, e) for e in c.span_eqs]
        ineqs = [mat_mul_vec(cols, h) for h in c.facets]
        pre = cone_from_inequalities(eqs, ineqs, source_dim)
        if pre.dim >= 0:
            pieces.append((pre, p.compose_linear([tuple(r) for r in matrix])))
    return PiecewisePolynomial(source_dim, f.degree, tuple(pieces))


# ---------------------------------------------------------------------------
# Katz-Payne weights on complete unimodular fans


def _poly_on(f, sigma):
    """The polynomial agreeing with f on the cone sigma.

    f may be stored on a refinement; in that case the full-dimensional
    pieces inside sigma must carry one and the same polynomial."""
    for c, p in f.pieces:
        if c.contains_cone(sigma):
            return p
    inside = [p for c, p in f.pieces if c.dim == sigma.dim and sigma.contains_cone(c)]
    if not inside:
        raise ValueError("cone not covered by the piecewise polynomial")
    for q in inside[1:]:
        if q != inside[0]:
            raise ValueError("not polynomial on the given cone")
    return inside[0]


def _is_complete(fan):
    n = fan.ambient_dim
    top = [c for c in fan.maximal if c.dim == n]
    if len(top) != len(fan.maximal):
        return False
    count = {}
    for sigma in top:
        for tau in faces(sigma):
            if tau.dim == n - 1:
                count[tau] = count.get(tau, 0) + 1
    return all(v == 2 for v in count.values()) and bool(top)


def _generic_points(n):
    primes = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]
    yield tuple(Fraction(p) for p in primes[:n])
    yield tuple(Fraction(p * p, 3) for p in primes[1 : n + 1])
    yield tuple(Fraction(p, q) for p, q in zip(primes[2 : n + 2], primes[:n]))
    import random

    rng = random.Random(20240811)
    while True:
        yield tuple(
            Fraction(rng.randint(10**3, 10**6), rng.randint(2, 97)) for _ in range(n)
        )


def katz_payne(f, fan=None):
    """Minkowski weights of f on a complete unimodular fan.

    For each codimension-k cone tau the rational-function sum of the pieces
    of the adjacent maximal cones, weighted by the inverse dual-basis
    products, is a constant integer; evaluation at two independent generic
    rational points certifies constancy.
    """
    fan = f.fan if fan is None else fan
    n = f.ambient_dim
    k = f.degree
    if not _is_complete(fan):
        raise ValueError("Katz-Payne weights require a complete fan")
    if not fan.is_unimodular():
        raise ValueError("Katz-Payne weights require a unimodular fan")
    top = fan.cones_of_dim(n)
    duals = {}
    for sigma in top:
        duals[sigma] = inverse(transpose(sigma.rays))
    piece_of = {sigma: _poly_on(f, sigma) for sigma in top}

    def weight_at(tau, point):
        total = Fraction(0)
        for sigma in top:
            if not is_face(tau, sigma):
                continue
            denom = Fraction(1)
            dual = duals[sigma]
            for i, r in enumerate(sigma.rays):
                if r not in tau.rays:
                    val = sum(Fraction(a) * x for a, x in zip(dual[i], point))
                    if val == 0:
                        return None
                    denom *= val
            total += piece_of[sigma].eval(point) / denom
        return total

    out = []
    for tau in fan.cones_of_dim(n - k):
        vals = []
        gen = _generic_points(n)
        while len(vals) < 2:
            pt = next(gen)
            v = weight_at(tau, pt)
            if v is not None:
                vals.append(v)
        if vals[0] != vals[1] or vals[0].denominator != 1:
            raise RuntimeError("Katz-Payne sum is not a constant integer")
        w = int(vals[0])
        if w != 0:
            out.append((tau, w))
    return make_cycle(out, n, n - k)


def is_lpp_on_complete_fan(f, fan=None):
    """Kernel test: f lies in the subgroup generated by linear functions
    iff its Minkowski weight vanishes."""
    return katz_payne(f, fan).is_zero()


# ---------------------------------------------------------------------------
# duality inverse on R^n


def _psi_monomial_generators(fan, k):
    """Products Psi_{s_1} ... Psi_{s_k} over multisets of rays spanning a
    cone of the fan, as piecewise polynomials."""
    from itertools import combinations_with_replacement

    n = fan.ambient_dim
    ray_list = fan.rays
    psi = {r: psi_ray(fan, r) for r in ray_list}
    cones_by_rayset = {frozenset(c.rays): c for c in fan.cones}
    gens = []
    for multiset in combinations_with_replacement(ray_list, k):
        support = frozenset(multiset)
        if support not in cones_by_rayset:
            continue
        fns = [psi[r] for r in multiset]
        gens.append((multiset, pp_product_of_functions(fns)))
    return gens


def invert_duality(fan, cycle):
    """A piecewise polynomial on the complete unimodular fan whose
    Katz-Payne weight equals the given Minkowski weight."""
    n = fan.ambient_dim
    if cycle.is_zero():
        zero = HomPolynomial.zero(n, max(n - cycle.dim, 1))
        return PiecewisePolynomial(
            n, max(n - cycle.dim, 1), tuple((c, zero) for c in fan.maximal)
        )
    k = n - cycle.dim
    if k < 1:
        raise ValueError("codimension must be at least 1")
    gens = _psi_monomial_generators(fan, k)
    taus = fan.cones_of_dim(n - k)
    target = []
    for tau in taus:
        ip = tau.relative_interior_point()
        target.append(cycle.weight_at(ip))
    columns = []
    for _multiset, g in gens:
        w = katz_payne(g, fan)
        columns.append([w.weight_of(tau) for tau in taus])
    rows = [tuple(col[i] for col in columns) for i in range(len(taus))]
    sol = solve_int(rows, tuple(target))
    if sol is None:
        raise RuntimeError(
            "no integral solution: contradicts surjectivity of the weight map"
        )
    result = None
    for lam, (_m, g) in zip(sol, gens):
        if lam == 0:
            continue
        term = pp_scale(lam, g)
        result = term if result is None else pp_add(result, term)
    if result is None:
        zero = HomPolynomial.zero(n, k)
        result = PiecewisePolynomial(n, k, tuple((c, zero) for c in fan.maximal))
    return result
