"""Rational polyhedral cones and fans.

Cones carry both generator and facet descriptions; conversion in both
directions runs through a single double-description routine over exact
rationals.  Canonical form (primitive deduplicated rays sorted
lexicographically, lineality basis in Hermite normal form) makes structural
equality coincide with semantic equality.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .intlinalg import (
    dot,
    hermite_normal_form,
    identity,
    inverse,
    is_zero,
    kernel_basis_int,
    lattice_index,
    primitive,
    rank,
    saturation_basis,
    scale_to_int,
    smith_normal_form,
    solve,
    transpose,
    vadd,
    vscale,
)


@dataclass(frozen=True)
class Cone:
    ambient_dim: int
    rays: tuple  # primitive, reduced mod lineality, sorted
    lineality: tuple  # HNF basis of the lineality lattice
    facets: tuple  # inward-pointing primitive forms, sorted
    span_eqs: tuple  # HNF forms cutting out the linear span
    dim: int

    def __eq__(self, other):
        return (
            isinstance(other, Cone)
            and self.ambient_dim == other.ambient_dim
            and self.rays == other.rays
            and self.lineality == other.lineality
        )

    def __hash__(self):
        return hash((self.ambient_dim, self.rays, self.lineality))

    @property
    def generators(self):
        return self.rays + self.lineality

    def contains(self, p):
        """Membership of a rational point."""
        return all(dot(e, p) == 0 for e in self.span_eqs) and all(
            dot(f, p) >= 0 for f in self.facets
        )

    def contains_cone(self, other):
        if not all(self.contains(r) for r in other.rays):
            return False
        return all(
            all(dot(e, l) == 0 for e in self.span_eqs)
            and all(dot(f, l) == 0 for f in self.facets)
            for l in other.lineality
        )

    def relative_interior_point(self):
        p = (0,) * self.ambient_dim
        for r in self.rays:
            p = vadd(p, r)
        return p

    def is_zero_cone(self):
        return self.dim == 0


def _reduce_mod_space(v, basis):
    """Orthogonal projection of v away from span(basis); exact rationals."""
    if not basis:
        return tuple(Fraction(x) for x in v)
    gram = tuple(tuple(dot(a, b) for b in basis) for a in basis)
    rhs = tuple(dot(a, v) for a in basis)
    coeffs = solve(gram, rhs)
    p = [Fraction(x) for x in v]
    for c, b in zip(coeffs, basis):
        for i, bi in enumerate(b):
            p[i] -= c * bi
    return tuple(p)


@lru_cache(maxsize=None)
def _lattice_complement(lin_basis):
    from .intlinalg import complete_to_unimodular, saturation_basis

    sat = saturation_basis(lin_basis)
    return sat, complete_to_unimodular(sat)[len(sat):]


def _canonical_ray(v, lin_basis):
    """Canonical representative of the ray class modulo the lineality:
    primitive in the quotient lattice, lifted through a fixed complement
    of the lineality lattice."""
    if not lin_basis:
        p = scale_to_int(v)
        return None if is_zero(p) else p
    sat, comp = _lattice_complement(lin_basis)
    full = tuple(sat) + tuple(comp)
    coords = solve(transpose(full), tuple(Fraction(x) for x in v))
    b = tuple(coords[len(sat):])
    if all(x == 0 for x in b):
        return None
    b = scale_to_int(b)
    n = len(v)
    return tuple(sum(bj * comp[j][i] for j, bj in enumerate(b)) for i in range(n))


def dual_description(ineqs, n):
    """Generators of the cone {x : h.x >= 0 for all h}.

    Returns (lineality_basis, extremal_rays); incremental double
    description with the algebraic adjacency test.
    """
    lin = [row for row in identity(n)]
    rays = []
    processed = []

    def adjacent(a, b):
        tight = [c for c in processed if dot(c, a) == 0 and dot(c, b) == 0]
        return n - rank(tight) == len(lin) + 2

    for h in ineqs:
        if is_zero(h):
            continue
        viol = next((l for l in lin if dot(h, l) != 0), None)
        if viol is not None:
            l0 = viol if dot(h, viol) > 0 else vscale(-1, viol)
            hl0 = dot(h, l0)
            new_lin = []
            for l in lin:
                if l is viol:
                    continue
                hl = dot(h, l)
                if hl == 0:
                    new_lin.append(l)
                else:
                    new_lin.append(
                        primitive(tuple(hl0 * a - hl * b for a, b in zip(l, l0)))
                    )
            lin = new_lin
            new_rays = []
            for r in rays:
                hr = dot(h, r)
                if hr == 0:
                    new_rays.append(r)
                else:
                    v = tuple(hl0 * a - hr * b for a, b in zip(r, l0))
                    if not is_zero(v):
                        new_rays.append(primitive(v))
            rays = new_rays
            rays.append(primitive(l0))
            processed.append(h)
            continue
        pos = [r for r in rays if dot(h, r) > 0]
        zer = [r for r in rays if dot(h, r) == 0]
        neg = [r for r in rays if dot(h, r) < 0]
        new = pos + zer
        for p in pos:
            for q in neg:
                if adjacent(p, q):
                    v = tuple(dot(h, p) * a - dot(h, q) * b for a, b in zip(q, p))
                    if not is_zero(v):
                        new.append(primitive(v))
        seen = set()
        rays = [r for r in new if not (r in seen or seen.add(r))]
        processed.append(h)

    lin_basis = hermite_normal_form(lin)
    out = []
    seen = set()
    for r in rays:
        c = _canonical_ray(r, lin_basis)
        if c is None or c in seen:
            continue
        tight = [hh for hh in processed if dot(hh, c) == 0]
        if n - rank(tight) == len(lin_basis) + 1:
            seen.add(c)
            out.append(c)
    return lin_basis, tuple(sorted(out))


@lru_cache(maxsize=None)
def _make_cone(rays, lineality, n):
    lin_basis = hermite_normal_form(saturation_basis(lineality)) if lineality else ()
    canon = []
    seen = set()
    for r in rays:
        c = _canonical_ray(r, lin_basis)
        if c is not None and c not in seen:
            seen.add(c)
            canon.append(c)
    gens = tuple(canon) + lin_basis
    if gens:
        span_eqs = kernel_basis_int(gens)
    else:
        span_eqs = hermite_normal_form(identity(n))
    # facets = extremal rays of the polar cone
    polar_constraints = list(canon) + [l for l in lin_basis] + [vscale(-1, l) for l in lin_basis]
    _polar_lin, facets = dual_description(tuple(polar_constraints), n)
    # keep only extremal rays
    final = []
    for r in canon:
        tight = [f for f in facets if dot(f, r) == 0] + list(span_eqs)
        if n - rank(tight) == len(lin_basis) + 1:
            final.append(r)
    dim = n - len(span_eqs)
    return Cone(n, tuple(sorted(final)), lin_basis, facets, span_eqs, dim)


def cone_from_rays(rays, lineality=(), ambient_dim=None):
    """Canonical cone from generators (primitive deduplicated rays)."""
    rays = tuple(tuple(r) for r in rays)
    lineality = tuple(tuple(l) for l in lineality)
    n = ambient_dim
    if n is None:
        if rays:
            n = len(rays[0])
        elif lineality:
            n = len(lineality[0])
        else:
            raise ValueError("ambient dimension required for the zero cone")
    return _make_cone(rays, lineality, n)


def cone_from_inequalities(eqs, ineqs, n):
    """Canonical cone cut out by eqs = 0 and ineqs >= 0."""
    constraints = []
    for e in eqs:
        constraints.append(tuple(e))
        constraints.append(vscale(-1, tuple(e)))
    constraints.extend(tuple(h) for h in ineqs)
    lin, rays = dual_description(tuple(constraints), n)
    return _make_cone(rays, lin, n)


def cone_intersection(a, b):
    if a.ambient_dim != b.ambient_dim:
        raise ValueError("ambient dimension mismatch")
    return cone_from_inequalities(
        a.span_eqs + b.span_eqs, a.facets + b.facets, a.ambient_dim
    )


@lru_cache(maxsize=None)
def faces(cone):
    """All faces of the cone, including itself and the minimal face."""
    out = {}
    nf = len(cone.facets)
    for mask in range(1 << nf):
        subset = [cone.facets[i] for i in range(nf) if mask >> i & 1]
        tight = tuple(
            r for r in cone.rays if all(dot(h, r) == 0 for h in subset)
        )
        if tight not in out:
            out[tight] = cone_from_rays(tight, cone.lineality, cone.ambient_dim)
    return tuple(sorted(out.values(), key=lambda c: (c.dim, c.rays)))


def is_face(tau, sigma):
    return tau in faces(sigma)


def faces_of_dim(cone, d):
    return tuple(f for f in faces(cone) if f.dim == d)


@lru_cache(maxsize=None)
def normal_vector(sigma, tau):
    """Lattice vector generating the quotient of sigma's lattice by tau's,
    on sigma's side.  Any valid representative; downstream formulas are
    representative independent."""
    if not is_face(tau, sigma) or tau.dim != sigma.dim - 1:
        raise ValueError("tau is not a codimension-1 face of sigma")
    b_sigma = saturation_basis(sigma.generators)
    b_tau = saturation_basis(tau.generators)
    t = len(b_tau)
    if t == 0:
        w = b_sigma[0]
    else:
        coords = []
        for bv in b_tau:
            c = solve(transpose(b_sigma), bv)
            coords.append(tuple(int(x) for x in c))
        _d, _u, v = smith_normal_form(coords)
        vinv = inverse(v)
        last = tuple(int(x) for x in vinv[t])
        w = tuple(sum(last[i] * b_sigma[i][j] for i in range(t + 1)) for j in range(len(b_sigma[0])))
    # orient towards sigma using a facet of sigma vanishing on tau
    h = next(
        (f for f in sigma.facets if all(dot(f, g) == 0 for g in tau.generators)),
        None,
    )
    if h is None:
        raise ValueError("no supporting facet found")
    s = dot(h, w)
    if s == 0:
        raise ValueError("degenerate normal vector")
    return w if s > 0 else vscale(-1, w)


@lru_cache(maxsize=None)
def cone_multiplicity(cone):
    """Index of the lattice spanned by the generators in its saturation."""
    if cone.dim == 0:
        return 1
    return lattice_index(cone.generators, cone.generators)


def is_cone_simplicial(cone):
    return len(cone.rays) == cone.dim - len(cone.lineality)


# ---------------------------------------------------------------------------
# fans


class Fan:
    """A rational polyhedral fan, stored by its maximal cones.

    All faces are derived on demand; two fans are equal when their maximal
    cones agree.
    """

    def __init__(self, maximal_cones, ambient_dim=None):
        cones = list(dict.fromkeys(maximal_cones))
        if ambient_dim is None:
            if not cones:
                raise ValueError("ambient dimension required for the empty fan")
            ambient_dim = cones[0].ambient_dim
        # drop cones contained in another cone
        maximal = [
            c
            for c in cones
            if not any(o is not c and o.contains_cone(c) for o in cones)
        ]
        self.ambient_dim = ambient_dim
        self.maximal = tuple(sorted(maximal, key=lambda c: (c.dim, c.rays, c.lineality)))
        self._all = None

    def __eq__(self, other):
        return (
            isinstance(other, Fan)
            and self.ambient_dim == other.ambient_dim
            and self.maximal == other.maximal
        )

    def __hash__(self):
        return hash((self.ambient_dim, self.maximal))

    @property
    def cones(self):
        if self._all is None:
            out = {}
            for c in self.maximal:
                for f in faces(c):
                    out[f] = None
            self._all = tuple(sorted(out, key=lambda c: (c.dim, c.rays, c.lineality)))
        return self._all

    def cones_of_dim(self, d):
        return tuple(c for c in self.cones if c.dim == d)

    @property
    def rays(self):
        return tuple(sorted({r for c in self.maximal for r in c.rays}))

    @property
    def dim(self):
        return max((c.dim for c in self.maximal), default=0)

    def support_contains(self, p):
        return any(c.contains(p) for c in self.maximal)

    def cone_containing(self, p):
        """A maximal cone whose support contains p (None if outside)."""
        for c in self.maximal:
            if c.contains(p):
                return c
        return None

    def is_simplicial(self):
        return all(is_cone_simplicial(c) for c in self.maximal)

    def is_unimodular(self):
        return all(cone_multiplicity(c) == 1 for c in self.maximal)


@dataclass(frozen=True)
class FanViolation:
    kind: str
    detail: str


def fan_validate(fan_or_cones):
    """Check the fan axioms pairwise; return None or the first violation."""
    if isinstance(fan_or_cones, Fan):
        cones = list(fan_or_cones.cones)
        closed = True
    else:
        cones = list(fan_or_cones)
        closed = False
    cone_set = set(cones)
    if not closed:
        for i, c in enumerate(cones):
            for f in faces(c):
                if f not in cone_set:
                    return FanViolation("face not in fan", f"cone {i} has a missing face of dim {f.dim}")
    for i, a in enumerate(cones):
        for j in range(i + 1, len(cones)):
            b = cones[j]
            inter = cone_intersection(a, b)
            if not (is_face(inter, a) and is_face(inter, b)):
                return FanViolation(
                    "intersection not a common face", f"cones {i} and {j}"
                )
    return None


def fan_from_cones(cones, ambient_dim=None):
    return Fan(cones, ambient_dim)


def common_refinement(a, b):
    """Fan of pairwise intersections; refines both on the common support."""
    if a.ambient_dim != b.ambient_dim:
        raise ValueError("ambient dimension mismatch")
    pieces = []
    for ca in a.maximal:
        for cb in b.maximal:
            pieces.append(cone_intersection(ca, cb))
    return Fan(pieces, a.ambient_dim)


def stellar_subdivide(fan, c, r):
    """Stellar subdivision of the fan at ray r interior to cone c."""
    if c not in fan.cones:
        raise ValueError("cone not in fan")
    r = primitive(tuple(r))
    if not c.contains(r):
        raise ValueError("subdivision ray not in cone")
    tight = [h for h in c.facets if dot(h, r) == 0]
    if tight or c.dim - len(c.lineality) <= 1:
        raise ValueError("subdivision ray not in the relative interior")
    new_max = []
    for sigma in fan.maximal:
        if not is_face(c, sigma):
            new_max.append(sigma)
            continue
        for delta in faces(sigma):
            if is_face(c, delta):
                continue
            if delta.dim == sigma.dim - 1:
                new_max.append(
                    cone_from_rays(delta.rays + (r,), delta.lineality, fan.ambient_dim)
                )
    return Fan(new_max, fan.ambient_dim)


def _triangulate_cone(cone):
    """Pulling triangulation w.r.t. the global lexicographic ray order."""
    if is_cone_simplicial(cone):
        return [cone]
    r0 = min(cone.rays)
    out = []
    for h in cone.facets:
        if dot(h, r0) == 0:
            continue
        tight = tuple(r for r in cone.rays if dot(h, r) == 0)
        facet = cone_from_rays(tight, cone.lineality, cone.ambient_dim)
        for t in _triangulate_cone(facet):
            out.append(
                cone_from_rays(t.rays + (r0,), t.lineality, cone.ambient_dim)
            )
    return out


def triangulate_fan(fan):
    pieces = []
    for c in fan.maximal:
        pieces.extend(_triangulate_cone(c))
    return Fan(pieces, fan.ambient_dim)


def _parallelepiped_point(cone):
    """A nonzero lattice point in the semi-open fundamental parallelepiped
    of a simplicial cone with multiplicity > 1; None if unimodular."""
    m = cone_multiplicity(cone)
    if m == 1:
        return None
    gens = cone.generators
    d = len(gens)
    n = cone.ambient_dim
    best = None
    # coefficients have denominator dividing m
    def rec(i, coeffs):
        nonlocal best
        if i == d:
            if all(c == 0 for c in coeffs):
                return
            pt = [Fraction(0)] * n
            for c, g in zip(coeffs, gens):
                for j, gj in enumerate(g):
                    pt[j] += c * gj
            if all(x.denominator == 1 for x in pt):
                ray_part = sum(coeffs[: len(cone.rays)], Fraction(0))
                if ray_part == 0:
                    return
                key = (sum(coeffs, Fraction(0)), tuple(coeffs))
                if best is None or key < best[0]:
                    best = (key, tuple(int(x) for x in pt), tuple(coeffs))
            return
        for k in range(m):
            rec(i + 1, coeffs + [Fraction(k, m)])

    rec(0, [])
    if best is None:
        raise RuntimeError("no parallelepiped lattice point despite multiplicity > 1")
    return best[1], best[2]


def unimodular_refinement(fan):
    """Refinement with the same support all of whose cones are unimodular."""
    fan = triangulate_fan(fan)
    while True:
        target = None
        for c in fan.maximal:
            for f in faces(c):
                if f.dim > 0 and cone_multiplicity(f) > 1:
                    if target is None or f.dim < target.dim:
                        target = f
        if target is None:
            return fan
        pt, coeffs = _parallelepiped_point(target)
        # the point lies in the relative interior of the face spanned by the
        # generators it uses; subdivide at that face
        support_rays = tuple(
            r for r, c in zip(target.rays, coeffs[: len(target.rays)]) if c != 0
        )
        sub = cone_from_rays(support_rays, target.lineality, fan.ambient_dim)
        fan = stellar_subdivide(fan, sub, primitive(pt))


def star_fan(fan, tau):
    """Fan of cones sigma + span(tau) for sigma containing tau."""
    if tau not in fan.cones:
        raise ValueError("cone not in fan")
    new = []
    for sigma in fan.maximal:
        if is_face(tau, sigma):
            new.append(
                cone_from_rays(
                    sigma.rays,
                    sigma.lineality + tau.rays + tau.lineality,
                    fan.ambient_dim,
                )
            )
    return Fan(new, fan.ambient_dim)
