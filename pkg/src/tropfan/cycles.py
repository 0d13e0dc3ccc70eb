"""Tropical cycles: weighted fans with the balancing condition.

Cycle arithmetic works modulo refinement.  The workhorse is an overlay
operation: all participating cones are sliced by the hyperplane arrangement
spanned by every facet and span hyperplane in sight, after which pieces from
different cycles either coincide or have disjoint relative interiors and
weights can be merged cone by cone.
"""

from dataclasses import dataclass

from .intlinalg import (
    dot,
    is_zero,
    lattice_index,
    mat_mul_vec,
    primitive,
    rank,
    saturation_basis,
    sign_normalized,
    vadd,
    vscale,
)
from .polyhedra import (
    Cone,
    Fan,
    cone_from_inequalities,
    cone_from_rays,
    faces,
    is_face,
    normal_vector,
)


@dataclass(frozen=True)
class TropicalCycle:
    ambient_dim: int
    dim: int
    weighted: tuple  # ((Cone, weight), ...) sorted, weights nonzero

    def __post_init__(self):
        for c, w in self.weighted:
            if c.dim != self.dim:
                raise ValueError("weighted cone of wrong dimension")
            if w == 0:
                raise ValueError("zero weight stored")

    @property
    def fan(self):
        return Fan([c for c, _ in self.weighted], self.ambient_dim)

    def is_zero(self):
        return not self.weighted

    def weight_of(self, cone):
        for c, w in self.weighted:
            if c == cone:
                return w
        return 0

    def weight_at(self, point):
        """Weight of the cell whose relative interior contains the point."""
        for c, w in self.weighted:
            if c.contains(point):
                return w
        return 0

    def support_contains(self, p):
        return any(c.contains(p) for c, _ in self.weighted)


def make_cycle(weighted, ambient_dim, dim):
    items = {}
    for c, w in weighted:
        items[c] = items.get(c, 0) + w
    cleaned = tuple(
        sorted(
            ((c, w) for c, w in items.items() if w != 0),
            key=lambda t: (t[0].rays, t[0].lineality),
        )
    )
    return TropicalCycle(ambient_dim, dim, cleaned)


def zero_cycle(ambient_dim, dim):
    return TropicalCycle(ambient_dim, dim, ())


def rn_cycle(n):
    """R^n with weight 1 (single cone, full lineality)."""
    from .intlinalg import identity

    c = cone_from_rays([], identity(n), n)
    return make_cycle([(c, 1)], n, n)


# ---------------------------------------------------------------------------
# overlay machinery


def collect_hyperplanes(cones):
    """Facet and span hyperplanes of the cones, sign-normalized."""
    hs = set()
    for c in cones:
        for h in c.facets:
            hs.add(sign_normalized(h))
        for h in c.span_eqs:
            hs.add(sign_normalized(h))
    return tuple(sorted(hs))


def slice_cone(cone, hyperplanes):
    """Cut the cone by every hyperplane; return same-dimensional pieces."""
    pieces = [cone]
    for h in hyperplanes:
        new = []
        for p in pieces:
            gens = p.generators
            signs = [dot(h, g) for g in p.rays]
            lin_cross = any(dot(h, l) != 0 for l in p.lineality)
            if not lin_cross and all(s >= 0 for s in signs):
                new.append(p)
            elif not lin_cross and all(s <= 0 for s in signs):
                new.append(p)
            else:
                for side in (h, vscale(-1, h)):
                    q = cone_from_inequalities(
                        p.span_eqs, p.facets + (side,), p.ambient_dim
                    )
                    if q.dim == p.dim:
                        new.append(q)
        pieces = new
    return pieces


def overlay(weighted_groups, ambient_dim, dim):
    """Merge weighted cone lists onto a common refinement of the union."""
    all_cones = [c for group in weighted_groups for c, _ in group]
    hs = collect_hyperplanes(all_cones)
    acc = {}
    for group in weighted_groups:
        for c, w in group:
            for piece in slice_cone(c, hs):
                acc[piece] = acc.get(piece, 0) + w
    return make_cycle(acc.items(), ambient_dim, dim)


# ---------------------------------------------------------------------------
# cycle operations


def cycle_scale(k, a):
    if k == 0:
        return zero_cycle(a.ambient_dim, a.dim)
    return make_cycle([(c, k * w) for c, w in a.weighted], a.ambient_dim, a.dim)


def cycle_add(a, b):
    if a.ambient_dim != b.ambient_dim or (
        not a.is_zero() and not b.is_zero() and a.dim != b.dim
    ):
        raise ValueError("cycle dimension mismatch")
    dim = b.dim if a.is_zero() else a.dim
    return overlay([a.weighted, b.weighted], a.ambient_dim, dim)


def equals_mod_refinement(a, b):
    if a.ambient_dim != b.ambient_dim:
        raise ValueError("ambient dimension mismatch")
    if a.is_zero() or b.is_zero():
        return a.is_zero() and b.is_zero()
    if a.dim != b.dim:
        return False
    return cycle_add(a, cycle_scale(-1, b)).is_zero()


def degree0(c):
    if c.dim != 0:
        raise ValueError("degree is defined for 0-dimensional cycles only")
    if c.is_zero():
        return 0
    return c.weighted[0][1]


@dataclass(frozen=True)
class BalancingViolation:
    tau: Cone
    defect: tuple


def check_balancing(cycle):
    """Verify the balancing condition at every codimension-1 cone.

    Returns None if balanced, otherwise the first violation (the defect
    vector is reported modulo nothing, i.e. as a plain ambient vector).
    """
    if cycle.is_zero():
        return None
    adjacency = {}
    for c, w in cycle.weighted:
        for f in faces(c):
            if f.dim == cycle.dim - 1:
                adjacency.setdefault(f, []).append((c, w))
    for tau, adj in adjacency.items():
        defect = (0,) * cycle.ambient_dim
        for sigma, w in adj:
            defect = vadd(defect, vscale(w, normal_vector(sigma, tau)))
        span = tau.generators
        if not is_zero(defect) and rank(list(span) + [defect]) != rank(span):
            return BalancingViolation(tau, defect)
    return None


def star_cycle(cycle, tau):
    """Star of the cycle at a cone of its fan; weights inherited."""
    if tau not in cycle.fan.cones:
        raise ValueError("cone not in the cycle's fan")
    out = {}
    for sigma, w in cycle.weighted:
        if is_face(tau, sigma):
            star = cone_from_rays(
                sigma.rays,
                sigma.lineality + tau.rays + tau.lineality,
                cycle.ambient_dim,
            )
            out[star] = out.get(star, 0) + w
    return make_cycle(out.items(), cycle.ambient_dim, cycle.dim)


def push_forward(matrix, cycle):
    """Push the cycle forward along an integer linear map (rows of matrix).

    Cones on which the map drops dimension contribute nothing; weights pick
    up the lattice index of the image of the cone's lattice inside its
    saturation.
    """
    m = len(matrix)
    if cycle.is_zero():
        return zero_cycle(m, cycle.dim)

    def image_vec(v):
        return mat_mul_vec(matrix, v)

    contributions = []
    for sigma, w in cycle.weighted:
        img_gens = [image_vec(g) for g in sigma.generators]
        if rank(img_gens) != sigma.dim:
            continue
        img = cone_from_rays(
            [image_vec(r) for r in sigma.rays],
            [image_vec(l) for l in sigma.lineality],
            m,
        )
        basis = saturation_basis(sigma.generators)
        imgs = [image_vec(b) for b in basis]
        idx = lattice_index(imgs, imgs)
        contributions.append((img, w * idx))
    return overlay([contributions], m, cycle.dim)
