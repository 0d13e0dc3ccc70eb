"""Matroids from bases, their Bergman fans, and cutting subcycles out of
matroid varieties with piecewise polynomials.

Ground sets are {1, ..., n}; rank, closure and flats are computed by brute
force over subsets, which is fine at the intended scale (n <= 8).
"""

from dataclasses import dataclass
from itertools import combinations

from .intlinalg import solve
from .polyhedra import Fan, cone_from_rays
from .cycles import (
    TropicalCycle,
    cycle_add,
    cycle_scale,
    equals_mod_refinement,
    make_cycle,
    push_forward,
    zero_cycle,
)
from .functions import RationalFanFunction, divisor
from .polynomials import HomPolynomial
from .pwpoly import (
    PiecewisePolynomial,
    complete_refinement,
    invert_duality,
    pp_add,
    pp_intersect,
    pp_pullback,
)


@dataclass(frozen=True)
class Matroid:
    n: int
    bases: tuple  # sorted tuple of sorted tuples of elements of {1..n}

    def __post_init__(self):
        if not self.bases:
            raise ValueError("matroid needs at least one basis")
        r = len(self.bases[0])
        for b in self.bases:
            if len(b) != r or len(set(b)) != r:
                raise ValueError("bases must be equicardinal sets")
            if any(e < 1 or e > self.n for e in b):
                raise ValueError("basis element outside the ground set")
        bset = set(self.bases)
        for b1 in bset:
            for b2 in bset:
                for x in set(b1) - set(b2):
                    ok = any(
                        tuple(sorted((set(b1) - {x}) | {y})) in bset
                        for y in set(b2) - set(b1)
                    )
                    if not ok:
                        raise ValueError("basis-exchange axiom violated")

    @property
    def rank_full(self):
        return len(self.bases[0])


def make_matroid(n, bases):
    return Matroid(n, tuple(sorted(tuple(sorted(b)) for b in set(map(frozenset, bases)))))


def free_matroid(n):
    return make_matroid(n, [tuple(range(1, n + 1))] if n else [()])


def uniform_matroid(r, n):
    return make_matroid(n, list(combinations(range(1, n + 1), r)))


def rank(m, s):
    s = set(s)
    return max(len(s & set(b)) for b in m.bases)


def closure(m, s):
    r = rank(m, s)
    return frozenset(e for e in range(1, m.n + 1) if rank(m, set(s) | {e}) == r)


def flats(m):
    """All flats, sorted by (size, elements)."""
    out = set()
    for k in range(m.n + 1):
        for s in combinations(range(1, m.n + 1), k):
            out.add(closure(m, s))
    return sorted(out, key=lambda f: (len(f), sorted(f)))


def is_loopfree(m):
    return all(rank(m, {e}) == 1 for e in range(1, m.n + 1))


def coloops(m):
    out = set(m.bases[0])
    for b in m.bases[1:]:
        out &= set(b)
    return frozenset(out)


def deletion(m, i):
    """Delete element i; remaining elements are renumbered to {1..n-1}."""
    rest = [e for e in range(1, m.n + 1) if e != i]
    relabel = {e: j + 1 for j, e in enumerate(rest)}
    r = rank(m, rest)
    bases = [
        tuple(relabel[e] for e in s)
        for s in combinations(rest, r)
        if rank(m, s) == r
    ]
    return make_matroid(m.n - 1, bases)


# ---------------------------------------------------------------------------
# Bergman fans


def flat_vector(f, n):
    """V_F = -sum of the basis vectors indexed by the flat."""
    return tuple(-1 if e in f else 0 for e in range(1, n + 1))


def flat_chains(m):
    """Maximal chains of proper nonempty flats (the full flag misses only
    the empty set and the ground set)."""
    fl = [f for f in flats(m) if 0 < len(f) < m.n]
    fl = [f for f in fl if 0 < rank(m, f) < m.rank_full]

    def rec(chain, r):
        if r == m.rank_full - 1:
            chains.append(tuple(chain))
            return
        for f in fl:
            if rank(m, f) == r + 1 and (not chain or set(chain[-1]) < set(f)):
                chain.append(f)
                rec(chain, r + 1)
                chain.pop()

    chains = []
    rec([], 0)
    return chains


def bergman_cones(m):
    """(chain, cone) pairs for the maximal cones of the Bergman fan."""
    if not is_loopfree(m):
        raise ValueError("Bergman fans require a loopfree matroid")
    n = m.n
    lin = (flat_vector(frozenset(range(1, n + 1)), n),)
    out = []
    for chain in flat_chains(m):
        rays = [flat_vector(f, n) for f in chain]
        out.append((chain, cone_from_rays(rays, lin, n)))
    if not out:  # rank 1: only the lineality line
        out.append(((), cone_from_rays([], lin, n)))
    return out


def bergman_fan(m):
    """trop(M): weight-1 cycle on cones of chains of flats, with lineality
    along the all-ones direction."""
    cones = bergman_cones(m)
    return make_cycle([(c, 1) for _, c in cones], m.n, m.rank_full)


def _function_from_flat_values(m, values, lineality_value):
    """The function on the Bergman fan cones taking the given values on the
    vectors V_F and the given value on V_E."""
    n = m.n
    ve = flat_vector(frozenset(range(1, n + 1)), n)
    pieces = []
    for chain, cone in bergman_cones(m):
        gens = [flat_vector(f, n) for f in chain] + [ve]
        vals = [values[f] for f in chain] + [lineality_value]
        form = solve(tuple(gens), tuple(vals))
        if form is None:
            raise ValueError("inconsistent values on a Bergman cone")
        pieces.append((cone, tuple(form)))
    return RationalFanFunction(n, tuple(pieces))


def rank_cut_functions(m, nmat):
    """Functions phi_1..phi_k on trop(M) whose iterated divisor cuts out
    trop(N): phi_i(V_F) = -1 when rank_M(F) - rank_N(F) >= i, else 0."""
    if nmat.n != m.n:
        raise ValueError("matroids must share the ground set")
    k = m.rank_full - nmat.rank_full
    if k < 0:
        raise ValueError("rank of N exceeds rank of M")
    e = frozenset(range(1, m.n + 1))
    out = []
    for i in range(1, k + 1):
        values = {}
        for f in flats(m):
            values[f] = -1 if rank(m, f) - rank(nmat, f) >= i else 0
        out.append(_function_from_flat_values(m, values, values.get(e, 0)))
    return out


# ---------------------------------------------------------------------------
# cutting subcycles out of matroid varieties


def _projection_matrix(n, dropped):
    """Rows of the map R^n -> R^(n-len(dropped)) forgetting the given
    coordinates (1-indexed)."""
    keep = [i for i in range(1, n + 1) if i not in dropped]
    return tuple(
        tuple(1 if j == i - 1 else 0 for j in range(n)) for i in keep
    )


def _zero_pp_on(cycle, degree):
    z = HomPolynomial.zero(cycle.ambient_dim, degree)
    return PiecewisePolynomial(
        cycle.ambient_dim, degree, tuple((c, z) for c, _ in cycle.weighted)
    )


def cut_subcycle(m, c, _check=True):
    """A piecewise polynomial f with f . trop(M) = C.

    Recursion on deletions of non-coloops; the base case (free matroid,
    trop(M) = R^n) is the inverse of the duality on R^n.  Parallel elements
    are removed first through the coordinate-forgetting isomorphism.
    """
    if not is_loopfree(m):
        raise ValueError("cutting requires a loopfree matroid")
    trop = bergman_fan(m)
    k = trop.dim - c.dim
    if not c.is_zero() and k < 1:
        raise ValueError("the subcycle must have positive codimension")
    if c.is_zero():
        return _zero_pp_on(trop, max(k, 1))

    # parallel elements: project them away, cut, pull the result back
    par = set()
    for a in range(1, m.n + 1):
        if a not in par:
            par |= set(closure(m, {a})) - {a}
    if par:
        proj = _projection_matrix(m.n, par)
        msimple = m
        for a in sorted(par, reverse=True):
            msimple = deletion(msimple, a)
        f = cut_subcycle(msimple, push_forward(proj, c), _check=False)
        g = pp_pullback(proj, f, m.n)
        if _check:
            _verify_cut(g, trop, c)
        return g

    if len(m.bases) == 1:  # free matroid: trop(M) = R^n
        fan = complete_refinement([cone for cone, _ in c.weighted], m.n)
        f = invert_duality(fan, c)
        if _check:
            _verify_cut(f, trop, c)
        return f

    non_coloops = sorted(set(range(1, m.n + 1)) - coloops(m))
    if not non_coloops:
        raise ValueError("unsupported matroid shape")
    cur = c
    total = None
    for i in non_coloops:
        proj = _projection_matrix(m.n, {i})
        mi = deletion(m, i)
        di = push_forward(proj, cur)
        fi = cut_subcycle(mi, di, _check=False)
        gi = pp_pullback(proj, fi, m.n)
        cur = cycle_add(cur, cycle_scale(-1, pp_intersect(gi, trop)))
        total = gi if total is None else pp_add(total, gi)
    if not cur.is_zero():
        raise RuntimeError(
            "nonzero residual after the deletion recursion"
        )
    if _check:
        _verify_cut(total, trop, c)
    return total


def _verify_cut(f, trop, c):
    got = pp_intersect(f, trop)
    if not equals_mod_refinement(got, c):
        raise RuntimeError("cutting function fails to reproduce the subcycle")


# ---------------------------------------------------------------------------
# duality certificates


@dataclass(frozen=True)
class DualityCertificate:
    divisor_is_zero: bool
    criterion_holds: bool
    witness: tuple  # linear form, or () when the divisor is nonzero
    nonzero_divisor: TropicalCycle


def verify_codim1_duality(m, phi):
    """For a rational function on trop(M) with zero divisor, certify that
    phi(V_F) = sum of phi(V_{a}) over a in F for every flat, and return the
    witnessing global linear form."""
    trop = bergman_fan(m)
    div = divisor(phi, trop)
    if not div.is_zero():
        return DualityCertificate(False, False, (), div)
    n = m.n
    singles = {a: phi.eval(flat_vector(frozenset([a]), n)) for a in range(1, n + 1)}
    ok = True
    for f in flats(m):
        if not f:
            continue
        expected = sum(singles[a] for a in f)
        if phi.eval(flat_vector(f, n)) != expected:
            ok = False
            break
    witness = tuple(-singles[a] for a in range(1, n + 1))
    if ok and not all(
        phi.eval(v) == sum(w * x for w, x in zip(witness, v))
        for v in (flat_vector(f, n) for f in flats(m) if f)
    ):
        ok = False
    return DualityCertificate(True, ok, witness if ok else (), div)


def psi_sigma_check(x, sigma):
    """Psi_sigma . X for a maximal cone; asserts the result is the cycle's
    lineality space with the cone's weight (the origin when pointed)."""
    from .pwpoly import psi_cone

    w = x.weight_of(sigma)
    if w == 0:
        raise ValueError("not a weighted maximal cone of the cycle")
    res = pp_intersect(psi_cone(x.fan, sigma), x)
    expected = make_cycle(
        [(cone_from_rays([], sigma.lineality, x.ambient_dim), w)],
        x.ambient_dim,
        len(sigma.lineality),
    )
    if not equals_mod_refinement(res, expected):
        raise RuntimeError("Psi_sigma product disagrees with the cone weight")
    return res


def linear_relation(x, sigma1, sigma2, tau):
    """The linear form l with w(s2)*Psi_{s1} - w(s1)*Psi_{s2} = l*Psi_tau.

    Requires local irreducibility around tau: the primitive normal
    directions together with tau must admit only the balancing relation.
    """
    from .intlinalg import rank as vrank
    from .polyhedra import is_face

    d = x.dim
    adj = []
    for sigma, w in x.weighted:
        if is_face(tau, sigma):
            extra = [r for r in sigma.rays if r not in tau.rays]
            if len(extra) != 1:
                raise ValueError("fan structure is not unimodular around tau")
            adj.append((sigma, w, extra[0]))
    order = {s: i for i, (s, _, _) in enumerate(adj)}
    if sigma1 not in order or sigma2 not in order:
        raise ValueError("cones are not adjacent to tau")
    w1 = next(v for s, _, v in adj if s == sigma1)
    w2 = next(v for s, _, v in adj if s == sigma2)
    om1 = x.weight_of(sigma1)
    om2 = x.weight_of(sigma2)
    others = [v for s, _, v in adj if s not in (sigma1, sigma2)]
    span = list(tau.rays) + list(tau.lineality)
    constraints = span + others + [w1]
    if vrank(constraints) != len(constraints):
        raise ValueError("cycle is not locally irreducible around tau")
    vals = [0] * (len(span) + len(others)) + [om2]
    l = solve(tuple(constraints), tuple(vals))
    if l is None:
        raise RuntimeError("no linear form satisfies the stated conditions")
    l = tuple(l)
    got = sum(a * b for a, b in zip(l, w2))
    if got != -om1:
        raise RuntimeError("balancing fails to determine the second normal")
    return l
