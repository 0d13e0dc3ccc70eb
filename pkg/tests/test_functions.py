import random
from fractions import Fraction

import pytest

from tropfan.cycles import (
    check_balancing,
    degree0,
    equals_mod_refinement,
    make_cycle,
    rn_cycle,
)
from tropfan.functions import (
    TropicalPolynomialSpec,
    add_functions,
    divisor,
    express_in_psi,
    from_ray_values,
    from_tropical_polynomial,
    global_linear,
    psi_ray,
    pullback_function,
)
from tropfan.polyhedra import Fan, cone_from_rays


def max_xy0():
    return from_tropical_polynomial(
        TropicalPolynomialSpec(((1, 0), (0, 1), (0, 0))), 2
    )


def max_xyz0():
    return from_tropical_polynomial(
        TropicalPolynomialSpec(((1, 0, 0), (0, 1, 0), (0, 0, 1), (0, 0, 0))), 3
    )


def test_from_tropical_polynomial():
    fan, f = max_xy0()
    assert len(fan.maximal) == 3
    for p, v in [((1, 0), 1), ((0, 1), 1), ((-1, -1), 0), ((3, 5), 5), ((-2, 1), 1)]:
        assert f.eval(p) == v
    fan1, f1 = from_tropical_polynomial(TropicalPolynomialSpec(((1,),)), 1)
    assert len(fan1.maximal) == 1 and f1.eval((7,)) == 7
    fan3, f3 = max_xyz0()
    assert len(fan3.maximal) == 4
    rng = random.Random(0)
    for _ in range(20):
        p = tuple(rng.randint(-5, 5) for _ in range(3))
        assert f3.eval(p) == max(p[0], p[1], p[2], 0)


def test_from_ray_values():
    fan, f = max_xy0()
    zero = from_ray_values(fan, {r: 0 for r in fan.rays})
    assert all(zero.eval(r) == 0 for r in fan.rays)
    vals = {r: f.eval(r) for r in fan.rays}
    g = from_ray_values(fan, vals)
    rng = random.Random(1)
    for _ in range(25):
        p = tuple(rng.randint(-4, 4) for _ in range(2))
        assert g.eval(p) == f.eval(p)
    # cone over a square is not simplicial
    bad = Fan(
        [cone_from_rays([(1, 0, 1), (0, 1, 1), (-1, 0, 1), (0, -1, 1)], (), 3)], 3
    )
    with pytest.raises(ValueError):
        from_ray_values(bad, {r: 0 for r in bad.rays})


def test_psi_ray():
    # fan of R^1: psi at +1 is max{x, 0}
    line = Fan(
        [cone_from_rays([(1,)], (), 1), cone_from_rays([(-1,)], (), 1)], 1
    )
    psi = psi_ray(line, (1,))
    for x in range(-4, 5):
        assert psi.eval((x,)) == max(x, 0)
    with pytest.raises(ValueError):
        psi_ray(line, (2, 2))
    fan3, f3 = max_xyz0()
    from tropfan.cycles import collect_hyperplanes  # noqa: F401
    x = divisor(f3, rn_cycle(3))
    a = (-1, -1, 0)
    psi_a = psi_ray(x.fan, a)
    assert psi_a.eval(a) == 1
    assert all(psi_a.eval(r) == 0 for r in x.fan.rays if r != a)


def test_psi_basis_reconstruction():
    fan, f = max_xy0()
    coords = express_in_psi(f, fan)
    total = None
    for r, c in coords.items():
        term = psi_ray(fan, r)
        term = from_ray_values(fan, {s: c if s == r else 0 for s in fan.rays})
        total = term if total is None else add_functions(total, term)
    rng = random.Random(2)
    for _ in range(25):
        p = tuple(rng.randint(-4, 4) for _ in range(2))
        assert total.eval(p) == f.eval(p)


def test_express_in_psi():
    fan, f = max_xy0()
    zero = from_ray_values(fan, {r: 0 for r in fan.rays})
    assert set(express_in_psi(zero, fan).values()) == {0}
    r0 = fan.rays[0]
    psi = psi_ray(fan, r0)
    coords = express_in_psi(psi, fan)
    assert coords[r0] == 1 and all(v == 0 for r, v in coords.items() if r != r0)
    coords_f = express_in_psi(f, fan)
    assert coords_f[(1, 1)] == 1
    assert all(v == 0 for r, v in coords_f.items() if r != (1, 1))


def test_divisor():
    lin = global_linear((2, -3), 2)
    assert divisor(lin, rn_cycle(2)).weighted == ()
    _, f = max_xy0()
    line = divisor(f, rn_cycle(2))
    assert sorted(c.rays[0] for c, _ in line.weighted) == [(-1, 0), (0, -1), (1, 1)]
    assert all(w == 1 for _, w in line.weighted)
    assert check_balancing(line) is None
    _, f3 = max_xyz0()
    l32 = divisor(f3, rn_cycle(3))
    assert set(l32.fan.rays) == {
        (-1, 0, 0),
        (-1, -1, 0),
        (0, -1, 0),
        (0, 0, -1),
        (1, 1, 0),
        (1, 1, 1),
        (-1, 0, -1),
        (0, -1, -1),
        (0, 1, 1),
        (1, 0, 1),
    } or set(l32.fan.rays) >= {
        (-1, 0, 0),
        (-1, -1, 0),
        (0, -1, 0),
        (0, 0, -1),
        (1, 1, 0),
        (1, 1, 1),
    }
    assert l32.dim == 2 and all(w == 1 for _, w in l32.weighted)
    # further divisor by max{x, 0} style function: weight of the origin
    _, g = max_xy0()
    pt = divisor(g, line)
    assert degree0(pt) == 1


def test_pullback():
    _, f = max_xy0()
    same = pullback_function(((1, 0), (0, 1)), f, 2)
    rng = random.Random(3)
    for _ in range(20):
        p = tuple(rng.randint(-4, 4) for _ in range(2))
        assert same.eval(p) == f.eval(p)
    line = Fan(
        [cone_from_rays([(1,)], (), 1), cone_from_rays([(-1,)], (), 1)], 1
    )
    psi = psi_ray(line, (1,))
    up = pullback_function(((1,), (0,)), psi, 2)  # (x,y) -> x
    for _ in range(20):
        p = tuple(rng.randint(-4, 4) for _ in range(2))
        assert up.eval(p) == max(p[0], 0)


def test_divisor_representative_independence():
    # the divisor weight formula subtracts the tau part, so shifting
    # representatives by tau vectors must not change the output; check
    # by comparing against the same divisor on a refined structure
    _, f = max_xy0()
    line = divisor(f, rn_cycle(2))
    from tropfan.polyhedra import stellar_subdivide, unimodular_refinement

    quad = Fan(
        [
            cone_from_rays([(1, 0), (0, 1)], (), 2),
            cone_from_rays([(0, 1), (-1, 0)], (), 2),
            cone_from_rays([(-1, 0), (0, -1)], (), 2),
            cone_from_rays([(0, -1), (1, 0)], (), 2),
        ],
        2,
    )
    refined = stellar_subdivide(quad, quad.maximal[-1], (1, 1))
    r2 = make_cycle([(c, 1) for c in refined.maximal], 2, 2)
    line2 = divisor(f, r2)
    assert equals_mod_refinement(line, line2)


def test_eval_is_exact():
    _, f = max_xy0()
    assert f.eval((Fraction(1, 3), Fraction(1, 2))) == Fraction(1, 2)
