"""Exact tropical intersection theory on rational polyhedral fans."""

from .polynomials import HomPolynomial
from .polyhedra import (
    Cone,
    Fan,
    cone_from_inequalities,
    cone_from_rays,
    common_refinement,
    fan_validate,
    star_fan,
    stellar_subdivide,
    triangulate_fan,
    unimodular_refinement,
)
from .cycles import (
    TropicalCycle,
    check_balancing,
    cycle_add,
    cycle_scale,
    degree0,
    equals_mod_refinement,
    make_cycle,
    push_forward,
    rn_cycle,
    star_cycle,
    zero_cycle,
)
from .functions import (
    RationalFanFunction,
    TropicalPolynomialSpec,
    divisor,
    from_ray_values,
    from_tropical_polynomial,
    global_linear,
    psi_ray,
    pullback_function,
)
from .pwpoly import (
    PiecewisePolynomial,
    ProductForm,
    PsiRepresentation,
    decompose,
    germ_intersect,
    invert_duality,
    is_lpp_on_complete_fan,
    katz_payne,
    pp_add,
    pp_from_function,
    pp_intersect,
    pp_mul,
    pp_pullback,
    psi_cone,
    to_products,
    validate_pp,
)
from .matroid import (
    Matroid,
    bergman_fan,
    closure,
    coloops,
    cut_subcycle,
    deletion,
    flats,
    free_matroid,
    is_loopfree,
    linear_relation,
    make_matroid,
    psi_sigma_check,
    rank,
    rank_cut_functions,
    uniform_matroid,
    verify_codim1_duality,
)

__version__ = "0.1.0"
