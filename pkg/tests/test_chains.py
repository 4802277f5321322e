"""Chain complexes: homology, products, quotients, induced maps."""

import random

import pytest

from orbihom.chains import (
    ChainComplex,
    ChainMap,
    circle_complex,
    connecting_hom,
    homology,
    inclusion_map,
    induced_map,
    point_complex,
    relative,
    subcomplex,
    tensor,
    validate,
)
from orbihom.intlin import FgAbGroup, IntMatrix, lattice_hnf, rational_rank
from orbihom.orbmodel import (
    Ball3,
    Ball3Cyclic,
    Disc2,
    ProductTorus,
    Surface,
    t_model,
)

Z = FgAbGroup.free(1)
ZERO = FgAbGroup.trivial()


def groups_of(c, coeff="Z"):
    return homology(c, coeff=coeff).groups()


def half_disk():
    """A disk split along a chord: vertices p,q; arcs t,m,b from p to q;
    upper face U between t and m, lower face L between m and b."""
    return ChainComplex(
        basis=(("p", "q"), ("t", "m", "b"), ("U", "L")),
        boundaries=(
            IntMatrix([[-1, -1, -1], [1, 1, 1]]),
            IntMatrix([[1, 0], [-1, 1], [0, -1]]),
        ),
    )


# ---------------------------------------------------------------- basics


def test_point_and_circle():
    assert groups_of(point_complex()) == (Z,)
    assert groups_of(circle_complex()) == (Z, Z)


def test_half_disk_contractible():
    c = half_disk()
    assert validate(c) == []
    assert groups_of(c) == (Z, ZERO, ZERO)


def test_validate_reports_broken_boundary():
    broken = ChainComplex(
        basis=(("v", "w"), ("e",), ("f",)),
        boundaries=(IntMatrix([[-1], [1]]), IntMatrix([[1]])),
    )
    problems = validate(broken)
    assert len(problems) == 2
    assert all("boundary of boundary of f" in p for p in problems)
    with pytest.raises(ValueError):
        homology(broken)


def test_constructor_errors():
    with pytest.raises(ValueError):
        ChainComplex(basis=(), boundaries=())
    with pytest.raises(ValueError):
        ChainComplex(basis=(("v", "v"),), boundaries=())
    with pytest.raises(ValueError):
        ChainComplex(basis=(("v",), ("e",)),
                     boundaries=(IntMatrix.zeros(2, 1),))


def test_homology_bad_coeff():
    with pytest.raises(ValueError):
        homology(point_complex(), coeff="F2")


# ---------------------------------------------------------------- tensor


def test_torus_powers_by_tensor():
    circle = circle_complex()
    torus = tensor(circle, circle)
    assert groups_of(torus) == (Z, FgAbGroup.free(2), Z)
    cube = tensor(torus, circle_complex(vertex="w", edge="s"))
    assert groups_of(cube) == (Z, FgAbGroup.free(3), FgAbGroup.free(3), Z)


def test_tensor_with_point_is_identity():
    c = t_model(Disc2(3)).chain_complex()
    p = tensor(c, point_complex())
    assert groups_of(p) == groups_of(c)


def test_tensor_disc2_with_circle():
    c = t_model(Disc2(3)).chain_complex()
    prod = tensor(c, circle_complex())
    assert validate(prod) == []
    assert groups_of(prod) == (
        Z, FgAbGroup(1, (3,)), FgAbGroup.cyclic(3), ZERO,
    )


# ---------------------------------------------------------------- relative


def test_relative_disc2_rel_boundary():
    wcc = t_model(Disc2(3))
    rel = relative(wcc.chain_complex(), wcc.sub_cells("boundary"))
    h = homology(rel)
    assert h.groups() == (ZERO, ZERO, Z)
    # the degree-2 generator is (order. A-cell) + (weighted face), i.e.
    # 3*A + sighat in the quotient basis
    deg = h.degree(2)
    gen = deg.generators[0]
    labels = [lab for lab in rel.basis[2]]
    coeffs = dict(zip(labels, gen))
    assert abs(coeffs["sighat"]) == 1
    assert coeffs["A"] == 3 * coeffs["sighat"]


def test_relative_requires_closed_sub():
    wcc = t_model(Disc2(2))
    with pytest.raises(ValueError):
        relative(wcc.chain_complex(), {"A"})
    with pytest.raises(ValueError):
        relative(wcc.chain_complex(), {"nope"})


def test_subcomplex_checks():
    c = half_disk()
    sub = subcomplex(c, {"p", "q", "t", "m", "U"})
    assert groups_of(sub) == (Z, ZERO, ZERO)
    with pytest.raises(ValueError):
        subcomplex(c, {"U", "t"})
    with pytest.raises(ValueError):
        subcomplex(c, {"ghost"})


# ------------------------------------------------------------- invariance


def _shuffled_copy(c, rng):
    perms = []
    for q in range(c.top_dim + 1):
        perm = list(range(c.dim(q)))
        rng.shuffle(perm)
        perms.append(perm)
    basis = tuple(
        tuple(c.basis[q][i] for i in perms[q])
        for q in range(c.top_dim + 1)
    )
    boundaries = []
    for q in range(1, c.top_dim + 1):
        mat = [[c.d(q)[perms[q - 1][i], perms[q][j]]
                for j in range(c.dim(q))]
               for i in range(c.dim(q - 1))]
        boundaries.append(IntMatrix(mat, cols=c.dim(q)))
    return ChainComplex(basis, boundaries)


def test_homology_invariant_under_basis_permutation():
    rng = random.Random(42)
    models = [
        t_model(Disc2(4)).chain_complex(),
        t_model(Surface(1, 1, (2,))).chain_complex(),
        t_model(Ball3Cyclic(3)).chain_complex(),
    ]
    for c in models:
        expect = groups_of(c)
        for _ in range(5):
            assert groups_of(_shuffled_copy(c, rng)) == expect


def test_euler_characteristic_matches_ranks():
    models = [
        t_model(Disc2(2)),
        t_model(Surface(0, 0, (2, 3))),
        t_model(Surface(2, 1)),
        t_model(Ball3((2, 3, 4))),
        t_model(ProductTorus(Disc2(2), 1)),
    ]
    for wcc in models:
        c = wcc.chain_complex()
        chi_cells = sum((-1) ** q * c.dim(q) for q in range(c.top_dim + 1))
        h = homology(c)
        chi_ranks = sum((-1) ** q * h.group(q).rank
                        for q in range(c.top_dim + 1))
        assert chi_cells == chi_ranks


# ------------------------------------------------------------ cycle coords


def test_kernel_coords_rejects_non_cycles():
    c = t_model(Disc2(2)).chain_complex()
    h = homology(c)
    non_cycle = c.vector(1, {"r": 1})
    with pytest.raises(ValueError):
        h.degree(1).kernel_coords(non_cycle)


def test_express_reduces_torsion():
    c = t_model(Disc2(3)).chain_complex()
    h = homology(c)
    deg = h.degree(1)
    gen = deg.generators[0]
    one = deg.express(gen)
    tripled = deg.express(tuple(3 * x for x in gen))
    assert one != (0,)
    assert tripled == (0,)


def test_rational_homology_ranks():
    c = t_model(Surface(1, 2, (3,))).chain_complex()
    hq = homology(c, coeff="Q")
    assert [g.rank for g in hq.groups()] == [1, 3, 0]
    assert all(not g.torsion for g in hq.groups())


# ------------------------------------------------------------ chain maps


def test_chain_map_commutes_and_induced():
    circle = circle_complex()
    double = ChainMap(
        source=circle, target=circle,
        matrices=(IntMatrix.identity(1), IntMatrix([[2]])),
    )
    assert double.commutes()
    h = homology(circle)
    induced = induced_map(double, h, h)
    assert induced[1].matrix == IntMatrix([[2]])
    assert induced[0].matrix == IntMatrix([[1]])


def test_non_commuting_map_rejected():
    interval = ChainComplex(
        basis=(("v", "w"), ("e",)),
        boundaries=(IntMatrix([[-1], [1]]),),
    )
    skew = ChainMap(
        source=interval, target=interval,
        matrices=(IntMatrix.diagonal([2, 2]), IntMatrix([[1]])),
    )
    assert not skew.commutes()
    h = homology(interval)
    with pytest.raises(ValueError):
        induced_map(skew, h, h)


def test_inclusion_map_unit_columns():
    c = half_disk()
    inc = inclusion_map(c, {"p", "q", "m"})
    assert inc.commutes()
    assert inc.matrix(0).cols == 2
    assert inc.matrix(1) == IntMatrix([[0], [1], [0]])


# -------------------------------------------------------- connecting map


def _is_zero_hom(hom):
    """True when every generator image lies in the target relations."""
    from orbihom.intlin import subgroup_contains

    return subgroup_contains(hom.target.rels, hom.matrix)


def test_connecting_hom_half_disk_all_zero():
    c = half_disk()
    a = subcomplex(c, {"p", "q", "t", "m", "U"})
    b = subcomplex(c, {"p", "q", "m", "b", "L"})
    k = connecting_hom(a, b, c)
    assert len(k) == c.top_dim + 1
    for hom in k:
        assert _is_zero_hom(hom)


def test_connecting_hom_torus_from_two_annuli():
    # two-vertex circle (P,Q with arcs E1,E2) crossed with a circle;
    # the annuli over E1 and over E2 meet in two disjoint circles
    from orbihom.orbmodel import Cell, WeightedCellComplex, tensor_weighted

    base = WeightedCellComplex(
        name="twocircle", dim=1,
        cells=(
            Cell("P", 0, 1), Cell("Q", 0, 1),
            Cell("E1", 1, 1, (("P", -1), ("Q", 1))),
            Cell("E2", 1, 1, (("Q", -1), ("P", 1))),
        ),
        subs={"left": ("P", "Q", "E1"), "right": ("P", "Q", "E2")},
    )
    fiber = WeightedCellComplex(
        name="circle", dim=1,
        cells=(Cell("z", 0, 1), Cell("t", 1, 1)),
    )
    torus = tensor_weighted(base, fiber)
    m = torus.chain_complex()
    assert groups_of(m) == (Z, FgAbGroup.free(2), Z)
    cells_a = torus.sub_cells("left")
    cells_b = torus.sub_cells("right")
    a = subcomplex(m, cells_a)
    b = subcomplex(m, cells_b)
    k = connecting_hom(a, b, m)
    assert rational_rank(k[1].matrix) == 1
    assert rational_rank(k[2].matrix) == 1


def test_connecting_hom_cone_cover_of_weighted_sphere():
    wcc = t_model(Surface(0, 0, (2, 2)))
    m = wcc.chain_complex()
    a = subcomplex(m, wcc.sub_cells("conedisks"))
    b = subcomplex(m, wcc.sub_cells("complement"))
    h_m = homology(m)
    k = connecting_hom(a, b, m)
    # degree 2: the weighted fundamental class maps to a cycle wrapping
    # both cone circles twice
    mat = k[2].matrix
    assert mat.cols == 1
    assert lattice_hnf(mat) == IntMatrix([[2, 2]])


def test_connecting_hom_class_ignores_preimage_choice():
    # perturbing the solved preimage by a chain of the intersection
    # must not change the resulting class
    from orbihom.orbmodel import Cell, WeightedCellComplex, tensor_weighted

    base = WeightedCellComplex(
        name="twocircle", dim=1,
        cells=(
            Cell("P", 0, 1), Cell("Q", 0, 1),
            Cell("E1", 1, 1, (("P", -1), ("Q", 1))),
            Cell("E2", 1, 1, (("Q", -1), ("P", 1))),
        ),
        subs={"left": ("P", "Q", "E1"), "right": ("P", "Q", "E2")},
    )
    fiber = WeightedCellComplex(
        name="circle", dim=1,
        cells=(Cell("z", 0, 1), Cell("t", 1, 1)),
    )
    torus = tensor_weighted(base, fiber)
    m = torus.chain_complex()
    a = subcomplex(m, torus.sub_cells("left"))
    b = subcomplex(m, torus.sub_cells("right"))
    inter = subcomplex(m, torus.sub_cells("left") & torus.sub_cells("right"))
    h_i = homology(inter)

    from orbihom.intlin import hstack, solve_linear

    q = 1
    incl_a = inclusion_map(m, torus.sub_cells("left"))
    incl_b = inclusion_map(m, torus.sub_cells("right"))
    h_m = homology(m)
    z = h_m.degree(q).kernel.column(0)
    stacked = hstack(incl_a.matrix(q), incl_b.matrix(q))
    sol = solve_linear(stacked, z)
    assert sol is not None
    xa = list(sol[: a.dim(q)])

    def push_class(xa_vec):
        bd = a.d(q).apply(xa_vec)
        coeffs = {}
        for i, lab in enumerate(a.basis[q - 1]):
            if bd[i]:
                coeffs[lab] = bd[i]
        vec = inter.vector(q - 1, coeffs)
        return h_i.degree(q - 1).express(vec)

    first = push_class(tuple(xa))
    # add the boundary contribution of an intersection 1-cell: the new
    # preimage pair is (xa + w, xb - w), still mapping onto z
    w_label = inter.basis[q][0]
    xa2 = list(xa)
    xa2[a.position(q, w_label)] += 1
    second = push_class(tuple(xa2))
    assert first == second


def test_connecting_hom_cover_must_cover():
    c = half_disk()
    a = subcomplex(c, {"p", "q", "t", "m", "U"})
    b = subcomplex(c, {"p", "q", "m"})
    with pytest.raises(ValueError):
        connecting_hom(a, b, c)
