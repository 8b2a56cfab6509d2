import itertools

import pytest

from greenberg import corpus
from greenberg.algebra import BaseRingSpec, ga_build, ga_points
from greenberg.errors import LevelMismatch, RingMismatch
from greenberg.fields import alg_build
from greenberg.schemes import morphism, presentation, scheme_product, scheme_reduce_level, solve_over_ga
from greenberg.transform import (
    change_level,
    check_cartesian_etale,
    check_surjective_lift,
    coord_name,
    gr_transform,
    gr_transform_morphism,
    ker_change_level_count,
    map_points,
    points,
    rat_pts_bijection,
    truncate_points,
)
from greenberg.witt import WittRing


def W(F, N):
    return ga_build(BaseRingSpec("mixed", F), N)


def test_coordinate_names():
    assert coord_name("x", 3) == "x3"
    assert coord_name("x1", 0) == "x1_0"


def test_square_zero_ideal_equal_char(F3):
    ga = ga_build(BaseRingSpec("equal", F3), 1)
    T = gr_transform(presentation(ga, ["x", "y"], ["y^2 - pi*x"])).result
    assert T.vars == ("x0", "x1", "y0", "y1")
    expected = presentation(F3, T.vars, ["y0^2", "x0 - 2*y0*y1"]).gens
    got = T.gens
    assert got[0] == expected[0]
    assert got[1] == expected[1] or got[1] == -expected[1]


def test_line_goes_to_affine_space(F2):
    ga = ga_build(BaseRingSpec("mixed", F2, (0, 0, -2)), 2)
    T = gr_transform(corpus.scheme("A1", ga))
    assert T.result.vars == ("x0", "x1", "x2") and T.result.gens == ()


def test_shape_of_result(F2):
    ga = ga_build(BaseRingSpec("mixed", F2, (0, -2)), 2)
    T = gr_transform(corpus.scheme("Gm", ga))
    assert len(T.result.vars) == 6 and len(T.result.gens) == 3
    assert T.var_map == {"x": ["x0", "x1", "x2"], "y": ["y0", "y1", "y2"]}


def test_square_roots_of_one_mod_4(F2):
    T = gr_transform(presentation(W(F2, 1), ["x"], ["x^2 - 1"]))
    assert len(points(T, alg_build("field", F2))) == 2


@pytest.mark.parametrize("base", ["k2[[t]]", "W(F3)", "t^2-2"])
def test_level_zero_is_special_fiber(base):
    b = corpus.bases()[base]
    ga = ga_build(b, 0)
    Z = corpus.scheme("y^2-pi*x", ga)
    T = gr_transform(Z).result
    assert T.vars == ("x0", "y0") and T.gens_text() == ["y0^2"]


def test_transform_needs_ga(F2):
    with pytest.raises(RingMismatch):
        gr_transform(presentation(F2, ["x"]))


# -- points ------------------------------------------------------------------


def _rat_pts_cells():
    for bname, b in corpus.bases().items():
        for N in range(3):
            for aname in corpus.algebras(b.p):
                yield bname, N, aname


@pytest.mark.parametrize("bname,N,aname", list(_rat_pts_cells()))
def test_points_match_ring_points(bname, N, aname):
    b = corpus.bases()[bname]
    ga = ga_build(b, N)
    A = corpus.algebras(b.p)[aname]
    for name in corpus.SCHEMES:
        report = rat_pts_bijection(corpus.scheme(name, ga), A)
        assert report.bijective, (name, report)


def test_product_counts(F3):
    ga = W(F3, 1)
    A = alg_build("field", F3)
    X, Y = corpus.scheme("Gm", ga), corpus.scheme("x^2-1", ga)
    n = len(points(gr_transform(scheme_product(X, Y)), A))
    assert n == len(points(gr_transform(X), A)) * len(points(gr_transform(Y), A)) == 12


# -- morphisms -----------------------------------------------------------------


def test_squaring_matches_witt_square(F2):
    ga = W(F2, 1)
    A1 = corpus.scheme("A1", ga)
    f = gr_transform_morphism(morphism(A1, A1, {"x": "x^2"}))
    assert {v: g.to_text() for v, g in f.images.items()} == {"x0": "x0^2", "x1": "0"}
    A = alg_build("field", F2)
    pts = list(itertools.product(range(2), repeat=2))
    got = map_points(f, pts, A.ring)
    W2 = WittRing(2, 2, A.ring)
    assert got == [tuple(W2.mul(p, p)) for p in pts]


def test_identity_morphism(F3):
    ga = W(F3, 1)
    Z = corpus.scheme("Gm", ga)
    f = gr_transform_morphism(morphism(Z, Z, {"x": "x", "y": "y"}))
    assert all(g.to_text() == v for v, g in f.images.items())


def test_constant_morphism(F3):
    ga = W(F3, 1)
    point = presentation(ga, [])
    A1 = corpus.scheme("A1", ga)
    f = gr_transform_morphism(morphism(point, A1, {"x": "4"}))
    # 4 = (1, 1) in W_2(F_3)
    assert [f.images[v].to_text() for v in ("x0", "x1")] == ["1", "1"]


@pytest.mark.parametrize("N", [1, 2])
def test_functoriality_on_points(N, F2, dual2):
    ga = ga_build(BaseRingSpec("mixed", F2, (0, -2)), N)
    A1 = corpus.scheme("A1", ga)
    A2 = corpus.scheme("A2", ga)
    f = morphism(A1, A2, {"x": "x^2 + pi", "y": "x*pi + 1"})
    g = morphism(A2, A1, {"x": "x*y - y^3"})
    gf = morphism(A1, A1, {"x": "(x^2 + pi)*(x*pi + 1) - (x*pi + 1)^3"})
    R = dual2.ring
    pts = points(gr_transform(A1), dual2)
    Gf, Gg, Ggf = (gr_transform_morphism(h) for h in (f, g, gf))
    assert map_points(Gg, map_points(Gf, pts, R), R) == map_points(Ggf, pts, R)
    # evaluating directly in R_N(A) agrees with the transform
    P = ga_points(ga, dual2)
    ring = P.ring
    pi = ring.ga_encode(ga.pi)
    for p, img in zip(pts, map_points(Ggf, pts, R)):
        x = P.encode(p)
        a = ring.add(ring.mul(x, x), pi)
        b = ring.add(ring.mul(x, pi), ring.one)
        assert P.encode(img) == ring.sub(ring.mul(a, b), ring.pow(b, 3))


# -- change of level -------------------------------------------------------------


def test_change_level_same_level_is_identity(F3):
    f = change_level(corpus.scheme("Gm", W(F3, 1)), 1)
    assert all(g.to_text() == v for v, g in f.images.items())


def test_change_level_projects_line(F2):
    f = change_level(corpus.scheme("A1", W(F2, 2)), 0)
    assert f.target.vars == ("x0",)
    assert f.images["x0"].to_text() == "x0"


def test_change_level_rejects_raising(F2):
    with pytest.raises(LevelMismatch):
        change_level(corpus.scheme("A1", W(F2, 1)), 2)


def test_units_mod_9_fibres(F3):
    Z = corpus.scheme("Gm", W(F3, 1))
    A = alg_build("field", F3)
    f = change_level(Z, 0)
    high = points(gr_transform(Z), A)
    images = map_points(f, high, A.ring)
    assert len(high) == 6
    fibres = {}
    for p, q in zip(high, images):
        fibres.setdefault(q, []).append(p)
    assert len(fibres) == 2 and all(len(v) == 3 for v in fibres.values())


@pytest.mark.parametrize("bname", ["W(F2)", "t^2-2", "k2[[t]]"])
@pytest.mark.parametrize("name", list(corpus.SCHEMES))
def test_truncation_lands_on_lower_level(bname, name, dual2):
    ga = ga_build(corpus.bases()[bname], 2)
    Z = corpus.scheme(name, ga)
    high, low = gr_transform(Z), gr_transform(scheme_reduce_level(Z, 1))
    lower = set(points(low, dual2))
    assert set(truncate_points(points(high, dual2), high, low)) <= lower


@pytest.mark.parametrize("name", list(corpus.SCHEMES))
@pytest.mark.parametrize("bname", ["W(F2)", "t^2-2", "k2[[t]]", "W(F3)"])
def test_smooth_schemes_lift(name, bname):
    b = corpus.bases()[bname]
    if not corpus.is_smooth(name, b.p):
        pytest.skip("not smooth over this base")
    ga = ga_build(b, 2)
    Z = corpus.scheme(name, ga)
    for aname, A in corpus.algebras(b.p).items():
        for m, i in [(0, 1), (0, 2), (1, 1)]:
            report = check_surjective_lift(Z, m, i, A)
            assert report.surjective, (aname, m, i, report.non_lifting)


def test_non_smooth_witness(F2):
    Z = corpus.scheme("x*y-pi", W(F2, 1))
    report = check_surjective_lift(Z, 0, 1, alg_build("field", F2))
    assert report.non_lifting == [(0, 0)]
    assert report.lower_points == 3


def test_cusp_of_x2_x_1_does_not_lift_mod_9(F3):
    report = check_surjective_lift(corpus.scheme("x^2+x+1", W(F3, 1)), 0, 1, alg_build("field", F3))
    assert report.non_lifting == [(1,)]


def _etale(ga):
    src = presentation(ga, *corpus.ETALE["source"])
    tgt = presentation(ga, *corpus.ETALE["target"])
    return morphism(src, tgt, corpus.ETALE["images"])


def test_etale_square_root_is_cartesian(F3):
    report = check_cartesian_etale(_etale(W(F3, 1)), 0, 1, alg_build("field", F3))
    assert report.bijective and report.source_points == report.fiber_product_points == 6


def test_open_immersion_is_cartesian(F2, dual2):
    ga = ga_build(BaseRingSpec("mixed", F2, (0, -2)), 2)
    src = presentation(ga, ["x", "t"], ["x*t - 1"])
    f = morphism(src, corpus.scheme("A1", ga), {"x": "x"})
    for m, i in [(0, 1), (0, 2), (1, 1)]:
        assert check_cartesian_etale(f, m, i, dual2).bijective


def test_identity_is_cartesian(F2, dual2):
    Z = corpus.scheme("x*y-pi", W(F2, 2))
    f = morphism(Z, Z, {"x": "x", "y": "y"})
    assert check_cartesian_etale(f, 0, 2, dual2).bijective


def test_non_etale_map_is_not_cartesian(F3):
    # x -> x^2 on the line is ramified at 0 away from 2; over F_3 the fibres jump
    ga = W(F3, 1)
    A1 = corpus.scheme("A1", ga)
    report = check_cartesian_etale(morphism(A1, A1, {"x": "x^3"}), 0, 1, alg_build("field", F3))
    assert not report.bijective and report.witnesses


# -- group kernels ----------------------------------------------------------------


@pytest.mark.parametrize("gname", list(corpus.GROUPS))
@pytest.mark.parametrize("bname", ["W(F2)", "W(F3)", "t^2-2", "k3[[t]]"])
def test_kernel_counts(gname, bname):
    b = corpus.bases()[bname]
    ga = ga_build(b, 2)
    G = corpus.group(gname, ga)
    d = corpus.group_dim(gname)
    for A in corpus.algebras(b.p).values():
        for m, i in [(0, 1), (1, 1), (0, 2)]:
            assert ker_change_level_count(G, m, i, A) == A.size ** (i * d)


def test_units_congruent_to_one_mod_3(F3):
    G = corpus.group("Gm", W(F3, 1))
    assert ker_change_level_count(G, 0, 1, alg_build("field", F3)) == 3


@pytest.mark.parametrize("p,q", [(2, 2), (3, 3), (2, 4)])
@pytest.mark.parametrize("n", [0, 1, 2])
def test_unit_counts(p, q, n):
    A = corpus.algebras(p)[f"F{q}"]
    for b in corpus.bases().values():
        if b.p == p:
            Z = corpus.scheme("Gm", ga_build(b, n))
            assert len(points(gr_transform(Z), A)) == (q - 1) * q**n


@pytest.mark.parametrize("gname", list(corpus.GROUPS))
def test_growth_law(gname, F2):
    d = corpus.group_dim(gname)
    for b in corpus.bases().values():
        if b.p != 2:
            continue
        for n in range(3):
            G = corpus.group(gname, ga_build(b, n))
            for aname in ("F2", "F4"):
                A = corpus.algebras(2)[aname]
                c = len(points(gr_transform(G.presentation), A))
                if n == 0:
                    assert c == solve_over_ga(G.presentation, A)[0]
                assert c == len(points(gr_transform(scheme_reduce_level(G.presentation, 0)), A)) * (A.size ** (n * d))

