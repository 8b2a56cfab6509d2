import pytest

from greenberg import corpus
from greenberg.algebra import BaseRingSpec, ga_build, ga_points
from greenberg.errors import IdentityNotOnScheme, LevelMismatch, MissingVariable, RingMismatch
from greenberg.fields import alg_build
from greenberg.schemes import (
    GroupSchemeSpec,
    group_lie_dim,
    matrix_rank,
    morphism,
    poly_over,
    presentation,
    scheme_product,
    scheme_reduce_level,
    solve_over_ga,
    solve_over_k,
    special_fiber,
)


@pytest.fixture(scope="module")
def W3_1(F3):
    return ga_build(BaseRingSpec("mixed", F3), 1)


@pytest.fixture(scope="module")
def W2_1(F2):
    return ga_build(BaseRingSpec("mixed", F2), 1)


def test_product_of_lines_is_plane(F2):
    X = presentation(F2, ["x"])
    Y = presentation(F2, ["y"])
    P = scheme_product(X, Y)
    assert P.vars == ("x", "y") and P.gens == ()


def test_product_of_multiplicative_groups(F2):
    P = scheme_product(presentation(F2, ["x", "u"], ["x*u - 1"]), presentation(F2, ["y", "v"], ["y*v - 1"]))
    assert P.vars == ("x", "u", "y", "v")
    assert P.gens_text() == ["u*x + 1", "v*y + 1"]


def test_product_renames_on_clash(F2):
    X = presentation(F2, ["x"], ["x^2 + x"])
    P = scheme_product(X, X)
    assert P.vars == ("a_x", "b_x")


@pytest.mark.parametrize("name", ["A1", "Gm", "x^2-1", "x*y-pi"])
def test_product_counts_multiply(name, W2_1, dual2):
    Z = corpus.scheme(name, W2_1)
    Y = corpus.scheme("x^2-1", W2_1)
    P = scheme_product(Z, Y)
    assert solve_over_ga(P, dual2)[0] == solve_over_ga(Z, dual2)[0] * solve_over_ga(Y, dual2)[0]


def test_reduce_level_kills_pi(F3):
    ga = ga_build(BaseRingSpec("equal", F3), 1)
    Z = presentation(ga, ["x", "y"], ["y^2 - pi*x"])
    low = scheme_reduce_level(Z, 0)
    assert low.ring.level == 0
    assert special_fiber(low).gens_text() == ["y^2"]


def test_reduce_level_same_level_is_identity(W3_1):
    Z = corpus.scheme("Gm", W3_1)
    assert scheme_reduce_level(Z, 1) is Z


def test_reduce_level_keeps_multiplicative_group(F2):
    ga = ga_build(BaseRingSpec("mixed", F2, (0, -2)), 3)
    Z = corpus.scheme("Gm", ga)
    for M in range(4):
        low = scheme_reduce_level(Z, M)
        assert low.gens == corpus.scheme("Gm", ga_build(ga.base, M)).gens


def test_reduce_level_rejects_raising(W3_1):
    with pytest.raises(LevelMismatch):
        scheme_reduce_level(corpus.scheme("A1", W3_1), 2)


def test_square_roots_of_one_mod_9(W3_1, F3):
    A = alg_build("field", F3)
    Z = presentation(W3_1, ["x"], ["x^2 - 1"])
    count, sols = solve_over_ga(Z, A, collect=True)
    assert count == 2
    pts = ga_points(W3_1, A)
    # Z/9 elements by their integer value
    value = {pts.encode(pts.ops.coeff(W3_1.from_int(c), W3_1)): c for c in range(9)}
    assert sorted(value[s[0]] for s in sols) == [1, 8]


def test_units_mod_9(W3_1, F3):
    assert solve_over_ga(corpus.scheme("Gm", W3_1), alg_build("field", F3))[0] == 6


@pytest.mark.parametrize("N", [0, 1, 2])
def test_line_points_are_the_whole_ring(N, F2, dual2):
    ga = ga_build(BaseRingSpec("mixed", F2, (0, -2)), N)
    assert solve_over_ga(corpus.scheme("A1", ga), dual2)[0] == dual2.size ** (N + 1)


def test_solve_over_field(F2):
    A = alg_build("field", F2)
    assert solve_over_k(presentation(F2, ["x"], ["x^2 + x"]), A)[0] == 2
    assert solve_over_k(presentation(F2, ["a", "b", "c"]), A)[0] == 8


def test_graph_of_squaring_over_dual_numbers(F2, dual2):
    # u is determined by x, and x ranges over all four elements
    Z = presentation(F2, ["x", "u"], ["x^2 - u"])
    count, sols = solve_over_k(Z, dual2, collect=True)
    assert count == 4
    R = dual2.ring
    assert all(R.mul(x, x) == u for x, u in sols)


def test_solve_over_k_rejects_ga(W3_1, F3):
    with pytest.raises(RingMismatch):
        solve_over_k(corpus.scheme("A1", W3_1), alg_build("field", F3))


def test_lie_dims(F2, F3, W3_1):
    assert group_lie_dim(GroupSchemeSpec(presentation(F2, ["x", "u"], ["x*u - 1"]), (1, 1))) == 1
    assert group_lie_dim(GroupSchemeSpec(presentation(F2, ["x"]), (0,))) == 1
    mu3 = GroupSchemeSpec(presentation(F3, ["x"], ["x^3 - 1"]), (1,))
    assert mu3.lie_dim == 1
    assert corpus.group("Gm^2", W3_1).lie_dim == 2


def test_identity_must_lie_on_scheme(F3):
    with pytest.raises(IdentityNotOnScheme):
        GroupSchemeSpec(presentation(F3, ["x", "u"], ["x*u - 1"]), (0, 0))


def test_matrix_rank(F3):
    assert matrix_rank([[1, 2], [2, 1]], F3) == 1
    assert matrix_rank([[1, 0], [0, 1]], F3) == 2
    assert matrix_rank([], F3) == 0


def test_poly_over_pi_constants(W2_1):
    f = poly_over(W2_1, "x*y - pi", ("x", "y"))
    assert f.to_text() == "x*y + [0,1]"


def test_pi_beyond_level_vanishes(W2_1):
    assert poly_over(W2_1, "x - pi^2", ("x",)).to_text() == "x"


def test_morphism_needs_all_images(W2_1):
    A1 = corpus.scheme("A1", W2_1)
    A2 = corpus.scheme("A2", W2_1)
    with pytest.raises(MissingVariable):
        morphism(A1, A2, {"x": "x"})
    f = morphism(A1, A2, {"x": "x", "y": "x^2"})
    assert f.images["y"].to_text() == "x^2"


def test_generators_must_use_declared_variables(F2):
    with pytest.raises(MissingVariable):
        presentation(F2, ["x"], ["x*y"])
