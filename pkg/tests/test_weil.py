import pytest

from greenberg import corpus
from greenberg.algebra import BaseRingSpec, ga_build
from greenberg.errors import NotAnExtension, NotPrimeFieldBase, PatternMismatch
from greenberg.fields import FiniteField, alg_build
from greenberg.poly import Poly
from greenberg.schemes import AffinePresentation, presentation, solve_over_k
from greenberg.transform import gr_transform
from greenberg.weil import (
    ext_build_equal,
    ext_build_field,
    ext_build_mixed,
    gamma_report,
    res_affine,
    res_point_bijection,
    unramified_base_change_counts,
    wr_gr_check,
)


def _wr_ext(name):
    p, kp, f, n = corpus.WR_EXTENSIONS[name]
    return ext_build_mixed(p, corpus.field(kp), f, n)


# -- builders -------------------------------------------------------------------


@pytest.mark.parametrize("k,kp,rank", [("F2", "F4", 2), ("F2", "F2", 1), ("F3", "F9", 2)])
def test_field_extensions(k, kp, rank):
    E = ext_build_field(corpus.field(k), corpus.field(kp))
    assert E.rank == rank and gamma_report(E).gamma == rank
    assert E.check_table() == []


def test_trivial_field_extension_table(F2):
    E = ext_build_field(F2, F2)
    assert E.table == (((1,),),)


def test_field_extension_needs_containment(F2, F3, F4):
    with pytest.raises(NotAnExtension):
        ext_build_field(F4, F2)
    with pytest.raises(NotAnExtension):
        ext_build_field(F2, F3)


def test_totally_ramified_square_zero(F2):
    E = ext_build_mixed(2, F2, (0, -2), 1)
    assert E.rank == 2 and E.gamma == 1
    assert E.base.char == 2 and E.top.level == 1
    # pi * pi = 0 in F_2[pi]/(pi^2)
    assert E.table[1][1] == (E.base.zero, E.base.zero)
    assert E.check_table() == []


def test_unramified_witt_length_two(F4):
    E = ext_build_mixed(2, F4, (), 2)
    assert E.rank == 2 and E.gamma == 2
    assert E.base.char == 4 and E.top.level == 1
    assert E.check_table() == []


def test_ramified_over_Z3():
    E = ext_build_mixed(3, FiniteField(3), (0, -3), 1)
    assert E.rank == 2 and E.check_table() == []


@pytest.mark.parametrize("name", list(corpus.WR_EXTENSIONS))
def test_grid_extensions_are_free(name):
    E = _wr_ext(name)
    p, kp, f, n = corpus.WR_EXTENSIONS[name]
    e = len(f) if f else 1
    assert E.rank == e * corpus.field(kp).d
    assert E.check_table() == []


def test_mixed_needs_matching_characteristic(F3):
    with pytest.raises(NotPrimeFieldBase):
        ext_build_mixed(2, F3, (), 1)


@pytest.mark.parametrize("M,e", [(0, 2), (0, 3), (1, 2)])
def test_equal_extensions(M, e, F2):
    E = ext_build_equal(F2, M, e)
    assert E.rank == e and E.gamma == 1
    assert E.labels[0] == "1"
    assert E.check_table() == []


def test_equal_square_zero_table(F3):
    E = ext_build_equal(F3, 0, 2)
    assert E.table == (((1, 0), (0, 1)), ((0, 1), (0, 0)))


def test_equal_rejects_bad_pattern(F2):
    with pytest.raises(PatternMismatch):
        ext_build_equal(F2, 0, 0)


# -- restriction ------------------------------------------------------------------


def test_line_restricts_to_affine_space(F2, F4):
    E = ext_build_field(F2, F4)
    R = res_affine(presentation(F4, ["x"]), E)
    assert R.vars == ("x0", "x1") and R.gens == ()


def test_restriction_agrees_with_transform_equal_char(F3):
    E = ext_build_equal(F3, 0, 2)
    Z = presentation(E.top, ["x", "y"], ["y^2 - pi*x"])
    R = res_affine(Z, E)
    T = gr_transform(Z).result
    assert R.vars == T.vars and R.gens == T.gens
    assert R.gens_text() == ["y0^2", "2*y0*y1 + 2*x0"]


@pytest.mark.parametrize("name", list(corpus.SCHEMES))
@pytest.mark.parametrize("e", [2, 3])
def test_restriction_is_transform_equal_char(name, e, F2):
    E = ext_build_equal(F2, 0, e)
    Z = corpus.scheme(name, E.top)
    assert res_affine(Z, E).gens == gr_transform(Z).result.gens


def test_artin_schreier_over_F4_has_no_points(F2, F4):
    # x^2 + x + u has no root in F_4: the trace of u is 1
    u = F4.gen()
    Z = AffinePresentation(F4, ("x",), (Poly.from_dict(F4, ("x",), {(2,): 1, (1,): 1, (0,): u}),))
    E = ext_build_field(F2, F4)
    R = res_affine(Z, E)
    assert solve_over_k(R, alg_build("field", F2))[0] == 0
    assert solve_over_k(Z, alg_build("field", F4))[0] == 0
    # while x^2 + x + 1 has both roots in F_4
    Z1 = presentation(F4, ["x"], ["x^2 + x + 1"])
    assert solve_over_k(res_affine(Z1, E), alg_build("field", F2))[0] == 2


def _extensions(F2, F3, F4):
    return [
        ext_build_field(F2, F4),
        ext_build_equal(F2, 0, 2),
        ext_build_equal(F2, 1, 2),
        ext_build_mixed(2, F2, (0, -2), 1),
        ext_build_mixed(2, F4, (), 2),
        ext_build_mixed(2, F4, (0, -2), 1),
    ]


@pytest.mark.parametrize("idx", range(6))
@pytest.mark.parametrize("name", ["A1", "Gm", "x^2-1", "x^2+x+1"])
def test_restriction_point_bijection(idx, name, F2, F3, F4, dual2):
    E = _extensions(F2, F3, F4)[idx]
    vars, gens = corpus.SCHEMES[name]
    Z = presentation(E.top, vars, gens)
    for A in (alg_build("field", F2), dual2):
        report = res_point_bijection(Z, E, A)
        assert report.bijective, report


# -- Res o Gr = Gr o Res ---------------------------------------------------------


@pytest.mark.parametrize("ext", list(corpus.WR_EXTENSIONS))
@pytest.mark.parametrize("name", list(corpus.WR_SCHEMES))
def test_restriction_commutes_with_transform(ext, name):
    E = _wr_ext(ext)
    vars, gens = corpus.WR_SCHEMES[name]
    Z = presentation(E.top, vars, gens)
    for cell in wr_gr_check(Z, E, corpus.wr_algebras(), name):
        assert cell.equal, cell.as_record()
        assert cell.witness is None


def test_totally_ramified_count_example():
    E = _wr_ext("Z2[pi]/(pi^2-2) n=1")
    Z = presentation(E.top, ["x"], ["x^2 - pi*x"])
    (cell,) = wr_gr_check(Z, E, {"F2": alg_build("field", FiniteField(2))})
    assert cell.lhs == cell.rhs == 2


def test_unramified_unit_count():
    E = _wr_ext("W(F4) n=2")
    Z = presentation(E.top, *corpus.WR_SCHEMES["Gm"])
    cells = wr_gr_check(Z, E, corpus.wr_algebras())
    assert [(c.lhs, c.rhs) for c in cells] == [(12, 12), (192, 192)]


def test_affine_space_case():
    E = _wr_ext("W(F4)[pi]/(pi^2-2) n=1")
    Z = presentation(E.top, ["x"], [])
    cells = wr_gr_check(Z, E, corpus.wr_algebras())
    assert [(c.lhs, c.rhs) for c in cells] == [(16, 16), (256, 256)]


@pytest.mark.parametrize("ext", corpus.TOTALLY_RAMIFIED)
@pytest.mark.parametrize("name", list(corpus.SCHEMES))
def test_totally_ramified_transform_counts(ext, name):
    # Gr_(n-1)(Res Z) and Gr'_(ne-1)(Z) have the same points
    E = _wr_ext(ext)
    Z = corpus.scheme(name, E.top)
    for A in corpus.wr_algebras().values():
        lhs = solve_over_k(gr_transform(Z).result, A)[0]
        rhs = solve_over_k(gr_transform(res_affine(Z, E)).result, A)[0]
        assert lhs == rhs


def test_record_shape():
    E = _wr_ext("Z2[pi]/(pi^2-2) n=1")
    Z = presentation(E.top, ["x"], [])
    (cell,) = wr_gr_check(Z, E, {"F2": alg_build("field", FiniteField(2))}, "A1")
    assert cell.as_record() == {"scheme": "A1", "algebra": "F2", "lhs": 4, "rhs": 4, "equal": True}


@pytest.mark.parametrize("N", [0, 1, 2])
@pytest.mark.parametrize("name", ["A1", "Gm", "x^2-1", "x^2+x+1", "x*y-pi"])
def test_unramified_base_change(N, name, F2, F4, dual2):
    Z = corpus.scheme(name, ga_build(BaseRingSpec("mixed", F2), N))
    for A in (alg_build("field", F2), dual2):
        lhs, rhs = unramified_base_change_counts(Z, F4, A)
        assert lhs == rhs
