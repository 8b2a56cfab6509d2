import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from greenberg.errors import BaseMismatch, DegreeTooLarge, NotPrime, Reducible, SizeGuard
from greenberg.fields import FiniteField, alg_build, alg_enumerate, ff_build, is_prime


def test_is_prime():
    assert [n for n in range(20) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19]


def test_field_examples():
    assert ff_build(2).q == 2
    F4 = ff_build(2, (1, 1, 1))
    assert F4.q == 4 and F4.d == 2
    with pytest.raises(Reducible):
        ff_build(2, (1, 0, 1))


def test_field_errors():
    with pytest.raises(NotPrime):
        ff_build(4)
    with pytest.raises(DegreeTooLarge):
        ff_build(2, (1, 0, 0, 0, 0, 1, 1))


def test_field_inverse_and_frobenius(F4):
    u = F4.gen()
    assert F4.mul(u, F4.inv(u)) == 1
    # u^2 = u + 1
    assert F4.frob(u) == F4.add(u, 1)
    assert F4.pow(u, 3) == 1
    with pytest.raises(ZeroDivisionError):
        F4.inv(0)


@pytest.mark.parametrize("p,modulus", [(2, (1,)), (3, (1,)), (5, (1,)), (2, (1, 1, 1)), (3, (1, 0, 1))])
def test_field_axioms(p, modulus):
    F = FiniteField(p, modulus)
    els = list(F.elements())
    assert len(els) == p ** (len(modulus) - 1 if len(modulus) > 1 else 1)
    for a, b, c in itertools.product(els, repeat=3):
        assert F.mul(a, F.mul(b, c)) == F.mul(F.mul(a, b), c)
        assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    for a in els:
        assert F.add(a, F.neg(a)) == 0
        if a:
            assert F.mul(a, F.inv(a)) == 1


def test_frobenius_is_bijective_on_fields(F4):
    assert sorted(F4.frob(a) for a in F4.elements()) == list(F4.elements())


def test_algebra_examples(F2, F3, dual2):
    A = alg_build("field", F3)
    assert A.size == 3 and A.decode(A.ring.one) == (1,)
    eps = dual2.encode((0, 1))
    assert dual2.size == 4 and dual2.ring.mul(eps, eps) == 0
    P = alg_build("product", alg_build("field", F2), alg_build("field", F2))
    assert P.size == 4 and P.decode(P.ring.one) == (1, 1)
    x, y = P.encode((1, 0)), P.encode((0, 1))
    assert P.ring.mul(x, y) == 0 and P.ring.add(x, y) == P.ring.one


def test_algebra_errors(F2, F3):
    with pytest.raises(BaseMismatch):
        alg_build("product", alg_build("field", F2), alg_build("field", F3))
    with pytest.raises(SizeGuard):
        alg_build("dual_numbers", F2, 13)


def test_enumeration_order(F2, F4, dual2):
    assert alg_enumerate(alg_build("field", F2)) == [(0,), (1,)]
    assert alg_enumerate(dual2) == [(0, 0), (1, 0), (0, 1), (1, 1)]
    assert [F4.fmt(a) for a in F4.elements()] == ["[0,0]", "[1,0]", "[0,1]", "[1,1]"]


def test_frobenius_not_onto_dual_numbers(dual2):
    assert sorted(dual2.frobenius_image()) == [0, 1]


@pytest.mark.parametrize(
    "kind,params",
    [
        ("field", ("F3",)),
        ("dual_numbers", ("F2", 3)),
        ("dual_numbers", ("F3", 2)),
        ("extension", ("F2", "F4")),
        ("product", ("F2", "F2[e]")),
    ],
)
def test_algebra_ring_axioms(kind, params, F2, F3, F4, dual2):
    named = {"F2": F2, "F3": F3, "F4": F4, "F2[e]": dual2}
    if kind == "product":
        args = (alg_build("field", named[params[0]]), named[params[1]])
    else:
        args = tuple(named.get(x, x) for x in params)
    A = alg_build(kind, *args)
    assert A.ring.check_axioms() == []


@given(st.integers(0, 8), st.integers(0, 8), st.integers(0, 8))
def test_f9_arithmetic_is_a_field(a, b, c):
    F = FiniteField(3, (1, 0, 1))
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
    if a:
        assert F.mul(a, F.inv(a)) == 1
