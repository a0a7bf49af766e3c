from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from foliage.catalog import builtin_catalog
from foliage.exterior import (
    Form,
    LieAlgebra,
    ce_d,
    interior,
    lie_derivative_form,
    validate_algebra,
    wedge,
)

H3 = LieAlgebra.from_brackets(3, {(1, 2): {3: 1}}, name="h3")
X5 = LieAlgebra.from_brackets(5, {(1, 2): {4: 1}, (1, 3): {5: 1}, (2, 4): {5: 1}}, name="x5")
SL2 = LieAlgebra.from_brackets(3, {(1, 2): {3: 1}, (1, 3): {1: -1}, (2, 3): {2: 1}}, name="sl2")
MODELS = [entry.document.model() for entry in builtin_catalog()]


def forms(dim, degree):
    masks = st.sets(st.sampled_from(range(1, 2 ** dim)).filter(lambda m: bin(m).count("1") == degree), max_size=4)
    return st.builds(
        lambda ms, cs: Form(dim, degree, {m: c for m, c in zip(sorted(ms), cs)}),
        masks,
        st.lists(st.integers(-3, 3), min_size=4, max_size=4),
    )


def test_basis_sign_and_evaluation():
    assert Form.basis(3, 2, 1) == -Form.basis(3, 1, 2)
    e12 = Form.basis(3, 1, 2)
    assert e12.evaluate((1, 0, 0), (0, 1, 0)) == 1
    assert e12.evaluate((0, 1, 0), (1, 0, 0)) == -1


def test_wedge_examples():
    e1, e2, e3 = (Form.basis(3, k) for k in (1, 2, 3))
    assert wedge(e1, e2) == Form.basis(3, 1, 2)
    assert wedge(e2, e1) == -Form.basis(3, 1, 2)
    assert not wedge(e1, e1)
    assert wedge(wedge(e3, e1), e2) == Form.basis(3, 1, 2, 3)


def test_heisenberg_differential():
    # d e^3 = -e^12 (no factor 1/2)
    assert ce_d(H3, Form.basis(3, 3)) == -Form.basis(3, 1, 2)
    assert not ce_d(H3, Form.basis(3, 1))
    assert not ce_d(H3, Form.basis(3, 1, 3))


def test_interior_example():
    a = Form.basis(3, 1, 2) + Form.basis(3, 2, 3) * 2
    assert interior((0, 1, 0), a) == -Form.basis(3, 1) + Form.basis(3, 3) * 2


def test_string_rendering():
    assert str(Form.basis(3, 1, 2) * -1 + Form.basis(3, 3) * 0) == "-e^12"
    assert str(Form.basis(3, 3) * Fraction(1, 2)) == "1/2e^3"


@pytest.mark.parametrize("model", MODELS, ids=lambda m: m.name)
def test_catalog_models_satisfy_jacobi_and_d_squared(model):
    assert validate_algebra(model).valid
    m = model.dim
    for k in range(m - 1):
        assert (model.d_matrix(k + 1) @ model.d_matrix(k)).is_zero()


def test_jacobi_violation_witness():
    bad = LieAlgebra.from_brackets(3, {(1, 2): {3: 1}, (2, 3): {3: 1}, (1, 3): {1: 1}})
    check = validate_algebra(bad)
    assert not check.valid
    assert check.triple == (1, 2, 3)
    assert "(1, 2, 3)" in check.describe()


@pytest.mark.parametrize("model", [H3, X5, SL2], ids=lambda m: m.name)
def test_differential_matches_evaluation_formula(model):
    alg = oracles.Algebra(model.dim, {(i + 1, j + 1): {k + 1: c for k, c in enumerate(v) if c}
                                      for (i, j), v in model.brackets.items()})
    for k in range(model.dim):
        ours = model.d_matrix(k)
        ref = oracles.d_matrix(alg, k)
        assert sp.Matrix([[sp.Rational(str(x)) for x in r] for r in ours.rows]) == ref


@settings(max_examples=40, deadline=None)
@given(forms(5, 1), forms(5, 2), forms(5, 2))
def test_wedge_associative_and_graded_commutative(a, b, c):
    assert wedge(wedge(a, b), c) == wedge(a, wedge(b, c))
    assert wedge(a, b) == wedge(b, a) * (-1) ** (a.degree * b.degree)


@settings(max_examples=40, deadline=None)
@given(forms(5, 1), forms(5, 2))
def test_leibniz_rule(a, b):
    lhs = ce_d(X5, wedge(a, b))
    rhs = wedge(ce_d(X5, a), b) + wedge(a, ce_d(X5, b)) * (-1) ** a.degree
    assert lhs == rhs


@settings(max_examples=30, deadline=None)
@given(forms(3, 1), st.lists(st.integers(-2, 2), min_size=3, max_size=3))
def test_cartan_formula_on_sl2(a, v):
    v = tuple(v)
    cartan = interior(v, ce_d(SL2, a)) + ce_d(SL2, interior(v, a))
    assert lie_derivative_form(SL2, v, a) == cartan


@settings(max_examples=30, deadline=None)
@given(forms(5, 2), st.lists(st.integers(-2, 2), min_size=5, max_size=5))
def test_interior_is_antiderivation(a, v):
    v = tuple(v)
    b = Form.basis(5, 3)
    assert interior(v, wedge(a, b)) == wedge(interior(v, a), b) + wedge(a, interior(v, b))
