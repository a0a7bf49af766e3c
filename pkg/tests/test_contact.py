from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from foliage.catalog import builtin_catalog, catalog_entry
from foliage.contact import (
    CONVENTION,
    FAIL,
    INCOMPLETE,
    Level,
    classify,
    is_contact,
    nijenhuis,
    reeb_field,
    synthesize_structure,
    transverse_J,
)
from foliage.errors import InputError, NotContactError
from foliage.exterior import Form, ce_d
from foliage.linalg import Gram, Matrix


def doc(name):
    return catalog_entry(name).document


def bundle(name, **kw):
    return doc(name).bundle().with_fields(**kw)


def oracle_level(d):
    alg = oracles.Algebra(d.dimension, {ij: dict(cs) for ij, cs in d.brackets})
    to_sp = lambda M: None if M is None else sp.Matrix([[sp.Rational(str(x)) for x in r] for r in M.rows])
    return oracles.contact_tower(alg, list(map(str, d.eta)), to_sp(d.phi), to_sp(d.metric))


def test_convention_tag():
    assert CONVENTION == "d-no-half"


@pytest.mark.parametrize("entry", builtin_catalog(), ids=lambda e: e.name)
def test_catalog_classification(entry):
    assert classify(entry.document.bundle()).level.value == entry.expected


@pytest.mark.parametrize("entry", [e for e in builtin_catalog() if e.document.eta is not None], ids=lambda e: e.name)
def test_catalog_agrees_with_pointwise_oracle(entry):
    assert oracle_level(entry.document) == entry.expected


def test_heisenberg_contact_coefficient_and_reeb():
    m = doc("h5").model()
    eta = Form.basis(5, 5)
    v = is_contact(m, eta)
    assert v and v.top_coefficient == 2
    assert reeb_field(m, eta) == (0, 0, 0, 0, 1)


def test_even_dimension_and_abelian_errors():
    with pytest.raises(InputError):
        is_contact(doc("kt4").model(), Form.basis(4, 4))
    with pytest.raises(NotContactError):
        reeb_field(doc("abelian3").model(), Form.basis(3, 3))


def test_negated_phi_fails_positivity():
    b = bundle("h3")
    verdict = classify(b.with_fields(phi=b.phi.scale(-1)))
    assert verdict.level == Level.CONTACT
    cm = verdict.sub_checks["contact_metric"]
    assert cm.status == FAIL
    assert cm.detail["positivity"] is False
    assert "positivity" in cm.witness
    assert cm.witness["compatibility_pair"] == [1, 2]


def test_sl2_is_contact_metric_not_k_contact():
    verdict = classify(bundle("sl2"))
    assert verdict.level == Level.CONTACT_METRIC
    kc = verdict.sub_checks["k_contact"].to_dict()
    assert kc["status"] == FAIL
    assert kc["witness"] == {"killing_pair": [1, 1], "value": "2"}


def test_wrong_metric_witness():
    verdict = classify(bundle("h3", metric=Gram(Matrix.diagonal([1, 2, 1]))))
    mc = verdict.sub_checks["metric_compat"].to_dict()
    assert mc["witness"] == {"pair": [1, 1], "lhs": "2", "rhs": "1"}


def test_reeb_mismatch_is_reported():
    verdict = classify(bundle("h3", xi=(1, 0, 1)))
    assert verdict.level == Level.NOT_CONTACT
    assert verdict.sub_checks["reeb"].witness == {"expected": ["0", "0", "1"], "given": ["1", "0", "1"]}


def test_missing_structures():
    assert classify(bundle("h3", eta=None)).level == Level.INCOMPLETE
    v = classify(bundle("h3", phi=None, metric=None))
    assert v.level == Level.CONTACT
    assert v.sub_checks["metric_compat"].status == INCOMPLETE


def _h5_phi(cols):
    return Matrix.from_columns(cols, 5)


def test_h5_mixed_phi_is_not_normal():
    phi = _h5_phi([(0, 0, 1, 0, 0), (0, 0, 0, -1, 0), (-1, 0, 0, 0, 0), (0, 1, 0, 0, 0), (0, 0, 0, 0, 0)])
    b = bundle("h5", phi=phi, metric=None)
    normal = classify(b).sub_checks["normality"].to_dict()
    assert normal["status"] == FAIL
    first = normal["witness"]["failures"][0] if "failures" in normal["witness"] else normal["witness"]
    assert first["pair"] == [1, 2]
    assert first["residual"][4] == "-2"
    tj = transverse_J(b)
    assert tj.square_is_minus_id and tj.foliated and tj.integrable


def test_h5_twisted_phi_is_normal_but_not_contact_metric():
    # e1 -> e2, e3 -> -e4: the second block is the conjugate rotation
    phi = _h5_phi([(0, 1, 0, 0, 0), (-1, 0, 0, 0, 0), (0, 0, 0, -1, 0), (0, 0, 1, 0, 0), (0, 0, 0, 0, 0)])
    verdict = classify(bundle("h5", phi=phi))
    assert verdict.level == Level.CONTACT
    assert verdict.sub_checks["normality"].passed
    cm = verdict.sub_checks["contact_metric"]
    assert cm.witness["compatibility_pair"] == [3, 4]
    assert cm.detail["positivity"] is False


def test_nijenhuis_standard_h3_is_minus_d_eta_xi():
    b = bundle("h3")
    N = nijenhuis(b.model, b.phi, (1, 0, 0), (0, 1, 0))
    deta = ce_d(b.model, b.eta)
    assert tuple(N) == (0, 0, -deta.coeffs[0b011])


def test_transverse_J_on_h3():
    tj = transverse_J(bundle("h3"))
    assert tj.square_is_minus_id and tj.foliated and tj.integrable
    assert tj.matrix.shape == (2, 2)


@pytest.mark.parametrize("name", ["h3", "h5", "h7"])
def test_synthesize_recovers_catalog_structure(name):
    b = bundle(name)
    k = b.model.dim - 1
    pairs = [(2 * i, 2 * i + 1) for i in range(k // 2)]
    rows = [[0] * k for _ in range(k)]
    for a, c in pairs:
        rows[c][a] = 1
        rows[a][c] = -1
    s = synthesize_structure(b.model, b.eta, b.xi, Matrix.identity(k), Matrix(rows))
    assert s.phi == b.phi
    assert s.metric == b.metric
    assert classify(s).level == Level.SASAKIAN


def test_synthesize_rejects_bad_data():
    b = bundle("h3")
    with pytest.raises(InputError):
        synthesize_structure(b.model, b.eta, b.xi, Matrix.identity(2), Matrix.identity(2))
    with pytest.raises(InputError):
        synthesize_structure(b.model, b.eta, (0, 0, 2), Matrix.identity(2), Matrix([[0, -1], [1, 0]]))


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 4), st.integers(-3, 3))
def test_scaled_transverse_metric_tower_matches_oracle(a, b):
    """A scaled J-invariant metric on ker eta with a sheared J; the oracle decides independently."""
    h3 = bundle("h3")
    J = Matrix([[b, -1 - b * b], [1, -b]])
    gbar = J.T @ J + Matrix.identity(2)
    gbar = gbar.scale(a)
    try:
        s = synthesize_structure(h3.model, h3.eta, h3.xi, gbar, J)
    except InputError:
        # not J-invariant; the oracle is not consulted
        return
    alg = oracles.Algebra(3, {(1, 2): {3: 1}})
    to_sp = lambda M: sp.Matrix([[sp.Rational(str(x)) for x in r] for r in M.rows])
    expected = oracles.contact_tower(alg, [0, 0, 1], to_sp(s.phi), to_sp(s.metric.matrix))
    assert classify(s).level.value == expected


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(-2, 2), min_size=3, max_size=3))
def test_is_contact_matches_oracle_on_sl2(coeffs):
    m = doc("sl2").model()
    eta = Form(3, 1, {1 << i: Fraction(c) for i, c in enumerate(coeffs) if c})
    alg = oracles.Algebra(3, {(1, 2): {3: 1}, (1, 3): {1: -1}, (2, 3): {2: 1}})
    expected = oracles.contact_tower(alg, coeffs) != "NotContact"
    assert bool(is_contact(m, eta)) == expected
