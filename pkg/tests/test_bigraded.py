import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from foliage.basic import basic_subcomplex, full_complex
from foliage.bigraded import (
    BlockOp,
    aeppli,
    bott_chern,
    build_bigraded,
    ddbar_lemma_check,
    dolbeault,
    duality_check,
    frolicher_E1_collapse,
    frolicher_inequality,
    kahler_audit,
    kahler_form_from_metric,
    laplacians,
    lefschetz_ops,
    kahler_hodge_checks,
    transverse_star,
)
from foliage.catalog import catalog_entry
from foliage.errors import InputError
from foliage.exterior import Form
from foliage.linalg import Matrix
from foliage.scalars import Gauss

# frozen from the sympy coframe oracle (rows r, columns s)
DIAMONDS = {
    "h3": {t: [[1, 1], [1, 1]] for t in ("dolbeault", "bc", "aeppli")},
    "h5": {t: [[1, 2, 1], [2, 4, 2], [1, 2, 1]] for t in ("dolbeault", "bc", "aeppli")},
    "kt4": {
        "dolbeault": [[1, 2, 1], [1, 2, 1], [1, 2, 1]],
        "bc": [[1, 1, 1], [1, 3, 2], [1, 2, 1]],
        "aeppli": [[1, 2, 1], [2, 3, 1], [1, 1, 1]],
    },
}
COFRAMES = {
    "h3": [{(1,): 1, (2,): sp.I}],
    "h5": [{(1,): 1, (2,): sp.I}, {(3,): 1, (4,): sp.I}],
    "kt4": [{(1,): 1, (2,): sp.I}, {(3,): 1, (4,): sp.I}],
}

_cache = {}


def doc(name):
    return catalog_entry(name).document


def build(name):
    if name not in _cache:
        d = doc(name)
        m = d.model()
        leaf = d.leaf_direction(m)
        basic = full_complex(m) if leaf is None else basic_subcomplex(m, leaf)
        _cache[name] = build_bigraded(basic, d.complex_structure(), d.gram())
    return _cache[name]


def omega(name):
    d = doc(name)
    return d.omega_form() or kahler_form_from_metric(d.dimension, d.complex_structure(), d.gram())


def oracle(name):
    d = doc(name)
    alg = oracles.Algebra(d.dimension, {ij: dict(cs) for ij, cs in d.brackets})
    return oracles.Bigraded(alg, COFRAMES[name])


def as_rows(table, q):
    return [[table[(r, s)] for s in range(q + 1)] for r in range(q + 1)]


@pytest.mark.parametrize("name", list(COFRAMES))
def test_frozen_diamonds_match_oracle(name):
    dol, bc, ae = oracle(name).numbers()
    q = len(COFRAMES[name])
    assert as_rows(dol, q) == DIAMONDS[name]["dolbeault"]
    assert as_rows(bc, q) == DIAMONDS[name]["bc"]
    assert as_rows(ae, q) == DIAMONDS[name]["aeppli"]


@pytest.mark.parametrize("name", list(DIAMONDS))
def test_engine_diamonds(name):
    BC = build(name)
    assert dolbeault(BC).rows() == DIAMONDS[name]["dolbeault"]
    assert bott_chern(BC).rows() == DIAMONDS[name]["bc"]
    assert aeppli(BC).rows() == DIAMONDS[name]["aeppli"]


def test_h7_diamonds_are_binomial():
    BC = build("h7")
    from math import comb
    expected = [[comb(3, r) * comb(3, s) for s in range(4)] for r in range(4)]
    assert dolbeault(BC).rows() == bott_chern(BC).rows() == aeppli(BC).rows() == expected


@pytest.mark.parametrize("name", ["h3", "h5", "kt4"])
def test_structure_identities(name):
    BC = build(name)
    D, Db = BC.del_, BC.delbar
    assert (D @ D).is_zero() and (Db @ Db).is_zero()
    assert (D @ Db + Db @ D).is_zero()
    conj = BC.conjugation
    assert conj @ D @ conj == Db
    assert sum(BC.dims.values()) == sum(BC.basic.dims)


def test_h3_holomorphic_coframe():
    BC = build("h3")
    assert BC.q == 1
    # A^{1,0} is spanned by e^1 + i e^2, normalized to a leading 1
    assert BC.hol == [(1, Gauss(0, 1), 0)]
    assert BC.bases[(0, 1)] == ((1, Gauss(0, -1), 0),)


def test_non_holomorphic_structure_rejected():
    d = doc("x5")
    with pytest.raises(InputError, match=r"bidegree \(2, -1\)"):
        build_bigraded(basic_subcomplex(d.model(), d.xi), d.phi)


def test_bad_J_rejected():
    d = doc("h3")
    B = basic_subcomplex(d.model(), d.xi)
    with pytest.raises(InputError):
        build_bigraded(B, Matrix.identity(3))
    with pytest.raises(InputError):
        build_bigraded(B, Matrix([[0, -1, 0], [1, 0, 0], [0, 0, 0]]).scale(2))


@pytest.mark.parametrize("name", ["h3", "h5", "kt4"])
def test_laplacian_kernels_and_decompositions(name):
    BC = build(name)
    laps = laplacians(BC)
    assert laps.kernel_dims["delta_bc"] == bott_chern(BC).table
    assert laps.kernel_dims["delta_a"] == aeppli(BC).table
    assert laps.kernel_dims["delta_delbar"] == dolbeault(BC).table
    for theory in ("bott-chern", "aeppli"):
        for b, v in laps.decompositions[theory].items():
            assert v["spans"] and v["direct"] and v["orthogonal"], (theory, b)


@settings(max_examples=30, deadline=None)
@given(st.data())
def test_del_adjoint_defining_identity(data):
    BC = build("h5")
    G = BC.grams
    Ds = BC.del_.adjoint(G)
    src = data.draw(st.sampled_from([b for b in BC.bidegrees if (b[0] + 1, b[1]) in BC.dims]))
    tgt = (src[0] + 1, src[1])
    ints = st.integers(-2, 2)
    x = tuple(Gauss(a, b) for a, b in data.draw(st.lists(st.tuples(ints, ints), min_size=BC.dims[src],
                                                           max_size=BC.dims[src])))
    y = tuple(Gauss(a, b) for a, b in data.draw(st.lists(st.tuples(ints, ints), min_size=BC.dims[tgt],
                                                           max_size=BC.dims[tgt])))
    zero_t, zero_s = (0,) * BC.dims[tgt], (0,) * BC.dims[src]
    lhs = G[tgt].inner(BC.del_.apply(src, x).get(tgt, zero_t), y)
    rhs = G[src].inner(x, Ds.apply(tgt, y).get(src, zero_s))
    assert lhs == rhs


@pytest.mark.parametrize("name", ["h3", "h5"])
def test_star_and_duality(name):
    BC = build(name)
    star = transverse_star(BC)
    assert star.involution and star.adjoint_del and star.adjoint_delbar
    dual = duality_check(BC, star)
    assert dual["dimensions_match"] and dual["star_maps_harmonics"]


def test_kt4_adjoint_with_r_sign_fails():
    star = transverse_star(build("kt4"))
    assert star.adjoint_del and not star.adjoint_del_signed


@pytest.mark.parametrize("name", ["h3", "h5", "h7"])
def test_kahler_identities_vanish(name):
    BC = build(name)
    ops = lefschetz_ops(BC, omega(name))
    bad = [k for k, r in ops.residuals.items() if not r.is_zero()]
    assert bad == []
    assert ops.info["lambda_equals_star_inverse_L_star"]


def test_lambda_minus_star_L_star_only_in_odd_degree():
    ops = lefschetz_ops(build("h3"), omega("h3"))
    assert ops.info["lambda_equals_minus_star_L_star"] is False


@pytest.mark.parametrize("name", ["h3", "h5"])
def test_kahler_hodge_checks(name):
    out = kahler_hodge_checks(build(name), omega(name))
    assert out["passed"]
    assert all(v["basic_nonzero"] for v in out["omega_powers"].values())


def test_h3_omega_is_e12():
    assert omega("h3") == Form.basis(3, 1, 2)


def test_kt4_kahler_audit_fails_only_on_closedness():
    audit = kahler_audit(build("kt4"), omega("kt4"))
    assert not audit["closed"] and not audit["passed"]
    assert [k for k, v in audit.items() if not v] == ["closed", "passed"]
    with pytest.raises(InputError, match="closed"):
        lefschetz_ops(build("kt4"), omega("kt4"))


@pytest.mark.parametrize("name", list(COFRAMES))
def test_ddbar_lemma_matches_oracle(name):
    ours = ddbar_lemma_check(build(name))["per_bidegree"]
    ref = oracle(name).ddbar_lemma()
    for b, (inter, dd) in ref.items():
        assert (ours[b]["lhs_dim"], ours[b]["rhs_dim"]) == (inter, dd), b


def test_kt4_ddbar_and_frolicher():
    BC = build("kt4")
    dd = ddbar_lemma_check(BC)
    assert not dd["holds"]
    assert dd["per_bidegree"][(1, 1)] == {"lhs_dim": 1, "rhs_dim": 0, "holds": False}
    fr = frolicher_inequality(BC, ddbar=dd)
    assert [r["slack"] for r in fr["per_degree"]] == [0, 0, 2, 0, 0]
    assert fr["per_degree"][2]["lhs"] == 10 and fr["per_degree"][2]["rhs"] == 8
    assert all(r["slack_even"] for r in fr["per_degree"])
    assert not fr["equality_all_k"]
    assert frolicher_E1_collapse(BC)["collapses"]


@pytest.mark.parametrize("name", ["h3", "h5"])
def test_heisenberg_frolicher_equality(name):
    fr = frolicher_inequality(build(name))
    assert fr["equality_all_k"] and fr["ddbar_lemma"]


def test_blockop_composition_with_antilinear():
    dims = {(0, 0): 1}
    a = BlockOp(dims, {((0, 0), (0, 0)): Matrix([[Gauss(0, 1)]])})
    c = BlockOp(dims, {((0, 0), (0, 0)): Matrix([[1]])}, antilinear=True)
    # c(a(x)) = conj(i x)
    assert (c @ a).apply((0, 0), (Gauss(1, 0),))[(0, 0)] == (Gauss(0, -1),)
    assert (c @ c) == BlockOp.identity(dims)
