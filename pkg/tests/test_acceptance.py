"""Acceptance criteria 1-11, one test each.

``pytest`` prints a ``criterion N: PASS|FAIL`` line per test in its terminal
summary (see conftest.py); running this file directly prints the same lines.
"""

import io
import sys

import pytest

import oracles
from foliage import basic as basic_mod
from foliage import report as report_mod
from foliage.basic import (
    basic_subcomplex,
    betti,
    full_complex,
    hard_lefschetz_check,
    homological_orientability,
    massey_scan,
    massey_triple,
    symplectic_obstruction,
)
from foliage.bigraded import (
    aeppli,
    bott_chern,
    build_bigraded,
    ddbar_lemma_check,
    duality_check,
    frolicher_inequality,
    kahler_form_from_metric,
    laplacians,
    lefschetz_ops,
    kahler_hodge_checks,
)
from foliage.catalog import builtin_catalog, catalog_entry
from foliage.cli import main
from foliage.contact import Level, classify
from foliage.errors import InternalInconsistency
from foliage.exterior import Form
from foliage.report import build_report, render_report

HEISENBERG = ["h3", "h5"]


def doc(name):
    return catalog_entry(name).document


def oracle_alg(d):
    return oracles.Algebra(d.dimension, {ij: dict(cs) for ij, cs in d.brackets})


def bigraded(name, identity_gram=False):
    d = doc(name)
    m = d.model()
    leaf = d.leaf_direction(m)
    B = full_complex(m) if leaf is None else basic_subcomplex(m, leaf)
    return build_bigraded(B, d.complex_structure(), None if identity_gram else d.gram())


def kahler_form(name):
    d = doc(name)
    return d.omega_form() or kahler_form_from_metric(d.dimension, d.complex_structure(), d.gram())


def test_criterion_01_classification_tower():
    """classification tower: h3, h5 Sasakian; abelian R^3 NotContact; negated phi fails positivity"""
    for name in HEISENBERG:
        assert classify(doc(name).bundle()).level == Level.SASAKIAN
    assert classify(doc("abelian3").bundle()).level == Level.NOT_CONTACT
    b = doc("h3").bundle()
    neg = classify(b.with_fields(phi=b.phi.scale(-1)))
    assert neg.sub_checks["contact_metric"].detail["positivity"] is False
    assert neg.level != Level.SASAKIAN


def test_criterion_02_symplectic_obstruction():
    """[d eta] and [d eta]^n nonzero basic classes that die in H(M); degree-2n inclusion not injective"""
    for name in HEISENBERG:
        d = doc(name)
        v = symplectic_obstruction(d.model(), d.eta_form())
        assert v.deta_nonzero and v.deta_power_nonzero
        assert v.deta_maps_to_zero and v.deta_power_maps_to_zero
        assert v.top_kernel_dim > 0


def test_criterion_03_basic_betti():
    """basic Betti numbers h3 (1,2,1), h5 (1,4,6,4,1), matching the oracle; homologically orientable"""
    expected = {"h3": [1, 2, 1], "h5": [1, 4, 6, 4, 1]}
    for name, values in expected.items():
        d = doc(name)
        ref = oracles.betti_basic(oracle_alg(d), list(d.xi))
        assert ref[: len(values)] == values and not any(ref[len(values):])
        assert betti(basic_subcomplex(d.model(), d.xi), trim=True) == values
        v = homological_orientability(d.model(), d.xi)
        assert v.top_dim == 1 and v.orientable


def test_criterion_04_hodge_theorem():
    """harmonic bigraded splitting, h^{r,s} = h^{s,r}, [w^r] != 0 for r <= q (identity Grams)"""
    for name in HEISENBERG:
        BC = bigraded(name, identity_gram=True)
        out = kahler_hodge_checks(BC, kahler_form(name))
        assert all(v["ok"] for v in out["harmonic_splitting"].values())
        assert out["conjugation_symmetric"]
        assert all(v["basic_nonzero"] and v["dolbeault_nonzero"] for v in out["omega_powers"].values())
        assert sorted(out["omega_powers"]) == list(range(BC.q + 1))


def test_criterion_05_kahler_identities():
    """every Kähler identity residual is exactly zero on h3 and h5"""
    for name in HEISENBERG:
        ops = lefschetz_ops(bigraded(name), kahler_form(name))
        nonzero = [k for k, r in ops.residuals.items() if not r.is_zero()]
        assert not nonzero, nonzero
        for key in ("lambda_del", "lambda_delbar", "delta_minus_2_delta_delbar", "delta_L", "delta_Lambda"):
            assert key in ops.residuals


def test_criterion_06_bott_chern_aeppli_laplacians():
    """dim ker Delta_BC = dim H_BC, dim ker Delta_A = dim H_A, exact three-way decompositions (h3, h5, kt4)"""
    for name in HEISENBERG + ["kt4"]:
        BC = bigraded(name)
        laps = laplacians(BC)
        assert laps.kernel_dims["delta_bc"] == bott_chern(BC).table
        assert laps.kernel_dims["delta_a"] == aeppli(BC).table
        for theory in ("bott-chern", "aeppli"):
            for b, v in laps.decompositions[theory].items():
                assert v["spans"] and v["direct"] and v["orthogonal"]
                assert sum(v["dims"]) == BC.dims[b]


def test_criterion_07_duality():
    """dim H_BC^{p,s} = dim H_A^{q-p,q-s} on h3 and h5"""
    for name in HEISENBERG:
        BC = bigraded(name)
        bc, ae = bott_chern(BC), aeppli(BC)
        q = BC.q
        assert all(bc[(p, s)] == ae[(q - p, q - s)] for p, s in BC.bidegrees)
        assert duality_check(BC)["dimensions_match"]


def test_criterion_08_frolicher_inequality():
    """Frölicher-type inequality per k; equality flag equals ddbar-lemma verdict; kt4 has strict slack"""
    checked = []
    for entry in builtin_catalog():
        d = entry.document
        if d.complex_structure() is None:
            continue
        try:
            BC = bigraded(entry.name)
        except Exception as exc:  # not transversely holomorphic: no bigraded complex
            assert "bidegree" in str(exc)
            continue
        dd = ddbar_lemma_check(BC)
        fr = frolicher_inequality(BC, ddbar=dd)
        assert all(r["lhs"] >= r["rhs"] for r in fr["per_degree"])
        assert fr["equality_all_k"] == dd["holds"]
        checked.append(entry.name)
        if entry.name == "kt4":
            assert any(r["slack"] > 0 for r in fr["per_degree"])
            assert not dd["holds"]
            coframe = [{(1,): 1, (2,): oracles.sp.I}, {(3,): 1, (4,): oracles.sp.I}]
            ref = oracles.Bigraded(oracle_alg(d), coframe).ddbar_lemma()
            assert any(inter != dd_rank for inter, dd_rank in ref.values())
    assert {"h3", "h5", "kt4"} <= set(checked)


def test_criterion_09_hard_lefschetz(monkeypatch):
    """HLT isomorphisms on h3, h5; X5 verdicts equal the oracle; Sasakian with non-isomorphism fails"""
    for name in HEISENBERG:
        d = doc(name)
        assert all(v.isomorphism for v in hard_lefschetz_check(d.model(), d.eta_form()))
    d = doc("x5")
    ours = [v.status for v in hard_lefschetz_check(d.model(), d.eta_form())]
    eta = {(5,): 1}
    assert ours == oracles.lefschetz_verdicts(oracle_alg(d), eta, 2)

    def broken(model, eta, metric=None):
        out = list(basic_mod.hard_lefschetz_check(model, eta, metric))
        out[0] = basic_mod.LefschetzVerdict(0, 1, 2, "NotInjective", 2, 2, 1)
        return out

    monkeypatch.setattr(report_mod, "hard_lefschetz_check", broken)
    with pytest.raises(InternalInconsistency):
        build_report(doc("h3"))
    monkeypatch.setattr("foliage.cli.hard_lefschetz_check", broken)
    assert main(["lefschetz", "h3"], io.StringIO(), io.StringIO()) == 2


def test_criterion_10_massey_products():
    """admissible basic Massey triples vanish on h3, h5; <[e1],[e1],[e2]> on h3 is nonzero with zero indeterminacy"""
    for name in HEISENBERG:
        d = doc(name)
        scan = massey_scan(basic_subcomplex(d.model(), d.xi))
        assert scan.admissible > 0 and scan.all_vanish
    C = full_complex(doc("h3").model())
    res = massey_triple(C, Form.basis(3, 1), Form.basis(3, 1), Form.basis(3, 2))
    assert res.indeterminacy.dim == 0
    assert not res.vanishes


def test_criterion_11_determinism():
    """report output is byte-identical across runs and thread counts"""
    for entry in builtin_catalog():
        renders = set()
        for jobs in (1, 1, 3):
            report = build_report(entry.document, jobs=jobs)
            renders.add((render_report(report, "json"), render_report(report, "md")))
        assert len(renders) == 1, entry.name
        out = io.StringIO()
        assert main(["report", entry.name, "--jobs", "2"], out, io.StringIO()) == 0
        assert out.getvalue() == next(iter(renders))[0]


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
