import pytest

import defstat as ds


def test_pn_eval_exact_values():
    pn = ds.ProbabilisticNorm.phi0("euclidean")
    assert pn.eval([3.0, 4.0], 5.0) == 0.5
    assert pn.eval([0.0, 0.0], 1.0) == 1.0
    assert pn.eval([1.0, 1.0], 0.0) == 0.0
    assert pn.eval([1.0, 1.0], -2.0) == 0.0


def test_unit_value_rejects_out_of_range():
    with pytest.raises(ds.DefstatError):
        ds.UnitValue(1.5)
    assert float(ds.UnitValue(0.25)) == 0.25


def test_tnorm_axioms_pass():
    assert ds.check_tnorm_axioms(ds.TNorm.from_name("min"), 2000, 42, 0.0).passed()
    assert ds.check_tnorm_axioms(ds.TNorm.from_name("product"), 2000, 42, 1e-12).passed()


def test_pn_axioms_pass():
    pn = ds.ProbabilisticNorm.phi0("absolute")
    rep = ds.check_pn_axioms(pn, ds.TNorm.from_name("product"), 3, 500, 42, 1e-12)
    assert rep.passed()


def test_density_squares_tends_to_zero():
    t = ds.deferred_density(
        ds.predicate("squares"), ds.DeferredWindow.classical(), ds.default_grid(10000)
    )
    assert t.verdict == "tends-to-zero"
    assert t.counts[-1] == 100
    assert t.ratios[-1] == 0.01


def test_dstat_certified_on_square_indicator():
    v = ds.test_dstat(
        ds.square_indicator(),
        ds.ProbabilisticNorm.phi0("absolute"),
        [0.0],
        ds.DeferredWindow.classical(),
        ds.ParamGrid.single(1.0, 0.5),
        ds.default_grid(100000),
    )
    assert v.outcome == "certified"
    assert v.certified()
    assert v.points[0].trace.ratios[-1] <= 0.01


def test_dstat_refuted_on_oscillator():
    v = ds.test_dstat(
        ds.even_odd([0.0], [9.0]),
        ds.ProbabilisticNorm.phi0("absolute"),
        [0.0],
        ds.DeferredWindow.classical(),
        ds.ParamGrid.single(1.0, 0.5),
        ds.default_grid(20000),
    )
    assert v.outcome == "refuted"


def test_phi_refuted_on_square_indicator():
    v = ds.test_phi(
        ds.square_indicator(),
        ds.ProbabilisticNorm.phi0("absolute"),
        [0.0],
        ds.ParamGrid.single(1.0, 0.5),
        100000,
    )
    assert v.outcome == "refuted"


def test_custom_predicate_density():
    pred = ds.custom_predicate("multiples-of-3", lambda k: k % 3 == 0)
    t = ds.deferred_density(pred, ds.DeferredWindow.classical(), ds.default_grid(2000))
    assert abs(t.ratios[-1] - 1.0 / 3.0) < 1e-3


def test_window_factories():
    w = ds.DeferredWindow.affine(1, 0, 2, 0)
    assert w.window_at(10) == (10, 20)
    lac = ds.DeferredWindow.lacunary([1, 2, 4, 8])
    assert lac.window_at(3) == (4, 8)
    assert lac.max_n == 3


def test_sequence_combinators():
    s = ds.sequence_sum(ds.constant([1.0]), ds.scaled(2.0, ds.constant([3.0])))
    assert s.eval(17) == [7.0]
    assert s.dim == 1


def test_verdict_json_shape():
    v = ds.test_dstat(
        ds.square_indicator(),
        ds.ProbabilisticNorm.phi0("absolute"),
        [0.0],
        ds.DeferredWindow.classical(),
        ds.ParamGrid.single(1.0, 0.5),
        ds.default_grid(4096),
    )
    text = v.json()
    for key in ('"mode"', '"outcome"', '"grid"', '"traces"'):
        assert key in text


def test_manifest_entry_and_single_check():
    e = ds.ManifestEntry("lemma-equivalences")
    assert e.id == "lemma-equivalences"
    assert e.expected == "pass"
    st = ds.HarnessSettings()
    st.horizon = 4096
    c = ds.run_check(e, st)
    assert c.outcome == "pass"
    assert c.hypothesis_ok
