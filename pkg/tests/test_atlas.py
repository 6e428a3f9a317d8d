from fractions import Fraction

import pytest

from galois_atlas.algebra import BiPoly, RatFunc, eval_ratfunc
from galois_atlas.atlas import AtlasError, fiber_plane_model, load_atlas, parse_atlas, validate_atlas
from galois_atlas.elliptic import CM_J_INVARIANTS
from galois_atlas.tables import X015_MODEL, q_expr

DATA = load_atlas.__globals__["_atlas_text"](None)


def test_record_counts(atlas):
    assert len(atlas.maximal_records()) == 12
    assert [len(atlas.maximal_records(ell)) for ell in (2, 3, 5)] == [6, 3, 3]
    assert len(atlas.records) == 13


def test_record_4_4_0_1(atlas):
    r = atlas.by_label("4.4.0.1")
    assert r.name == "X_ns+(4)"
    assert r.jmap == RatFunc.parse("4t^3(8 - t)")


def test_special_j_sets(atlas):
    assert q_expr("-2^-1*5^2") in atlas.exceptional_j
    assert Fraction(54000) in atlas.cm_j
    assert {Fraction(0), Fraction(1728)} <= atlas.cm_j
    assert atlas.cm_j == frozenset(CM_J_INVARIANTS)
    assert not atlas.exceptional_j & atlas.cm_j


def test_full_validation_passes(atlas):
    report = validate_atlas(atlas, maximality=True)
    assert report.ok, report.text()
    x02 = [c for c in report.checks if c.label == "2.3.0.1"]
    assert all(c.ok for c in x02)
    assert any(c.field == "index" and c.got == 3 for c in x02)


def test_auxiliary_record(atlas):
    r = atlas.by_label("5.15.0.1")
    assert r.auxiliary
    assert (r.group.index, r.group.genus()) == (15, 0)
    assert r not in atlas.maximal_records(5)


def test_genus_digit_mutation_is_reported():
    bad = DATA.replace("2.3.0.1 | X_0(2) | 2 | 2 | 3 | 0 |", "2.3.0.1 | X_0(2) | 2 | 2 | 3 | 1 |")
    assert bad != DATA
    report = validate_atlas(parse_atlas(bad), maximality=False)
    fields = {(c.label, c.field) for c in report.failures}
    assert ("2.3.0.1", "genus") in fields
    assert all(label == "2.3.0.1" for label, _ in fields)


def test_load_atlas_aborts_on_mutation(tmp_path):
    path = tmp_path / "atlas.txt"
    path.write_text(DATA.replace("| 4t^3(8 - t) |", "| 4t^3(9 - t) |"))
    with pytest.raises(AtlasError, match="4.4.0.1"):
        load_atlas(str(path))


def test_env_override(tmp_path, monkeypatch):
    path = tmp_path / "atlas.txt"
    path.write_text(DATA)
    monkeypatch.setenv("GALOIS_ATLAS_PATH", str(path))
    assert load_atlas().labels == load_atlas(validate=False).labels


def test_parse_errors_name_the_line():
    with pytest.raises(AtlasError, match="line 1"):
        parse_atlas("2.2.0.1 | X | 2 | 2")


def test_unknown_label_lists_valid(atlas):
    with pytest.raises(KeyError, match="3.4.0.1"):
        atlas.by_label("7.8.0.1")


def test_plane_models(atlas):
    m = fiber_plane_model(atlas.by_label("3.4.0.1"), atlas.by_label("5.5.0.1"))
    assert m.to_str() == "x^4 + 36*x^3 + 270*x^2 - x*y^5 - 5*x*y^4 - 40*x*y^3 + 756*x + 729"
    assert fiber_plane_model(atlas.by_label("2.2.0.1"), atlas.by_label("3.3.0.1")) == BiPoly.parse("x^2 - y^3 + 1728")
    assert fiber_plane_model(atlas.by_label("3.4.0.1"), atlas.by_label("5.6.0.1")) == BiPoly.parse(X015_MODEL)
    with pytest.raises(AtlasError):
        fiber_plane_model(atlas.by_label("3.4.0.1"), atlas.by_label("3.3.0.1"))


def test_jmap_round_trip(atlas):
    for r in atlas.records:
        assert RatFunc.parse(r.jmap.to_str()) == r.jmap


def test_xsp5_jmap_matches_its_place_table(atlas):
    # points of X_ns+(4) x X_sp+(5): y-coordinate and j-invariant
    rows = [("-5/4", "-2^-10*3^3*5^4*11^3*17^3"), ("-3", "-2^15"), ("-2", "2^6*3^3"), ("-5", "0"),
            ("-1", "-2^15*3^3")]
    jm = atlas.by_label("5.15.0.1").jmap
    for y, j in rows:
        assert eval_ratfunc(jm, q_expr(y)) == q_expr(j)
