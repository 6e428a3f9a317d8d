import json
import random
from fractions import Fraction

import pytest

from galois_atlas.algebra import INF, BiPoly
from galois_atlas.atlas import fiber_plane_model
from galois_atlas.diophantine import (HyperellipticModel, LocalSolvabilityCertificate, PlaneCurve, SearchResult,
                                      local_points_plane, local_solvable_hyperelliptic, normalize_point,
                                      same_point, search_points, verify_place_table, vp)
from galois_atlas.tables import EXAMPLE_MODEL, EXAMPLE_POINTS, PLACE_TABLES_BY_KEY, SEXTIC_NO_Q3_POINTS, q_expr

SEXTIC = HyperellipticModel.from_coeffs(SEXTIC_NO_Q3_POINTS, highest_first=False)


def _pts(*triples):
    return {normalize_point(tuple(Fraction(c) for c in P)) for P in triples}


def test_circle_contains_pythagorean_point():
    C = PlaneCurve.parse("x^2 + y^2 - z^2")
    res = search_points(C, 5)
    assert any(same_point(P, (3, 4, 5)) for P in res.points)
    assert all(C.contains(P) for P in res.points)


def test_definite_form_has_no_points():
    assert search_points(PlaneCurve.parse("x^2 + y^2 + z^2"), 40).points == []


def test_example_model_points():
    C = PlaneCurve.parse(EXAMPLE_MODEL)
    res = search_points(C, 256)
    assert set(res.points) == _pts(*EXAMPLE_POINTS)


def test_points_at_infinity_are_found():
    C = PlaneCurve.parse(EXAMPLE_MODEL)
    res = search_points(C, 1)
    assert _pts((1, 0, 0), (0, 1, 0)) <= set(res.points)


def test_search_results_resubstitute_and_are_monotone():
    C = PlaneCurve.parse("y^2 - x^3 + 2x - 1")
    prev = set()
    for H in (1, 3, 8, 20):
        res = search_points(C, H)
        assert all(C.contains(P) for P in res.points)
        cur = set(res.points)
        assert prev <= cur
        prev = cur
    assert normalize_point((Fraction(1), Fraction(0), Fraction(1))) in prev


def test_search_respects_height_bound():
    C = PlaneCurve.parse("y - 7x")
    res = search_points(C, 2)
    affine = [P for P in res.points if P[2] != 0]
    assert all(abs(P[0].numerator) <= 2 and abs(P[1].numerator) <= 2 and P[0].denominator <= 2
               for P in affine)


def test_workers_do_not_change_result():
    C = PlaneCurve.parse(EXAMPLE_MODEL)
    a = search_points(C, 60, workers=1)
    b = search_points(C, 60, workers=3)
    assert a.to_dict() == b.to_dict()


def test_search_result_json_round_trip():
    res = search_points(PlaneCurve.parse(EXAMPLE_MODEL), 30)
    doc = json.loads(json.dumps(res.to_dict()))
    assert {"model", "bound", "points", "singular_flags"} <= set(doc)
    assert SearchResult.from_dict(doc).points == res.points


def test_singular_points_are_flagged():
    # the node of y^2 = x^2 (x + 1) at the origin
    res = search_points(PlaneCurve.parse("y^2 - x^3 - x^2"), 4)
    flags = dict(zip(res.points, res.singular_flags))
    assert flags[normalize_point((Fraction(0), Fraction(0), Fraction(1)))]
    assert not flags[normalize_point((Fraction(-1), Fraction(0), Fraction(1)))]


def test_homogeneous_form_divisible_by_z_rejected():
    with pytest.raises(ValueError):
        PlaneCurve.parse("x*z^2 + y*z^2")


# ---------------------------------------------------------------------------
# place tables


def _table_curve(atlas, key):
    t = PLACE_TABLES_BY_KEY[key]
    r1, r2 = (atlas.by_label(lbl) for lbl in t.labels)
    return t, PlaneCurve(fiber_plane_model(r1, r2)), (r1.jmap, r2.jmap)


@pytest.mark.parametrize("key", sorted(PLACE_TABLES_BY_KEY))
def test_place_tables_verify(atlas, key):
    t, C, jm = _table_curve(atlas, key)
    rep = verify_place_table(C, t.rows, jm, t.title, atlas=atlas)
    assert rep.ok, rep.text()


def test_place_table_row_values(atlas):
    t, C, jm = _table_curve(atlas, "x03-xs45")
    row = next(r for r in t.rows if r.point == (-81, -13, 1))
    assert jm[0](Fraction(-81)) == jm[1](Fraction(-13)) == q_expr("-2^4*3^2*13^3")
    assert row.cm is False


def test_place_table_mismatch_is_itemized(atlas):
    t, C, jm = _table_curve(atlas, "x03-xs45")
    rows = list(t.rows)
    bad = rows[0].__class__(rows[0].point, rows[0].j + 1, rows[0].cm)
    rep = verify_place_table(C, [bad] + rows[1:], jm, t.title)
    assert not rep.ok
    assert {c.point for c in rep.failures} == {rows[0].point}


# ---------------------------------------------------------------------------
# local solvability


def test_sextic_is_empty_over_q3():
    cert = local_solvable_hyperelliptic(SEXTIC, 3, max_depth=12)
    assert cert.result == "empty" and cert.depth <= 12


def test_x6_plus_1_solvable_with_witness():
    H = HyperellipticModel.from_coeffs([1, 0, 0, 0, 0, 0, 1])
    cert = local_solvable_hyperelliptic(H, 3)
    assert cert.result == "solvable" and cert.verify(H)
    assert cert.witness["x0"] == 0 and cert.witness["y0"] % 3 in (1, 2)


def test_3x6_plus_3_empty():
    H = HyperellipticModel.from_coeffs([3, 0, 0, 0, 0, 0, 3])
    assert local_solvable_hyperelliptic(H, 3).result == "empty"


def test_branch_at_infinity_is_used():
    # f(x) = 2 mod 3 on Z_3, so only the points over x = oo are 3-adic
    H = HyperellipticModel.from_coeffs([1, 0, 0, 0, 2, 0, 2])
    cert = local_solvable_hyperelliptic(H, 3)
    assert cert.result == "solvable" and cert.witness["branch"] == "u"
    assert cert.verify(H)


def test_certificate_round_trip_and_tamper():
    H = HyperellipticModel.from_coeffs([1, 0, 0, 0, 0, 0, 1])
    cert = local_solvable_hyperelliptic(H, 5)
    doc = json.loads(json.dumps(cert.to_dict()))
    assert set(doc) == {"p", "result", "witness", "depth"}
    again = LocalSolvabilityCertificate.from_dict(doc)
    assert again == cert and again.verify(H)
    forged = LocalSolvabilityCertificate(5, "solvable", 1, {"branch": "x", "x0": 0, "y0": 2})
    assert not forged.verify(H)


def _hyperelliptic_with_point(rng):
    """A random integral sextic or quintic through (x0, y0), chosen squarefree."""
    while True:
        deg = rng.choice([5, 6])
        coeffs = [rng.randint(-9, 9) for _ in range(deg)] + [rng.choice([-3, -2, -1, 1, 2, 3])]
        x0, y0 = rng.randint(-3, 3), rng.randint(-6, 6)
        val = sum(c * x0 ** i for i, c in enumerate(coeffs))
        coeffs[0] += y0 * y0 - val
        try:
            return HyperellipticModel.from_coeffs(coeffs, highest_first=False), (x0, y0)
        except ValueError:
            continue


def test_points_imply_local_solvability():
    rng = random.Random(31)
    for _ in range(10):
        H, (x0, y0) = _hyperelliptic_with_point(rng)
        res = search_points(H.plane_curve(), 6)
        assert any(same_point(P, (x0, y0, 1)) for P in res.points)
        for p in (3, 5, 7, 11, 13):
            cert = local_solvable_hyperelliptic(H, p)
            assert cert.result == "solvable", (H, p)
            assert cert.verify(H)


def test_solvable_certificates_reverify_independently():
    rng = random.Random(8)
    for _ in range(25):
        coeffs = [rng.randint(-20, 20) for _ in range(6)] + [rng.randint(1, 6)]
        try:
            H = HyperellipticModel.from_coeffs(coeffs, highest_first=False)
        except ValueError:
            continue
        for p in (3, 5):
            cert = local_solvable_hyperelliptic(H, p)
            if cert.result != "solvable":
                continue
            w = cert.witness
            # independent check from scratch: f(x0) - y0^2 has valuation beyond 2 v(2 y0)
            if w["branch"] == "x":
                fx = sum(c * w["x0"] ** i for i, c in enumerate(H.int_coeffs))
                # or x0 is an exact root of f
                assert fx == 0 or vp(fx - w["y0"] ** 2, p) > 2 * vp(2 * w["y0"], p)


def test_invalid_models_rejected():
    with pytest.raises(ValueError):
        HyperellipticModel.from_coeffs([1, 2, 1])  # (x + 1)^2 is not squarefree
    with pytest.raises(ValueError):
        HyperellipticModel.from_coeffs([1] * 8)
    with pytest.raises(ValueError):
        local_solvable_hyperelliptic(SEXTIC, 2)


def test_vp():
    assert vp(0, 3) == float("inf")
    assert vp(-54, 3) == 3
    assert vp(7, 3) == 0


# ---------------------------------------------------------------------------
# plane local points


def test_plane_local_examples():
    j0 = PlaneCurve.parse("y^2*z - x^3 - z^3")
    assert local_points_plane(j0, 3).found
    assert local_points_plane(PlaneCurve.parse(EXAMPLE_MODEL), 3).found


def test_plane_local_sum_of_squares():
    C = PlaneCurve.parse("x^2 + y^2 + z^2")
    # x^2 + y^2 + z^2 is isotropic over Q_3: (1 : 1 : 1) is a smooth point mod 3
    r3 = local_points_plane(C, 3, precision=2)
    assert r3.found and r3.witness == (1, 1, 1)
    r2 = local_points_plane(C, 2, precision=2)
    assert not r2.found and r2.to_dict()["result"] == "none-found"


def test_plane_local_witness_is_hensel_liftable():
    C = PlaneCurve.parse("x^3 + 2y^3 - 5z^3")
    res = local_points_plane(C, 7, precision=3)
    if res.found:
        X, Y, Z = res.witness
        F = X ** 3 + 2 * Y ** 3 - 5 * Z ** 3
        grads = (3 * X * X, 6 * Y * Y, -15 * Z * Z)
        assert vp(F, 7) > 2 * min(vp(g, 7) for g in grads)


def test_genus4_raw_model_has_no_smooth_3adic_witness(atlas):
    C = PlaneCurve(fiber_plane_model(atlas.by_label("9.27.0.1"), atlas.by_label("2.3.0.1")))
    res = local_points_plane(C, 3, precision=3)
    assert not res.found and res.to_dict()["result"] == "none-found"
