import json
import random
from fractions import Fraction

import pytest

from galois_atlas.algebra import INF, eval_ratfunc
from galois_atlas.elliptic import EllCurveQ, a_p, is_cm, primes_up_to, quadratic_twist
from galois_atlas.galois import (SIEVE_CERTIFIED, CMInputError, GaloisReport, TheoremViolation, analyze,
                                 maximal_classes, mod2_surjective_exact, mod7_sieve, mod7_sieve_result,
                                 nonsurjective_ell_adic, trace_sieve)
from galois_atlas.tables import q_expr

J50 = q_expr("-2^-3*5^2*241^3")


def test_x05_witness_for_50a1(atlas):
    v = nonsurjective_ell_adic(J50, 5, atlas)
    assert v.nonsurjective
    assert ("5.6.0.1", Fraction(-40)) in v.witnesses


def test_surjective_at_3_for_table5_j(atlas):
    v = nonsurjective_ell_adic(q_expr("-2^-10*3^3*5^4*11^3*17^3"), 3, atlas)
    assert not v.nonsurjective and v.witnesses == ()


def test_constructed_x02_point(atlas):
    # t = 1 gives 255^3, a CM j-invariant, which the criterion must refuse
    with pytest.raises(CMInputError):
        nonsurjective_ell_adic(Fraction(255 ** 3), 2, atlas)
    j = Fraction(253 ** 3, 9)  # t = 3
    v = nonsurjective_ell_adic(j, 2, atlas)
    assert ("2.3.0.1", Fraction(3)) in v.witnesses


def test_point_at_infinity_is_tested(atlas):
    # X_ns+(5) sends t = oo to 8000, which is CM, so use a record with finite value at oo
    rec = atlas.by_label("5.10.0.1")
    assert eval_ratfunc(rec.jmap, INF) == 8000
    from galois_atlas.galois import jmap_preimages

    assert INF in jmap_preimages(rec.jmap, Fraction(8000))


@pytest.mark.parametrize("j", [0, 1728, -3375, 8000, -12288000])
def test_cm_inputs_rejected(atlas, j):
    with pytest.raises(CMInputError, match="non-CM"):
        nonsurjective_ell_adic(Fraction(j), 3, atlas)
    with pytest.raises(CMInputError, match=str(j)):
        analyze(Fraction(j), atlas)


def test_mod2_examples(atlas):
    assert mod2_surjective_exact(EllCurveQ.short(0, -2))
    assert not mod2_surjective_exact(EllCurveQ.short(-1, 0))
    for j in atlas.exceptional_j:
        assert mod2_surjective_exact(EllCurveQ.from_j(j))


def test_mod7_examples():
    assert mod7_sieve(EllCurveQ.from_ainvs([1, 0, 1, -126, -552]), 10 ** 4) == SIEVE_CERTIFIED
    assert mod7_sieve(EllCurveQ.from_ainvs([0, 0, 1, -1, 0]), 10 ** 3) == SIEVE_CERTIFIED
    with pytest.raises(ValueError, match="sample too small"):
        mod7_sieve(EllCurveQ.from_ainvs([0, 0, 1, -1, 0]), 19)


def test_mod7_certificate_independent_of_prime_range():
    E = EllCurveQ.from_ainvs([0, 0, 1, -1, 0])
    classes = maximal_classes(7)
    for lo in (3, 101, 401, 2003):
        assert trace_sieve(E, 7, classes, lo + 600, p_min=lo).status == SIEVE_CERTIFIED


def test_mod7_borel_candidate():
    # X_0(7): j = (t^2 + 13t + 49)(t^2 + 5t + 1)^3 / t at t = 1 gives a rational 7-isogeny
    t = Fraction(1)
    j = (t * t + 13 * t + 49) * (t * t + 5 * t + 1) ** 3 / t
    E = EllCurveQ.from_j(j)
    res = mod7_sieve_result(E, 3000)
    assert res.status == "nonsurjective-candidate(borel)"
    # oracle: every sampled characteristic polynomial is reducible mod 7
    squares = {x * x % 7 for x in range(7)}
    for p in primes_up_to(3000):
        if p in (2, 7) or not E.has_good_reduction(p):
            continue
        ap = a_p(E, p)
        assert (ap * ap - 4 * p) % 7 in squares


def test_sieve_soundness_on_random_curves():
    rng = random.Random(9)
    classes = maximal_classes(7)
    by_name = {c.name: c for c in classes}
    for _ in range(8):
        E = EllCurveQ.from_ainvs([rng.randint(0, 1), rng.randint(-1, 1), rng.randint(0, 1),
                                  rng.randint(-30, 30), rng.randint(-30, 30)])
        res = trace_sieve(E, 7, classes, 600)
        if res.status.startswith("nonsurjective-candidate"):
            pairs = {(a_p(E, p) % 7, p % 7) for p in primes_up_to(600)
                     if p not in (2, 7) and E.has_good_reduction(p)}
            assert pairs <= by_name[res.survivors[0]].pairs


def _ell_classes(atlas, ell):
    extra = [(r.label, r.group) for r in atlas.maximal_records(ell) if r.level == ell and r.index == 5]
    return maximal_classes(ell, extra=extra)


@pytest.mark.parametrize("ell", [3, 5])
def test_mod_ell_sieve_consistent_with_exact_test(atlas, ell):
    rng = random.Random(ell)
    classes = _ell_classes(atlas, ell)
    level_ell = [r for r in atlas.maximal_records(ell) if r.level == ell]
    for r in level_ell:
        n = 0
        while n < 4:
            t = Fraction(rng.randint(-30, 30), rng.randint(1, 6))
            j = eval_ratfunc(r.jmap, t)
            if j is INF or j in (0, 1728) or is_cm(j):
                continue
            n += 1
            assert nonsurjective_ell_adic(j, ell, atlas).nonsurjective
            res = trace_sieve(EllCurveQ.from_j(j), ell, classes, 1500)
            assert res.status != SIEVE_CERTIFIED, (r.label, t)


@pytest.mark.parametrize("j,smallest", [("-2^4*3^2*13^3", 7), ("-2^-10*3^3*5^4*11^3*17^3", 3),
                                        ("2^-10*5*59^3", 3)])
def test_analyze_examples(atlas, j, smallest):
    rep = analyze(q_expr(j), atlas, p_bound=2000)
    assert rep.smallest_surjective_prime == smallest


def test_theorem_violation_guard(atlas):
    from dataclasses import replace

    fake = replace(atlas, exceptional_j=frozenset(list(atlas.exceptional_j)[1:]))
    missing = next(iter(atlas.exceptional_j - fake.exceptional_j))
    with pytest.raises(TheoremViolation, match="theorem violation"):
        analyze(missing, fake, p_bound=200)


def test_witness_soundness_on_constructed_points(atlas):
    rng = random.Random(17)
    for r in atlas.maximal_records():
        n = 0
        while n < 20:
            t = Fraction(rng.randint(-80, 80), rng.randint(1, 30))
            j = eval_ratfunc(r.jmap, t)
            if j is INF or j in (0, 1728) or is_cm(j):
                continue
            n += 1
            v = nonsurjective_ell_adic(j, r.ell, atlas)
            assert v.nonsurjective
            assert any(lbl in {x.label for x in atlas.maximal_records(r.ell)} for lbl, _ in v.witnesses)
            for lbl, w in v.witnesses:
                assert eval_ratfunc(atlas.by_label(lbl).jmap, w) == j


def test_twist_invariance(atlas):
    rng = random.Random(23)
    done = 0
    while done < 50:
        try:
            E = EllCurveQ.from_ainvs([rng.randint(0, 1), rng.randint(-1, 1), rng.randint(0, 1),
                                      rng.randint(-50, 50), rng.randint(-50, 50)])
        except ValueError:
            continue
        if E.j in (0, 1728) or is_cm(E.j):
            continue
        d = rng.choice([-1, 2, -2, 3, -3, 5, 7, -11, 13, 15])
        Ed = quadratic_twist(E, d)
        a, b = analyze(E, atlas, p_bound=300), analyze(Ed, atlas, p_bound=300)
        assert a.verdicts == b.verdicts
        assert a.smallest_surjective_prime == b.smallest_surjective_prime
        assert mod2_surjective_exact(E) == mod2_surjective_exact(Ed)
        done += 1


def test_report_json_round_trip(atlas):
    rep = analyze(EllCurveQ.from_ainvs([1, 0, 1, -126, -552]), atlas)
    doc = json.loads(rep.to_json())
    assert set(doc) == {"j", "cm", "verdicts", "mod7", "smallest_surjective_prime"}
    assert set(doc["verdicts"][0]) == {"ell", "nonsurjective", "witnesses"}
    assert doc["j"] == "-349938025/8"
    assert GaloisReport.from_dict(doc) == rep
