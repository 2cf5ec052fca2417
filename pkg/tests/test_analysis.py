import math

import pytest

from witnesslab.analysis import (
    AdversarialConfig,
    BoundsReport,
    FixedEll,
    NoQFound,
    SmallestEll,
    SweepAggregate,
    adversarial_generate,
    adversarial_pool,
    compare_bounds,
    eval_c1,
    eval_c3,
    examine,
    sweep,
    sweep_records,
)
from witnesslab.numth import carmichael_lambda, euler_phi, is_prime, lcm_range, unity_root_count
from witnesslab.witness import count_F


# -- per-n records ----------------------------------------------------------


def test_examine_full_record():
    rec = examine(35, 2, FixedEll(3))
    assert (rec.n, rec.composite) == (35, True)
    assert (rec.F, rec.MR, rec.Gal, rec.D, rec.H) == (4, 2, 36, 144, 576)
    assert (rec.k_cofactor, rec.Str_r, rec.ell) == (1, 144, 3)
    assert rec.skipped_reason is None
    assert rec.covered


def test_examine_skip_reasons():
    assert examine(121, 2, FixedEll(3)).skipped_reason == "perfect-power"
    assert examine(9, 2, FixedEll(3)).skipped_reason == "perfect-power"
    assert examine(3, 2, FixedEll(3)).skipped_reason == "not-coprime"
    assert examine(7, 2, FixedEll(3)).skipped_reason == "not-primitive-root"
    assert examine(7, 2, SmallestEll(3)).skipped_reason == "no-conductor"
    # F and MR are always present, even for skipped n
    rec = examine(121, 2, FixedEll(3))
    assert (rec.F, rec.MR) == (10, 10)
    assert rec.Gal is None and not rec.covered


def test_examine_smallest_policy_searches():
    rec = examine(7, 2, SmallestEll())
    assert rec.ell == 5 and rec.covered


def test_examine_prime_power():
    rec = examine(125, 2, FixedEll(3))
    assert rec.covered and rec.Gal == 24 and rec.Str_r == 384


# -- aggregation ------------------------------------------------------------


def build_agg(lo, hi, r=2):
    agg = SweepAggregate(rounds=r)
    for n in range(lo, hi + 1, 2):
        agg.add_record(examine(n, r, FixedEll(3)))
    return agg


def test_sweep_matches_manual_aggregate():
    agg = sweep(999, 2, FixedEll(3))
    manual = build_agg(3, 999)
    assert agg.sum_F == manual.sum_F == 5154
    assert agg.sum_Gal == manual.sum_Gal == 18456
    assert agg.sum_Str == manual.sum_Str
    assert agg.count_composite == manual.count_composite == 332
    assert agg.count_covered_composite == 80
    assert agg.sum_log_F.value() == manual.sum_log_F.value()


def test_merge_is_exact_for_integers():
    whole = build_agg(3, 2999)
    parts = build_agg(3, 999).merge(build_agg(1001, 1999)).merge(build_agg(2001, 2999))
    for field in ("sum_F", "sum_MR_r", "sum_Gal", "sum_Str",
                  "count_visited", "count_composite", "count_covered",
                  "count_covered_composite", "count_skipped"):
        assert getattr(parts, field) == getattr(whole, field), field


def test_merge_log_sums_are_stable():
    whole = build_agg(3, 2999)
    parts = build_agg(3, 999).merge(build_agg(1001, 1999)).merge(build_agg(2001, 2999))
    for field in ("sum_log_F", "sum_log_MR_r", "sum_log_H"):
        a = getattr(parts, field).value()
        b = getattr(whole, field).value()
        assert a == pytest.approx(b, rel=1e-10)


def test_merge_rejects_mixed_rounds():
    with pytest.raises(ValueError):
        SweepAggregate(rounds=2).merge(SweepAggregate(rounds=3))


def test_sweep_worker_count_is_invisible():
    """Chunked reduction makes the result independent of parallelism."""
    serial = sweep(5001, 2, FixedEll(3), workers=1)
    parallel = sweep(5001, 2, FixedEll(3), workers=3)
    assert serial.sum_F == parallel.sum_F
    assert serial.sum_Str == parallel.sum_Str
    assert serial.sum_log_F.value() == parallel.sum_log_F.value()
    assert serial.sum_log_MR_r.value() == parallel.sum_log_MR_r.value()
    assert serial.sum_log_H.value() == parallel.sum_log_H.value()


def test_sweep_record_sink_order():
    seen = []
    sweep(301, 2, FixedEll(3), workers=2, record_sink=lambda rec: seen.append(rec.n))
    assert seen == list(range(3, 302, 2))


def test_sweep_records_roundtrip():
    recs = sweep_records(99, 2, FixedEll(3))
    assert [r.n for r in recs] == list(range(3, 100, 2))
    assert recs[0].skipped_reason == "not-coprime"


# -- series constants -------------------------------------------------------


def test_eval_c1_small_bound_by_hand():
    # prime powers up to 4 are 2, 3, 4
    expected = math.log(2) / 2 + math.log(3) / 6 + math.log(2) / 8
    val, tail = eval_c1(4)
    assert val == pytest.approx(expected, abs=1e-15)
    assert tail == pytest.approx(2 * (math.log(4) + 1) / 4)


def test_eval_c1_converges():
    v4, t4 = eval_c1(10**4)
    v5, t5 = eval_c1(10**5)
    assert abs(v5 - v4) < t4
    assert t5 < t4
    assert v5 == pytest.approx(0.898454904829415, abs=1e-12)


def test_eval_c3_reduces_to_c1():
    for bound in (100, 10**4):
        assert eval_c3(1, bound)[0] == eval_c1(bound)[0]


def test_eval_c3_term_by_term():
    """Incremental differences isolate single prime-power terms."""
    # s = 8, d = 2: gcd(lambda(8), 2) = 2 roots, squared, times log2/(8*phi(8))
    d1 = unity_root_count(8, math.gcd(carmichael_lambda(8), 2))
    inc = eval_c3(2, 8)[0] - eval_c3(2, 7)[0]
    assert inc == pytest.approx(d1**2 * math.log(2) / (8 * euler_phi(8)), rel=1e-12)
    # s = 3, d = 2
    inc = eval_c3(2, 3)[0] - eval_c3(2, 2)[0]
    assert inc == pytest.approx(4 * math.log(3) / 6, rel=1e-12)


def test_eval_c3_tail_scales_with_d():
    _, t1 = eval_c1(1000)
    _, t3 = eval_c3(3, 1000)
    assert t3 == pytest.approx((2 * 3) ** 2 * t1)


def test_series_rejects_tiny_bound():
    with pytest.raises(ValueError):
        eval_c1(1)


# -- adversarial construction -----------------------------------------------


def test_adversarial_pool_m60():
    cfg = AdversarialConfig(M=60)
    assert adversarial_pool(cfg) == (7, 11, 13, 31, 61)


def test_adversarial_pool_respects_cutoff_and_bound():
    cfg = AdversarialConfig(M=60, prime_bound=30, cutoff=10)
    assert adversarial_pool(cfg) == (11, 13)


def test_adversarial_subset_forcing():
    cfg = AdversarialConfig(M=60)
    out = adversarial_generate(cfg, subset=(7, 11, 13))
    assert (out.n, out.s, out.q) == (41041, 1001, 41)
    assert out.predicted_floor == euler_phi(1001) == 720
    assert count_F(out.n) >= out.predicted_floor
    assert (out.n - 1) % 60 == 0


def test_adversarial_two_prime_subset():
    out = adversarial_generate(AdversarialConfig(M=60, k=2), subset=(7, 11))
    assert out.s == 77 and out.q == 53 and out.n == 4081
    assert (out.n - 1) % 60 == 0
    assert count_F(out.n) >= out.predicted_floor == euler_phi(77) == 60


def test_adversarial_seeded_draws():
    cfg = AdversarialConfig(M=60)
    a = adversarial_generate(cfg, rng=4)
    b = adversarial_generate(cfg, rng=4)
    assert a == b
    assert len(a.chosen) == 3
    assert set(a.chosen) <= set(a.pool)
    assert (a.n - 1) % 60 == 0
    assert count_F(a.n) >= a.predicted_floor


def test_adversarial_floor_holds_across_seeds():
    cfg = AdversarialConfig(M=60)
    for seed in range(8):
        out = adversarial_generate(cfg, rng=seed)
        assert out.q not in out.chosen
        assert count_F(out.n) >= out.predicted_floor


def test_adversarial_rejects_bad_subsets():
    cfg = AdversarialConfig(M=60)
    with pytest.raises(ValueError):
        adversarial_generate(cfg, subset=(7, 11, 17))  # 17 not in pool
    with pytest.raises(ValueError):
        adversarial_generate(cfg, subset=(7, 7, 11))  # repeat
    with pytest.raises(ValueError):
        adversarial_generate(AdversarialConfig(M=60, prime_bound=12))


def test_adversarial_no_q_when_s_shares_factor_with_m():
    # 7 divides lcm(1..12), so s = 7 can never be inverted mod M
    cfg = AdversarialConfig(M=lcm_range(12), k=1)
    with pytest.raises(NoQFound):
        adversarial_generate(cfg, subset=(7,))


def test_adversarial_q_limit():
    cfg = AdversarialConfig(M=60, q_search_limit=7)
    with pytest.raises(NoQFound):
        adversarial_generate(cfg, subset=(7, 11, 13))  # needs q = 41


# -- bounds report ----------------------------------------------------------


def test_compare_bounds_rows():
    agg = sweep(999, 2, FixedEll(3))
    report = compare_bounds(agg, 2, 2)
    labels = [row.label for row in report.rows]
    assert labels == [
        "gal-mean-lower",
        "gal-mean-upper",
        "mr-mean-lower",
        "mr-mean-upper",
        "str-mean-lower",
        "str-mean-upper",
        "mr-geometric-slope",
        "h-geometric-slope",
    ]
    assert report.row("gal-mean-lower").empirical == pytest.approx(18456 / 999)
    assert report.row("gal-mean-lower").reference == pytest.approx(999 ** (15 / 23))


def test_compare_bounds_render_mentions_coverage():
    agg = sweep(999, 2, FixedEll(3))
    lines = compare_bounds(agg, 2, 2).render()
    assert any("composite with conductor data" in line for line in lines)
    assert sum(1 for line in lines if "empirical=" in line) == 8


def test_compare_bounds_r1_has_no_zeta_reference():
    # zeta(r) only converges for r >= 2, so the str upper bound is open at r=1
    agg = sweep(999, 1, FixedEll(3))
    report = compare_bounds(agg, 2, 1)
    row = report.row("str-mean-upper")
    assert row.reference is None or math.isinf(row.reference) or row.note
