import math

import numpy as np
import pytest

from abssum.conjecture import conjectured_constant
from abssum.extremal import build_family, optimal_overlap
from abssum.inequality import frobenius_constant, ratio, universal_bound
from abssum.matlin import random_psd
from abssum.search import (
    SearchConfig,
    local_maximize,
    random_tuple,
    reevaluate,
    restart_seed,
    scan_family,
    search,
)

SMALL = dict(m=2, n=2, restarts=3, max_iters=400)


def test_random_tuple_deterministic_and_normalized():
    a, b = random_tuple(3, 4, 11), random_tuple(3, 4, 11)
    np.testing.assert_array_equal(a, b)
    assert np.linalg.norm(a) == pytest.approx(1.0, rel=1e-14)
    assert not np.array_equal(a, random_tuple(3, 4, 12))


def test_restart_seeds_differ():
    seeds = {restart_seed(0, i) for i in range(100)}
    assert len(seeds) == 100
    assert restart_seed(7, 3) == restart_seed(7, 3)


@pytest.mark.parametrize("kw", [dict(m=0), dict(restarts=0), dict(step=0.0), dict(shrink=1.0), dict(threads=0), dict(p=0.5)])
def test_config_validation(kw):
    with pytest.raises(ValueError):
        SearchConfig(**kw)


def test_trace_is_nondecreasing():
    cfg = SearchConfig(**SMALL)
    res = local_maximize(random_tuple(2, 2, 3), 2, cfg, np.random.default_rng(0))
    assert all(b > a for a, b in zip(res.trace, res.trace[1:]))
    assert res.ratio == res.trace[-1]
    assert res.iters <= cfg.max_iters


def test_psd_start_never_below_one():
    rng = np.random.default_rng(2)
    start = np.stack([random_psd(3, rng) for _ in range(2)])
    res = local_maximize(start, 3, SearchConfig(m=2, n=3, max_iters=200), rng)
    assert res.ratio >= 1.0 - 1e-12


@pytest.mark.parametrize("m", [2, 3])
def test_extremal_start_is_local_max_at_p2(m):
    fam = build_family(m, optimal_overlap(m))
    res = local_maximize(fam.tuple, 2, SearchConfig(m=m, n=m, max_iters=300), np.random.default_rng(1))
    assert res.ratio <= frobenius_constant(m) + 1e-9


@pytest.mark.parametrize("m", [2, 9])
def test_scan_family_at_p2(m):
    s, r = scan_family(m, 2)
    assert s == pytest.approx(optimal_overlap(m), abs=1e-12)
    assert r == pytest.approx(frobenius_constant(m), abs=1e-12)


@pytest.mark.parametrize("p", [1.5, 3, 50])
@pytest.mark.parametrize("m", [2, 4])
def test_scan_family_matches_conjecture(p, m):
    _, r = scan_family(m, p)
    assert r == pytest.approx(conjectured_constant(p, m).c, abs=1e-10)


def test_scan_family_operator_norm():
    # at p = inf the family maximum is at s = 0 with ratio sqrt(m)
    s, r = scan_family(4, "inf")
    assert s == 0.0 and r == pytest.approx(2.0)


def test_search_deterministic_across_threads():
    a = search(SearchConfig(**SMALL, seed=5, threads=1))
    b = search(SearchConfig(**SMALL, seed=5, threads=3))
    assert a.best_ratio == b.best_ratio
    assert a.best_restart == b.best_restart
    np.testing.assert_array_equal(a.best_tuple, b.best_tuple)
    assert a.restarts == b.restarts


def test_search_report_consistency():
    rep = search(SearchConfig(**SMALL, seed=1))
    assert abs(reevaluate(rep) - rep.best_ratio) <= 1e-10
    assert rep.best_ratio == max(t.ratio for t in rep.restarts)
    assert rep.max_evaluated == rep.best_ratio
    assert rep.best_ratio <= frobenius_constant(2) + 1e-9
    assert rep.universal == universal_bound(2, 2)
    assert rep.gap_to_conjecture >= -1e-9


def test_search_operator_norm_ceiling():
    rep = search(SearchConfig(m=2, n=2, p="inf", restarts=2, max_iters=300))
    assert rep.conjectured is None
    assert rep.best_ratio <= math.sqrt(2) + 1e-6


@pytest.mark.slow
def test_search_p3_lands_between_family_and_universal():
    rep = search(SearchConfig(m=2, n=2, p=3, restarts=4, max_iters=1500, seed=3))
    _, fam = scan_family(2, 3)
    assert fam - 0.02 <= rep.best_ratio <= universal_bound(3, 2) + 1e-6


def test_all_zero_start_rejected():
    with pytest.raises(ValueError):
        local_maximize(np.zeros((2, 2, 2)), 2, SearchConfig())


def test_ratio_of_search_witness_is_scale_free():
    rep = search(SearchConfig(**SMALL))
    assert ratio(7.5 * rep.best_tuple, 2).ratio == pytest.approx(rep.best_ratio, rel=1e-10)
