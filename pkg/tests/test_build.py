import math

import numpy as np
import pytest

from permsel.build import (
    BuildConfig,
    build_verified,
    chernoff_alpha,
    derive_size_params,
    isolation_gamma,
    minimal_m_search,
    random_selector,
    smallest_c,
    substream_seed,
    tail_beta,
)
from permsel.errors import AttemptsExhaustedError
from permsel.selectors import (
    selector_to_text,
    verify_kq_permutation_selector,
    verify_permutation_selector,
    verify_strong,
)


def test_gamma_k2():
    assert isolation_gamma(2) == 0.5


def test_k2_constants():
    p = derive_size_params(2, 16)
    assert p.gamma == 0.5
    assert p.delta == 0.5
    assert p.alpha == pytest.approx(math.exp(-1 / 16), rel=1e-12)
    assert p.beta == p.alpha  # exp(-1/16) > exp(-1/4)


def test_gamma_range_over_k():
    for k in range(2, 65):
        g = isolation_gamma(k)
        assert 1 / math.e < g <= 0.5


def test_size_params_invariants_grid():
    for k in range(2, 13):
        for n in (4, 16, 64, 256):
            p = derive_size_params(k, n) if k <= n else None
            if p is None:
                continue
            assert 0 < p.delta < 1
            assert p.alpha < 1 and p.beta < 1
            assert p.c * p.beta**p.c < 1 / 16
            # smallest grid point: the previous one must fail
            prev = p.c - 0.25
            assert prev <= 0 or prev * p.beta**prev >= 1 / 16
            assert p.m >= 2 * k
            assert p.m == max(2 * k, math.ceil(p.c * k * k * math.log2(n)))


def test_size_params_kq_variant():
    p = derive_size_params(4, 16, q=2)
    assert p.m == max(8, math.ceil(p.c * 4 * 2 * math.log2(16)))


def test_size_params_rejections():
    with pytest.raises(ValueError):
        derive_size_params(1, 4)
    with pytest.raises(ValueError):
        derive_size_params(5, 4)
    with pytest.raises(ValueError):
        derive_size_params(2, 4, q=3)


def test_smallest_c_rejects_bad_beta():
    with pytest.raises(ValueError):
        smallest_c(1.0)


# ---------------------------------------------------------------------------
# random generation
# ---------------------------------------------------------------------------

def test_random_selector_empty():
    assert len(random_selector(2, 4, 0, seed=1)) == 0


def test_random_selector_reproducible():
    a = random_selector(3, 10, 7, seed=42)
    b = random_selector(3, 10, 7, seed=42)
    assert selector_to_text(a, 3) == selector_to_text(b, 3)


def test_random_selector_prefix_property():
    short = random_selector(3, 10, 5, seed=9)
    long = random_selector(3, 10, 8, seed=9)
    assert long.sets[:5] == short.sets


def test_random_selector_k1_includes_everything():
    s = random_selector(1, 6, 3, seed=0)
    assert all(set_ == frozenset(range(6)) for set_ in s.sets)


def test_random_selector_mean_set_size():
    # Binomial mean N/k with standard error sqrt(N p (1-p) / m).
    n, k, m = 100, 10, 10_000
    s = random_selector(k, n, m, seed=123)
    mean = sum(len(x) for x in s.sets) / m
    se = math.sqrt(n * (1 / k) * (1 - 1 / k) / m)
    assert abs(mean - n / k) <= 3 * se


def test_substream_seeds_differ():
    seeds = {substream_seed(5, i) for i in range(32)}
    assert len(seeds) == 32


# ---------------------------------------------------------------------------
# build_verified
# ---------------------------------------------------------------------------

def test_build_verified_small_permutation():
    cfg = BuildConfig(seed=3, target="permutation", size_mode="up_to", m_override=16)
    selector, attempts = build_verified(2, 4, cfg)
    assert attempts <= cfg.max_attempts
    assert verify_permutation_selector(selector, 2, "up_to").ok


def test_build_verified_uses_formula_m_by_default():
    cfg = BuildConfig(seed=0, target="permutation", size_mode="up_to")
    selector, attempts = build_verified(2, 4, cfg)
    assert len(selector) == derive_size_params(2, 4).m
    assert attempts == 1  # formula length passes essentially always


def test_build_verified_k1_full_universe():
    cfg = BuildConfig(seed=0, target="strong", size_mode="exact", m_override=1)
    selector, _ = build_verified(1, 5, cfg)
    assert selector.sets == (frozenset(range(5)),)
    assert verify_strong(selector, 1).ok


def test_build_verified_m_zero_exhausts():
    cfg = BuildConfig(seed=0, target="permutation", size_mode="exact", m_override=0, max_attempts=3)
    with pytest.raises(AttemptsExhaustedError):
        build_verified(2, 2, cfg)


def test_build_verified_kq_target():
    cfg = BuildConfig(seed=11, target="kq_permutation", size_mode="up_to", q=2, m_override=40)
    selector, _ = build_verified(4, 8, cfg)
    assert verify_kq_permutation_selector(selector, 4, 2, "up_to").ok


def test_build_verified_soundness_reverifies():
    cfg = BuildConfig(seed=21, target="strong", size_mode="exact", m_override=30)
    selector, _ = build_verified(3, 8, cfg)
    assert verify_strong(selector, 3, "exact").ok


def test_build_config_validation():
    with pytest.raises(ValueError):
        BuildConfig(max_attempts=0)
    with pytest.raises(ValueError):
        BuildConfig(target="kq_permutation")
    with pytest.raises(ValueError):
        BuildConfig(target="nonsense")


# ---------------------------------------------------------------------------
# minimal_m_search
# ---------------------------------------------------------------------------

def test_minimal_m_22_permutation_exact_is_3():
    cfg = BuildConfig(seed=0, target="permutation", size_mode="exact")
    assert minimal_m_search(2, 2, cfg, trials_per_m=200) == 3


def test_minimal_m_k1_strong_is_1():
    cfg = BuildConfig(seed=0, target="strong", size_mode="exact")
    assert minimal_m_search(1, 4, cfg, trials_per_m=5) == 1


def test_minimal_m_passing_trial_is_monotone_in_m():
    # The same trial seed keeps passing as sets are appended.
    cfg = BuildConfig(seed=0, target="permutation", size_mode="exact")
    m_star = minimal_m_search(2, 3, cfg, trials_per_m=50)
    seeds = [substream_seed(0, j) for j in range(50)]
    passing = [s for s in seeds
               if verify_permutation_selector(random_selector(2, 3, m_star, s), 2, "exact").ok]
    assert passing
    for s in passing[:3]:
        assert verify_permutation_selector(random_selector(2, 3, m_star + 4, s), 2, "exact").ok


def test_minimal_m_exhausts_on_tiny_cap():
    cfg = BuildConfig(seed=0, target="permutation", size_mode="exact")
    with pytest.raises(AttemptsExhaustedError):
        minimal_m_search(2, 2, cfg, trials_per_m=4, max_m=2)
