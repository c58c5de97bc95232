"""Source model: parameters, correlated pair generation, block probabilities."""

import math

import numpy as np
import pytest

from hpnc.model import (
    SystemParams,
    block_probability,
    block_to_int,
    equal_factor,
    generate_correlated_pair,
    int_to_block,
    xor_block,
)


def test_equal_factor_values():
    assert equal_factor(0.0) == 0.5
    assert equal_factor(1.0) == 1.0
    assert equal_factor(0.9) == 0.95


@pytest.mark.parametrize("r", [-0.1, -1.0, 1.0001, 2.0])
def test_equal_factor_rejects_out_of_range(r):
    with pytest.raises(ValueError):
        equal_factor(r)


def test_system_params_validation():
    SystemParams(n=6, r=0.9, gamma=1.0)  # valid
    with pytest.raises(ValueError):
        SystemParams(n=0, r=0.9, gamma=1.0)
    with pytest.raises(ValueError):
        SystemParams(n=6, r=-0.2, gamma=1.0)
    with pytest.raises(ValueError):
        SystemParams(n=6, r=0.9, gamma=0.0)


def test_system_params_derived():
    params = SystemParams(n=6, r=0.9, gamma=4.0)
    assert params.rho == 0.95
    assert params.n0 == 0.25


def test_xor_block():
    a = np.array([1, 0, 1], dtype=np.uint8)
    b = np.array([1, 1, 0], dtype=np.uint8)
    assert np.array_equal(xor_block(a, b), [0, 1, 1])
    assert np.array_equal(xor_block(a, a), [0, 0, 0])
    assert np.array_equal(xor_block(a, np.zeros(3, dtype=np.uint8)), a)
    with pytest.raises(ValueError):
        xor_block(a, np.zeros(4, dtype=np.uint8))


def test_block_probability_values():
    assert block_probability(np.array([0, 0]), 0.7) == pytest.approx(0.49, rel=1e-12)
    for v in range(8):
        assert block_probability(int_to_block(v, 3), 0.5) == pytest.approx(0.125, rel=1e-12)
    assert block_probability(np.zeros(6, dtype=np.uint8), 0.95) == pytest.approx(
        0.95**6, rel=1e-14
    )
    with pytest.raises(ValueError):
        block_probability(np.array([0, 1]), 1.5)


@pytest.mark.parametrize("n", [1, 2, 4, 8, 12])
@pytest.mark.parametrize("rho", [0.5, 0.6, 0.75, 0.9, 0.95, 1.0])
def test_block_probability_sums_to_one(n, rho):
    total = math.fsum(
        block_probability(int_to_block(v, n), rho) for v in range(1 << n)
    )
    assert abs(total - 1.0) < 1e-12


def test_block_probability_depends_only_on_zero_count():
    rho = 0.83
    n = 6
    by_zeros = {}
    for v in range(1 << n):
        block = int_to_block(v, n)
        zeros = n - int(block.sum())
        by_zeros.setdefault(zeros, set()).add(block_probability(block, rho))
    for values in by_zeros.values():
        assert len(values) == 1


def test_block_int_round_trip():
    for n in (1, 3, 6):
        for v in range(1 << n):
            assert block_to_int(int_to_block(v, n)) == v
    assert block_to_int(np.array([1, 0, 1])) == 5


def test_identical_blocks_at_full_correlation():
    params = SystemParams(n=64, r=1.0, gamma=1.0)
    rng = np.random.default_rng(3)
    for _ in range(10):
        a1, a2 = generate_correlated_pair(params, rng)
        assert np.array_equal(a1, a2)


@pytest.mark.parametrize(
    "r,expected", [(0.0, 0.5), (0.9, 0.95)]
)
def test_empirical_agreement_frequency(r, expected):
    # 10^6 positions; the agreement fraction is binomial around rho
    params = SystemParams(n=1000, r=r, gamma=1.0)
    rng = np.random.default_rng(2026)
    agree = 0
    for _ in range(1000):
        a1, a2 = generate_correlated_pair(params, rng)
        agree += int(np.count_nonzero(a1 == a2))
    freq = agree / 1e6
    se = math.sqrt(expected * (1.0 - expected) / 1e6)
    assert abs(freq - expected) <= 3.0 * se


def test_pair_generation_is_seed_reproducible():
    params = SystemParams(n=32, r=0.7, gamma=1.0)
    first = generate_correlated_pair(params, np.random.default_rng(11))
    second = generate_correlated_pair(params, np.random.default_rng(11))
    assert np.array_equal(first[0], second[0])
    assert np.array_equal(first[1], second[1])


def test_first_block_is_uniform():
    params = SystemParams(n=1000, r=0.9, gamma=1.0)
    rng = np.random.default_rng(5)
    ones = sum(
        int(generate_correlated_pair(params, rng)[0].sum()) for _ in range(500)
    )
    freq = ones / 5e5
    assert abs(freq - 0.5) <= 3.0 * math.sqrt(0.25 / 5e5)
