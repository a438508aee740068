import itertools
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.stats import chisquare

from erasurecap.rng import stream
from erasurecap.stabilizer import (
    ErasurePattern,
    GF2Matrix,
    StabilizerCode,
    erasure_failure_rate,
    five_qubit_code,
    gf2_rank,
    is_erasure_correctable,
    pack_rows,
    random_stabilizer_code,
    rate_to_k,
    symplectic_product,
    threshold_scan,
    trial_fails,
    unpack_rows,
)

from oracles import brute_force_correctable, naive_gf2_rank

seeds = st.integers(0, 2**32 - 1)


def bits(n, seed):
    return np.random.default_rng(seed).integers(0, 2, size=n)


@given(seeds, st.integers(1, 8))
def test_symplectic_self_product_is_zero(seed, n):
    u = bits(2 * n, seed)
    assert symplectic_product(u, u) == 0


def test_symplectic_examples():
    assert symplectic_product([1, 0], [0, 1]) == 1
    # XZ vs ZX on two qubits
    assert symplectic_product([1, 0, 0, 1], [0, 1, 1, 0]) == 0
    with pytest.raises(ValueError):
        symplectic_product([1, 0], [1, 0, 0, 0])


@given(seeds, st.integers(1, 6))
def test_symplectic_bilinear(seed, n):
    rng = np.random.default_rng(seed)
    u, v, w = (rng.integers(0, 2, 2 * n) for _ in range(3))
    assert symplectic_product(u, v) == symplectic_product(v, u)
    assert symplectic_product(u ^ v, w) == symplectic_product(u, w) ^ symplectic_product(v, w)


@given(seeds, st.integers(1, 64), st.integers(1, 128))
def test_packed_rank_matches_naive(seed, rows, cols):
    rng = np.random.default_rng(seed)
    # low-density rows make rank deficiency common
    dense = (rng.random((rows, cols)) < rng.uniform(0.05, 0.6)).astype(np.uint8)
    if rows > 1 and rng.random() < 0.3:
        dense[-1] = dense[0] ^ dense[rows // 2]
    assert gf2_rank(dense) == naive_gf2_rank(dense.tolist())


def test_pack_round_trip():
    dense = bits(3 * 130, 4).reshape(3, 130).astype(np.uint8)
    np.testing.assert_array_equal(unpack_rows(pack_rows(dense), 130), dense)
    assert GF2Matrix.from_dense(dense).to_dense().tolist() == dense.tolist()


def test_code_validation():
    with pytest.raises(ValueError):
        StabilizerCode.from_paulis(["XI", "ZI"])
    with pytest.raises(ValueError):
        StabilizerCode.from_paulis(["ZZ", "ZZ"])
    with pytest.raises(ValueError):
        StabilizerCode.from_paulis(["XQ"])
    assert five_qubit_code().is_valid()


def test_random_code_small_cases():
    c = random_stabilizer_code(1, 0, stream(3))
    assert c.is_valid() and c.dense().any()
    for seed in range(20):
        c = random_stabilizer_code(5, 1, stream(seed))
        assert c.checks.rows == 4 and c.is_valid()
    with pytest.raises(ValueError):
        random_stabilizer_code(4, 4, stream(0))


@pytest.mark.parametrize("n,k", [(16, 0), (64, 20), (200, 150)])
def test_random_code_valid_larger(n, k):
    assert random_stabilizer_code(n, k, stream(n)).is_valid()


def test_generators_uniform_over_nonzero_paulis():
    # each generator is marginally uniform over the 4^n - 1 non-identity Paulis,
    # so its weight follows C(n, w) 3^w / (4^n - 1)
    n, k = 8, 4
    counts = np.zeros(n + 1)
    for i in range(2500):
        d = random_stabilizer_code(n, k, stream(77, i)).dense()
        for w in ((d[:, :n] | d[:, n:]).sum(axis=1)):
            counts[w] += 1
    expected = np.array([math.comb(n, w) * 3**w for w in range(n + 1)], dtype=float)
    expected[0] = 0
    expected *= counts.sum() / expected.sum()
    # pool the sparse low-weight bins
    obs = np.concatenate([[counts[:4].sum()], counts[4:]])
    exp = np.concatenate([[expected[:4].sum()], expected[4:]])
    assert counts[0] == 0
    assert chisquare(obs, exp).pvalue > 1e-3


def test_empty_pattern_correctable():
    assert is_erasure_correctable(five_qubit_code(), ErasurePattern(5, frozenset()))
    assert is_erasure_correctable(random_stabilizer_code(10, 3, stream(0)), [])


def test_pattern_validation():
    with pytest.raises(ValueError):
        ErasurePattern(3, frozenset({3}))
    with pytest.raises(ValueError):
        is_erasure_correctable(five_qubit_code(), ErasurePattern(4, frozenset({0})))


def test_five_qubit_code_known_locations():
    code = five_qubit_code()
    for size in range(6):
        for e in itertools.combinations(range(5), size):
            got = is_erasure_correctable(code, e)
            assert got == brute_force_correctable(code.dense().tolist(), e)
            assert got == (size <= 2)


def test_matches_brute_force_on_random_codes():
    rng = np.random.default_rng(11)
    for i in range(100):
        n = int(rng.integers(1, 6))
        k = int(rng.integers(0, n))
        code = random_stabilizer_code(n, k, stream(5, i))
        checks = code.dense().tolist()
        for size in range(n + 1):
            for e in itertools.combinations(range(n), size):
                assert is_erasure_correctable(code, e) == brute_force_correctable(checks, e)


def test_correctability_monotone():
    rng = np.random.default_rng(2)
    for i in range(60):
        n = int(rng.integers(2, 11))
        code = random_stabilizer_code(n, int(rng.integers(0, n)), stream(9, i))
        big = set(np.flatnonzero(rng.random(n) < 0.5).tolist())
        small = {q for q in big if rng.random() < 0.6}
        if is_erasure_correctable(code, big):
            assert is_erasure_correctable(code, small)


def test_failure_rate_zero_erasures():
    assert erasure_failure_rate(32, 10, 0.0, 20, 1) == 0.0


def test_failure_rate_zero_rate_code():
    # n - k = 64 syndrome bits against ~16 erasures; recorded value at seed 1
    assert erasure_failure_rate(64, 0, 0.25, 200, 1) == 0.0


def test_failure_rate_deterministic_and_order_free():
    a = erasure_failure_rate(48, 20, 0.3, 30, 7)
    assert a == erasure_failure_rate(48, 20, 0.3, 30, 7)
    backwards = sum(trial_fails(48, 20, 0.3, 7, i) for i in reversed(range(30))) / 30
    assert a == backwards


def test_failure_rate_argument_checks():
    with pytest.raises(ValueError):
        erasure_failure_rate(10, 10, 0.1, 5, 0)
    with pytest.raises(ValueError):
        erasure_failure_rate(10, 2, 0.1, 0, 0)
    with pytest.raises(ValueError):
        erasure_failure_rate(10, 2, 1.5, 5, 0)


def test_fixed_weight_mode():
    # exactly n*eps = 16 erasures against 64 - 24 = 40 syndrome bits: always fine
    assert erasure_failure_rate(64, 24, 0.25, 20, 3, fixed_weight=True) == 0.0
    # 2 * 16 > 64 - 40: never fine
    assert erasure_failure_rate(64, 40, 0.25, 20, 3, fixed_weight=True) == 1.0


def test_rate_to_k():
    assert rate_to_k(256, 0.4) == 102
    assert rate_to_k(10, 0.0) == 0
    with pytest.raises(ValueError):
        rate_to_k(10, 1.0)


def test_scan_zero_rate():
    assert threshold_scan(64, 0.3, [0.0], 20, 1) == [(0.0, 0.0)]


def test_scan_sigmoid_around_half():
    table = dict(threshold_scan(256, 0.25, [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9], 100, 1))
    assert all(table[r] <= 0.05 for r in (0.1, 0.2, 0.3, 0.4))
    assert all(table[r] >= 0.95 for r in (0.6, 0.7, 0.8, 0.9))
    assert 0.2 < table[0.5] < 0.8
    rates = sorted(table)
    assert all(table[b] >= table[a] - 0.05 for a, b in zip(rates, rates[1:]))


def test_larger_blocks_fail_less():
    small = erasure_failure_rate(128, rate_to_k(128, 0.4), 0.25, 200, 1)
    large = erasure_failure_rate(512, rate_to_k(512, 0.4), 0.25, 200, 1)
    assert large < small
