import numpy as np
import pytest
from hypothesis import given, strategies as st

from erasurecap.linalg import (
    DimensionError,
    bell_state,
    check_density,
    eigh,
    fidelity_pure,
    ket,
    maximally_mixed,
    partial_trace,
    projector,
    random_density,
    random_pure_state,
    tensor,
    von_neumann_entropy,
)

from oracles import h2

seeds = st.integers(0, 2**32 - 1)
dims = st.integers(1, 4)


def test_tensor_maximally_mixed():
    np.testing.assert_allclose(tensor(maximally_mixed(2), maximally_mixed(2)), maximally_mixed(4))


def test_tensor_basis():
    assert np.allclose(tensor(projector(ket(0, 2)), projector(ket(1, 2))), projector(ket(1, 4)))


def test_tensor_hand_expansion():
    rho = np.diag([0.7, 0.3])
    np.testing.assert_allclose(tensor(rho, projector(ket(0, 2))), np.diag([0.7, 0, 0.3, 0]))


@pytest.mark.parametrize("keep", [[0], [1]])
def test_partial_trace_of_epr_is_maximally_mixed(keep):
    epr = projector(bell_state())
    np.testing.assert_allclose(partial_trace(epr, [2, 2], keep), maximally_mixed(2), atol=1e-15)


def test_partial_trace_product(rng):
    a, b = random_density(2, rng), random_density(3, rng)
    np.testing.assert_allclose(partial_trace(tensor(a, b), [2, 3], [0]), a, atol=1e-12)
    np.testing.assert_allclose(partial_trace(tensor(a, b), [2, 3], [1]), b, atol=1e-12)


def test_partial_trace_flag_of_phase_erasure():
    # hand evaluation: 0.6 rho (x) |0><0| + 0.4 (rho + Z rho Z)/2 (x) |1><1|
    plus = projector(np.array([1, 1]) / np.sqrt(2))
    z = np.diag([1, -1])
    out = 0.6 * tensor(plus, projector(ket(0, 2))) + 0.4 * tensor((plus + z @ plus @ z) / 2, projector(ket(1, 2)))
    np.testing.assert_allclose(partial_trace(out, [2, 2], [0]), 0.6 * plus + 0.4 * np.eye(2) / 2, atol=1e-15)


def test_partial_trace_everything_is_one(rng):
    rho = random_density(6, rng)
    assert partial_trace(rho, [2, 3], []) == pytest.approx(np.array([[1.0]]))


def test_partial_trace_dims_mismatch():
    with pytest.raises(DimensionError):
        partial_trace(np.eye(4) / 4, [2, 3], [0])


def test_entropy_values():
    assert von_neumann_entropy(projector(random_pure_state(3, np.random.default_rng(0)))) == pytest.approx(0, abs=1e-12)
    assert von_neumann_entropy(maximally_mixed(2)) == pytest.approx(1.0)
    assert von_neumann_entropy(np.diag([0.75, 0.25])) == pytest.approx(h2(0.25), abs=1e-12)
    assert von_neumann_entropy(np.diag([0.75, 0.25])) == pytest.approx(0.811278, abs=1e-6)


def test_fidelity_values():
    assert fidelity_pure(ket(0, 2), projector(ket(0, 2))) == 1
    assert fidelity_pure(ket(0, 2), projector(ket(1, 2))) == 0
    plus = np.array([1, 1]) / np.sqrt(2)
    assert fidelity_pure(plus, maximally_mixed(2)) == pytest.approx(0.5)
    with pytest.raises(DimensionError):
        fidelity_pure(plus, maximally_mixed(3))


def test_check_density_rejects_bad_states():
    with pytest.raises(ValueError):
        check_density(np.diag([0.5, 0.6]))
    with pytest.raises(ValueError):
        check_density(np.diag([1.5, -0.5]))
    with pytest.raises(ValueError):
        check_density(np.array([[0.5, 0.1], [0.2, 0.5]]))


@given(seeds, dims, dims)
def test_entropy_additive(seed, da, db):
    rng = np.random.default_rng(seed)
    a, b = random_density(da, rng), random_density(db, rng)
    assert von_neumann_entropy(tensor(a, b)) == pytest.approx(
        von_neumann_entropy(a) + von_neumann_entropy(b), abs=1e-8
    )


@given(seeds)
def test_entropy_bounds(seed):
    rng = np.random.default_rng(seed)
    rho = random_density(4, rng)
    assert -1e-12 <= von_neumann_entropy(rho) <= 2 + 1e-12


@given(seeds)
def test_partial_trace_order_independent(seed):
    rng = np.random.default_rng(seed)
    rho = random_density(12, rng)
    dims3 = [2, 3, 2]
    direct = partial_trace(rho, dims3, [1])
    first0 = partial_trace(partial_trace(rho, dims3, [1, 2]), [3, 2], [0])
    first2 = partial_trace(partial_trace(rho, dims3, [0, 1]), [2, 3], [1])
    np.testing.assert_allclose(first0, direct, atol=1e-10)
    np.testing.assert_allclose(first2, direct, atol=1e-10)
    check_density(direct)


@given(seeds, st.integers(2, 6))
def test_fidelity_of_own_projector(seed, d):
    psi = random_pure_state(d, np.random.default_rng(seed))
    assert fidelity_pure(psi, projector(psi)) == pytest.approx(1, abs=1e-10)


@given(seeds)
def test_eigen_reconstruction(seed):
    rho = random_density(5, np.random.default_rng(seed))
    w, v = eigh(rho)
    assert np.max(np.abs(v @ np.diag(w) @ v.conj().T - rho)) <= 1e-9
