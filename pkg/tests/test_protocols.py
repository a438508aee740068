import numpy as np
import pytest

from erasurecap.channels import channels_equal, choi_distance, constant_channel, make_mixed_erasure, make_qec
from erasurecap.linalg import (
    DimensionError,
    bell_state,
    fidelity_pure,
    ket,
    maximally_mixed,
    projector,
    random_density,
    random_pure_state,
)
from erasurecap.protocols import (
    mixed_split_construction,
    simulate_epr_through_qec,
    split_qec_construction,
    split_qec_joint,
    teleport,
    transmit_over_qec,
)

EPR = projector(bell_state())


def test_teleport_perfect_pair(rng):
    for _ in range(100):
        psi = random_pure_state(2, rng)
        assert fidelity_pure(psi, teleport(projector(psi), EPR)) == pytest.approx(1, abs=1e-10)


def test_teleport_mixed_input(rng):
    rho = random_density(2, rng)
    np.testing.assert_allclose(teleport(rho, EPR), rho, atol=1e-12)


def test_teleport_useless_pair(rng):
    for _ in range(5):
        np.testing.assert_allclose(teleport(random_density(2, rng), np.eye(4) / 4), maximally_mixed(2), atol=1e-12)


def test_teleport_dimension_check():
    with pytest.raises(DimensionError):
        teleport(np.eye(3) / 3, EPR)


def test_epr_sharing_extremes():
    all_kept = simulate_epr_through_qec(0.0, 50, 1)
    assert all_kept.surviving == tuple(range(50))
    assert all(f == pytest.approx(1, abs=1e-10) for f in all_kept.per_pair_fidelity)
    none_kept = simulate_epr_through_qec(1.0, 50, 1)
    assert none_kept.surviving == () and none_kept.per_pair_fidelity == []


def test_epr_sharing_quarter_erasure():
    out = simulate_epr_through_qec(0.25, 10_000, 1)
    assert abs(out.survivor_fraction - 0.75) <= 0.02
    assert max(abs(1 - f) for f in out.per_pair_fidelity) <= 1e-10
    assert set(out.surviving) <= set(range(out.n_pairs))


def test_epr_sharing_unbiased():
    eps, n = 0.25, 2000
    fracs = [simulate_epr_through_qec(eps, n, s).survivor_fraction for s in range(50)]
    sigma = np.sqrt(eps * (1 - eps) / n) / np.sqrt(len(fracs))
    assert abs(np.mean(fracs) - (1 - eps)) <= 3 * sigma


@pytest.mark.parametrize("eps", [0.0, 0.3, 0.7])
def test_never_more_pairs_than_uses(eps):
    for seed in range(10):
        out = simulate_epr_through_qec(eps, 40, seed)
        assert len(out.surviving) <= out.n_pairs
        erasures = out.n_pairs - len(out.surviving)
        assert (len(out.surviving) == out.n_pairs) == (erasures == 0)


def test_epr_sharing_argument_checks():
    with pytest.raises(ValueError):
        simulate_epr_through_qec(1.2, 10, 0)


def test_teleport_through_erasures(rng):
    states = [random_pure_state(2, rng) for _ in range(200)]
    received, share = transmit_over_qec([projector(s) for s in states], 0.3, 4)
    t = share.n_pairs - len(share.surviving)
    assert len(received) == share.n_pairs - t
    for psi, out in zip(states, received):
        assert fidelity_pure(psi, out) == pytest.approx(1, abs=1e-10)


@pytest.mark.parametrize("eps", [0.5, 0.6, 0.75, 0.8, 0.9, 1.0])
def test_split_marginals_are_qecs(eps):
    bob, charlie = split_qec_construction(eps)
    assert choi_distance(bob, make_qec(eps)) <= 1e-9
    assert choi_distance(charlie, make_qec(eps)) <= 1e-9


def test_split_half_uses_noiseless_inner():
    joint = split_qec_joint(0.5)
    # heads branch Kraus ops carry the noiseless embedding with weight 1/2
    assert len(joint) == 6
    bob, _ = split_qec_construction(0.5)
    assert channels_equal(bob, make_qec(0.5))


def test_split_full_erasure_is_constant():
    bob, charlie = split_qec_construction(1.0)
    const = constant_channel(ket(2, 3), 2)
    assert channels_equal(bob, const) and channels_equal(charlie, const)


def test_split_regime():
    with pytest.raises(ValueError):
        split_qec_construction(0.49)


@pytest.mark.parametrize("eps,delta", [(0.4, 0.2), (0.5, 0.0), (0.3, 0.4), (0.2, 0.6)])
def test_mixed_split(eps, delta):
    rec = mixed_split_construction(eps, delta)
    assert rec.passed
    assert max(rec.bob_distance, rec.charlie_distance) <= 1e-8


def test_mixed_split_reduces_to_qec_split():
    rec = mixed_split_construction(0.7, 0.0)
    assert rec.inner_strength == pytest.approx(0.4)
    bob, _ = split_qec_construction(0.7)
    flagged = make_mixed_erasure(0.7, 0.0)
    assert rec.passed and channels_equal(bob, make_qec(0.7)) and flagged.dim_out == 6


def test_mixed_split_regime():
    with pytest.raises(ValueError):
        mixed_split_construction(0.3, 0.2)
    with pytest.raises(ValueError):
        mixed_split_construction(0.6, 0.5)
