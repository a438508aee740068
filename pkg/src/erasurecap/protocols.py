"""Dense simulations of the erasure-channel protocols: EPR sharing and
teleportation through a QEC, and the coin-flip channel splitting used in
the no-cloning bound."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .channels import (
    ERASED,
    SX,
    SZ,
    KrausChannel,
    choi_distance,
    compose,
    make_mixed_erasure,
    make_pec,
    make_qec,
    marginal,
)
from .linalg import ATOL, CHAIN_ATOL, DimensionError, bell_state, fidelity_pure, ket, partial_trace, tensor
from .rng import stream

# Bell-measurement outcome on (input, Alice's half) -> Pauli fix on Bob's half.
# With the pair in (|00>+|11>)/sqrt2, outcome B leaves Bob holding U^dagger|psi>.
BELL_BASIS = {
    "phi+": np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2),
    "phi-": np.array([1, 0, 0, -1], dtype=complex) / np.sqrt(2),
    "psi+": np.array([0, 1, 1, 0], dtype=complex) / np.sqrt(2),
    "psi-": np.array([0, 1, -1, 0], dtype=complex) / np.sqrt(2),
}
CORRECTIONS = {
    "phi+": np.eye(2, dtype=complex),
    "phi-": SZ,
    "psi+": SX,
    "psi-": SZ @ SX,
}


def teleport(state: np.ndarray, pair: np.ndarray) -> np.ndarray:
    """Teleport a qubit state using a two-qubit resource ``pair``.

    Qubit order is (input, Alice's half, Bob's half). Alice measures the
    first two in the Bell basis; Bob applies the matching Pauli. The
    returned state is averaged over measurement outcomes.
    """
    state = np.asarray(state, dtype=complex)
    pair = np.asarray(pair, dtype=complex)
    if state.shape != (2, 2) or pair.shape != (4, 4):
        raise DimensionError("teleport needs a qubit state and a two-qubit pair")
    joint = tensor(state, pair)
    out = np.zeros((2, 2), dtype=complex)
    for name, b in BELL_BASIS.items():
        proj = tensor(np.outer(b, b.conj()), np.eye(2))
        post = proj @ joint @ proj
        bob = partial_trace(post, [2, 2, 2], keep=[2])
        u = CORRECTIONS[name]
        out += u @ bob @ u.conj().T
    return out


def _qec_on_second_half(epsilon: float) -> KrausChannel:
    qec = make_qec(epsilon)
    return KrausChannel(tuple(np.kron(np.eye(2), a) for a in qec.kraus), 4, 6)


def _flag_branches(epsilon: float) -> dict[bool, tuple[float, np.ndarray]]:
    """Bob's flag measurement on (id (x) QEC)(EPR): probability and post-measurement pair."""
    out = _qec_on_second_half(epsilon)(np.outer(bell_state(), bell_state().conj()))
    keep = np.kron(np.eye(2), np.diag([1, 1, 0]).astype(complex))
    branches = {}
    for erased, proj in ((False, keep), (True, np.eye(6) - keep)):
        post = proj @ out @ proj
        prob = float(np.trace(post).real)
        branches[erased] = (prob, post / prob if prob > ATOL else post)
    return branches


def _compress_pair(post6: np.ndarray) -> np.ndarray:
    # 2 (x) 3 with Bob's |2> unused -> 2 (x) 2
    idx = [0, 1, 3, 4]
    return post6[np.ix_(idx, idx)]


@dataclass
class EprShareOutcome:
    n_pairs: int
    surviving: tuple[int, ...]
    per_pair_fidelity: list[float]
    pairs: list[np.ndarray] = field(default_factory=list, repr=False)

    @property
    def survivor_fraction(self) -> float:
        return len(self.surviving) / self.n_pairs if self.n_pairs else 0.0


def simulate_epr_through_qec(epsilon: float, n_pairs: int, seed: int) -> EprShareOutcome:
    """Send Bob's half of ``n_pairs`` EPR pairs through a QEC.

    Each use is unravelled into its flagged branch: the erasure flag is
    sampled with the probability the branch carries, erased pairs are
    discarded and every kept pair's state and EPR fidelity are recorded.
    Draw ``i`` of stream ``(seed,)`` decides pair ``i``.
    """
    if not 0.0 <= epsilon <= 1.0:
        raise ValueError(f"epsilon must lie in [0, 1], got {epsilon}")
    if n_pairs < 0:
        raise ValueError("n_pairs must be non-negative")
    branches = _flag_branches(epsilon)
    p_erase = branches[True][0]
    kept_state = _compress_pair(branches[False][1]) if branches[False][0] > ATOL else None
    draws = stream(seed).random(n_pairs)
    surviving, fids, pairs = [], [], []
    for i, u in enumerate(draws):
        if u < p_erase:
            continue
        surviving.append(i)
        pairs.append(kept_state)
        fids.append(fidelity_pure(bell_state(), kept_state))
    return EprShareOutcome(n_pairs, tuple(surviving), fids, pairs)


def transmit_over_qec(states: Sequence[np.ndarray], epsilon: float, seed: int) -> tuple[list[np.ndarray], EprShareOutcome]:
    """Two-way protocol: share pairs over ``len(states)`` QEC uses, then teleport.

    Only as many states as there are surviving pairs are sent, i.e. rate
    1 - t/n after t erasures. Returns Bob's received states and the sharing record.
    """
    share = simulate_epr_through_qec(epsilon, len(states), seed)
    received = [teleport(s, pair) for s, pair in zip(states, share.pairs)]
    return received, share


def _check_split(epsilon: float) -> float:
    if not 0.5 <= epsilon <= 1.0:
        raise ValueError(f"the splitting construction needs 1/2 <= epsilon <= 1, got {epsilon}")
    return float(epsilon)


def split_qec_joint(epsilon: float) -> KrausChannel:
    """Qubit -> Bob (x) Charlie, each 3-level.

    A fair coin sends the qubit through a QEC of strength 2*eps - 1 to one
    receiver while the other receives |2>.
    """
    eps = _check_split(epsilon)
    inner = make_qec(2 * eps - 1)
    e2 = ket(ERASED, 3).reshape(3, 1)
    heads = [np.sqrt(0.5) * np.kron(a, e2) for a in inner.kraus]
    tails = [np.sqrt(0.5) * np.kron(e2, a) for a in inner.kraus]
    return KrausChannel(tuple(heads + tails), 2, 9)


def split_qec_construction(epsilon: float) -> tuple[KrausChannel, KrausChannel]:
    """(Bob's channel, Charlie's channel) from the coin-flip split."""
    joint = split_qec_joint(epsilon)
    return marginal(joint, [3, 3], 0), marginal(joint, [3, 3], 1)


def mixed_split_joint(epsilon: float, delta: float) -> KrausChannel:
    """PEC(delta), then fan out dephased qubits and split the rest.

    Each receiver's output is (qubit + erasure level) (x) phase flag, the
    layout of :func:`make_mixed_erasure`. Dephased qubits are measured in
    the z basis and both receivers get the outcome with flag 1.
    """
    if delta >= 1:
        raise ValueError("delta must be below 1 for the split construction")
    inner = epsilon / (1 - delta)
    split = split_qec_joint(inner)
    f0 = ket(0, 2).reshape(1, 2)
    f1 = ket(1, 2).reshape(1, 2)
    ops = []
    for k in split.kraus:
        # (b, c) -> (b, flag 0, c, flag 0)
        t = np.zeros((3, 2, 3, 2, 2), dtype=complex)
        t[:, 0, :, 0, :] = k.reshape(3, 3, 2)
        ops.append(np.kron(t.reshape(36, 2), f0))
    for j in range(2):
        copy = tensor(ket(j, 3), ket(1, 2), ket(j, 3), ket(1, 2)).reshape(36, 1)
        ops.append(np.kron(copy @ ket(j, 2).reshape(1, 2), f1))
    router = KrausChannel(tuple(ops), 4, 36)
    return compose(router, make_pec(delta))


@dataclass(frozen=True)
class SplitCheck:
    epsilon: float
    delta: float
    inner_strength: float
    bob_distance: float
    charlie_distance: float
    tol: float

    @property
    def passed(self) -> bool:
        return max(self.bob_distance, self.charlie_distance) <= self.tol


def mixed_split_construction(epsilon: float, delta: float, tol: float = CHAIN_ATOL) -> SplitCheck:
    """Build the mixed-channel split and compare both marginals with the mixed channel."""
    if epsilon + delta > 1 + 1e-12 or epsilon < 0 or delta < 0:
        raise ValueError("need epsilon, delta >= 0 and epsilon + delta <= 1")
    if delta >= 1 or epsilon / (1 - delta) < 0.5:
        raise ValueError("the split construction needs epsilon / (1 - delta) >= 1/2")
    joint = mixed_split_joint(epsilon, delta)
    target = make_mixed_erasure(epsilon, delta)
    bob = marginal(joint, [6, 6], 0)
    charlie = marginal(joint, [6, 6], 1)
    return SplitCheck(
        epsilon,
        delta,
        2 * epsilon / (1 - delta) - 1,
        choi_distance(bob, target),
        choi_distance(charlie, target),
        tol,
    )
