"""Kraus-operator channels and the erasure-type channel family."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .linalg import ATOL, DimensionError, ket

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)

# |2>, the erasure symbol of the 3-level output
ERASED = 2


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """Trace-preserving CP map rho -> sum_i A_i rho A_i^dagger."""

    kraus: tuple[np.ndarray, ...]
    dim_in: int
    dim_out: int

    def __post_init__(self):
        ops = tuple(np.array(a, dtype=complex) for a in self.kraus)
        if not ops:
            raise ValueError("a channel needs at least one Kraus operator")
        for a in ops:
            if a.shape != (self.dim_out, self.dim_in):
                raise DimensionError(
                    f"Kraus operator of shape {a.shape}, expected {(self.dim_out, self.dim_in)}"
                )
            a.setflags(write=False)
        object.__setattr__(self, "kraus", ops)
        gram = sum(a.conj().T @ a for a in ops)
        if np.max(np.abs(gram - np.eye(self.dim_in))) > ATOL:
            raise ValueError("Kraus operators are not trace preserving")

    @classmethod
    def from_kraus(cls, ops: Sequence[np.ndarray]) -> "KrausChannel":
        ops = [np.atleast_2d(np.asarray(a, dtype=complex)) for a in ops]
        dim_out, dim_in = ops[0].shape
        return cls(tuple(ops), dim_in, dim_out)

    def __call__(self, rho: np.ndarray) -> np.ndarray:
        return apply(self, rho)

    def __len__(self) -> int:
        return len(self.kraus)


def _check_prob(name: str, p: float) -> float:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {p}")
    return float(p)


def identity_channel(dim: int = 2) -> KrausChannel:
    return KrausChannel((np.eye(dim),), dim, dim)


def _qubit_embedding() -> np.ndarray:
    # span{|0>,|1>} -> 3-level space
    e = np.zeros((3, 2), dtype=complex)
    e[0, 0] = e[1, 1] = 1.0
    return e


def make_qec(epsilon: float) -> KrausChannel:
    """Quantum erasure channel: with probability eps the qubit becomes |2>."""
    eps = _check_prob("epsilon", epsilon)
    to_erased = [np.outer(ket(ERASED, 3), ket(j, 2)) for j in range(2)]
    ops = [np.sqrt(1 - eps) * _qubit_embedding()] + [np.sqrt(eps) * a for a in to_erased]
    return KrausChannel(tuple(ops), 2, 3)


def make_pec(epsilon: float) -> KrausChannel:
    """Phase erasure channel, qubit -> qubit (x) flag.

    rho -> (1-eps) rho (x) |0><0| + eps (rho + Z rho Z)/2 (x) |1><1|
    """
    eps = _check_prob("epsilon", epsilon)
    f0 = ket(0, 2).reshape(2, 1)
    f1 = ket(1, 2).reshape(2, 1)
    ops = (
        np.sqrt(1 - eps) * np.kron(I2, f0),
        np.sqrt(eps / 2) * np.kron(I2, f1),
        np.sqrt(eps / 2) * np.kron(SZ, f1),
    )
    return KrausChannel(ops, 2, 4)


def make_depolarizing(epsilon: float) -> KrausChannel:
    """rho -> (1-eps) rho + eps I/2, as a Pauli twirl."""
    eps = _check_prob("epsilon", epsilon)
    ops = (
        np.sqrt(1 - 3 * eps / 4) * I2,
        np.sqrt(eps / 4) * SX,
        np.sqrt(eps / 4) * SY,
        np.sqrt(eps / 4) * SZ,
    )
    return KrausChannel(ops, 2, 2)


def check_mixed_params(epsilon: float, delta: float) -> tuple[float, float]:
    eps = _check_prob("epsilon", epsilon)
    dlt = _check_prob("delta", delta)
    if eps + dlt > 1 + 1e-12:
        raise ValueError(f"epsilon + delta must not exceed 1, got {eps + dlt}")
    return eps, dlt


def make_mixed_erasure(epsilon: float, delta: float) -> KrausChannel:
    """Erase with probability eps, phase-erase with probability delta.

    Output space is (qubit + erasure level) (x) phase flag, 3 (x) 2. Erasures
    carry flag 0; dephased qubits carry flag 1.
    """
    eps, dlt = check_mixed_params(epsilon, delta)
    keep = max(0.0, 1 - eps - dlt)
    emb = _qubit_embedding()
    f0 = ket(0, 2).reshape(2, 1)
    f1 = ket(1, 2).reshape(2, 1)
    ops = [
        np.sqrt(keep) * np.kron(emb, f0),
        np.sqrt(dlt / 2) * np.kron(emb, f1),
        np.sqrt(dlt / 2) * np.kron(emb @ SZ, f1),
    ]
    for j in range(2):
        ops.append(np.sqrt(eps) * np.kron(np.outer(ket(ERASED, 3), ket(j, 2)), f0))
    return KrausChannel(tuple(ops), 2, 6)


def apply(channel: KrausChannel, rho: np.ndarray) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (channel.dim_in, channel.dim_in):
        raise DimensionError(f"channel expects dim {channel.dim_in}, got {rho.shape}")
    return sum(a @ rho @ a.conj().T for a in channel.kraus)


def choi(channel: KrausChannel) -> np.ndarray:
    """(id (x) channel) on the maximally entangled state of dim_in^2.

    The input reference system is the left factor.
    """
    d = channel.dim_in
    omega = np.zeros(d * d, dtype=complex)
    for i in range(d):
        omega[i * d + i] = 1.0
    omega /= np.sqrt(d)
    big = np.outer(omega, omega.conj())
    return apply(tensor_channels(identity_channel(d), channel), big)


def channel_from_choi(J: np.ndarray, dim_in: int, dim_out: int, tol: float = 1e-12) -> KrausChannel:
    """Recover a Kraus representation from a Choi state built by :func:`choi`."""
    w, v = np.linalg.eigh(np.asarray(J) * dim_in)
    ops = []
    for lam, vec in zip(w, v.T):
        if lam > tol:
            # vec indexed (i, o) with i the reference factor
            ops.append(np.sqrt(lam) * vec.reshape(dim_in, dim_out).T)
    return KrausChannel.from_kraus(ops)


def choi_distance(c1: KrausChannel, c2: KrausChannel) -> float:
    if (c1.dim_in, c1.dim_out) != (c2.dim_in, c2.dim_out):
        raise DimensionError("channels act between different spaces")
    return float(np.max(np.abs(choi(c1) - choi(c2))))


def channels_equal(c1: KrausChannel, c2: KrausChannel, tol: float = 1e-9) -> bool:
    return choi_distance(c1, c2) <= tol


def compose(second: KrausChannel, first: KrausChannel) -> KrausChannel:
    """``second`` after ``first``."""
    if first.dim_out != second.dim_in:
        raise DimensionError(f"cannot feed dim {first.dim_out} into dim {second.dim_in}")
    ops = tuple(b @ a for b in second.kraus for a in first.kraus)
    return KrausChannel(ops, first.dim_in, second.dim_out)


def tensor_channels(c1: KrausChannel, c2: KrausChannel) -> KrausChannel:
    ops = tuple(np.kron(a, b) for a in c1.kraus for b in c2.kraus)
    return KrausChannel(ops, c1.dim_in * c2.dim_in, c1.dim_out * c2.dim_out)


def embed_output(channel: KrausChannel, iso: np.ndarray) -> KrausChannel:
    """Follow ``channel`` by the isometry ``iso`` on its output space."""
    iso = np.asarray(iso, dtype=complex)
    return KrausChannel(tuple(iso @ a for a in channel.kraus), channel.dim_in, iso.shape[0])


def marginal(channel: KrausChannel, out_dims: Sequence[int], keep: int) -> KrausChannel:
    """Reduce a channel with multipartite output to one output factor."""
    out_dims = list(out_dims)
    if int(np.prod(out_dims)) != channel.dim_out:
        raise DimensionError(f"output dims {out_dims} do not multiply to {channel.dim_out}")
    d_keep = out_dims[keep]
    ops = []
    for a in channel.kraus:
        t = a.reshape(out_dims + [channel.dim_in])
        t = np.moveaxis(t, keep, 0).reshape(d_keep, -1, channel.dim_in)
        for j in range(t.shape[1]):
            blk = t[:, j, :]
            if np.any(np.abs(blk) > 0):
                ops.append(blk)
    return KrausChannel(tuple(ops), channel.dim_in, d_keep)


def constant_channel(state: np.ndarray, dim_in: int) -> KrausChannel:
    """Discard the input and prepare ``state`` (a pure state vector)."""
    psi = np.asarray(state, dtype=complex)
    return KrausChannel(
        tuple(np.outer(psi, ket(j, dim_in)) for j in range(dim_in)), dim_in, psi.size
    )


__all__ = [
    "KrausChannel",
    "identity_channel",
    "make_qec",
    "make_pec",
    "make_depolarizing",
    "make_mixed_erasure",
    "check_mixed_params",
    "apply",
    "choi",
    "channel_from_choi",
    "choi_distance",
    "channels_equal",
    "compose",
    "tensor_channels",
    "embed_output",
    "marginal",
    "constant_channel",
]
