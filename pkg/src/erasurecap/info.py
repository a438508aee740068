"""Entropic quantities of channels: exchange entropy, coherent information,
Holevo chi, and classical capacities of induced classical channels."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .channels import KrausChannel, apply
from .linalg import ATOL, DimensionError, check_density, entropy_of_spectrum, von_neumann_entropy


@dataclass(frozen=True)
class Ensemble:
    probs: tuple[float, ...]
    states: tuple[np.ndarray, ...]

    def __post_init__(self):
        probs = tuple(float(p) for p in self.probs)
        states = tuple(check_density(s) for s in self.states)
        if len(probs) != len(states) or not probs:
            raise ValueError("ensemble needs one probability per state")
        if min(probs) < 0 or abs(sum(probs) - 1) > ATOL:
            raise ValueError("ensemble probabilities must be a distribution")
        if len({s.shape for s in states}) != 1:
            raise DimensionError("ensemble states have different dimensions")
        object.__setattr__(self, "probs", probs)
        object.__setattr__(self, "states", states)

    @property
    def dim(self) -> int:
        return self.states[0].shape[0]


def binary_entropy(p: float) -> float:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability out of range: {p}")
    if p in (0.0, 1.0):
        return 0.0
    return float(-p * np.log2(p) - (1 - p) * np.log2(1 - p))


def exchange_matrix(channel: KrausChannel, rho: np.ndarray) -> np.ndarray:
    """W_ij = Tr(A_i rho A_j^dagger), the environment's final state."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (channel.dim_in, channel.dim_in):
        raise DimensionError(f"channel expects dim {channel.dim_in}, got {rho.shape}")
    # W_ij = sum_ab (A_i rho)_ab conj(A_j)_ab
    a = np.stack(channel.kraus)
    left = a @ rho
    return np.einsum("iab,jab->ij", left, a.conj())


def entropy_exchange(channel: KrausChannel, rho: np.ndarray) -> float:
    return von_neumann_entropy(exchange_matrix(channel, rho))


def coherent_information(channel: KrausChannel, rho: np.ndarray) -> float:
    """S(N(rho)) - S_e(N, rho); can be negative."""
    return von_neumann_entropy(apply(channel, rho)) - entropy_exchange(channel, rho)


def holevo_chi(channel: KrausChannel, ensemble: Ensemble) -> float:
    if ensemble.dim != channel.dim_in:
        raise DimensionError(f"ensemble dim {ensemble.dim} vs channel input {channel.dim_in}")
    outs = [apply(channel, s) for s in ensemble.states]
    avg = sum(p * o for p, o in zip(ensemble.probs, outs))
    chi = von_neumann_entropy(avg) - sum(
        p * von_neumann_entropy(o) for p, o in zip(ensemble.probs, outs)
    )
    # concavity makes chi >= 0; clip round-off
    return max(0.0, chi)


def check_stochastic(p: np.ndarray, atol: float = ATOL) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.ndim != 2:
        raise ValueError("transition matrix must be 2-d")
    if np.any(p < -atol) or np.any(p > 1 + atol):
        raise ValueError("transition probabilities must lie in [0, 1]")
    if np.max(np.abs(p.sum(axis=1) - 1)) > atol:
        raise ValueError("rows of a transition matrix must sum to 1")
    return np.clip(p, 0.0, 1.0)


def induced_classical_channel(
    channel: KrausChannel,
    input_states: Sequence[np.ndarray],
    povm: Sequence[np.ndarray],
) -> np.ndarray:
    """P(j|i) = Tr(M_j N(|psi_i><psi_i|)) as a row-stochastic matrix."""
    povm = [np.asarray(m, dtype=complex) for m in povm]
    for m in povm:
        if m.shape != (channel.dim_out, channel.dim_out):
            raise DimensionError(f"POVM element {m.shape} vs output dim {channel.dim_out}")
    if np.max(np.abs(sum(povm) - np.eye(channel.dim_out))) > ATOL:
        raise ValueError("POVM elements do not sum to the identity")
    rows = []
    for psi in input_states:
        psi = np.asarray(psi, dtype=complex).ravel()
        out = apply(channel, np.outer(psi, psi.conj()))
        rows.append([np.trace(m @ out).real for m in povm])
    return check_stochastic(np.array(rows))


def mutual_information(prior: np.ndarray, p: np.ndarray) -> float:
    prior = np.asarray(prior, dtype=float)
    q = prior @ p
    h_out = entropy_of_spectrum(q)
    h_cond = sum(w * entropy_of_spectrum(row) for w, row in zip(prior, p))
    return h_out - h_cond


@dataclass
class BlahutArimotoResult:
    capacity: float
    prior: np.ndarray
    iterations: int
    lower: list[float]


def _divergences(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    # D(p_i || q) in bits for every input row
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(p > 0, p * np.log2(p / q), 0.0)
    return terms.sum(axis=1)


def blahut_arimoto_run(p: np.ndarray, tol: float = 1e-9, max_iter: int = 100_000) -> BlahutArimotoResult:
    """Blahut-Arimoto iteration with the usual sandwich stopping rule.

    At each prior r, with d_i = D(P(.|i) || rP), the capacity lies in
    [sum_i r_i d_i, max_i d_i]; iteration stops once the gap is <= tol.
    """
    p = check_stochastic(p)
    m = p.shape[0]
    r = np.full(m, 1.0 / m)
    lower_hist = []
    for it in range(1, max_iter + 1):
        q = r @ p
        d = _divergences(p, q)
        lower = float(r @ d)
        upper = float(d.max())
        lower_hist.append(lower)
        if upper - lower <= tol:
            break
        r = r * np.exp2(d)
        r /= r.sum()
    return BlahutArimotoResult(max(lower, 0.0), r, it, lower_hist)


def blahut_arimoto(p: np.ndarray, tol: float = 1e-9) -> float:
    """Capacity in bits of a discrete memoryless channel P(j|i)."""
    return blahut_arimoto_run(p, tol).capacity
