"""Dense density-matrix helpers: states, tensor products, partial trace, entropy."""

from __future__ import annotations

from functools import reduce
from typing import Sequence

import numpy as np

# structural checks (hermiticity, trace, positivity, normalisation)
ATOL = 1e-10
# arithmetic chains (entropy sums, composed channels)
CHAIN_ATOL = 1e-8
# eigenvalues below this are treated as exact zeros
EIG_CUTOFF = 1e-12


class DimensionError(ValueError):
    pass


def check_density(rho: np.ndarray, atol: float = ATOL) -> np.ndarray:
    """Return ``rho`` as a complex array after checking it is a valid state."""
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise DimensionError(f"density matrix must be square, got {rho.shape}")
    if np.max(np.abs(rho - rho.conj().T)) > atol:
        raise ValueError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1) > atol:
        raise ValueError(f"density matrix trace is {np.trace(rho).real}, expected 1")
    if np.linalg.eigvalsh(rho)[0] < -atol:
        raise ValueError("density matrix is not positive semidefinite")
    return rho


def is_density(rho: np.ndarray, atol: float = ATOL) -> bool:
    try:
        check_density(rho, atol)
    except ValueError:
        return False
    return True


def ket(index: int, dim: int) -> np.ndarray:
    """Computational basis vector |index> in ``dim`` dimensions."""
    v = np.zeros(dim, dtype=complex)
    v[index] = 1.0
    return v


def check_pure(psi: np.ndarray, atol: float = ATOL) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex).ravel()
    if abs(np.linalg.norm(psi) - 1) > atol:
        raise ValueError("state vector is not normalised")
    return psi


def projector(psi: np.ndarray) -> np.ndarray:
    psi = check_pure(psi)
    return np.outer(psi, psi.conj())


def maximally_mixed(dim: int) -> np.ndarray:
    return np.eye(dim, dtype=complex) / dim


def bell_state() -> np.ndarray:
    """(|00> + |11>)/sqrt(2)."""
    return np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)


def bloch_state(x: float, y: float, z: float) -> np.ndarray:
    """Qubit density matrix with Bloch vector (x, y, z)."""
    return 0.5 * np.array([[1 + z, x - 1j * y], [x + 1j * y, 1 - z]], dtype=complex)


def bloch_vector(rho: np.ndarray) -> tuple[float, float, float]:
    rho = np.asarray(rho)
    return (2 * rho[0, 1].real, 2 * rho[1, 0].imag, (rho[0, 0] - rho[1, 1]).real)


def tensor(*ops: np.ndarray) -> np.ndarray:
    """Kronecker product, leftmost factor most significant."""
    return reduce(np.kron, ops)


def partial_trace(rho: np.ndarray, dims: Sequence[int], keep: Sequence[int]) -> np.ndarray:
    """Reduce ``rho`` on subsystems ``dims`` to the subsystems listed in ``keep``.

    Subsystem order in the result follows the original order, not the order
    of ``keep``. Keeping nothing returns the 1x1 matrix [[Tr rho]].
    """
    rho = np.asarray(rho)
    dims = [int(d) for d in dims]
    total = int(np.prod(dims)) if dims else 1
    if rho.shape != (total, total):
        raise DimensionError(f"dims {dims} do not match matrix of shape {rho.shape}")
    keep = sorted(set(keep))
    if any(k < 0 or k >= len(dims) for k in keep):
        raise DimensionError(f"keep indices {keep} out of range for {len(dims)} subsystems")
    n = len(dims)
    traced = [i for i in range(n) if i not in keep]
    t = rho.reshape(dims + dims)
    # contract traced subsystems from the highest index down so axis numbers stay valid
    for count, i in enumerate(sorted(traced, reverse=True)):
        remaining = n - count
        t = np.trace(t, axis1=i, axis2=i + remaining)
    d = int(np.prod([dims[k] for k in keep])) if keep else 1
    return t.reshape(d, d)


def eigh(rho: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    return np.linalg.eigh(np.asarray(rho))


def entropy_of_spectrum(probs: np.ndarray) -> float:
    """Shannon entropy in bits, with small and negative round-off entries dropped."""
    p = np.asarray(probs, dtype=float).ravel()
    p = p[p > EIG_CUTOFF]
    return float(-np.sum(p * np.log2(p))) + 0.0


def von_neumann_entropy(rho: np.ndarray) -> float:
    """S(rho) = -Tr rho log2 rho."""
    return entropy_of_spectrum(np.linalg.eigvalsh(np.asarray(rho)))


def fidelity_pure(psi: np.ndarray, rho: np.ndarray) -> float:
    """<psi|rho|psi> for a pure reference state."""
    psi = check_pure(psi)
    rho = np.asarray(rho)
    if rho.shape != (psi.size, psi.size):
        raise DimensionError(f"state of dim {psi.size} vs matrix {rho.shape}")
    val = psi.conj() @ rho @ psi
    if abs(val.imag) > ATOL:
        raise ValueError("fidelity has a non-negligible imaginary part")
    return float(val.real)


def random_pure_state(dim: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def random_density(dim: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    """Random state from the induced (Ginibre) measure."""
    rank = dim if rank is None else rank
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real
