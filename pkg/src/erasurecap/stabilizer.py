"""GF(2) symplectic stabilizer codes and erasure correction at known locations.

Pauli operators on n qubits are 2n-bit vectors in (X | Z) order. Matrices
are stored bit-packed, 64 columns per ``uint64`` word, little-endian within
a word.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .rng import stream

WORD = 64
_ONE = np.uint64(1)


def n_words(bits: int) -> int:
    return max(1, -(-bits // WORD))


def pack_rows(dense: np.ndarray) -> np.ndarray:
    """Pack a 0/1 matrix into rows of uint64 words."""
    dense = np.atleast_2d(np.asarray(dense, dtype=bool))
    rows, cols = dense.shape
    w = n_words(cols)
    padded = np.zeros((rows, w * WORD), dtype=bool)
    padded[:, :cols] = dense
    return np.packbits(padded, axis=1, bitorder="little").view(np.uint64).reshape(rows, w)


def unpack_rows(packed: np.ndarray, cols: int) -> np.ndarray:
    packed = np.ascontiguousarray(packed, dtype=np.uint64)
    as_bytes = packed.view(np.uint8).reshape(packed.shape[0], -1)
    return np.unpackbits(as_bytes, axis=1, bitorder="little")[:, :cols].astype(np.uint8)


def _parity(words: np.ndarray) -> np.ndarray:
    # parity of the popcount along the last axis
    return (np.bitwise_count(words).sum(axis=-1) & 1).astype(bool)


def gf2_rank_packed(packed: np.ndarray, cols: int) -> int:
    """Rank over GF(2) by forward elimination on packed rows."""
    m = np.array(packed, dtype=np.uint64, copy=True)
    nrows = m.shape[0]
    rank = 0
    for c in range(cols):
        if rank == nrows:
            break
        w, b = divmod(c, WORD)
        shift = np.uint64(b)
        hits = np.flatnonzero((m[rank:, w] >> shift) & _ONE)
        if hits.size == 0:
            continue
        p = rank + int(hits[0])
        if p != rank:
            m[[rank, p]] = m[[p, rank]]
        below = m[rank + 1:]
        mask = ((below[:, w] >> shift) & _ONE).astype(bool)
        below[mask] ^= m[rank]
        rank += 1
    return rank


@dataclass(frozen=True, eq=False)
class GF2Matrix:
    rows: int
    cols: int
    bits: np.ndarray

    @classmethod
    def from_dense(cls, dense) -> "GF2Matrix":
        dense = np.atleast_2d(np.asarray(dense, dtype=np.uint8) & 1)
        if dense.size == 0:
            rows, cols = dense.shape
            return cls(rows, cols, np.zeros((rows, n_words(cols)), dtype=np.uint64))
        return cls(dense.shape[0], dense.shape[1], pack_rows(dense))

    def to_dense(self) -> np.ndarray:
        if self.rows == 0:
            return np.zeros((0, self.cols), dtype=np.uint8)
        return unpack_rows(self.bits, self.cols)

    def rank(self) -> int:
        if self.rows == 0 or self.cols == 0:
            return 0
        return gf2_rank_packed(self.bits, self.cols)

    def columns(self, idx: Sequence[int]) -> "GF2Matrix":
        return GF2Matrix.from_dense(self.to_dense()[:, list(idx)]) if len(idx) else GF2Matrix.from_dense(
            np.zeros((self.rows, 0), dtype=np.uint8)
        )


def gf2_rank(dense) -> int:
    return GF2Matrix.from_dense(dense).rank()


def symplectic_product(u, v) -> int:
    """u_X . v_Z + u_Z . v_X mod 2."""
    u = np.asarray(u, dtype=np.int64).ravel()
    v = np.asarray(v, dtype=np.int64).ravel()
    if u.size != v.size or u.size % 2:
        raise ValueError("symplectic vectors must have equal even length")
    n = u.size // 2
    return int((u[:n] @ v[n:] + u[n:] @ v[:n]) % 2)


def symplectic_gram(dense: np.ndarray) -> np.ndarray:
    """Matrix of pairwise symplectic products of the rows."""
    a = np.asarray(dense, dtype=np.float64)
    n = a.shape[1] // 2
    g = a[:, :n] @ a[:, n:].T + a[:, n:] @ a[:, :n].T
    return (np.rint(g).astype(np.int64) % 2).astype(np.uint8)


@dataclass(frozen=True, eq=False)
class StabilizerCode:
    n: int
    k: int
    checks: GF2Matrix

    def __post_init__(self):
        if self.checks.cols != 2 * self.n or self.checks.rows != self.n - self.k:
            raise ValueError(
                f"[[{self.n},{self.k}]] needs a {self.n - self.k}x{2 * self.n} check matrix, "
                f"got {self.checks.rows}x{self.checks.cols}"
            )

    @classmethod
    def from_dense(cls, dense, validate: bool = True) -> "StabilizerCode":
        dense = np.atleast_2d(np.asarray(dense, dtype=np.uint8))
        n = dense.shape[1] // 2
        code = cls(n, n - dense.shape[0], GF2Matrix.from_dense(dense))
        if validate:
            code.validate()
        return code

    @classmethod
    def from_paulis(cls, paulis: Iterable[str]) -> "StabilizerCode":
        """Build from strings such as ``"XZZXI"``."""
        rows = []
        for s in paulis:
            n = len(s)
            row = np.zeros(2 * n, dtype=np.uint8)
            for q, ch in enumerate(s.upper()):
                if ch in "XY":
                    row[q] = 1
                if ch in "ZY":
                    row[n + q] = 1
                if ch not in "IXYZ":
                    raise ValueError(f"bad Pauli letter {ch!r}")
            rows.append(row)
        return cls.from_dense(np.array(rows))

    def dense(self) -> np.ndarray:
        return self.checks.to_dense()

    def is_valid(self) -> bool:
        d = self.dense()
        if d.shape[0] == 0:
            return True
        return not symplectic_gram(d).any() and self.checks.rank() == self.n - self.k

    def validate(self) -> None:
        d = self.dense()
        if d.shape[0] and symplectic_gram(d).any():
            raise ValueError("stabilizer generators do not commute")
        if self.checks.rank() != self.n - self.k:
            raise ValueError("stabilizer generators are not independent")


FIVE_QUBIT_CODE = ("XZZXI", "IXZZX", "XIXZZ", "ZXIXZ")


def five_qubit_code() -> StabilizerCode:
    return StabilizerCode.from_paulis(FIVE_QUBIT_CODE)


class SamplingError(RuntimeError):
    pass


def random_stabilizer_code(n: int, k: int, rng: np.random.Generator, max_rejections: int = 10**6) -> StabilizerCode:
    """Random [[n, k]] code with generators drawn one at a time.

    Generator j is uniform over the 2n-bit vectors that commute with all
    earlier generators and are independent of them. This is what
    rejection-sampling uniform vectors produces, but the commuting subspace
    is sampled directly, so only the (rare) dependent draws are rejected.
    The resulting stabilizer group is uniform over isotropic subspaces.
    """
    if not 0 <= k < n:
        raise ValueError(f"need 0 <= k < n, got n={n}, k={k}")
    r = n - k
    w = n_words(n)
    # basis of the current commutant, each row split into (X words, Z words)
    eye = np.eye(2 * n, dtype=bool)
    basis = np.stack([pack_rows(eye[:, :n]), pack_rows(eye[:, n:])], axis=1)
    gens = np.zeros((r, 2, w), dtype=np.uint64)
    rejections = 0
    j = 0
    while j < r:
        coeff = rng.integers(0, 2, size=basis.shape[0]).astype(bool)
        v = np.bitwise_xor.reduce(basis[coeff], axis=0) if coeff.any() else np.zeros((2, w), np.uint64)
        prods = _parity((basis[:, 0] & v[1]) ^ (basis[:, 1] & v[0]))
        if not prods.any():
            # v lies in the span of the generators picked so far (or is zero)
            rejections += 1
            if rejections > max_rejections:
                raise SamplingError(f"gave up after {max_rejections} rejected draws")
            continue
        p = int(np.flatnonzero(prods)[0])
        prods[p] = False
        basis[prods] ^= basis[p]
        basis = np.delete(basis, p, axis=0)
        gens[j] = v
        j += 1
    dense = np.hstack([unpack_rows(gens[:, 0], n), unpack_rows(gens[:, 1], n)])
    return StabilizerCode(n, k, GF2Matrix.from_dense(dense))


@dataclass(frozen=True)
class ErasurePattern:
    n: int
    erased: frozenset[int]

    def __post_init__(self):
        erased = frozenset(int(q) for q in self.erased)
        if any(q < 0 or q >= self.n for q in erased):
            raise ValueError(f"erased qubits {sorted(erased)} outside 0..{self.n - 1}")
        object.__setattr__(self, "erased", erased)


def _as_pattern(pattern, n: int) -> ErasurePattern:
    if isinstance(pattern, ErasurePattern):
        return pattern
    return ErasurePattern(n, frozenset(pattern))


def logical_dimension_on(code: StabilizerCode, pattern) -> int:
    """log2 of |logical Paulis supported on the erased set| / |stabilizers there|.

    Paulis on E commuting with every check: 2|E| - rank(S restricted to E).
    Stabilizers supported on E: (n-k) - rank(S restricted to the rest).
    """
    pattern = _as_pattern(pattern, code.n)
    if pattern.n != code.n:
        raise ValueError(f"pattern on {pattern.n} qubits, code on {code.n}")
    n = code.n
    erased = sorted(pattern.erased)
    if not erased:
        return 0
    rest = sorted(set(range(n)) - pattern.erased)
    dense = code.dense()
    cols_e = erased + [n + q for q in erased]
    cols_rest = rest + [n + q for q in rest]
    r = code.n - code.k
    rank_e = GF2Matrix.from_dense(dense[:, cols_e]).rank() if r else 0
    rank_rest = GF2Matrix.from_dense(dense[:, cols_rest]).rank() if (r and rest) else 0
    return (2 * len(erased) - rank_e) - (r - rank_rest)


def is_erasure_correctable(code: StabilizerCode, pattern) -> bool:
    """True iff no logical operator is supported on the erased qubits."""
    return logical_dimension_on(code, pattern) == 0


def sample_erasures(n: int, epsilon: float, rng: np.random.Generator, fixed_weight: bool = False) -> ErasurePattern:
    if fixed_weight:
        erased = rng.choice(n, size=int(np.floor(n * epsilon)), replace=False)
    else:
        erased = np.flatnonzero(rng.random(n) < epsilon)
    return ErasurePattern(n, frozenset(int(q) for q in erased))


def trial_fails(n: int, k: int, epsilon: float, seed: int, index: int, fixed_weight: bool = False) -> bool:
    """One Monte Carlo trial: fresh erasures, fresh code, both from stream (seed, index).

    The erasure pattern is drawn before the code, so runs that differ only
    in ``k`` see the same erasures trial by trial.
    """
    rng = stream(seed, index)
    pattern = sample_erasures(n, epsilon, rng, fixed_weight)
    if not pattern.erased:
        return False
    code = random_stabilizer_code(n, k, rng)
    return not is_erasure_correctable(code, pattern)


def _check_mc(n: int, k: int, epsilon: float, trials: int) -> None:
    if n < 1 or not 0 <= k < n:
        raise ValueError(f"need n >= 1 and 0 <= k < n, got n={n}, k={k}")
    if not 0.0 <= epsilon <= 1.0:
        raise ValueError(f"epsilon must lie in [0, 1], got {epsilon}")
    if trials < 1:
        raise ValueError("trials must be at least 1")


def erasure_failure_rate(
    n: int, k: int, epsilon: float, trials: int, seed: int, fixed_weight: bool = False
) -> float:
    """Fraction of trials where a random [[n,k]] code leaves a logical operator on the erasures."""
    _check_mc(n, k, epsilon, trials)
    fails = sum(trial_fails(n, k, epsilon, seed, i, fixed_weight) for i in range(trials))
    return fails / trials


def rate_to_k(n: int, rate: float) -> int:
    if not 0.0 <= rate < 1.0:
        raise ValueError(f"rate must lie in [0, 1), got {rate}")
    return min(int(np.floor(rate * n + 1e-9)), n - 1)


def threshold_scan(
    n: int, epsilon: float, rates: Sequence[float], trials: int, seed: int, fixed_weight: bool = False
) -> list[tuple[float, float]]:
    """(rate, failure_rate) for each rate, k = floor(rate * n)."""
    return [
        (float(rate), erasure_failure_rate(n, rate_to_k(n, rate), epsilon, trials, seed, fixed_weight))
        for rate in rates
    ]
