"""Named numerical checks of the erasure-channel results, run by ``erasurecap verify``."""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .capacities import (
    depolarizing_coherent_zero,
    depolarizing_one_shot_classical,
    max_coherent_information,
    qec_capacities,
)
from .channels import choi_distance, make_depolarizing, make_pec, make_qec
from .info import Ensemble, blahut_arimoto, coherent_information, holevo_chi, induced_classical_channel
from .linalg import fidelity_pure, ket, maximally_mixed, projector, random_density, random_pure_state, bell_state
from .protocols import mixed_split_construction, split_qec_construction, teleport
from .rng import stream


@dataclass(frozen=True)
class Check:
    name: str
    anchor: str
    residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(self.residual <= self.tolerance)

    def as_dict(self) -> dict:
        return {**asdict(self), "passed": self.passed}


EPS_GRID = tuple(round(0.1 * i, 10) for i in range(11))
SPLIT_GRID = tuple(round(0.5 + 0.1 * i, 10) for i in range(6))


def check_qec_coherent_information() -> Check:
    res = max(abs(max_coherent_information(make_qec(e))[0] - qec_capacities(e).q) for e in EPS_GRID)
    return Check("qec_max_coherent_information", "QEC Q = max(0, 1 - 2 eps)", res, 1e-4)


def check_pec_coherent_information() -> Check:
    res = max(abs(coherent_information(make_pec(e), maximally_mixed(2)) - (1 - e)) for e in EPS_GRID)
    return Check("pec_coherent_information", "PEC Q = Q2 = 1 - eps", res, 1e-8)


def random_ensemble(rng: np.random.Generator, max_size: int = 4) -> Ensemble:
    size = int(rng.integers(1, max_size + 1))
    probs = rng.dirichlet(np.ones(size))
    states = [random_density(2, rng, rank=int(rng.integers(1, 3))) for _ in range(size)]
    return Ensemble(tuple(probs), tuple(states))


def check_holevo_bound(seed: int, ensembles: int = 200) -> Check:
    worst = -np.inf
    for i, e in enumerate(EPS_GRID):
        rng = stream(seed, 1, i)
        qec = make_qec(e)
        for _ in range(ensembles):
            worst = max(worst, holevo_chi(qec, random_ensemble(rng)) - (1 - e))
    return Check("qec_holevo_bound", "QEC C = 1 - eps (Holevo bound)", max(0.0, worst), 1e-8)


def check_classical_simulation() -> Check:
    z_in = [ket(0, 2), ket(1, 2)]
    three = [projector(ket(j, 3)) for j in range(3)]
    two = [projector(ket(j, 2)) for j in range(2)]
    res = 0.0
    for e in EPS_GRID:
        bec = induced_classical_channel(make_qec(e), z_in, three)
        res = max(res, abs(blahut_arimoto(bec) - (1 - e)))
        bsc = induced_classical_channel(make_depolarizing(e), z_in, two)
        res = max(res, abs(blahut_arimoto(bsc) - depolarizing_one_shot_classical(e)))
    return Check("classical_simulation", "erasure 1 - eps and BSC 1 - H2(eps/2)", res, 1e-6)


def check_split_marginals(perturb_qec: float = 0.0) -> Check:
    res = 0.0
    for e in SPLIT_GRID:
        target_eps = e + perturb_qec if e + perturb_qec <= 1 else e - perturb_qec
        target = make_qec(target_eps)
        for part in split_qec_construction(e):
            res = max(res, choi_distance(part, target))
    return Check("split_marginal_choi_distance", "no-cloning split gives eps >= 1/2 QEC", res, 1e-9)


def check_mixed_split() -> Check:
    res = max(
        max(r.bob_distance, r.charlie_distance)
        for r in (mixed_split_construction(0.4, 0.2), mixed_split_construction(0.5, 0.0))
    )
    return Check("mixed_split_choi_distance", "mixed-channel series-parallel split", res, 1e-8)


def check_teleport(seed: int, states: int = 100) -> Check:
    rng = stream(seed, 2)
    pair = projector(bell_state())
    res = 0.0
    for _ in range(states):
        psi = random_pure_state(2, rng)
        res = max(res, abs(1 - fidelity_pure(psi, teleport(projector(psi), pair))))
    return Check("teleport_fidelity", "perfect transmission at rate 1 - t/n", res, 1e-10)


def check_depolarizing_zero() -> Check:
    root, lo, hi = depolarizing_coherent_zero()
    # distance of the crossing from the accepted window [0.24, 0.26]
    res = max(0.0, 0.24 - lo, hi - 0.26)
    return Check("depolarizing_coherent_zero", f"one-shot coherent information vanishes near {root:.5f}", res, 0.0)


def run_checks(seed: int = 1, perturb_qec: float = 0.0) -> list[Check]:
    """All verification checks; ``perturb_qec`` skews the split-check target (negative control)."""
    return [
        check_qec_coherent_information(),
        check_pec_coherent_information(),
        check_holevo_bound(seed),
        check_classical_simulation(),
        check_split_marginals(perturb_qec),
        check_mixed_split(),
        check_teleport(seed),
        check_depolarizing_zero(),
    ]
