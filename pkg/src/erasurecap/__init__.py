"""Capacities of quantum erasure channels, with the protocols and numerics behind them."""

from .capacities import (
    DEPOLARIZING_THRESHOLDS,
    CapacityCurve,
    CapacityPoint,
    DepolarizingThresholds,
    capacity_curve,
    depolarizing_coherent_zero,
    depolarizing_one_shot_classical,
    max_coherent_information,
    mixed_capacities,
    pec_capacities,
    qec_capacities,
)
from .channels import (
    KrausChannel,
    apply,
    channels_equal,
    choi,
    compose,
    identity_channel,
    make_depolarizing,
    make_mixed_erasure,
    make_pec,
    make_qec,
    tensor_channels,
)
from .info import (
    Ensemble,
    binary_entropy,
    blahut_arimoto,
    coherent_information,
    entropy_exchange,
    holevo_chi,
    induced_classical_channel,
)
from .linalg import fidelity_pure, partial_trace, tensor, von_neumann_entropy
from .protocols import (
    mixed_split_construction,
    simulate_epr_through_qec,
    split_qec_construction,
    teleport,
)
from .stabilizer import (
    ErasurePattern,
    GF2Matrix,
    StabilizerCode,
    erasure_failure_rate,
    is_erasure_correctable,
    random_stabilizer_code,
    symplectic_product,
    threshold_scan,
)

__version__ = "0.1.0"
