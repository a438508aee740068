"""Command line entry point: capacity curves, Monte Carlo tables and checks.

Exit codes: 0 success, 1 a verification check failed, 2 usage error.
If ``--out`` is not given and ``ERASURECAP_OUT_DIR`` is set, output goes to
``$ERASURECAP_OUT_DIR/<command>.<format>``; otherwise to stdout.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Sequence

import numpy as np

from . import capacities, channels, info, protocols, stabilizer
from .linalg import bloch_vector, ket, projector
from .rng import stream
from .verify import random_ensemble, run_checks

OUT_DIR_ENV = "ERASURECAP_OUT_DIR"
COMMANDS = ("curves", "coherent-info", "chi", "hash-mc", "teleport", "split-check", "verify")
DECIMALS = 6


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    epsilon: float = 0.25
    delta: float = 0.0
    family: str = "qec"
    channel: str = "qec"
    grid_start: float = 0.0
    grid_stop: float = 1.0
    grid_steps: int = 11
    n: int = 256
    k_rates: list[float] = field(default_factory=lambda: [0.4, 0.6])
    trials: int = 200
    fixed_weight: bool = False
    pairs: int = 10_000
    ensembles: int = 200
    seed: int = 1
    format: str = "csv"
    out: str | None = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.format not in ("csv", "json"):
            raise UsageError(f"unknown format {self.format!r}")
        if not (0 <= self.grid_start <= 1 and 0 <= self.grid_stop <= 1) or self.grid_steps < 1:
            raise UsageError("grid must lie within [0, 1] with at least one step")
        if self.trials < 1:
            raise UsageError("trials must be at least 1")
        if not 0 <= self.epsilon <= 1 or not 0 <= self.delta <= 1:
            raise UsageError("epsilon and delta must lie in [0, 1]")
        if self.epsilon + self.delta > 1 + 1e-12:
            raise UsageError("epsilon + delta must not exceed 1")
        if not 0 <= self.seed < 2**64:
            raise UsageError("seed must be a 64-bit unsigned integer")

    def grid(self) -> list[float]:
        return [float(x) for x in np.linspace(self.grid_start, self.grid_stop, self.grid_steps)]

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        names = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in d.items() if k in names})


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        s = f"{float(x):.{DECIMALS}f}"
        return "0.000000" if s == "-0.000000" else s
    return str(x)


def _json_value(x):
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        return float(fmt(x))
    return x


def render(config: RunConfig, header: Sequence[str], rows: list[Sequence], extra: dict | None = None) -> str:
    if config.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) for v in row])
        return buf.getvalue()
    doc = {
        "config": config.to_dict(),
        "rows": [{h: _json_value(v) for h, v in zip(header, row)} for row in rows],
    }
    if extra:
        doc.update(extra)
    return json.dumps(doc, indent=2) + "\n"


def _channel(name: str, eps: float, delta: float) -> channels.KrausChannel:
    makers = {
        "qec": lambda: channels.make_qec(eps),
        "pec": lambda: channels.make_pec(eps),
        "depolarizing": lambda: channels.make_depolarizing(eps),
        "mixed": lambda: channels.make_mixed_erasure(eps, delta),
    }
    if name not in makers:
        raise UsageError(f"unknown channel {name!r}")
    return makers[name]()


def cmd_curves(config: RunConfig) -> tuple[str, int]:
    curve = capacities.capacity_curve(config.family, config.grid())
    header = ["x", "Q", "Q2", "C"] + (["rains"] if curve.rains_line is not None else [])
    rows = []
    for x, p in zip(curve.x, curve.points):
        row = [x, p.q, p.q2, p.c]
        if curve.rains_line is not None:
            row.append(curve.rains_line)
        rows.append(row)
    return render(config, header, rows), 0


def cmd_coherent_info(config: RunConfig) -> tuple[str, int]:
    ch = _channel(config.channel, config.epsilon, config.delta)
    value, rho = capacities.max_coherent_information(ch)
    x, y, z = bloch_vector(rho)
    purity = float(np.trace(rho @ rho).real)
    header = ["channel", "epsilon", "delta", "max_coherent_information", "bloch_x", "bloch_y", "bloch_z", "pure"]
    rows = [[config.channel, config.epsilon, config.delta, value, x, y, z, abs(purity - 1) < 1e-9]]
    return render(config, header, rows), 0


def cmd_chi(config: RunConfig) -> tuple[str, int]:
    ch = _channel(config.channel, config.epsilon, config.delta)
    rng = stream(config.seed)
    best = max(info.holevo_chi(ch, random_ensemble(rng)) for _ in range(config.ensembles))
    z_basis = info.Ensemble((0.5, 0.5), (projector(ket(0, 2)), projector(ket(1, 2))))
    header = ["channel", "epsilon", "delta", "ensembles", "max_random_chi", "z_basis_chi"]
    rows = [[config.channel, config.epsilon, config.delta, config.ensembles, best, info.holevo_chi(ch, z_basis)]]
    return render(config, header, rows), 0


def cmd_hash_mc(config: RunConfig) -> tuple[str, int]:
    if not 1 <= config.n <= 2048:
        raise UsageError("n must lie in [1, 2048]")
    if any(not 0 <= r < 1 for r in config.k_rates):
        raise UsageError("rates must lie in [0, 1)")
    table = stabilizer.threshold_scan(
        config.n, config.epsilon, config.k_rates, config.trials, config.seed, config.fixed_weight
    )
    rows = [[rate, fail, config.trials, config.n] for rate, fail in table]
    return render(config, ["rate", "failure_rate", "trials", "n"], rows), 0


def cmd_teleport(config: RunConfig) -> tuple[str, int]:
    share = protocols.simulate_epr_through_qec(config.epsilon, config.pairs, config.seed)
    fids = share.per_pair_fidelity
    header = ["epsilon", "n_pairs", "survivors", "survivor_fraction", "min_fidelity"]
    rows = [[config.epsilon, share.n_pairs, len(share.surviving), share.survivor_fraction, min(fids) if fids else 0.0]]
    return render(config, header, rows), 0


def cmd_split_check(config: RunConfig) -> tuple[str, int]:
    try:
        rec = protocols.mixed_split_construction(config.epsilon, config.delta)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    header = ["epsilon", "delta", "inner_strength", "bob_distance", "charlie_distance", "passed"]
    rows = [[rec.epsilon, rec.delta, rec.inner_strength, rec.bob_distance, rec.charlie_distance, rec.passed]]
    return render(config, header, rows), 0 if rec.passed else 1


def cmd_verify(config: RunConfig, perturb_qec: float = 0.0) -> tuple[str, int]:
    checks = run_checks(config.seed, perturb_qec)
    ok = all(c.passed for c in checks)
    report = {
        "passed": ok,
        "seed": config.seed,
        "checks": [c.as_dict() for c in checks],
    }
    return json.dumps(report, indent=2) + "\n", 0 if ok else 1


DISPATCH = {
    "curves": cmd_curves,
    "coherent-info": cmd_coherent_info,
    "chi": cmd_chi,
    "hash-mc": cmd_hash_mc,
    "teleport": cmd_teleport,
    "split-check": cmd_split_check,
}

_COMMON_DEFAULTS = {"epsilon": 0.25, "delta": 0.0, "seed": 1, "format": "csv", "out": None}


def _common(parser: argparse.ArgumentParser) -> None:
    # accepted before or after the subcommand; SUPPRESS keeps the subparser from clobbering
    parser.add_argument("--eps", "--epsilon", dest="epsilon", type=float, default=argparse.SUPPRESS)
    parser.add_argument("--delta", type=float, default=argparse.SUPPRESS)
    parser.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    parser.add_argument("--format", choices=["csv", "json"], default=argparse.SUPPRESS)
    parser.add_argument("--out", default=argparse.SUPPRESS, help="output file (default stdout)")


def parse_grid(text: str) -> tuple[float, float, int]:
    try:
        start, stop, steps = text.split(":")
        return float(start), float(stop), int(steps)
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid must look like start:stop:steps, got {text!r}")


def parse_rates(text: str) -> list[float]:
    try:
        return [float(r) for r in text.split(",") if r.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"rates must be comma separated numbers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="erasurecap", description=__doc__.splitlines()[0])
    _common(parser)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("curves", help="closed-form Q, Q2, C versus erasure probability")
    _common(p)
    p.add_argument("--family", choices=["qec", "mixed-equal", "pec"], default="qec")
    p.add_argument("--grid", type=parse_grid, default=(0.0, 1.0, 11))

    for name, helptext in (
        ("coherent-info", "maximise single-use coherent information over qubit inputs"),
        ("chi", "Holevo chi over random input ensembles"),
    ):
        p = sub.add_parser(name, help=helptext)
        _common(p)
        p.add_argument("--channel", choices=["qec", "pec", "depolarizing", "mixed"], default="qec")
        if name == "chi":
            p.add_argument("--ensembles", type=int, default=200)

    p = sub.add_parser("hash-mc", help="random stabilizer codes against i.i.d. erasures")
    _common(p)
    p.add_argument("--n", type=int, default=256)
    p.add_argument("--rates", type=parse_rates, default=[0.4, 0.6])
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--fixed-weight", action="store_true", help="erase exactly floor(n*eps) qubits")

    p = sub.add_parser("teleport", help="share EPR pairs through a QEC")
    _common(p)
    p.add_argument("--pairs", type=int, default=10_000)

    p = sub.add_parser("split-check", help="no-cloning split of the mixed erasure channel")
    _common(p)

    p = sub.add_parser("verify", help="run all numerical checks, JSON report")
    _common(p)
    p.add_argument("--perturb-qec", type=float, default=0.0, help=argparse.SUPPRESS)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    opts = {**_COMMON_DEFAULTS, **{k: getattr(args, k) for k in _COMMON_DEFAULTS if hasattr(args, k)}}
    if args.command == "split-check" and not hasattr(args, "epsilon"):
        opts["epsilon"] = 0.5
    kw = dict(command=args.command, **opts)
    if hasattr(args, "family"):
        kw["family"] = args.family
    if hasattr(args, "grid"):
        kw["grid_start"], kw["grid_stop"], kw["grid_steps"] = args.grid
    for name in ("channel", "n", "trials", "fixed_weight", "pairs", "ensembles"):
        if hasattr(args, name):
            kw[name] = getattr(args, name)
    if hasattr(args, "rates"):
        kw["k_rates"] = args.rates
    return RunConfig(**kw)


def _destination(config: RunConfig) -> Path | None:
    if config.out:
        return Path(config.out)
    env = os.environ.get(OUT_DIR_ENV)
    if env:
        ext = "json" if config.command == "verify" else config.format
        return Path(env) / f"{config.command}.{ext}"
    return None


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = config_from_args(args)
        if config.command == "verify":
            text, code = cmd_verify(config, args.perturb_qec)
        else:
            text, code = DISPATCH[config.command](config)
    except (UsageError, ValueError) as exc:
        parser.print_usage(sys.stderr)
        print(f"erasurecap: error: {exc}", file=sys.stderr)
        return 2
    dest = _destination(config)
    if dest is None:
        sys.stdout.write(text)
    else:
        dest.parent.mkdir(parents=True, exist_ok=True)
        dest.write_text(text, newline="")
    return code


if __name__ == "__main__":
    sys.exit(main())
