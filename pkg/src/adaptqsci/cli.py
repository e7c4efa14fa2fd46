"""Batch front-end for the library.

Subcommands: ``run`` (noiseless or noisy ADAPT-QSCI over a seed list),
``exact`` (sector diagonalization, amplitude spectrum, subspace-size
table), ``pool`` (operator pool size), ``estimate-shots`` (VQE
measurement-cost comparison).  Exit codes: 0 success, 1 algorithm
failure, 2 input error.

Outputs are deterministic given the config file: the same invocation
twice produces byte-identical files.  Every artifact carries the seed
and a SHA-256 hash of the effective config.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import sys
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__
from .adapt import AdaptResult, build_pool, make_sampling_step, run_adapt_qsci
from .chemistry import MolecularSystem, load_fcidump_system, parse_qubit_hamiltonian
from .mitigation import make_unmitigated_step, run_mitigated_adapt
from .qsci import SelectionPolicy, amplitude_spectrum, r_delta, sector_ground_state
from .resources import cnot_cost, comparison_report, vqe_shot_estimate
from .simulator import NoiseModel, StateVector


@dataclass(frozen=True)
class RunConfig:
    """Knobs for one batch, loaded from a JSON file.

    Exactly one of ``r_max`` and ``delta`` must be set; ``delta``
    derives the subspace size from the exact ground state.
    """

    hamiltonian: str
    fmt: str
    r_max: Optional[int]
    delta: Optional[float]
    n_shots: int
    seeds: tuple[int, ...]
    max_iterations: int = 50
    conv_tol: float = 1e-5
    noise: Optional[NoiseModel] = None
    mitigation: bool = False
    analytic_calibration: bool = False
    fold_factor: int = 1
    output_dir: str = "out"
    deltas: tuple[float, ...] = (1e-4,)
    vqe_epsilon: float = 1e-3
    vqe_energy_evaluations: int = 1

    def __post_init__(self) -> None:
        if (self.r_max is None) == (self.delta is None):
            raise ValueError("config needs exactly one of r_max and delta")
        if not self.seeds:
            raise ValueError("config needs a nonempty seed list")
        if self.n_shots < 1:
            raise ValueError("n_shots must be positive")
        if self.fmt not in ("fcidump", "json"):
            raise ValueError(f"unknown hamiltonian format {self.fmt!r}")
        if self.mitigation and self.noise is None:
            raise ValueError("mitigation requires a noise block")


def _infer_format(path: str) -> str:
    if path.endswith(".json"):
        return "json"
    return "fcidump"


def load_config(path: Path) -> RunConfig:
    raw = json.loads(path.read_text())
    if "hamiltonian" not in raw:
        raise ValueError("config is missing the 'hamiltonian' key")
    noise = None
    if raw.get("noise") is not None:
        block = raw["noise"]
        noise = NoiseModel(float(block["p_2q"]), float(block["p_meas"]))
    vqe = raw.get("vqe", {})
    return RunConfig(
        hamiltonian=raw["hamiltonian"],
        fmt=raw.get("format", _infer_format(raw["hamiltonian"])),
        r_max=raw.get("r_max"),
        delta=raw.get("delta"),
        n_shots=int(raw.get("n_shots", 100_000)),
        seeds=tuple(int(s) for s in raw.get("seeds", [])),
        max_iterations=int(raw.get("max_iterations", 50)),
        conv_tol=float(raw.get("conv_tol", 1e-5)),
        noise=noise,
        mitigation=bool(raw.get("mitigation", False)),
        analytic_calibration=bool(raw.get("analytic_calibration", False)),
        fold_factor=int(raw.get("fold_factor", 1)),
        output_dir=raw.get("output_dir", "out"),
        deltas=tuple(float(d) for d in raw.get("deltas", [1e-4])),
        vqe_epsilon=float(vqe.get("epsilon", 1e-3)),
        vqe_energy_evaluations=int(vqe.get("energy_evaluations", 1)),
    )


def apply_overrides(cfg: RunConfig, args: argparse.Namespace) -> RunConfig:
    if getattr(args, "seed", None) is not None:
        cfg = replace(cfg, seeds=(args.seed,))
    if getattr(args, "out", None) is not None:
        cfg = replace(cfg, output_dir=args.out)
    if getattr(args, "noise", None) is not None:
        cfg = replace(cfg, noise=NoiseModel(args.noise[0], args.noise[1]))
    if getattr(args, "mitigate", False):
        cfg = replace(cfg, mitigation=True)
    if getattr(args, "fold", None) is not None:
        cfg = replace(cfg, fold_factor=args.fold)
    return cfg


def config_digest(cfg: RunConfig) -> str:
    blob = {
        "hamiltonian": cfg.hamiltonian,
        "format": cfg.fmt,
        "r_max": cfg.r_max,
        "delta": cfg.delta,
        "n_shots": cfg.n_shots,
        "seeds": list(cfg.seeds),
        "max_iterations": cfg.max_iterations,
        "conv_tol": cfg.conv_tol,
        "noise": None
        if cfg.noise is None
        else {"p_2q": cfg.noise.p_2q, "p_meas": cfg.noise.p_meas},
        "mitigation": cfg.mitigation,
        "analytic_calibration": cfg.analytic_calibration,
        "fold_factor": cfg.fold_factor,
    }
    canonical = json.dumps(blob, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()


def load_system(cfg: RunConfig) -> MolecularSystem:
    path = Path(cfg.hamiltonian)
    if not path.exists():
        raise FileNotFoundError(f"hamiltonian fixture not found: {path}")
    if cfg.fmt == "json":
        return parse_qubit_hamiltonian(path)
    return load_fcidump_system(path)


def resolve_policy(cfg: RunConfig, system: MolecularSystem, exact_gs) -> SelectionPolicy:
    if cfg.r_max is not None:
        r = cfg.r_max
    else:
        r = r_delta(exact_gs, cfg.delta)
    return SelectionPolicy(
        r_max=r, n_electrons=system.n_electrons, sz_doubled=system.sz_doubled
    )


def _run_one_seed(
    cfg: RunConfig, system: MolecularSystem, policy: SelectionPolicy, seed: int
) -> AdaptResult:
    h = system.hamiltonian
    pool = build_pool(system.n_qubits)
    common = dict(max_iterations=cfg.max_iterations, conv_tol=cfg.conv_tol)
    if cfg.noise is None:
        step = make_sampling_step(h, policy, cfg.n_shots, seed)
        return run_adapt_qsci(h, system.reference, pool, step, **common)
    if cfg.mitigation:
        result, _cal = run_mitigated_adapt(
            h,
            system.reference,
            pool,
            policy,
            cfg.n_shots,
            seed,
            cfg.noise,
            analytic_calibration=cfg.analytic_calibration,
            **common,
        )
        return result
    step = make_unmitigated_step(
        h, cfg.noise, policy, cfg.n_shots, seed, fold_factor=cfg.fold_factor
    )
    return run_adapt_qsci(h, system.reference, pool, step, **common)


def _record_line(rec) -> dict:
    return {
        "iteration": rec.iteration,
        "energy": rec.energy,
        "subspace_dim": rec.subspace_dim,
        "shots_used": rec.shots_used,
        "shots_cumulative": rec.shots_cumulative,
        "cnots_circuit": rec.cnots_circuit,
        "op_index": rec.op_index,
        "gradient": rec.gradient,
        "theta": rec.theta,
        "state_energy": rec.state_energy,
    }


def cmd_run(cfg: RunConfig, verbose: bool = False) -> int:
    system = load_system(cfg)
    exact_energy, exact_gs = sector_ground_state(
        system.hamiltonian, system.n_electrons, system.sz_doubled
    )
    policy = resolve_policy(cfg, system, exact_gs)
    digest = config_digest(cfg)
    outdir = Path(cfg.output_dir)
    outdir.mkdir(parents=True, exist_ok=True)

    rows = []
    for seed in cfg.seeds:
        result = _run_one_seed(cfg, system, policy, seed)
        cnots = cnot_cost(result.program).cnot_count
        error = result.energy - exact_energy
        rows.append(
            (seed, result.energy, error, result.iterations, cnots, result.total_shots)
        )
        trace_path = outdir / f"trace_seed{seed}.jsonl"
        with trace_path.open("w") as fh:
            header = {"seed": seed, "config_sha256": digest, "r_max": policy.r_max}
            fh.write(json.dumps(header, sort_keys=True) + "\n")
            for rec in result.records:
                fh.write(json.dumps(_record_line(rec), sort_keys=True) + "\n")
            fh.write(
                json.dumps(
                    {
                        "final_energy": result.energy,
                        "stop_reason": result.stop_reason,
                        "total_shots": result.total_shots,
                        "cnots": cnots,
                    },
                    sort_keys=True,
                )
                + "\n"
            )
        if verbose:
            print(
                f"seed {seed}: E = {result.energy:.9f}  error = {error:+.3e}  "
                f"iterations = {result.iterations}  stop = {result.stop_reason}",
                file=sys.stderr,
            )

    summary_path = outdir / "summary.csv"
    with summary_path.open("w", newline="") as fh:
        fh.write(f"# config_sha256={digest}\n")
        writer = csv.writer(fh)
        writer.writerow(
            ["seed", "final_energy", "error_vs_exact", "iterations", "cnots", "shots"]
        )
        for seed, energy, error, iters, cnots, shots in rows:
            writer.writerow(
                [seed, f"{energy:.12e}", f"{error:.12e}", iters, cnots, shots]
            )

    manifest = {
        "command": "run",
        "config_sha256": digest,
        "config": json.loads(
            json.dumps(
                {
                    "hamiltonian": cfg.hamiltonian,
                    "format": cfg.fmt,
                    "r_max": policy.r_max,
                    "delta": cfg.delta,
                    "n_shots": cfg.n_shots,
                    "seeds": list(cfg.seeds),
                    "max_iterations": cfg.max_iterations,
                    "conv_tol": cfg.conv_tol,
                    "noise": None
                    if cfg.noise is None
                    else {"p_2q": cfg.noise.p_2q, "p_meas": cfg.noise.p_meas},
                    "mitigation": cfg.mitigation,
                    "analytic_calibration": cfg.analytic_calibration,
                    "fold_factor": cfg.fold_factor,
                }
            )
        ),
        "exact_energy": exact_energy,
        "versions": {
            "adaptqsci": __version__,
            "numpy": np.__version__,
            "python": ".".join(str(v) for v in sys.version_info[:3]),
        },
    }
    (outdir / "manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n"
    )

    n_good = sum(1 for _, _, error, _, _, _ in rows if abs(error) < 1e-3)
    print(f"exact sector energy: {exact_energy:.12f}")
    print(f"seeds within 1e-3 Ha: {n_good}/{len(rows)}")
    print(f"outputs in {outdir}")
    return 0


def cmd_exact(cfg: RunConfig, verbose: bool = False) -> int:
    system = load_system(cfg)
    energy, gs = sector_ground_state(
        system.hamiltonian, system.n_electrons, system.sz_doubled
    )
    spectrum = amplitude_spectrum(gs)
    digest = config_digest(cfg)
    outdir = Path(cfg.output_dir)
    outdir.mkdir(parents=True, exist_ok=True)

    spectrum_path = outdir / "spectrum.csv"
    with spectrum_path.open("w", newline="") as fh:
        fh.write(f"# config_sha256={digest}\n")
        writer = csv.writer(fh)
        writer.writerow(["rank", "weight", "configuration"])
        for rank, (weight, cfg_int) in enumerate(spectrum):
            writer.writerow([rank, f"{weight:.12e}", cfg_int])

    subspace_path = outdir / "subspace_sizes.csv"
    with subspace_path.open("w", newline="") as fh:
        fh.write(f"# config_sha256={digest}\n")
        writer = csv.writer(fh)
        writer.writerow(["delta", "r"])
        for d in cfg.deltas:
            writer.writerow([f"{d:g}", r_delta(gs, d)])

    print(f"exact sector energy: {energy:.12f}")
    for d in cfg.deltas:
        print(f"R(delta={d:g}) = {r_delta(gs, d)}")
    if verbose:
        for rank, (weight, cfg_int) in enumerate(spectrum[:10]):
            print(f"  rank {rank}: weight {weight:.6e}  configuration {cfg_int}")
    print(f"outputs in {outdir}")
    return 0


def cmd_pool(n_qubits: int, verbose: bool = False) -> int:
    pool = build_pool(n_qubits)
    print(f"pool size for {n_qubits} qubits: {len(pool)}")
    if verbose:
        for j, op in enumerate(pool.operators):
            print(f"  {j}: {op.label()}")
    return 0


def cmd_estimate_shots(cfg: RunConfig, out: Optional[str] = None) -> int:
    system = load_system(cfg)
    _energy, gs = sector_ground_state(
        system.hamiltonian, system.n_electrons, system.sz_doubled
    )
    amps = np.zeros(1 << system.n_qubits, dtype=complex)
    for cfg_int, a in gs.entries.items():
        amps[cfg_int] = a
    state = StateVector(system.n_qubits, amps)
    once = vqe_shot_estimate(system.hamiltonian, state, cfg.vqe_epsilon)
    if once == 0.0:
        # eigenstate of every measurement group; nothing to estimate
        report = {
            "adapt_qsci_shots": None,
            "adapt_qsci_cnots": None,
            "vqe_once": 0.0,
            "vqe_lower_bound": 0.0,
        }
    else:
        report = comparison_report(once, cfg.vqe_energy_evaluations)
    report["epsilon"] = cfg.vqe_epsilon
    report["config_sha256"] = config_digest(cfg)
    text = json.dumps(report, indent=2, sort_keys=True)
    print(text)
    if out is not None:
        outdir = Path(out)
        outdir.mkdir(parents=True, exist_ok=True)
        (outdir / "shot_estimate.json").write_text(text + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="adaptqsci",
        description="Adaptive quantum-selected configuration interaction, simulated.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="batch of ADAPT-QSCI runs over a seed list")
    run_p.add_argument("--config", required=True, help="JSON config file")
    run_p.add_argument("--seed", type=int, help="run a single seed instead")
    run_p.add_argument("--out", help="output directory override")
    run_p.add_argument(
        "--noise",
        nargs=2,
        type=float,
        metavar=("P2Q", "PMEAS"),
        help="gate and readout error probabilities",
    )
    run_p.add_argument(
        "--mitigate", action="store_true", help="enable the mitigation pipeline"
    )
    run_p.add_argument(
        "--fold", type=int, help="fold factor for unmitigated noisy runs"
    )
    run_p.add_argument("--verbose", action="store_true")

    exact_p = sub.add_parser("exact", help="sector diagonalization and spectrum export")
    exact_p.add_argument("--config", required=True)
    exact_p.add_argument("--out")
    exact_p.add_argument("--verbose", action="store_true")

    pool_p = sub.add_parser("pool", help="operator pool size for a register")
    pool_p.add_argument("qubits", type=int)
    pool_p.add_argument("--verbose", action="store_true")

    est_p = sub.add_parser(
        "estimate-shots", help="VQE measurement cost on the exact ground state"
    )
    est_p.add_argument("--config", required=True)
    est_p.add_argument("--out")
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "pool":
            return cmd_pool(args.qubits, verbose=args.verbose)
        cfg = load_config(Path(args.config))
        cfg = apply_overrides(cfg, args)
        if args.command == "run":
            return cmd_run(cfg, verbose=args.verbose)
        if args.command == "exact":
            return cmd_exact(cfg, verbose=args.verbose)
        return cmd_estimate_shots(cfg, out=getattr(args, "out", None))
    except (ValueError, KeyError, TypeError, OSError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except RuntimeError as exc:
        print(f"run failed: {exc}", file=sys.stderr)
        return 1


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
