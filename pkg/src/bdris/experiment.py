"""Sum-rate versus circuit-complexity sweeps over BD-RIS architectures.

Every ``(N, realization)`` pair gets its own channel draw, shared by all
architectures, from ``default_rng([seed, N, realization])``. Results therefore
do not depend on the order or process in which the realizations run.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from .architectures import ArchitectureError, ArchitectureSpec, build_graph, component_count, parse_spec
from .circuit import SusceptancePattern
from .sumrate_opt import (
    DEFAULT_PATH_GAIN,
    OptimizerOptions,
    SystemConfig,
    dbm_to_watt,
    optimize,
    sample_rayleigh,
)

log = logging.getLogger(__name__)

CSV_FIELDS = ("arch", "N", "realization", "sum_rate", "iterations", "converged")
SUMMARY_FIELDS = ("arch", "N", "realizations", "mean_sum_rate", "components")


@dataclass
class ExperimentPlan:
    architectures: list
    N: list
    realizations: int = 20
    M: int = 4
    K: int = 4
    pt_dbm: float = 10.0
    noise_dbm: float = -80.0
    path_gain_it: float = DEFAULT_PATH_GAIN
    path_gain_ri: float = DEFAULT_PATH_GAIN
    seed: int = 0
    options: OptimizerOptions = field(default_factory=OptimizerOptions)
    output_dir: Optional[str] = None
    workers: int = 1

    def __post_init__(self):
        if isinstance(self.N, int):
            self.N = [self.N]
        if self.realizations < 1:
            raise ValueError("realizations must be >= 1")
        if not self.N or min(self.N) < 1:
            raise ValueError("every N in the sweep must be >= 1")
        self.architectures = [
            a if isinstance(a, ArchitectureSpec) else parse_spec(a) for a in self.architectures
        ]
        if isinstance(self.options, dict):
            self.options = OptimizerOptions.from_dict(self.options)

    @classmethod
    def from_json(cls, text: str, base_dir: Optional[Path] = None) -> "ExperimentPlan":
        data = json.loads(text)
        opts_file = data.pop("options_file", None)
        if opts_file is not None:
            path = Path(opts_file)
            if base_dir is not None and not path.is_absolute():
                path = base_dir / path
            data["options"] = OptimizerOptions.from_file(path)
        return cls(**data)

    def config(self, n: int) -> SystemConfig:
        return SystemConfig(
            M=self.M,
            K=self.K,
            N=n,
            P_T=dbm_to_watt(self.pt_dbm),
            noise=dbm_to_watt(self.noise_dbm),
            path_gain_it=self.path_gain_it,
            path_gain_ri=self.path_gain_ri,
            seed=self.seed,
        )

    def valid_points(self) -> tuple[list, list]:
        """Split ``(arch, N)`` points into runnable ones and error messages."""
        ok, errors = [], []
        for spec in self.architectures:
            for n in self.N:
                try:
                    spec.check_size(n)
                except ArchitectureError as exc:
                    errors.append(str(exc))
                else:
                    ok.append((spec, n))
        return ok, errors


@dataclass(frozen=True)
class RunRecord:
    arch: str
    N: int
    realization: int
    sum_rate: float
    iterations: int
    converged: bool


def _run_realization(plan: ExperimentPlan, n: int, r: int, specs) -> list:
    cfg = plan.config(n)
    ch = sample_rayleigh(cfg, np.random.default_rng([plan.seed, n, r]))
    out = []
    for spec in specs:
        pattern = SusceptancePattern(build_graph(spec, n))
        res = optimize(cfg, ch, pattern, plan.options, rng=np.random.default_rng([plan.seed, n, r, 1]))
        out.append(RunRecord(str(spec), n, r, res.sum_rate, res.iterations, res.converged))
    return out


def run_experiment(plan: ExperimentPlan) -> tuple[list, list]:
    """Run the sweep. Returns ``(records, errors)`` with records in canonical order."""
    points, errors = plan.valid_points()
    for msg in errors:
        log.warning("skipping %s", msg)
    by_n: dict = {}
    for spec, n in points:
        by_n.setdefault(n, []).append(spec)
    jobs = [(n, r, specs) for n, specs in by_n.items() for r in range(plan.realizations)]

    records = []
    if plan.workers > 1:
        with ProcessPoolExecutor(plan.workers) as pool:
            futures = [pool.submit(_run_realization, plan, *job) for job in jobs]
            for fut in futures:
                records.extend(fut.result())
    else:
        for job in jobs:
            records.extend(_run_realization(plan, *job))
    order = {str(s): i for i, s in enumerate(plan.architectures)}
    records.sort(key=lambda rec: (order[rec.arch], rec.N, rec.realization))
    return records, errors


def summarize(records) -> list[dict]:
    """Mean sum rate and component count per ``(arch, N)``, in record order."""
    groups: dict = {}
    for rec in records:
        groups.setdefault((rec.arch, rec.N), []).append(rec.sum_rate)
    rows = []
    for (arch, n), rates in groups.items():
        rows.append(
            {
                "arch": arch,
                "N": n,
                "realizations": len(rates),
                "mean_sum_rate": float(np.mean(rates)),
                "components": component_count(parse_spec(arch), n).total,
            }
        )
    return rows


def records_to_csv(records) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for rec in records:
        w.writerow([rec.arch, rec.N, rec.realization, f"{rec.sum_rate:.10f}", rec.iterations, int(rec.converged)])
    return buf.getvalue()


def summary_to_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SUMMARY_FIELDS)
    for row in rows:
        w.writerow([row["arch"], row["N"], row["realizations"], f"{row['mean_sum_rate']:.10f}", row["components"]])
    return buf.getvalue()


def plot_summary(rows, out_dir: Path) -> list[Path]:
    """Write ``sum_rate.svg`` and ``complexity.svg`` (line charts over N)."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    archs = list(dict.fromkeys(r["arch"] for r in rows))
    paths = []
    for key, ylabel, name in (
        ("mean_sum_rate", "Sum rate [bps/Hz]", "sum_rate.svg"),
        ("components", "Number of tunable admittances", "complexity.svg"),
    ):
        fig, ax = plt.subplots(figsize=(5, 4))
        for arch in archs:
            pts = sorted((r["N"], r[key]) for r in rows if r["arch"] == arch)
            ax.plot([p[0] for p in pts], [p[1] for p in pts], marker="o", label=arch)
        ax.set_xlabel("Number of RIS elements N")
        ax.set_ylabel(ylabel)
        ax.grid(True, alpha=0.3)
        ax.legend(fontsize=8)
        fig.tight_layout()
        path = out_dir / name
        fig.savefig(path, metadata={"Date": None})
        plt.close(fig)
        paths.append(path)
    return paths


def default_output_dir() -> Path:
    return Path(os.environ.get("BDRIS_OUTDIR", "bdris_out"))
