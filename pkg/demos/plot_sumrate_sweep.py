"""
Sum rate against circuit complexity
===================================

A short sweep over a few architectures: every realization draws one set of
Rayleigh channels, and each architecture optimizes its own precoder and
susceptances on it. Use more realizations for smoother curves; this demo
keeps the count low so that it finishes in about a minute.
"""

import os
from pathlib import Path

from bdris.experiment import ExperimentPlan, plot_summary, run_experiment, summarize, summary_to_csv

out = Path(os.environ.get("BDRIS_OUTDIR", "bdris_out")) / "sweep_demo"
out.mkdir(parents=True, exist_ok=True)

plan = ExperimentPlan(
    architectures=["single", "tree", "maxplanar:1", "fully"],
    N=[4, 8],
    realizations=5,
)
records, errors = run_experiment(plan)
rows = summarize(records)
print(summary_to_csv(rows))

###############################################################################
# The planar 3-band graph needs 4N-6 components against N(N+1)/2 for full
# interconnection, yet lands close to it in rate.

for p in plot_summary(rows, out):
    print("wrote", p)
