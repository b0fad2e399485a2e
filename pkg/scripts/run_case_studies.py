#!/usr/bin/env python3
"""Case-study analyses on the built-in corpus.

Prints, for each of the six models on the testbed profile:
  * the per-step time breakdown and component shares,
  * the compute-bound prediction vs. the measured ResNet50 number,
  * the GCN what-if: PEARL (NVLink) vs. PS/Worker (Ethernet+PCIe).

Writes the breakdown report (CSV) next to the printed tables.
"""

import argparse
import dataclasses
from pathlib import Path

from dlcost import (
    ArchitectureKind,
    EfficiencyModel,
    breakdown,
    builtin_corpus,
    case_study_testbed,
    measured_efficiency,
    throughput,
    validation_gap,
)
from dlcost.cli import run as dlcost_run
from dlcost.corpus import RESNET50_MEASURED_COMPUTE_BOUND_S, corpus_record


def print_breakdowns(hw, eff):
    print(f"{'model':16s} {'t_data':>9s} {'t_cb':>9s} {'t_mb':>9s} {'t_w':>9s} "
          f"{'t_total':>9s} {'weight%':>8s} {'samples/s':>12s}")
    for rec in builtin_corpus():
        bd = breakdown(rec, hw, eff)
        print(f"{rec.job_id:16s} {bd.t_data:9.4f} {bd.t_compute_bound:9.4f} "
              f"{bd.t_memory_bound:9.4f} {bd.t_weight:9.4f} {bd.t_total:9.4f} "
              f"{bd.shares.weight:8.1%} {throughput(rec, bd.t_total):12,.0f}")


def print_resnet_validation(hw, eff):
    rec = corpus_record("resnet50")
    bd = breakdown(rec, hw, eff)
    gap = validation_gap(bd.t_compute_bound, RESNET50_MEASURED_COMPUTE_BOUND_S)
    print(f"resnet50 compute-bound: predicted {bd.t_compute_bound:.3f}s, "
          f"measured {RESNET50_MEASURED_COMPUTE_BOUND_S:.3f}s, gap {gap:+.1%}")


def print_gcn_architecture_comparison(hw, eff):
    gcn = corpus_record("gcn")
    as_pearl = breakdown(gcn, hw, eff)
    as_ps = breakdown(dataclasses.replace(gcn, arch=ArchitectureKind.PS_WORKER), hw, eff)
    print(f"gcn on PEARL (NVLink):     t_total {as_pearl.t_total:.3f}s, "
          f"communication {as_pearl.shares.weight:.0%}")
    print(f"gcn on PS/Worker (Eth+PCIe): t_total {as_ps.t_total:.3f}s, "
          f"communication {as_ps.shares.weight:.0%}")
    print(f"step speedup from PEARL: {as_ps.t_total / as_pearl.t_total:.1f}x")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--outdir", default="out/case_studies", help="report directory")
    parser.add_argument("--measured-eff", action="store_true",
                        help="use each model's measured efficiencies instead of 0.7")
    args = parser.parse_args()

    hw = case_study_testbed()
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)

    print("== per-step breakdown on the testbed (70% efficiency) ==")
    print_breakdowns(hw, EfficiencyModel())
    if args.measured_eff:
        print("\n== with measured per-model efficiencies ==")
        table = measured_efficiency()
        for rec in builtin_corpus():
            bd = breakdown(rec, hw, table[rec.job_id])
            print(f"{rec.job_id:16s} t_total {bd.t_total:9.4f}  weight {bd.shares.weight:6.1%}")

    print("\n== model validation ==")
    print_resnet_validation(hw, EfficiencyModel())

    print("\n== GCN architecture choice ==")
    print_gcn_architecture_comparison(hw, EfficiencyModel())

    report = outdir / "breakdown.csv"
    dlcost_run(["breakdown", "--corpus", "--hw", "case-study-testbed",
                "--out", str(report)])
    print(f"\nwrote {report}")


if __name__ == "__main__":
    main()
