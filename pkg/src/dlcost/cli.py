"""Command-line entry point.

Subcommands compose the library into the standard analyses:

  breakdown    per-job step-time decomposition
  project      architecture what-if (speedups, feasibility)
  sweep        hardware-configuration what-if speedups
  aggregate    population statistics (shares, composition, CDFs)
  sensitivity  efficiency-grid or overlap-mode sensitivity
  synth        generate a seeded synthetic trace
  validate     check a trace, compare predictions to measured steps
  corpus       dump the built-in case-study corpus as a trace

Outputs are deterministic: identical inputs and flags produce identical
bytes.  Exit codes: 0 success, 2 malformed input data, 64 usage error,
66 missing/unreadable input.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional

from .aggregate import (
    JobPopulation,
    composition,
    scale_distribution,
    share_cdf,
    weighted_breakdown,
)
from .core import ArchitectureKind, Medium, OverlapMode, Shares
from .corpus import DEFAULT_MIX, SynthSpec, builtin_corpus, synth_population
from .engine import breakdown, throughput, validation_gap
from .ingest import (
    TraceFormatError,
    dump_trace,
    load_efficiency_model,
    load_hardware_profile,
    parse_trace,
)
from .projection import population_speedup_profile
from .report import Report, build_report, emit, input_digest, round9
from .sweep import (
    SweepAxis,
    SweepResource,
    cartesian_sweep,
    efficiency_sensitivity,
    hardware_sweep,
    overlap_comparison,
    standard_axes,
)
from .units import QuantityError, parse_quantity

EX_OK = 0
EX_DATA = 2
EX_USAGE = 64
EX_NOINPUT = 66

_ARCH_LABELS = [a.value for a in ArchitectureKind]


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _add_input_flags(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--trace", metavar="PATH", help="newline-delimited JSON trace file")
    src.add_argument("--corpus", action="store_true", help="use the built-in case-study corpus")


def _add_model_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--hw", default="pai-baseline", metavar="PRESET|PATH",
                   help="hardware profile preset name or config file (default: pai-baseline)")
    p.add_argument("--eff", default="default", metavar="SPEC",
                   help="efficiency model: 'default', 'measured:<corpus job>', or a config file")
    p.add_argument("--overlap", choices=["none", "ideal"], default="none",
                   help="overlap model for total step time (default: none)")


def _add_output_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", metavar="PATH", help="write output here instead of stdout")
    p.add_argument("--format", choices=["csv", "json"], default="csv",
                   help="report format (default: csv)")


def build_parser() -> _Parser:
    parser = _Parser(prog="dlcost",
                     description="Analytical cost model for DL training workloads.")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)

    p = sub.add_parser("breakdown", help="per-job step-time breakdown")
    _add_input_flags(p)
    _add_model_flags(p)
    _add_output_flags(p)

    p = sub.add_parser("project", help="architecture what-if projection")
    _add_input_flags(p)
    _add_model_flags(p)
    _add_output_flags(p)
    p.add_argument("--target", required=True, choices=_ARCH_LABELS,
                   help="architecture to project every job onto")

    p = sub.add_parser("sweep", help="hardware-configuration sweep")
    _add_input_flags(p)
    _add_model_flags(p)
    _add_output_flags(p)
    p.add_argument("--axes", default="ethernet,pcie,gpu_flops,gpu_mem_bandwidth",
                   help="comma-separated resources to vary (default: all four)")
    p.add_argument("--candidates", default=None,
                   help="comma-separated candidate values for a single axis "
                        "(unit strings or canonical numbers)")
    p.add_argument("--cartesian", action="store_true",
                   help="sweep the full cross-product of all axes")

    p = sub.add_parser("aggregate", help="population statistics")
    _add_input_flags(p)
    _add_model_flags(p)
    _add_output_flags(p)
    p.add_argument("--stat", choices=["shares", "composition", "share-cdf", "scale-cdf"],
                   default="shares", help="which statistic to emit (default: shares)")
    p.add_argument("--component", choices=list(Shares.COMPONENTS), default="weight",
                   help="share component for --stat share-cdf (default: weight)")
    p.add_argument("--level", choices=["job", "cnode"], default="job",
                   help="aggregation level for --stat share-cdf (default: job)")

    p = sub.add_parser("sensitivity", help="efficiency or overlap sensitivity")
    _add_input_flags(p)
    _add_model_flags(p)
    _add_output_flags(p)
    p.add_argument("--analysis", choices=["efficiency", "overlap"], default="efficiency")
    p.add_argument("--comp-grid", default="0.25,0.4,0.55,0.7,0.85,1.0",
                   help="compute/memory efficiency grid (comma-separated fractions)")
    p.add_argument("--comm-grid", default="0.25,0.4,0.55,0.7,0.85,1.0",
                   help="communication efficiency grid (comma-separated fractions)")
    p.add_argument("--target", default="allreduce_local", choices=_ARCH_LABELS,
                   help="projection target for --analysis overlap")

    p = sub.add_parser("synth", help="generate a synthetic trace")
    p.add_argument("--size", type=int, required=True, help="number of jobs")
    p.add_argument("--seed", type=int, required=True, help="RNG seed (mandatory)")
    p.add_argument("--mix", default=None,
                   help="architecture mix, e.g. 'ps_worker=0.4,one_worker_one_gpu=0.6'")
    p.add_argument("--out", metavar="PATH", help="write the trace here instead of stdout")

    p = sub.add_parser("validate", help="validate a trace and compare to measurements")
    _add_input_flags(p)
    _add_model_flags(p)
    _add_output_flags(p)

    p = sub.add_parser("corpus", help="dump the built-in corpus as a trace")
    p.add_argument("--out", metavar="PATH", help="write the trace here instead of stdout")

    return parser


def _load_inputs(args) -> tuple[JobPopulation, list, str, str]:
    """Population, per-line errors, source label, input digest."""
    if getattr(args, "corpus", False):
        text = dump_trace(builtin_corpus())
        source = "builtin-corpus"
    else:
        text = Path(args.trace).read_text(encoding="utf-8")
        source = args.trace
    pop, errors = parse_trace(text, strict=False, source=source)
    return pop, errors, source, input_digest(text.encode("utf-8"))


def _report_line_errors(errors, source: str) -> None:
    for err in errors:
        print(f"{source}:{err.line}: {err.message}", file=sys.stderr)


def _write_output(data: bytes, out: Optional[str]) -> None:
    if out:
        Path(out).write_bytes(data)
    else:
        sys.stdout.buffer.write(data)


_BREAKDOWN_COLUMNS = (
    "job_id", "arch", "num_cnodes", "batch_size",
    "t_data", "t_compute_bound", "t_memory_bound", "t_compute",
    "t_weight_ethernet", "t_weight_pcie", "t_weight_nvlink", "t_weight",
    "t_total", "share_data", "share_compute_bound", "share_memory_bound",
    "share_weight", "shares_defined", "throughput",
)


def _breakdown_row(rec, bd) -> dict:
    return {
        "job_id": rec.job_id,
        "arch": rec.arch.label,
        "num_cnodes": rec.num_cnodes,
        "batch_size": rec.batch_size,
        "t_data": bd.t_data,
        "t_compute_bound": bd.t_compute_bound,
        "t_memory_bound": bd.t_memory_bound,
        "t_compute": bd.t_compute,
        "t_weight_ethernet": bd.t_weight_per_medium.get(Medium.ETHERNET, 0.0),
        "t_weight_pcie": bd.t_weight_per_medium.get(Medium.PCIE, 0.0),
        "t_weight_nvlink": bd.t_weight_per_medium.get(Medium.NVLINK, 0.0),
        "t_weight": bd.t_weight,
        "t_total": bd.t_total,
        "share_data": bd.shares.data,
        "share_compute_bound": bd.shares.compute_bound,
        "share_memory_bound": bd.shares.memory_bound,
        "share_weight": bd.shares.weight,
        "shares_defined": bd.shares_defined,
        "throughput": throughput(rec, bd.t_total) if bd.t_total > 0 else None,
    }


def cmd_breakdown(args, pop, hw, eff, overlap, source, digest) -> Report:
    rows = [_breakdown_row(rec, breakdown(rec, hw, eff, overlap)) for rec in pop]
    return build_report("breakdown", _BREAKDOWN_COLUMNS, rows, hw, eff, overlap, source, digest)


def cmd_project(args, pop, hw, eff, overlap, source, digest) -> Report:
    target = ArchitectureKind.from_label(args.target)
    results, summary = population_speedup_profile(pop, target, hw, eff, overlap)
    columns = ("job_id", "source_arch", "target_arch", "source_cnodes", "target_cnodes",
               "feasible", "reason", "source_t_total", "target_t_total",
               "step_speedup", "throughput_speedup")
    rows = []
    for rec, res in zip(pop, results):
        rows.append({
            "job_id": rec.job_id,
            "source_arch": res.source_arch.label,
            "target_arch": res.target_arch.label,
            "source_cnodes": res.source_cnodes,
            "target_cnodes": res.target_cnodes,
            "feasible": res.feasible,
            "reason": res.reason,
            "source_t_total": res.source_breakdown.t_total,
            "target_t_total": res.target_breakdown.t_total if res.target_breakdown else None,
            "step_speedup": res.step_speedup,
            "throughput_speedup": res.throughput_speedup,
        })
    extra = {
        "target": target.label,
        "summary": {
            "n_jobs": summary.n_jobs,
            "fraction_infeasible": round9(summary.fraction_infeasible),
            "fraction_step_sped_up": round9(summary.fraction_step_sped_up),
            "fraction_throughput_sped_up": round9(summary.fraction_throughput_sped_up),
        },
    }
    return build_report("projection", columns, rows, hw, eff, overlap, source, digest, extra)


_AXIS_KIND = {
    SweepResource.ETHERNET: "bandwidth",
    SweepResource.PCIE: "bandwidth",
    SweepResource.GPU_FLOPS: "flops_rate",
    SweepResource.GPU_MEM_BANDWIDTH: "bandwidth",
}


def _parse_candidates(text: str, resource: SweepResource) -> tuple[float, ...]:
    values = []
    for item in text.split(","):
        item = item.strip()
        try:
            values.append(float(item))
        except ValueError:
            try:
                values.append(parse_quantity(item, _AXIS_KIND[resource]))
            except QuantityError as exc:
                raise _UsageError(f"--candidates: {exc}") from None
    return tuple(values)


def cmd_sweep(args, pop, hw, eff, overlap, source, digest) -> Report:
    resources = []
    for name in args.axes.split(","):
        name = name.strip()
        try:
            resources.append(SweepResource(name))
        except ValueError:
            raise _UsageError(f"unknown sweep axis {name!r} "
                              f"(known: {', '.join(r.value for r in SweepResource)})") from None
    axes = list(standard_axes(hw, resources))
    if args.candidates is not None:
        if len(axes) != 1:
            raise _UsageError("--candidates requires exactly one axis in --axes")
        axis = axes[0]
        axes = [SweepAxis(resource=axis.resource,
                          candidates=_parse_candidates(args.candidates, axis.resource),
                          baseline=axis.baseline)]
    extra = {"axes": {a.resource.value: [round9(c) for c in a.candidates] for a in axes}}
    if args.cartesian:
        cells = cartesian_sweep(pop, axes, hw, eff, overlap)
        columns = ("job_id", "settings", "speedup")
        rows = [{
            "job_id": c.job_id,
            "settings": ";".join(f"{r.value}={v:.9g}" for r, v in c.settings),
            "speedup": c.speedup,
        } for c in cells]
        return build_report("sweep-cartesian", columns, rows, hw, eff, overlap,
                            source, digest, extra)
    cells = hardware_sweep(pop, axes, hw, eff, overlap)
    columns = ("job_id", "resource", "candidate", "normalized", "speedup")
    rows = [{
        "job_id": c.job_id,
        "resource": c.resource.value,
        "candidate": c.candidate,
        "normalized": c.normalized,
        "speedup": c.speedup,
    } for c in cells]
    return build_report("sweep", columns, rows, hw, eff, overlap, source, digest, extra)


def cmd_aggregate(args, pop, hw, eff, overlap, source, digest) -> Report:
    if args.stat == "shares":
        averages = weighted_breakdown(pop, hw, eff, overlap)
        columns = ("level", "share_data", "share_compute_bound",
                   "share_memory_bound", "share_weight")
        rows = []
        for level, shares in (("job", averages.job_level), ("cnode", averages.cnode_level)):
            rows.append({
                "level": level,
                "share_data": shares.data,
                "share_compute_bound": shares.compute_bound,
                "share_memory_bound": shares.memory_bound,
                "share_weight": shares.weight,
            })
        return build_report("aggregate", columns, rows, hw, eff, overlap, source, digest,
                            {"stat": "shares"})
    if args.stat == "composition":
        comp = composition(pop)
        columns = ("arch", "job_count", "job_fraction", "cnode_count", "cnode_fraction")
        rows = [{
            "arch": arch.label,
            "job_count": c.job_count,
            "job_fraction": c.job_fraction,
            "cnode_count": c.cnode_count,
            "cnode_fraction": c.cnode_fraction,
        } for arch, c in comp.items()]
        return build_report("aggregate", columns, rows, hw, eff, overlap, source, digest,
                            {"stat": "composition"})
    if args.stat == "share-cdf":
        cdf = share_cdf(pop, args.component, hw, eff, overlap, level=args.level)
        columns = ("share", "cumulative_fraction")
        rows = [{"share": x, "cumulative_fraction": f} for x, f in cdf.points]
        return build_report("aggregate", columns, rows, hw, eff, overlap, source, digest,
                            {"stat": "share-cdf", "component": args.component,
                             "level": args.level})
    # scale-cdf
    dists = scale_distribution(pop)
    columns = ("arch", "metric", "value", "cumulative_fraction")
    rows = []
    for arch in ArchitectureKind:
        if arch not in dists:
            continue
        dist = dists[arch]
        for metric, cdf in (("num_cnodes", dist.cnodes), ("model_bytes", dist.model_bytes)):
            for x, f in cdf.points:
                rows.append({"arch": arch.label, "metric": metric,
                             "value": x, "cumulative_fraction": f})
    return build_report("aggregate", columns, rows, hw, eff, overlap, source, digest,
                        {"stat": "scale-cdf"})


def _parse_grid(text: str, flag: str) -> list[float]:
    try:
        return [float(item) for item in text.split(",") if item.strip()]
    except ValueError:
        raise _UsageError(f"{flag} must be comma-separated numbers, got {text!r}") from None


def cmd_sensitivity(args, pop, hw, eff, overlap, source, digest) -> Report:
    if args.analysis == "efficiency":
        comp_grid = _parse_grid(args.comp_grid, "--comp-grid")
        comm_grid = _parse_grid(args.comm_grid, "--comm-grid")
        cells = efficiency_sensitivity(pop, hw, comp_grid, comm_grid, overlap)
        columns = ("compute_eff", "comm_eff", "job_level_weight_share",
                   "cnode_level_weight_share")
        rows = [{
            "compute_eff": c.compute_eff,
            "comm_eff": c.comm_eff,
            "job_level_weight_share": c.job_level_weight_share,
            "cnode_level_weight_share": c.cnode_level_weight_share,
        } for c in cells]
        return build_report("sensitivity", columns, rows, hw, eff, overlap, source, digest,
                            {"analysis": "efficiency"})
    target = ArchitectureKind.from_label(args.target)
    cmp = overlap_comparison(pop, hw, eff, target)
    columns = ("overlap", "job_level_weight_share", "cnode_level_weight_share",
               "fraction_infeasible", "fraction_step_sped_up", "fraction_throughput_sped_up")
    rows = []
    for stats in (cmp.no_overlap, cmp.ideal_overlap):
        rows.append({
            "overlap": stats.overlap.value,
            "job_level_weight_share": stats.job_level_weight_share,
            "cnode_level_weight_share": stats.cnode_level_weight_share,
            "fraction_infeasible": stats.summary.fraction_infeasible,
            "fraction_step_sped_up": stats.summary.fraction_step_sped_up,
            "fraction_throughput_sped_up": stats.summary.fraction_throughput_sped_up,
        })
    extra = {
        "analysis": "overlap",
        "target": target.label,
        "fraction_at_weight_path_ratio": round9(cmp.fraction_at_weight_path_ratio),
    }
    return build_report("sensitivity", columns, rows, hw, eff, overlap, source, digest, extra)


def _parse_mix(text: str) -> dict[ArchitectureKind, float]:
    mix = {}
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        if "=" not in item:
            raise _UsageError(f"--mix entries must look like arch=fraction, got {item!r}")
        label, _, frac = item.partition("=")
        arch = ArchitectureKind.from_label(label.strip())
        mix[arch] = float(frac)
    return mix


def cmd_synth(args) -> int:
    try:
        mix = _parse_mix(args.mix) if args.mix else dict(DEFAULT_MIX)
        spec = SynthSpec(size=args.size, seed=args.seed, mix=mix)
    except ValueError as exc:
        raise _UsageError(str(exc)) from None
    pop = synth_population(spec)
    _write_output(dump_trace(pop).encode("utf-8"), args.out)
    return EX_OK


def cmd_corpus(args) -> int:
    _write_output(dump_trace(builtin_corpus()).encode("utf-8"), args.out)
    return EX_OK


def cmd_validate(args, pop, errors, hw, eff, overlap, source, digest) -> tuple[Report, int]:
    columns = ("line", "job_id", "status", "message",
               "predicted_step_seconds", "measured_step_seconds", "gap")
    rows = []
    for err in errors:
        rows.append({"line": err.line, "job_id": None, "status": "error",
                     "message": err.message, "predicted_step_seconds": None,
                     "measured_step_seconds": None, "gap": None})
    for rec in pop:
        bd = breakdown(rec, hw, eff, overlap)
        measured = rec.measured_step_seconds
        gap = validation_gap(bd.t_total, measured) if measured else None
        rows.append({"line": None, "job_id": rec.job_id, "status": "ok", "message": "",
                     "predicted_step_seconds": bd.t_total,
                     "measured_step_seconds": measured, "gap": gap})
    report = build_report("validate", columns, rows, hw, eff, overlap, source, digest,
                          {"n_errors": len(errors)})
    return report, (EX_DATA if errors else EX_OK)


def run(argv: Optional[list[str]] = None) -> int:
    """Execute one CLI invocation; returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"dlcost: {exc}", file=sys.stderr)
        return EX_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EX_USAGE

    try:
        if args.command == "synth":
            return cmd_synth(args)
        if args.command == "corpus":
            return cmd_corpus(args)

        hw = load_hardware_profile(args.hw)
        eff = load_efficiency_model(args.eff)
        overlap = OverlapMode(args.overlap)
        pop, errors, source, digest = _load_inputs(args)

        if args.command == "validate":
            _report_line_errors(errors, source)
            report, code = cmd_validate(args, pop, errors, hw, eff, overlap, source, digest)
            _write_output(emit(report, args.format), args.out)
            return code

        if errors:
            _report_line_errors(errors, source)
            return EX_DATA
        if len(pop) == 0:
            print(f"dlcost: {source}: no records", file=sys.stderr)
            return EX_DATA

        handler = {
            "breakdown": cmd_breakdown,
            "project": cmd_project,
            "sweep": cmd_sweep,
            "aggregate": cmd_aggregate,
            "sensitivity": cmd_sensitivity,
        }[args.command]
        report = handler(args, pop, hw, eff, overlap, source, digest)
        _write_output(emit(report, args.format), args.out)
        return EX_OK
    except _UsageError as exc:
        print(f"dlcost: {exc}", file=sys.stderr)
        return EX_USAGE
    except (FileNotFoundError, IsADirectoryError, PermissionError) as exc:
        print(f"dlcost: {exc}", file=sys.stderr)
        return EX_NOINPUT
    except (TraceFormatError, QuantityError, ValueError) as exc:
        print(f"dlcost: {exc}", file=sys.stderr)
        return EX_DATA


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
