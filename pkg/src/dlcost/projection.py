"""Architecture what-if projection.

Maps a workload from its recorded architecture onto a candidate one,
keeping every per-cNode demand fixed, and quantifies per-step and
whole-job throughput speedups.  cNode counts adjust to the target's
placement constraints: local architectures fit one server (at most 8
replicas), cluster architectures retain the original count.

Infeasibility (model too big for weight-replica AllReduce, or no sparse
embedding to partition) is a result state, not an error, so population
sweeps never abort.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional

from .aggregate import JobPopulation
from .core import (
    GPUS_PER_SERVER,
    LOCAL_MULTI_GPU,
    ArchitectureKind,
    EfficiencyModel,
    HardwareProfile,
    OverlapMode,
    TimeBreakdown,
    WorkloadRecord,
)
from .engine import breakdown

_ALLREDUCE_TARGETS = frozenset({ArchitectureKind.ALLREDUCE_LOCAL, ArchitectureKind.ALLREDUCE_CLUSTER})


def check_allreduce_eligibility(rec: WorkloadRecord, hw: HardwareProfile) -> tuple[bool, str]:
    """AllReduce replicates all weights per GPU, so the model must fit in GPU memory."""
    if rec.model_bytes <= hw.gpu_mem_capacity:
        return True, ""
    return False, (
        f"model weights ({rec.model_bytes:.6g} B) exceed GPU memory capacity "
        f"({hw.gpu_mem_capacity:.6g} B)"
    )


def target_cnode_count(rec: WorkloadRecord, target: ArchitectureKind) -> int:
    """cNode count after projection; identity projections never change it."""
    if target is rec.arch:
        return rec.num_cnodes
    if target is ArchitectureKind.ONE_WORKER_ONE_GPU:
        return 1
    if target in LOCAL_MULTI_GPU:
        return min(rec.num_cnodes, GPUS_PER_SERVER)
    return rec.num_cnodes


@dataclass(frozen=True)
class ProjectionResult:
    source_arch: ArchitectureKind
    target_arch: ArchitectureKind
    source_cnodes: int
    target_cnodes: int
    source_breakdown: TimeBreakdown
    target_breakdown: Optional[TimeBreakdown]
    step_speedup: Optional[float]
    throughput_speedup: Optional[float]
    feasible: bool
    reason: str = ""


def project(rec: WorkloadRecord, target: ArchitectureKind, hw: HardwareProfile,
            eff: EfficiencyModel,
            overlap: OverlapMode = OverlapMode.NO_OVERLAP) -> ProjectionResult:
    """Evaluate ``rec`` as if retrained under ``target``.

    step_speedup is the ratio of per-step totals (>1 means the target
    steps faster); throughput_speedup additionally scales by the cNode
    ratio since per-cNode batch size is held constant.
    """
    source_bd = breakdown(rec, hw, eff, overlap)
    target_cnodes = target_cnode_count(rec, target)

    feasible, reason = True, ""
    if target is not rec.arch:
        if target in _ALLREDUCE_TARGETS:
            feasible, reason = check_allreduce_eligibility(rec, hw)
        elif target is ArchitectureKind.PEARL and rec.embedding_weight_bytes <= 0:
            feasible, reason = False, "no sparse embedding"
    if not feasible:
        return ProjectionResult(
            source_arch=rec.arch, target_arch=target,
            source_cnodes=rec.num_cnodes, target_cnodes=target_cnodes,
            source_breakdown=source_bd, target_breakdown=None,
            step_speedup=None, throughput_speedup=None,
            feasible=False, reason=reason,
        )

    # Per-cNode demands are untouched; only arch and placement change.  A
    # 1w1g target simply has no weight path, so a nonzero weight volume in
    # the hypothetical record never reaches any medium.
    target_rec = replace(rec, arch=target, num_cnodes=target_cnodes)
    target_bd = breakdown(target_rec, hw, eff, overlap)

    if target_bd.t_total == 0:
        step_speedup = 1.0 if source_bd.t_total == 0 else math.inf
    else:
        step_speedup = source_bd.t_total / target_bd.t_total
    throughput_speedup = step_speedup * target_cnodes / rec.num_cnodes

    return ProjectionResult(
        source_arch=rec.arch, target_arch=target,
        source_cnodes=rec.num_cnodes, target_cnodes=target_cnodes,
        source_breakdown=source_bd, target_breakdown=target_bd,
        step_speedup=step_speedup, throughput_speedup=throughput_speedup,
        feasible=True, reason="",
    )


@dataclass(frozen=True)
class ProjectionSummary:
    """Population-level view of one projection target.

    Fractions are over all jobs; infeasible jobs count as not sped up.
    Speedup tuples cover feasible jobs only and are sorted for CDF
    emission.
    """

    n_jobs: int
    n_infeasible: int
    fraction_infeasible: float
    fraction_step_sped_up: float
    fraction_throughput_sped_up: float
    step_speedups: tuple[float, ...]
    throughput_speedups: tuple[float, ...]


def summarize(results: list[ProjectionResult]) -> ProjectionSummary:
    n = len(results)
    if n == 0:
        raise ValueError("no projection results to summarize")
    feasible = [r for r in results if r.feasible]
    n_infeasible = n - len(feasible)
    step_up = sum(1 for r in feasible if r.step_speedup > 1)
    thr_up = sum(1 for r in feasible if r.throughput_speedup > 1)
    return ProjectionSummary(
        n_jobs=n,
        n_infeasible=n_infeasible,
        fraction_infeasible=n_infeasible / n,
        fraction_step_sped_up=step_up / n,
        fraction_throughput_sped_up=thr_up / n,
        step_speedups=tuple(sorted(r.step_speedup for r in feasible)),
        throughput_speedups=tuple(sorted(r.throughput_speedup for r in feasible)),
    )


def population_speedup_profile(
        pop: JobPopulation, target: ArchitectureKind, hw: HardwareProfile,
        eff: EfficiencyModel, overlap: OverlapMode = OverlapMode.NO_OVERLAP,
) -> tuple[list[ProjectionResult], ProjectionSummary]:
    """Project every job onto ``target`` and summarize the outcome."""
    pop.require_nonempty()
    results = [project(rec, target, hw, eff, overlap) for rec in pop]
    return results, summarize(results)
