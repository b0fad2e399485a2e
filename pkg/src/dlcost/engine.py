"""The analytical step-time model.

One training step decomposes into three parts:

  * input data I/O      t_data    = input_bytes / attainable PCIe bandwidth,
                                    divided further when several replicas
                                    share one server's PCIe complex;
  * computation         t_compute = flops / attainable FLOPs
                                    + mem_access_bytes / attainable memory
                                    bandwidth (compute-bound + memory-bound);
  * weight movement     t_weight  = weight_traffic_bytes pushed serially
                                    through each medium on the
                                    architecture's path.

"Attainable" means peak capacity scaled by the efficiency model.  The
total is either the sum of the three parts (no overlap) or their
maximum (ideal overlap).  All functions are pure and deterministic.
"""

from __future__ import annotations

from typing import Optional

from .core import (
    GPUS_PER_SERVER,
    LOCAL_MULTI_GPU,
    ArchitectureKind,
    EfficiencyModel,
    HardwareProfile,
    Medium,
    OverlapMode,
    Shares,
    TimeBreakdown,
    WorkloadRecord,
    ZERO_SHARES,
)

#: Media traversed by weight/gradient traffic, in transfer order.
WEIGHT_MEDIUM_PATHS: dict[ArchitectureKind, tuple[Medium, ...]] = {
    ArchitectureKind.ONE_WORKER_ONE_GPU: (),
    ArchitectureKind.ONE_WORKER_N_GPU: (Medium.PCIE,),
    ArchitectureKind.PS_WORKER: (Medium.ETHERNET, Medium.PCIE),
    ArchitectureKind.ALLREDUCE_LOCAL: (Medium.NVLINK,),
    ArchitectureKind.ALLREDUCE_CLUSTER: (Medium.ETHERNET, Medium.NVLINK),
    ArchitectureKind.PEARL: (Medium.NVLINK,),
}


def weight_medium_path(arch: ArchitectureKind) -> tuple[Medium, ...]:
    """Return the ordered media weight traffic crosses under ``arch``."""
    return WEIGHT_MEDIUM_PATHS[arch]


def pcie_contention(arch: ArchitectureKind, num_cnodes: int) -> int:
    """Replicas competing for one server's PCIe during input loading.

    Architectures co-locating replicas on one server feed input data to
    all of them simultaneously over the same PCIe complex; cluster
    architectures place one replica per server.
    """
    if arch in LOCAL_MULTI_GPU:
        return min(num_cnodes, GPUS_PER_SERVER)
    return 1


def data_io_time(rec: WorkloadRecord, hw: HardwareProfile, eff: EfficiencyModel) -> float:
    """Seconds to load one step's input samples from host to GPU."""
    contention = pcie_contention(rec.arch, rec.num_cnodes)
    return rec.input_bytes / (hw.pcie_bandwidth * eff.pcie_eff / contention)


def compute_time(rec: WorkloadRecord, hw: HardwareProfile,
                 eff: EfficiencyModel) -> tuple[float, float]:
    """(compute-bound, memory-bound) seconds of GPU computation."""
    t_cb = rec.flops / (hw.gpu_peak_flops * eff.compute_eff)
    t_mb = rec.mem_access_bytes / (hw.gpu_mem_bandwidth * eff.mem_eff)
    return t_cb, t_mb


def weight_time(rec: WorkloadRecord, hw: HardwareProfile, eff: EfficiencyModel,
                arch_override: Optional[ArchitectureKind] = None,
                ) -> tuple[dict[Medium, float], float]:
    """Per-medium and total weight-movement seconds.

    The traffic volume crosses every medium on the architecture's path in
    sequence, so the total is the sum of per-medium times.
    ``arch_override`` reroutes the same volume over another
    architecture's path (what-if evaluation).
    """
    arch = rec.arch if arch_override is None else arch_override
    per_medium: dict[Medium, float] = {}
    total = 0.0
    for medium in weight_medium_path(arch):
        t = rec.weight_traffic_bytes / (hw.bandwidth_for(medium) * eff.for_medium(medium))
        per_medium[medium] = t
        total += t
    return per_medium, total


def breakdown(rec: WorkloadRecord, hw: HardwareProfile, eff: EfficiencyModel,
              overlap: OverlapMode = OverlapMode.NO_OVERLAP) -> TimeBreakdown:
    """Full per-step time decomposition of ``rec`` on ``hw``.

    Shares always divide by the sum of components, so under ideal
    overlap they still partition unity even though ``t_total`` is the
    max.
    """
    t_data = data_io_time(rec, hw, eff)
    t_cb, t_mb = compute_time(rec, hw, eff)
    t_compute = t_cb + t_mb
    per_medium, t_weight = weight_time(rec, hw, eff)

    component_sum = t_data + t_compute + t_weight
    if overlap is OverlapMode.IDEAL_OVERLAP:
        t_total = max(t_data, t_compute, t_weight)
    else:
        t_total = component_sum

    if component_sum > 0:
        shares = Shares(
            data=t_data / component_sum,
            compute_bound=t_cb / component_sum,
            memory_bound=t_mb / component_sum,
            weight=t_weight / component_sum,
        )
        shares_defined = True
    else:
        shares = ZERO_SHARES
        shares_defined = False

    return TimeBreakdown(
        t_data=t_data,
        t_compute_bound=t_cb,
        t_memory_bound=t_mb,
        t_compute=t_compute,
        t_weight_per_medium=per_medium,
        t_weight=t_weight,
        t_total=t_total,
        overlap=overlap,
        shares=shares,
        shares_defined=shares_defined,
    )


def throughput(rec: WorkloadRecord, t_total: float) -> float:
    """Samples per second across all of the job's cNodes.

    (num_cnodes / t_total) steps per unit time, each consuming
    ``batch_size`` samples per cNode.
    """
    if t_total <= 0:
        raise ValueError(f"t_total must be positive, got {t_total!r}")
    return rec.num_cnodes / t_total * rec.batch_size


def validation_gap(predicted: float, measured: float) -> float:
    """Signed relative difference (predicted - measured) / measured."""
    if measured <= 0:
        raise ValueError(f"measured time must be positive, got {measured!r}")
    return (predicted - measured) / measured
