"""Canonical domain types shared by every analysis module.

All types are immutable value objects; operations elsewhere in the
package are pure functions over them, so records, profiles and
breakdowns can be shared freely between threads or processes.

Quantities are per training step and, for workload demands, per
computation node (cNode): one GPU holding one model replica.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping, Optional


class ArchitectureKind(Enum):
    """The six supported training architectures.

    * one_worker_one_gpu (1w1g): single replica, no weight movement.
    * one_worker_n_gpu (1wng): centralized within one server, weights
      synchronized over PCIe.
    * ps_worker: parameter servers across the cluster; gradients travel
      Ethernet then PCIe.
    * allreduce_local: decentralized within one NVLink server.
    * allreduce_cluster: decentralized across servers, Ethernet plus
      NVLink.
    * pearl: hybrid partitioned-embedding strategy; collective traffic
      stays on NVLink.
    """

    ONE_WORKER_ONE_GPU = "one_worker_one_gpu"
    ONE_WORKER_N_GPU = "one_worker_n_gpu"
    PS_WORKER = "ps_worker"
    ALLREDUCE_LOCAL = "allreduce_local"
    ALLREDUCE_CLUSTER = "allreduce_cluster"
    PEARL = "pearl"

    @property
    def label(self) -> str:
        return self.value

    @classmethod
    def from_label(cls, label: str) -> "ArchitectureKind":
        try:
            return cls(label)
        except ValueError:
            known = ", ".join(a.value for a in cls)
            raise ValueError(f"unknown architecture {label!r} (known: {known})") from None


#: Architectures whose replicas share one server, hence one PCIe complex.
LOCAL_MULTI_GPU = frozenset({ArchitectureKind.ONE_WORKER_N_GPU, ArchitectureKind.ALLREDUCE_LOCAL})

#: GPUs per server; local architectures cannot exceed this replica count.
GPUS_PER_SERVER = 8


class Medium(Enum):
    """Interconnect media that weight/gradient traffic can traverse."""

    PCIE = "pcie"
    ETHERNET = "ethernet"
    NVLINK = "nvlink"


class OverlapMode(Enum):
    """How per-step components combine into a total.

    NO_OVERLAP sums input I/O, compute, and weight traffic; IDEAL_OVERLAP
    takes their maximum (fully hidden transfers).
    """

    NO_OVERLAP = "none"
    IDEAL_OVERLAP = "ideal"


@dataclass(frozen=True)
class HardwareProfile:
    """Peak capacities of one server class, in canonical units.

    ``gpu_mem_capacity`` bounds which models can be trained weight-replica
    style (AllReduce); it defaults to 16 GB (Tesla V100 class).
    """

    gpu_peak_flops: float       # FLOPs/second
    gpu_mem_bandwidth: float    # bytes/second
    pcie_bandwidth: float       # bytes/second
    ethernet_bandwidth: float   # bytes/second
    nvlink_bandwidth: float     # bytes/second
    gpu_mem_capacity: float = 16e9  # bytes

    def __post_init__(self) -> None:
        for name in ("gpu_peak_flops", "gpu_mem_bandwidth", "pcie_bandwidth",
                     "ethernet_bandwidth", "nvlink_bandwidth", "gpu_mem_capacity"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be finite and strictly positive, got {value!r}")

    def bandwidth_for(self, medium: Medium) -> float:
        if medium is Medium.PCIE:
            return self.pcie_bandwidth
        if medium is Medium.ETHERNET:
            return self.ethernet_bandwidth
        return self.nvlink_bandwidth


@dataclass(frozen=True)
class EfficiencyModel:
    """Attainable fraction of each peak capacity, per resource.

    The default assumes 70% of every peak is usable.
    """

    compute_eff: float = 0.7
    mem_eff: float = 0.7
    pcie_eff: float = 0.7
    ethernet_eff: float = 0.7
    nvlink_eff: float = 0.7

    def __post_init__(self) -> None:
        for name in ("compute_eff", "mem_eff", "pcie_eff", "ethernet_eff", "nvlink_eff"):
            value = getattr(self, name)
            if not (math.isfinite(value) and 0 < value <= 1):
                raise ValueError(f"{name} must lie in (0, 1], got {value!r}")

    def for_medium(self, medium: Medium) -> float:
        if medium is Medium.PCIE:
            return self.pcie_eff
        if medium is Medium.ETHERNET:
            return self.ethernet_eff
        return self.nvlink_eff


@dataclass(frozen=True)
class WorkloadRecord:
    """One job's per-cNode per-step resource demands plus metadata.

    ``flops``, ``mem_access_bytes``, ``input_bytes`` and
    ``weight_traffic_bytes`` are what a single replica consumes in one
    step; ``dense_weight_bytes``/``embedding_weight_bytes`` are the
    model-resident parameter sizes (trainable plus optimizer state).
    ``notes`` carries auxiliary reported numbers that the model does not
    consume (e.g. network traffic reported for a job with no modeled
    weight path).
    """

    job_id: str
    arch: ArchitectureKind
    num_cnodes: int
    batch_size: int
    flops: float
    mem_access_bytes: float
    input_bytes: float
    weight_traffic_bytes: float
    dense_weight_bytes: float
    embedding_weight_bytes: float
    measured_step_seconds: Optional[float] = None
    notes: Optional[Mapping[str, float]] = None

    @property
    def model_bytes(self) -> float:
        """Total model-resident weight size (dense plus embedding)."""
        return self.dense_weight_bytes + self.embedding_weight_bytes


class ValidationError(ValueError):
    """A record violated one or more invariants; ``errors`` names each."""

    def __init__(self, job_id: str, errors: list[str]):
        self.job_id = job_id
        self.errors = errors
        super().__init__(f"invalid record {job_id!r}: " + "; ".join(errors))


_NONNEGATIVE_FIELDS = (
    "flops",
    "mem_access_bytes",
    "input_bytes",
    "weight_traffic_bytes",
    "dense_weight_bytes",
    "embedding_weight_bytes",
)


def record_errors(rec: WorkloadRecord) -> list[str]:
    """Return every invariant violated by ``rec`` (empty list if valid)."""
    errors: list[str] = []
    if not isinstance(rec.num_cnodes, int) or rec.num_cnodes < 1:
        errors.append(f"num_cnodes must be a positive integer, got {rec.num_cnodes!r}")
    if not isinstance(rec.batch_size, int) or rec.batch_size < 1:
        errors.append(f"batch_size must be a positive integer, got {rec.batch_size!r}")
    for name in _NONNEGATIVE_FIELDS:
        value = getattr(rec, name)
        if not isinstance(value, (int, float)) or not math.isfinite(value):
            errors.append(f"non-finite {name}")
        elif value < 0:
            errors.append(f"negative {name}")
    if rec.arch is ArchitectureKind.ONE_WORKER_ONE_GPU:
        if isinstance(rec.num_cnodes, int) and rec.num_cnodes != 1:
            errors.append("cnodes must be 1 for 1w1g")
        if isinstance(rec.weight_traffic_bytes, (int, float)) and rec.weight_traffic_bytes != 0:
            errors.append("nonzero weight traffic on 1w1g")
    if rec.measured_step_seconds is not None:
        m = rec.measured_step_seconds
        if not isinstance(m, (int, float)) or not math.isfinite(m) or m <= 0:
            errors.append(f"measured_step_seconds must be positive, got {m!r}")
    return errors


def validate_record(rec: WorkloadRecord) -> WorkloadRecord:
    """Return ``rec`` unchanged, or raise ValidationError naming every violation."""
    errors = record_errors(rec)
    if errors:
        raise ValidationError(rec.job_id, errors)
    return rec


@dataclass(frozen=True)
class Shares:
    """Fractions of the (non-overlapped) step time, a partition of unity."""

    data: float
    compute_bound: float
    memory_bound: float
    weight: float

    COMPONENTS = ("data", "compute_bound", "memory_bound", "weight")

    def component(self, name: str) -> float:
        if name not in self.COMPONENTS:
            raise ValueError(f"unknown share component {name!r} (known: {self.COMPONENTS})")
        return getattr(self, name)

    def as_dict(self) -> dict[str, float]:
        return {name: getattr(self, name) for name in self.COMPONENTS}


ZERO_SHARES = Shares(0.0, 0.0, 0.0, 0.0)


@dataclass(frozen=True)
class TimeBreakdown:
    """Per-step time decomposition of one workload on one hardware profile.

    ``t_total`` follows the breakdown's overlap mode (sum or max of the
    three components); ``shares`` always divide by the component sum so
    they remain a partition of unity.  ``shares_defined`` is False only
    for the degenerate all-zero record, in which case shares are zeros.
    """

    t_data: float
    t_compute_bound: float
    t_memory_bound: float
    t_compute: float
    t_weight_per_medium: Mapping[Medium, float]
    t_weight: float
    t_total: float
    overlap: OverlapMode
    shares: Shares = field(default=ZERO_SHARES)
    shares_defined: bool = True
