"""Trace and configuration I/O.

Traces are newline-delimited JSON, one record per line, with snake_case
keys mirroring WorkloadRecord.  Quantities may be plain numbers in
canonical units or unit strings ("357MB", "1.56T"); writing always emits
canonical numbers so a written trace reloads bit-exactly.

Hardware profiles come from built-in presets or flat key = value files
with unit-string values; the DLCOST_HW_DIR environment variable prepends
a directory to the preset search path.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, TextIO, Union

from .aggregate import JobPopulation
from .core import (
    ArchitectureKind,
    EfficiencyModel,
    HardwareProfile,
    WorkloadRecord,
    record_errors,
)
from .units import QuantityError, parse_count, parse_quantity

PathLike = Union[str, Path]


class TraceFormatError(ValueError):
    """A trace line (or config file) could not be interpreted."""


@dataclass(frozen=True)
class TraceError:
    line: int
    message: str


_BYTE_FIELDS = (
    "mem_access_bytes",
    "input_bytes",
    "weight_traffic_bytes",
    "dense_weight_bytes",
    "embedding_weight_bytes",
)


def _coerce_int(value, name: str) -> int:
    if isinstance(value, bool):
        raise TraceFormatError(f"{name} must be an integer, got {value!r}")
    if isinstance(value, int):
        return value
    if isinstance(value, float) and value.is_integer():
        return int(value)
    raise TraceFormatError(f"{name} must be an integer, got {value!r}")


def _coerce_bytes(value, name: str) -> float:
    if isinstance(value, str):
        return parse_quantity(value, "bytes")
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise TraceFormatError(f"{name} must be a number or unit string, got {value!r}")
    return float(value)


def _coerce_flops(value) -> float:
    if isinstance(value, str):
        return parse_count(value)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise TraceFormatError(f"flops must be a number or count string, got {value!r}")
    return float(value)


def record_from_dict(obj: dict) -> WorkloadRecord:
    """Build and validate a WorkloadRecord from one trace object."""
    if not isinstance(obj, dict):
        raise TraceFormatError(f"expected a JSON object, got {type(obj).__name__}")
    try:
        job_id = obj["job_id"]
        arch = ArchitectureKind.from_label(obj["arch"])
        kwargs = dict(
            job_id=str(job_id),
            arch=arch,
            num_cnodes=_coerce_int(obj["num_cnodes"], "num_cnodes"),
            batch_size=_coerce_int(obj["batch_size"], "batch_size"),
            flops=_coerce_flops(obj["flops"]),
        )
        for name in _BYTE_FIELDS:
            kwargs[name] = _coerce_bytes(obj[name], name)
    except KeyError as exc:
        raise TraceFormatError(f"missing field {exc.args[0]!r}") from None
    except (QuantityError, ValueError) as exc:
        raise TraceFormatError(str(exc)) from None
    measured = obj.get("measured_step_seconds")
    if measured is not None:
        if isinstance(measured, bool) or not isinstance(measured, (int, float)):
            raise TraceFormatError(f"measured_step_seconds must be a number, got {measured!r}")
        kwargs["measured_step_seconds"] = float(measured)
    notes = obj.get("notes")
    if notes is not None:
        if not isinstance(notes, dict):
            raise TraceFormatError(f"notes must be an object, got {notes!r}")
        kwargs["notes"] = dict(notes)
    rec = WorkloadRecord(**kwargs)
    errors = record_errors(rec)
    if errors:
        raise TraceFormatError("; ".join(errors))
    return rec


def record_to_dict(rec: WorkloadRecord) -> dict:
    """Canonical-unit JSON object for one record (inverse of record_from_dict)."""
    obj = {
        "job_id": rec.job_id,
        "arch": rec.arch.label,
        "num_cnodes": rec.num_cnodes,
        "batch_size": rec.batch_size,
        "flops": rec.flops,
    }
    for name in _BYTE_FIELDS:
        obj[name] = getattr(rec, name)
    if rec.measured_step_seconds is not None:
        obj["measured_step_seconds"] = rec.measured_step_seconds
    if rec.notes is not None:
        obj["notes"] = dict(rec.notes)
    return obj


def parse_trace(text: str, strict: bool = False,
                source: str = "<trace>") -> tuple[JobPopulation, list[TraceError]]:
    """Parse newline-delimited JSON text into a population plus a per-line
    error report.

    Blank lines are skipped.  In strict mode the first malformed line
    raises TraceFormatError instead of being reported.
    """
    records = []
    errors = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped:
            continue
        try:
            obj = json.loads(stripped)
        except json.JSONDecodeError as exc:
            message = f"invalid JSON: {exc.msg}"
        else:
            try:
                records.append(record_from_dict(obj))
                continue
            except TraceFormatError as exc:
                message = str(exc)
        if strict:
            raise TraceFormatError(f"{source}:{lineno}: {message}")
        errors.append(TraceError(line=lineno, message=message))
    return JobPopulation.of(records), errors


def load_trace(path: PathLike, strict: bool = False) -> tuple[JobPopulation, list[TraceError]]:
    """Read a trace file; see parse_trace for the per-line error contract."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    return parse_trace(text, strict=strict, source=str(path))


def dump_trace(pop: Iterable[WorkloadRecord]) -> str:
    """Serialize records as newline-delimited JSON text."""
    lines = [json.dumps(record_to_dict(rec), sort_keys=False) for rec in pop]
    return "".join(line + "\n" for line in lines)


def write_trace(pop: Iterable[WorkloadRecord], dest: Union[PathLike, TextIO]) -> None:
    text = dump_trace(pop)
    if hasattr(dest, "write"):
        dest.write(text)
    else:
        with open(dest, "w", encoding="utf-8") as fh:
            fh.write(text)


# --- hardware and efficiency configuration ---------------------------------

_HW_KEYS = {
    "gpu_peak_flops": "flops_rate",
    "gpu_mem_bandwidth": "bandwidth",
    "pcie_bandwidth": "bandwidth",
    "ethernet_bandwidth": "bandwidth",
    "nvlink_bandwidth": "bandwidth",
    "gpu_mem_capacity": "bytes",
}
_HW_ALIASES = {
    "gpu": "gpu_peak_flops",
    "memory": "gpu_mem_bandwidth",
    "pcie": "pcie_bandwidth",
    "pci": "pcie_bandwidth",
    "ethernet": "ethernet_bandwidth",
    "nvlink": "nvlink_bandwidth",
}


def _parse_flat_config(text: str, source: str) -> dict[str, str]:
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise TraceFormatError(f"{source}:{lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        values[key.strip()] = value.strip().strip("'\"")
    return values


def parse_hardware_config(text: str, source: str = "<config>") -> HardwareProfile:
    """Parse a flat key = value profile, e.g. ``ethernet = 25Gbps``."""
    raw = _parse_flat_config(text, source)
    fields = {}
    for key, value in raw.items():
        name = _HW_ALIASES.get(key, key)
        if name not in _HW_KEYS:
            raise TraceFormatError(f"{source}: unknown hardware key {key!r}")
        try:
            fields[name] = parse_quantity(value, _HW_KEYS[name])
        except QuantityError as exc:
            raise TraceFormatError(f"{source}: {key}: {exc}") from None
    missing = [k for k in _HW_KEYS if k != "gpu_mem_capacity" and k not in fields]
    if missing:
        raise TraceFormatError(f"{source}: missing hardware keys: {', '.join(missing)}")
    return HardwareProfile(**fields)


def pai_baseline() -> HardwareProfile:
    """The production server class: 11 TFLOPs GPU, 1 TB/s memory,
    25 Gbps Ethernet, 10 GB/s PCIe, 50 GB/s NVLink."""
    return HardwareProfile(
        gpu_peak_flops=11e12,
        gpu_mem_bandwidth=1e12,
        pcie_bandwidth=10e9,
        ethernet_bandwidth=25e9 / 8,
        nvlink_bandwidth=50e9,
        gpu_mem_capacity=16e9,
    )


def case_study_testbed() -> HardwareProfile:
    """The case-study testbed: Tesla V100 servers at 15 TFLOPs peak,
    otherwise the same interconnects as the baseline."""
    return HardwareProfile(
        gpu_peak_flops=15e12,
        gpu_mem_bandwidth=1e12,
        pcie_bandwidth=10e9,
        ethernet_bandwidth=25e9 / 8,
        nvlink_bandwidth=50e9,
        gpu_mem_capacity=16e9,
    )


BUILTIN_HARDWARE = {
    "pai-baseline": pai_baseline,
    "case-study-testbed": case_study_testbed,
}

HW_DIR_ENV = "DLCOST_HW_DIR"


def load_hardware_profile(spec: str) -> HardwareProfile:
    """Resolve ``spec`` as a file path, a preset under $DLCOST_HW_DIR, or a
    built-in preset name, in that order."""
    path = Path(spec)
    if path.is_file():
        return parse_hardware_config(path.read_text(encoding="utf-8"), source=str(path))
    hw_dir = os.environ.get(HW_DIR_ENV)
    if hw_dir:
        for candidate in (Path(hw_dir) / spec, Path(hw_dir) / f"{spec}.hw"):
            if candidate.is_file():
                return parse_hardware_config(candidate.read_text(encoding="utf-8"),
                                             source=str(candidate))
    if spec in BUILTIN_HARDWARE:
        return BUILTIN_HARDWARE[spec]()
    raise FileNotFoundError(
        f"unknown hardware profile {spec!r} "
        f"(no such file, and built-ins are: {', '.join(sorted(BUILTIN_HARDWARE))})"
    )


_EFF_KEYS = ("compute_eff", "mem_eff", "pcie_eff", "ethernet_eff", "nvlink_eff")


def parse_efficiency_config(text: str, source: str = "<config>") -> EfficiencyModel:
    """Parse a flat key = value efficiency file with plain fractions."""
    raw = _parse_flat_config(text, source)
    fields = {}
    for key, value in raw.items():
        if key not in _EFF_KEYS:
            raise TraceFormatError(f"{source}: unknown efficiency key {key!r}")
        try:
            fields[key] = float(value)
        except ValueError:
            raise TraceFormatError(f"{source}: {key}: not a number: {value!r}") from None
    try:
        return EfficiencyModel(**fields)
    except ValueError as exc:
        raise TraceFormatError(f"{source}: {exc}") from None


def load_efficiency_model(spec: str = "default") -> EfficiencyModel:
    """Resolve ``spec`` as "default", "measured:<corpus job>", or a file path."""
    if spec == "default":
        return EfficiencyModel()
    if spec.startswith("measured:"):
        from .corpus import measured_efficiency  # deferred: corpus imports ingest

        name = spec.removeprefix("measured:")
        table = measured_efficiency()
        if name not in table:
            raise FileNotFoundError(
                f"no measured efficiencies for {name!r} (known: {', '.join(sorted(table))})")
        return table[name]
    path = Path(spec)
    if path.is_file():
        return parse_efficiency_config(path.read_text(encoding="utf-8"), source=str(path))
    raise FileNotFoundError(f"unknown efficiency spec {spec!r} (expected 'default', "
                            f"'measured:<corpus job>', or a config file path)")
