"""Latency measurement of the filtering routes and packet-size sweeps.

Timings are wall-clock seconds around the filtering call only (kernel design
is never inside the timed region). Each configuration reports the sample
mean and a 95 percent confidence half-width from the Student t distribution,
plus a CRC-32 checksum of the last output so separate runs can be checked
for identical results, not just similar speed.
"""

from __future__ import annotations

import gc
import time
import zlib
from dataclasses import dataclass, replace

import numpy as np
from scipy import stats

from .errors import StreamfiltError, ValidationError
from ._fsio import atomic_write_text
from .fidelity import FidelityReport, compare_channels
from .filtering import (
    Batch,
    FilterMode,
    PerPacket,
    StatefulStream,
    apply_mode,
    packetize,
)
from .fir_design import CSV_VERSION_LINE, FilterSpec, design_bandpass
from .signal_core import SignalMatrix, replicate_signal


def student_t_975(df: int) -> float:
    """Upper 97.5 percent quantile of Student's t with df degrees of freedom."""
    if df < 1:
        raise ValidationError(f"degrees of freedom must be >= 1, got {df}")
    return float(stats.t.ppf(0.975, df))


def ci95_halfwidth(samples) -> float:
    """Half-width of the 95 percent t confidence interval for the mean.

    t(0.975, n - 1) * sd / sqrt(n) with the unbiased (ddof=1) standard
    deviation. Identical samples give exactly 0.
    """
    arr = np.asarray(samples, dtype=np.float64)
    if arr.ndim != 1 or arr.size < 2:
        raise ValidationError("need at least 2 samples for a confidence interval")
    sd = float(arr.std(ddof=1))
    return student_t_975(arr.size - 1) * sd / float(np.sqrt(arr.size))


def checksum_matrix(data: np.ndarray) -> str:
    """CRC-32 of the little-endian float64 bytes, as 8 hex digits."""
    payload = np.ascontiguousarray(data, dtype="<f8").tobytes()
    return f"{zlib.crc32(payload) & 0xFFFFFFFF:08x}"


@dataclass(frozen=True)
class TimingReport:
    """Repeated wall-clock measurements of one filtering configuration."""

    config_label: str
    packet_size: int | None
    repetitions: int
    mean_s: float
    ci95_halfwidth_s: float
    samples_s: tuple[float, ...]
    checksum: str

    def __post_init__(self) -> None:
        if self.repetitions != len(self.samples_s):
            raise ValidationError(
                f"repetitions {self.repetitions} does not match "
                f"{len(self.samples_s)} samples"
            )
        if self.repetitions < 2:
            raise ValidationError("a timing report needs at least 2 repetitions")
        if any(not np.isfinite(s) or s < 0 for s in self.samples_s):
            raise ValidationError("timing samples must be finite and non-negative")

    @classmethod
    def from_samples(
        cls, config_label: str, packet_size: int | None, samples, checksum: str
    ) -> "TimingReport":
        samples = tuple(float(s) for s in samples)
        return cls(
            config_label=config_label,
            packet_size=packet_size,
            repetitions=len(samples),
            mean_s=float(np.mean(samples)),
            ci95_halfwidth_s=ci95_halfwidth(samples),
            samples_s=samples,
            checksum=checksum,
        )


def _mode_packet_size(mode: FilterMode) -> int | None:
    if isinstance(mode, (PerPacket, StatefulStream)):
        return mode.plan.packet_size_samples
    return None


def time_filtering(
    signal: SignalMatrix,
    kernel,
    mode: FilterMode,
    repetitions: int,
    *,
    warmup: int = 3,
    clock=time.perf_counter,
    label: str | None = None,
    method: str = "auto",
) -> TimingReport:
    """Time apply_mode over several repetitions of identical work.

    Warmup runs are not timed and do not touch the clock; afterwards the
    clock is called exactly twice per repetition, which makes the function
    testable with a scripted fake clock. Filtering runs single threaded and
    with the garbage collector paused so repetitions stay comparable.
    """
    if repetitions < 2:
        raise ValidationError(f"repetitions must be >= 2, got {repetitions}")
    if warmup < 0:
        raise ValidationError(f"warmup must be >= 0, got {warmup}")
    for _ in range(warmup):
        out = apply_mode(signal, kernel, mode, method=method, n_threads=1)
    samples = []
    gc_was_enabled = gc.isenabled()
    gc.disable()
    try:
        for _ in range(repetitions):
            start = clock()
            out = apply_mode(signal, kernel, mode, method=method, n_threads=1)
            stop = clock()
            samples.append(stop - start)
    finally:
        if gc_was_enabled:
            gc.enable()
    return TimingReport.from_samples(
        config_label=label if label is not None else mode.describe(),
        packet_size=_mode_packet_size(mode),
        samples=samples,
        checksum=checksum_matrix(out.data),
    )


@dataclass(frozen=True)
class SweepConfig:
    """One packet-size sweep: which sizes, how often, against which filter."""

    filter_spec: FilterSpec
    packet_sizes: tuple[int, ...]
    mode: str = "per-packet"
    repetitions_accuracy: int = 2
    repetitions_timing: int = 20
    replicate_factor: int = 3
    warmup: int = 3

    def __post_init__(self) -> None:
        sizes = tuple(int(s) for s in self.packet_sizes)
        object.__setattr__(self, "packet_sizes", sizes)
        if not sizes:
            raise ValidationError("packet_sizes must not be empty")
        if any(s < 1 for s in sizes):
            raise ValidationError(f"packet sizes must be >= 1, got {sizes}")
        if any(b <= a for a, b in zip(sizes, sizes[1:])):
            raise ValidationError(f"packet sizes must be strictly increasing, got {sizes}")
        if self.mode not in ("per-packet", "stateful"):
            raise ValidationError(f"mode must be 'per-packet' or 'stateful', got {self.mode!r}")
        if self.repetitions_accuracy < 1:
            raise ValidationError("repetitions_accuracy must be >= 1")
        if self.repetitions_timing < 2:
            raise ValidationError("repetitions_timing must be >= 2")
        if self.replicate_factor < 1:
            raise ValidationError("replicate_factor must be >= 1")
        if self.warmup < 0:
            raise ValidationError("warmup must be >= 0")


def _streaming_mode(name: str, plan) -> FilterMode:
    if name == "per-packet":
        return PerPacket(plan)
    return StatefulStream(plan)


def run_sweep(
    signal: SignalMatrix, config: SweepConfig
) -> tuple[list[FidelityReport], list[TimingReport]]:
    """Fidelity and latency across packet sizes.

    Fidelity: each size is filtered repetitions_accuracy times on the
    original signal; the run is required to be deterministic (identical
    checksums), and the last output is correlated channel by channel against
    the batch reference. Timing: the signal is replicated replicate_factor
    times along the time axis and every configuration, batch first, is timed
    repetitions_timing times on that longer record.
    """
    kernel = design_bandpass(config.filter_spec)
    reference = apply_mode(signal, kernel, Batch(), n_threads=1)

    fidelity_reports = []
    for size in config.packet_sizes:
        plan = packetize(signal, size)
        mode = _streaming_mode(config.mode, plan)
        checksums = set()
        out = None
        for _ in range(config.repetitions_accuracy):
            out = apply_mode(signal, kernel, mode, n_threads=1)
            checksums.add(checksum_matrix(out.data))
        if len(checksums) != 1:
            raise StreamfiltError(
                f"{mode.describe()} produced {len(checksums)} distinct outputs "
                f"over {config.repetitions_accuracy} repetitions"
            )
        report = compare_channels(reference, out, config_label=mode.describe())
        fidelity_reports.append(replace(report, checksum=checksums.pop()))

    replicated = replicate_signal(signal, config.replicate_factor)
    timing_reports = [
        time_filtering(
            replicated, kernel, Batch(), config.repetitions_timing, warmup=config.warmup
        )
    ]
    for size in config.packet_sizes:
        plan = packetize(replicated, size)
        mode = _streaming_mode(config.mode, plan)
        timing_reports.append(
            time_filtering(
                replicated, kernel, mode, config.repetitions_timing, warmup=config.warmup
            )
        )
    return fidelity_reports, timing_reports


def write_sweep_fidelity_csv(
    packet_sizes, reports: list[FidelityReport], path
) -> None:
    """One row per packet size and channel: packet_size,channel,r,defined."""
    if len(packet_sizes) != len(reports):
        raise ValidationError("one fidelity report per packet size expected")
    lines = [CSV_VERSION_LINE, "packet_size,channel,r,defined"]
    for size, report in zip(packet_sizes, reports):
        for label, value, flag in zip(
            report.channel_labels, report.per_channel_r, report.defined
        ):
            r_text = repr(float(value)) if flag else ""
            lines.append(f"{size},{label},{r_text},{'yes' if flag else 'no'}")
    atomic_write_text(path, "\n".join(lines) + "\n")


def write_sweep_timing_csv(reports: list[TimingReport], path) -> None:
    """One row per timed configuration, batch rows say 'batch'."""
    lines = [
        CSV_VERSION_LINE,
        "config_label,packet_size_or_batch,repetitions,mean_s,ci95_halfwidth_s,checksum",
    ]
    for rep in reports:
        size_text = "batch" if rep.packet_size is None else str(rep.packet_size)
        lines.append(
            f"{rep.config_label},{size_text},{rep.repetitions},"
            f"{rep.mean_s!r},{rep.ci95_halfwidth_s!r},{rep.checksum}"
        )
    atomic_write_text(path, "\n".join(lines) + "\n")
