"""Zero-phase FIR band-pass filtering of multichannel biosignals, with
packetized streaming emulation, per-channel fidelity scoring and latency
benchmarking."""

from __future__ import annotations

__version__ = "0.1.0"

from .errors import (
    CliUsageError,
    HeaderFormatError,
    NyquistViolationError,
    PayloadSizeError,
    SignalFileError,
    SignalFileMissingError,
    StreamfiltError,
    UndefinedCorrelationError,
    ValidationError,
)
from .signal_core import (
    FORMAT_VERSION,
    SignalInfo,
    SignalMatrix,
    SineComponent,
    SyntheticSpec,
    broadband_spec,
    default_labels,
    generate_synthetic,
    load_signal,
    load_signal_csv,
    replicate_signal,
    store_signal,
)
from .fir_design import (
    FilterSpec,
    FirKernel,
    auto_length,
    design_bandpass,
    export_taps_csv,
    frequency_response,
    transition_bandwidths,
)
from .filtering import (
    Batch,
    FilterMode,
    PacketPlan,
    PerPacket,
    StatefulStream,
    THREADS_ENV_VAR,
    apply_mode,
    filter_batch,
    filter_per_packet,
    filter_stateful_stream,
    packetize,
)
from .fidelity import (
    FidelityReport,
    compare_channels,
    pearson,
    write_report_csv,
)
from .bench import (
    SweepConfig,
    TimingReport,
    checksum_matrix,
    ci95_halfwidth,
    run_sweep,
    student_t_975,
    time_filtering,
    write_sweep_fidelity_csv,
    write_sweep_timing_csv,
)

__all__ = [
    "__version__",
    "FORMAT_VERSION",
    "THREADS_ENV_VAR",
    "StreamfiltError",
    "ValidationError",
    "NyquistViolationError",
    "UndefinedCorrelationError",
    "SignalFileError",
    "SignalFileMissingError",
    "HeaderFormatError",
    "PayloadSizeError",
    "CliUsageError",
    "SignalInfo",
    "SignalMatrix",
    "SineComponent",
    "SyntheticSpec",
    "broadband_spec",
    "default_labels",
    "generate_synthetic",
    "load_signal",
    "load_signal_csv",
    "replicate_signal",
    "store_signal",
    "FilterSpec",
    "FirKernel",
    "auto_length",
    "design_bandpass",
    "export_taps_csv",
    "frequency_response",
    "transition_bandwidths",
    "PacketPlan",
    "packetize",
    "Batch",
    "PerPacket",
    "StatefulStream",
    "FilterMode",
    "apply_mode",
    "filter_batch",
    "filter_per_packet",
    "filter_stateful_stream",
    "FidelityReport",
    "pearson",
    "compare_channels",
    "write_report_csv",
    "TimingReport",
    "SweepConfig",
    "student_t_975",
    "ci95_halfwidth",
    "checksum_matrix",
    "time_filtering",
    "run_sweep",
    "write_sweep_fidelity_csv",
    "write_sweep_timing_csv",
]
