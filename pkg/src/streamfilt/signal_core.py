"""Multichannel signal containers, synthetic generation and file storage.

A signal is a (channel_count, sample_count) float64 matrix plus metadata.
Stored form is a pair of files sharing one base name: <base>.json holds the
header, <base>.f64 holds the payload as little-endian float64 in channel-major
order (channel 0 complete, then channel 1, ...).
"""

from __future__ import annotations

import csv
import json
import os
from dataclasses import dataclass

import numpy as np

from .errors import (
    HeaderFormatError,
    NyquistViolationError,
    PayloadSizeError,
    SignalFileError,
    SignalFileMissingError,
    ValidationError,
)
from ._fsio import atomic_write_bytes, atomic_write_text

FORMAT_VERSION = 1

_HEADER_SUFFIX = ".json"
_PAYLOAD_SUFFIX = ".f64"


def default_labels(channel_count: int) -> tuple[str, ...]:
    """Generate labels ch00, ch01, ... wide enough for the channel count."""
    width = max(2, len(str(channel_count - 1)))
    return tuple(f"ch{i:0{width}d}" for i in range(channel_count))


@dataclass(frozen=True)
class SignalInfo:
    """Geometry and labeling of a multichannel signal."""

    sampling_rate_hz: float
    channel_count: int
    sample_count: int
    channel_labels: tuple[str, ...]

    def __post_init__(self) -> None:
        if not (np.isfinite(self.sampling_rate_hz) and self.sampling_rate_hz > 0):
            raise ValidationError(
                f"sampling_rate_hz must be finite and positive, got {self.sampling_rate_hz}"
            )
        if self.channel_count < 1:
            raise ValidationError(f"channel_count must be >= 1, got {self.channel_count}")
        if self.sample_count < 1:
            raise ValidationError(f"sample_count must be >= 1, got {self.sample_count}")
        labels = tuple(self.channel_labels)
        object.__setattr__(self, "channel_labels", labels)
        if len(labels) != self.channel_count:
            raise ValidationError(
                f"expected {self.channel_count} channel labels, got {len(labels)}"
            )
        if any(not isinstance(lab, str) or not lab for lab in labels):
            raise ValidationError("channel labels must be non-empty strings")
        if len(set(labels)) != len(labels):
            raise ValidationError("channel labels must be unique")

    @property
    def duration_s(self) -> float:
        return self.sample_count / self.sampling_rate_hz

    @classmethod
    def with_default_labels(
        cls, sampling_rate_hz: float, channel_count: int, sample_count: int
    ) -> "SignalInfo":
        return cls(
            sampling_rate_hz=sampling_rate_hz,
            channel_count=channel_count,
            sample_count=sample_count,
            channel_labels=default_labels(channel_count),
        )


@dataclass(frozen=True, eq=False)
class SignalMatrix:
    """Immutable (channel_count, sample_count) float64 sample matrix."""

    info: SignalInfo
    data: np.ndarray

    def __post_init__(self) -> None:
        arr = np.array(self.data, dtype=np.float64, order="C")
        expected = (self.info.channel_count, self.info.sample_count)
        if arr.shape != expected:
            raise ValidationError(f"data shape {arr.shape} does not match info {expected}")
        if not np.isfinite(arr).all():
            raise ValidationError("signal data contains non-finite samples")
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    def channel(self, index: int) -> np.ndarray:
        return self.data[index]


@dataclass(frozen=True)
class SineComponent:
    """One sinusoidal component of a synthetic signal.

    The phase of channel i is phase_rad + i * channel_phase_step_rad, which
    decorrelates channels without extra randomness.
    """

    frequency_hz: float
    amplitude: float
    phase_rad: float = 0.0
    channel_phase_step_rad: float = 0.0

    def __post_init__(self) -> None:
        if not (np.isfinite(self.frequency_hz) and self.frequency_hz > 0):
            raise ValidationError(
                f"component frequency must be finite and positive, got {self.frequency_hz}"
            )
        for name in ("amplitude", "phase_rad", "channel_phase_step_rad"):
            if not np.isfinite(getattr(self, name)):
                raise ValidationError(f"component {name} must be finite")


@dataclass(frozen=True)
class SyntheticSpec:
    """Recipe for a deterministic synthetic multichannel signal."""

    info: SignalInfo
    components: tuple[SineComponent, ...]
    noise_sigma: float = 0.0
    seed: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "components", tuple(self.components))
        if not (np.isfinite(self.noise_sigma) and self.noise_sigma >= 0):
            raise ValidationError(f"noise_sigma must be finite and >= 0, got {self.noise_sigma}")
        if not (0 <= int(self.seed) < 2**64):
            raise ValidationError(f"seed must fit in an unsigned 64-bit value, got {self.seed}")
        nyquist = self.info.sampling_rate_hz / 2.0
        for comp in self.components:
            if comp.frequency_hz >= nyquist:
                raise NyquistViolationError(
                    f"component frequency {comp.frequency_hz} Hz is not below "
                    f"the Nyquist frequency {nyquist} Hz"
                )


def generate_synthetic(spec: SyntheticSpec) -> SignalMatrix:
    """Render a SyntheticSpec into samples.

    Deterministic for a given spec: components are summed in declaration
    order, then Gaussian noise drawn from numpy's PCG64 generator seeded with
    spec.seed is added. When noise_sigma is 0 the generator is not consumed
    at all.
    """
    info = spec.info
    n_ch, n_samp = info.channel_count, info.sample_count
    t = np.arange(n_samp, dtype=np.float64) / info.sampling_rate_hz
    data = np.zeros((n_ch, n_samp), dtype=np.float64)
    channel_idx = np.arange(n_ch, dtype=np.float64)
    for comp in spec.components:
        phases = comp.phase_rad + channel_idx * comp.channel_phase_step_rad
        data += comp.amplitude * np.sin(
            2.0 * np.pi * comp.frequency_hz * t[np.newaxis, :] + phases[:, np.newaxis]
        )
    if spec.noise_sigma > 0:
        rng = np.random.Generator(np.random.PCG64(spec.seed))
        data += spec.noise_sigma * rng.standard_normal((n_ch, n_samp))
    return SignalMatrix(info=info, data=data)


def broadband_spec(
    *,
    channel_count: int = 59,
    sample_count: int = 166800,
    sampling_rate_hz: float = 600.614,
    seed: int = 7,
    noise_sigma: float = 0.7,
) -> SyntheticSpec:
    """Default multi-band recipe spanning roughly 1.5 to 50 Hz.

    Component frequencies straddle a 2 to 30 Hz pass band so that band-pass
    filtering has both content to keep and content to remove, and the
    per-channel phase steps make every channel distinct.
    """
    bands = (
        (1.5, 0.8),
        (4.0, 1.0),
        (8.0, 0.9),
        (16.0, 1.0),
        (24.0, 0.7),
        (40.0, 0.5),
        (50.0, 0.4),
    )
    components = tuple(
        SineComponent(
            frequency_hz=freq,
            amplitude=amp,
            phase_rad=0.0,
            channel_phase_step_rad=0.37 * (i + 1),
        )
        for i, (freq, amp) in enumerate(bands)
    )
    info = SignalInfo.with_default_labels(sampling_rate_hz, channel_count, sample_count)
    return SyntheticSpec(info=info, components=components, noise_sigma=noise_sigma, seed=seed)


def replicate_signal(signal: SignalMatrix, factor: int) -> SignalMatrix:
    """Concatenate factor copies of the signal along the time axis."""
    if factor < 1:
        raise ValidationError(f"replicate factor must be >= 1, got {factor}")
    if factor == 1:
        return signal
    info = SignalInfo(
        sampling_rate_hz=signal.info.sampling_rate_hz,
        channel_count=signal.info.channel_count,
        sample_count=signal.info.sample_count * factor,
        channel_labels=signal.info.channel_labels,
    )
    return SignalMatrix(info=info, data=np.tile(signal.data, (1, factor)))


def _base_path(path: str | os.PathLike[str]) -> str:
    base = os.fspath(path)
    for suffix in (_HEADER_SUFFIX, _PAYLOAD_SUFFIX):
        if base.endswith(suffix):
            return base[: -len(suffix)]
    return base


def store_signal(signal: SignalMatrix, path: str | os.PathLike[str]) -> None:
    """Write <base>.json and <base>.f64 atomically.

    The payload is exactly channel_count * sample_count * 8 bytes of
    little-endian float64, channel-major.
    """
    base = _base_path(path)
    header = {
        "format_version": FORMAT_VERSION,
        "sampling_rate_hz": signal.info.sampling_rate_hz,
        "channel_count": signal.info.channel_count,
        "sample_count": signal.info.sample_count,
        "channel_labels": list(signal.info.channel_labels),
    }
    payload = np.ascontiguousarray(signal.data, dtype="<f8").tobytes()
    atomic_write_text(base + _HEADER_SUFFIX, json.dumps(header, sort_keys=True) + "\n")
    atomic_write_bytes(base + _PAYLOAD_SUFFIX, payload)


def load_signal(path: str | os.PathLike[str]) -> SignalMatrix:
    """Read a signal written by store_signal. Round-trips bit exactly."""
    base = _base_path(path)
    header_path = base + _HEADER_SUFFIX
    payload_path = base + _PAYLOAD_SUFFIX
    try:
        with open(header_path, "r", encoding="utf-8") as fh:
            raw = fh.read()
    except FileNotFoundError:
        raise SignalFileMissingError(f"header file not found: {header_path}") from None
    try:
        header = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise HeaderFormatError(f"header is not valid JSON: {header_path}: {exc}") from None
    if not isinstance(header, dict):
        raise HeaderFormatError(f"header must be a JSON object: {header_path}")
    version = header.get("format_version")
    if version != FORMAT_VERSION:
        raise HeaderFormatError(
            f"unsupported format_version {version!r} in {header_path}, expected {FORMAT_VERSION}"
        )
    required = ("sampling_rate_hz", "channel_count", "sample_count", "channel_labels")
    missing = [key for key in required if key not in header]
    if missing:
        raise HeaderFormatError(f"header missing fields {missing} in {header_path}")
    try:
        info = SignalInfo(
            sampling_rate_hz=float(header["sampling_rate_hz"]),
            channel_count=int(header["channel_count"]),
            sample_count=int(header["sample_count"]),
            channel_labels=tuple(header["channel_labels"]),
        )
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ValidationError):
            raise
        raise HeaderFormatError(f"malformed header field in {header_path}: {exc}") from None
    try:
        with open(payload_path, "rb") as fh:
            payload = fh.read()
    except FileNotFoundError:
        raise SignalFileMissingError(f"payload file not found: {payload_path}") from None
    expected_bytes = info.channel_count * info.sample_count * 8
    if len(payload) != expected_bytes:
        raise PayloadSizeError(
            f"payload {payload_path} holds {len(payload)} bytes, "
            f"header implies {expected_bytes}"
        )
    data = np.frombuffer(payload, dtype="<f8").reshape(info.channel_count, info.sample_count)
    return SignalMatrix(info=info, data=data)


def load_signal_csv(path: str | os.PathLike[str], sampling_rate_hz: float) -> SignalMatrix:
    """Import a CSV with one header row of labels and one column per channel."""
    path = os.fspath(path)
    try:
        with open(path, "r", encoding="utf-8", newline="") as fh:
            rows = list(csv.reader(fh))
    except FileNotFoundError:
        raise SignalFileMissingError(f"csv file not found: {path}") from None
    if not rows:
        raise HeaderFormatError(f"csv file is empty: {path}")
    labels = tuple(lab.strip() for lab in rows[0])
    body = rows[1:]
    if not body:
        raise SignalFileError(f"csv file has no sample rows: {path}")
    columns = len(labels)
    data = np.empty((columns, len(body)), dtype=np.float64)
    for r, row in enumerate(body):
        if len(row) != columns:
            raise SignalFileError(
                f"csv row {r + 2} has {len(row)} cells, header has {columns}: {path}"
            )
        for c, cell in enumerate(row):
            try:
                data[c, r] = float(cell)
            except ValueError:
                raise SignalFileError(
                    f"csv row {r + 2} column {c + 1} is not a number: {cell!r}: {path}"
                ) from None
    info = SignalInfo(
        sampling_rate_hz=sampling_rate_hz,
        channel_count=columns,
        sample_count=len(body),
        channel_labels=labels,
    )
    return SignalMatrix(info=info, data=data)
