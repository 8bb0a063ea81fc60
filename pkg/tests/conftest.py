from __future__ import annotations

import numpy as np
import pytest

from streamfilt import (
    FilterSpec,
    SignalInfo,
    SignalMatrix,
    broadband_spec,
    design_bandpass,
    generate_synthetic,
)


@pytest.fixture(scope="session")
def standard_spec() -> FilterSpec:
    return FilterSpec(low_cut_hz=2.0, high_cut_hz=30.0, sampling_rate_hz=600.614)


@pytest.fixture(scope="session")
def standard_kernel(standard_spec):
    return design_bandpass(standard_spec)


@pytest.fixture(scope="session")
def small_signal() -> SignalMatrix:
    """4 channels x 5000 samples of the default broadband mix."""
    return generate_synthetic(broadband_spec(channel_count=4, sample_count=5000, seed=3))


@pytest.fixture(scope="session")
def full_signal() -> SignalMatrix:
    """The full-size default synthetic record, built once per session."""
    return generate_synthetic(broadband_spec())


def make_signal(data, rate: float = 600.614) -> SignalMatrix:
    data = np.asarray(data, dtype=np.float64)
    info = SignalInfo.with_default_labels(rate, data.shape[0], data.shape[1])
    return SignalMatrix(info=info, data=data)
