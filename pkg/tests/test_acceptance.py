"""End-to-end acceptance checks, one test per criterion.

These run on the full-size default synthetic record (59 channels, 166800
samples at 600.614 Hz) and the standard 2 to 30 Hz band. Each test prints a
single PASS line with the measured numbers; run with -rA (or -s) to see them.
Criterion 6 is a wall-clock benchmark and is the slow one, a few minutes on
an ordinary machine.
"""

from __future__ import annotations

import math
import statistics
import time

import numpy as np

from streamfilt import (
    Batch,
    FilterSpec,
    PerPacket,
    SignalInfo,
    SignalMatrix,
    StatefulStream,
    apply_mode,
    auto_length,
    broadband_spec,
    compare_channels,
    ci95_halfwidth,
    design_bandpass,
    filter_batch,
    filter_per_packet,
    filter_stateful_stream,
    frequency_response,
    generate_synthetic,
    load_signal,
    packetize,
    pearson,
    replicate_signal,
    store_signal,
    time_filtering,
)
from streamfilt.cli import main as cli_main


def _announce(criterion: int, message: str) -> None:
    print(f"[acceptance] criterion {criterion}: PASS ({message})")


def test_criterion_1_auto_length_is_991(standard_spec, standard_kernel):
    assert auto_length(standard_spec) == 991
    assert standard_kernel.length == 991
    assert standard_kernel.group_delay_samples == 495
    _announce(1, "2-30 Hz at 600.614 Hz designs 991 taps, group delay 495")


def test_criterion_2_packet_counts(full_signal):
    counts = {}
    for packet_size in (400, 200, 1200):
        plan = packetize(full_signal, packet_size)
        counts[packet_size] = (plan.packet_count, plan.tail_size_samples)
    assert counts[400] == (417, 0)
    assert counts[200] == (834, 0)
    assert counts[1200] == (139, 0)
    _announce(2, "166800 samples split into 417, 834 and 139 full packets")


def test_criterion_3_band_gains(standard_kernel):
    gains = np.abs(frequency_response(standard_kernel, [16.0, 0.0, 60.0]))
    assert gains[0] >= 0.99
    assert gains[1] <= 1e-3
    assert gains[2] <= 10.0 ** (-2.5)
    _announce(
        3,
        f"|H(16)|={gains[0]:.5f} >= 0.99, |H(0)|={gains[1]:.2e} <= 1e-3, "
        f"|H(60)|={gains[2]:.2e} <= 10^-2.5",
    )


def test_criterion_4_fidelity_rises_with_packet_size(full_signal, standard_kernel):
    sizes = (200, 300, 400, 800, 991)
    reference = filter_batch(full_signal, standard_kernel)
    medians = []
    per_channel = {}
    for size in sizes:
        out = filter_per_packet(full_signal, standard_kernel, packetize(full_signal, size))
        report = compare_channels(reference, out, f"per-packet={size}")
        assert report.defined_count == full_signal.info.channel_count
        medians.append(report.median_r)
        per_channel[size] = report.per_channel_r
    assert all(b > a for a, b in zip(medians, medians[1:])), medians
    assert (per_channel[800] > per_channel[200]).all()
    assert (per_channel[991] > per_channel[200]).all()
    summary = ", ".join(f"{s}:{m:.4f}" for s, m in zip(sizes, medians))
    _announce(4, f"median r strictly increasing ({summary}); every channel "
                 f"improves from 200 to 800 and to 991")


def test_criterion_5_stateful_equals_batch(full_signal, standard_kernel):
    sizes = (200, 991, 1200)
    reference = filter_batch(full_signal, standard_kernel)
    length = standard_kernel.length
    total = full_signal.info.sample_count
    interior = slice(length, total - length)
    outputs = []
    for size in sizes:
        out = filter_stateful_stream(
            full_signal, standard_kernel, packetize(full_signal, size)
        )
        diff = out.data[:, interior] - reference.data[:, interior]
        rms = math.sqrt(float(np.mean(diff * diff)))
        assert rms <= 1e-9, (size, rms)
        outputs.append(out.data)
    assert np.array_equal(outputs[0], outputs[1])
    assert np.array_equal(outputs[0], outputs[2])
    _announce(5, f"interior RMS vs batch <= 1e-9 for packet sizes {sizes} and "
                 f"outputs bitwise identical across all three plans")


def test_criterion_6_latency_ordering(full_signal, standard_spec):
    started = time.perf_counter()
    repetitions = 20
    replicated = replicate_signal(full_signal, 3)
    kernel = design_bandpass(standard_spec)
    batch_report = time_filtering(replicated, kernel, Batch(), repetitions)
    reports = {}
    for size in (200, 400, 991):
        plan = packetize(replicated, size)
        reports[size] = time_filtering(replicated, kernel, PerPacket(plan), repetitions)
    elapsed = time.perf_counter() - started

    assert reports[200].mean_s > reports[400].mean_s > reports[991].mean_s
    for size, report in reports.items():
        assert batch_report.mean_s < report.mean_s, (size, report.mean_s)
    assert elapsed < 600.0, f"benchmark took {elapsed:.0f}s, budget is 600s"
    lines = ", ".join(
        f"{size}:{rep.mean_s:.3f}s(+/-{rep.ci95_halfwidth_s:.3f})"
        for size, rep in sorted(reports.items())
    )
    _announce(
        6,
        f"20 reps on the tripled record: per-packet means {lines} decrease "
        f"with size and batch {batch_report.mean_s:.3f}s"
        f"(+/-{batch_report.ci95_halfwidth_s:.3f}) beats all; "
        f"done in {elapsed:.0f}s",
    )


def test_criterion_7_statistics_against_oracles():
    rng = np.random.default_rng(20260815)
    worst = 0.0
    for _ in range(1000):
        n = int(rng.integers(2, 500))
        x = rng.standard_normal(n)
        y = 0.5 * x + 0.5 * rng.standard_normal(n)
        if x.max() == x.min() or y.max() == y.min():
            continue
        mx = math.fsum(x) / n
        my = math.fsum(y) / n
        sxy = math.fsum((a - mx) * (b - my) for a, b in zip(x, y))
        sxx = math.fsum((a - mx) ** 2 for a in x)
        syy = math.fsum((b - my) ** 2 for b in y)
        expected = sxy / math.sqrt(sxx * syy)
        worst = max(worst, abs(pearson(x, y) - expected))
    assert worst <= 1e-12, worst

    # t quantiles from mpmath at 50 significant digits
    t_quantiles = {
        2: 12.706204736174705,
        3: 4.3026527297494639,
        5: 2.7764451051977944,
        50: 2.0095752371292397,
        100: 1.9842169515864175,
    }
    worst_ci = 0.0
    for n, t_value in t_quantiles.items():
        samples = (1.0 + 0.1 * rng.standard_normal(n)).tolist()
        expected = t_value * statistics.stdev(samples) / math.sqrt(n)
        worst_ci = max(worst_ci, abs(ci95_halfwidth(samples) - expected))
    assert worst_ci <= 1e-9, worst_ci
    _announce(7, f"pearson within {worst:.1e} of the fsum oracle over 1000 "
                 f"vectors; ci95 within {worst_ci:.1e} of hand Student-t")


def test_criterion_8_invariants(tmp_path):
    rng = np.random.default_rng(99)

    # a) random designs are odd length and exactly symmetric
    for _ in range(100):
        rate = float(rng.uniform(80.0, 2000.0))
        low = float(rng.uniform(1.0, rate / 10.0))
        high = float(rng.uniform(low * 1.5, rate * 0.45))
        kernel = design_bandpass(FilterSpec(low, high, rate))
        assert kernel.length % 2 == 1
        assert np.array_equal(kernel.taps, kernel.taps[::-1])
        assert abs(kernel.taps.sum()) <= 1e-3

    # b, c) linearity and length preservation in every mode
    kernel = design_bandpass(FilterSpec(2.0, 30.0, 600.614, length_override=201))
    info = SignalInfo.with_default_labels(600.614, 2, 1500)
    x = SignalMatrix(info=info, data=rng.standard_normal((2, 1500)))
    y = SignalMatrix(info=info, data=rng.standard_normal((2, 1500)))
    mixed = SignalMatrix(info=info, data=1.75 * x.data - 0.5 * y.data)
    plan = packetize(x, 400)
    for mode in (Batch(), PerPacket(plan), StatefulStream(plan)):
        fx = apply_mode(x, kernel, mode)
        fy = apply_mode(y, kernel, mode)
        fmixed = apply_mode(mixed, kernel, mode)
        assert fx.data.shape == x.data.shape
        assert np.abs(fmixed.data - (1.75 * fx.data - 0.5 * fy.data)).max() <= 1e-9

    # d) storage round trip is bit exact
    sig = generate_synthetic(broadband_spec(channel_count=3, sample_count=2048, seed=21))
    store_signal(sig, tmp_path / "roundtrip")
    back = load_signal(tmp_path / "roundtrip")
    assert back.info == sig.info
    assert np.array_equal(back.data, sig.data)

    # e) the cli is deterministic: generating twice gives identical bytes
    for name in ("first", "second"):
        code = cli_main(
            [
                "gen", "--out", str(tmp_path / name), "--channels", "3",
                "--samples", "4000", "--seed", "17",
            ]
        )
        assert code == 0
    assert (tmp_path / "first.f64").read_bytes() == (tmp_path / "second.f64").read_bytes()
    assert (tmp_path / "first.json").read_text() == (tmp_path / "second.json").read_text()

    _announce(8, "100 random designs symmetric and odd; linearity and length "
                 "hold in all modes; storage round-trips bit exact; cli "
                 "generation is byte deterministic")
