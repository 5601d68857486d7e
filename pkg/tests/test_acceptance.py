"""Exit criteria for the package, one test per criterion.

Each test appends a PASS/FAIL line that is printed in the pytest terminal
summary under "acceptance criteria".
"""

import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from ibpsr import cli
from ibpsr.config import load_config
from ibpsr.degrade import LrFrame, decimate, generate_lr_set, quarter_shift_models, zero_insert
from ibpsr.ibp import IbpConfig, ibp_solve, irani_peleg_sr, simulate_lr
from ibpsr.image import Image, save
from ibpsr.interp import (BICUBIC, BILINEAR, NEAREST, _resampling_weights, kernel_eval,
                          kernel_frequency_response, resample)
from ibpsr.metrics import psnr, ssim
from ibpsr.pipeline import MethodSpec, run_method
from test_interp import brute_force_resample
from test_metrics import ssim_direct


def record(number, title, ok, detail):
    ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {number}. {title}: {detail}")
    return ok


@pytest.fixture(scope="module")
def comparison(natural, natural_frames):
    t0 = time.perf_counter()
    outputs = {m: run_method(MethodSpec(m), natural_frames, 2).clamped()
               for m in ("bicubic", "irani-peleg", "proposed")}
    elapsed = time.perf_counter() - t0
    scores = {m: (psnr(natural, o), ssim(natural, o)) for m, o in outputs.items()}
    return scores, elapsed


def test_1_method_ordering_psnr(comparison):
    scores, elapsed = comparison
    p = {m: s[0] for m, s in scores.items()}
    gain = p["proposed"] - p["bicubic"]
    ok = (p["proposed"] > p["irani-peleg"] > p["bicubic"]) and gain >= 2.0 and elapsed < 30
    detail = (f"PSNR proposed {p['proposed']:.2f} / irani-peleg {p['irani-peleg']:.2f} / "
              f"bicubic {p['bicubic']:.2f} dB, gain {gain:.2f} dB (>= 2.0), {elapsed:.1f} s")
    assert record(1, "PSNR ordering proposed > irani-peleg > bicubic", ok, detail), detail


def test_2_ssim_ordering(comparison):
    scores, _ = comparison
    s = {m: v[1] for m, v in scores.items()}
    gain = s["proposed"] - s["bicubic"]
    detail = f"SSIM proposed {s['proposed']:.4f} vs bicubic {s['bicubic']:.4f}, gain {gain:.4f}"
    assert record(2, "SSIM proposed - bicubic >= 0.05", gain >= 0.05, detail), detail


def test_3_fixed_point(natural_frames):
    init = resample(natural_frames[0].image, 2.0)
    frames = [LrFrame(simulate_lr(init, fr.model), fr.model) for fr in natural_frames]
    out, trace = ibp_solve(frames, init, IbpConfig(tol=0.0, max_iters=5))
    ok = out.data.tobytes() == init.data.tobytes()
    detail = f"estimate bit-identical after {trace.iterations_run} iterations: {ok}"
    assert record(3, "IBP fixed point", ok, detail), detail


def test_4_descent(natural, natural_frames):
    t0 = time.perf_counter()
    _, trace = irani_peleg_sr(natural_frames, (256, 256), IbpConfig(), return_trace=True)
    elapsed = time.perf_counter() - t0
    agg = trace.aggregate
    monotone = all(b <= a for a, b in zip(agg[:5], agg[1:6]))
    ratio = trace.final_error / agg[0]
    ok = monotone and ratio < 0.10 and trace.iterations_run <= 50 and elapsed < 10
    detail = (f"first 5 non-increasing: {monotone}; final/initial error {ratio:.4f} (< 0.10) "
              f"after {trace.iterations_run} iterations; {elapsed:.1f} s")
    assert record(4, "IBP descent on noiseless 256x256 set", ok, detail), detail


def test_5_kernel_suite(rng):
    xs = np.linspace(0.0, 1.0, 1000, endpoint=False)
    taps = np.arange(-3, 4)
    worst = 0.0
    for spec in (NEAREST, BILINEAR, BICUBIC):
        sample = np.concatenate([xs, xs + 1, xs + 2])
        assert np.array_equal(kernel_eval(spec, sample), kernel_eval(spec, -sample))
        assert kernel_eval(spec, 0.0) == 1.0
        assert all(kernel_eval(spec, k) == 0.0 for k in (1, 2, 3, -1, -2))
        sums = _resampling_weights(spec, xs[:, None] - taps[None, :]).sum(axis=1)
        worst = max(worst, np.abs(sums - 1).max())
    oracle_err = 0.0
    for spec in (NEAREST, BILINEAR, BICUBIC):
        for scale, shift in [(2, (0.0, 0.0)), (1, (0.37, -0.61)), (1.5, (0.25, -1.1))]:
            img = Image(rng.uniform(0, 255, (8, 8)))
            got = resample(img, scale, shift, spec).data
            oracle_err = max(oracle_err, np.abs(got - brute_force_resample(img, scale, shift, spec)).max())
    ok = worst <= 1e-12 and oracle_err <= 1e-9
    detail = f"partition-of-unity error {worst:.1e} (<= 1e-12); separable vs 2-D oracle {oracle_err:.1e} (<= 1e-9)"
    assert record(5, "kernel suite", ok, detail), detail


def test_6_frequency_responses():
    ws = np.linspace(-8 * np.pi, 8 * np.pi, 161)
    half = np.sinc(ws / (2 * np.pi))
    near = np.array([kernel_frequency_response(NEAREST, w, 4096) for w in ws])
    lin = np.array([kernel_frequency_response(BILINEAR, w, 4096) for w in ws])
    err = max(np.abs(near - half).max(), np.abs(lin - half ** 2).max())
    detail = f"max deviation from sinc(w/2), sinc^2(w/2) over |w| <= 8 pi: {err:.1e} (<= 1e-6)"
    assert record(6, "frequency responses", err <= 1e-6, detail), detail


def test_7_metrics_oracle(rng):
    a = Image(np.full((16, 16), 100.0))
    unit = psnr(a, a.with_data(a.data + 1))
    psnr_ok = abs(unit - 48.1308) <= 1e-4 and abs(unit - 20 * np.log10(255)) <= 1e-6
    x = Image(rng.uniform(0, 255, (16, 16)))
    self_ok = ssim(x, x) == 1.0
    worst = 0.0
    for _ in range(10):
        p = rng.uniform(0, 255, (16, 16))
        q = np.clip(p + rng.normal(0, 40, p.shape), 0, 255)
        worst = max(worst, abs(ssim(Image(p), Image(q)) - ssim_direct(p, q)))
    ok = psnr_ok and self_ok and worst <= 1e-9
    detail = (f"unit-error PSNR {unit:.6f} dB; SSIM(x,x) == 1: {self_ok}; "
              f"SSIM vs direct formula {worst:.1e} (<= 1e-9)")
    assert record(7, "metrics oracle", ok, detail), detail


def test_8_bench_determinism(tmp_path, natural):
    save(natural, tmp_path / "natural.pgm")
    frames = "".join(f"[frame]\ndx = {dx}\ndy = {dy}\nnoise_seed = {k}\n"
                     for k, (dx, dy) in enumerate([(0, 0), (0.5, 0), (0, 0.5), (0.5, 0.5)]))
    (tmp_path / "bench.cfg").write_text(
        "scale = 2\nibp_max_iters = 10\n[image]\nname = natural\npath = natural.pgm\n" + frames)
    cfg = load_config(tmp_path / "bench.cfg")
    r1 = cli.cmd_bench(cfg, tmp_path / "run1")
    r2 = cli.cmd_bench(cfg, tmp_path / "run2", jobs=3)

    def strip(path):
        return [[f for i, f in enumerate(l.split(",")) if i != 4]
                for l in path.read_text().splitlines()]

    csv_ok = strip(r1) == strip(r2)
    imgs = sorted((tmp_path / "run1" / "images").iterdir())
    img_ok = len(imgs) == 5 and all(
        p.read_bytes() == (tmp_path / "run2" / "images" / p.name).read_bytes() for p in imgs)
    detail = f"CSV identical (runtime excluded): {csv_ok}; {len(imgs)} images byte-identical: {img_ok}"
    assert record(8, "bench determinism", csv_ok and img_ok, detail), detail


def test_9_adjoint(rng):
    worst = 0.0
    for _ in range(100):
        x = rng.standard_normal((16, 12))
        y = rng.standard_normal((8, 6))
        lhs = np.vdot(decimate(Image(x), 2).data, y)
        rhs = np.vdot(x, zero_insert(Image(y), 2).data)
        worst = max(worst, abs(lhs - rhs))
    detail = f"max |<Dx,y> - <x,D^T y>| over 100 pairs: {worst:.1e} (<= 1e-9)"
    assert record(9, "decimation adjoint", worst <= 1e-9, detail), detail
