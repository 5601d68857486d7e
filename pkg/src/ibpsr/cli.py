"""Command line interface: ``ibpsr {degrade,sr,metrics,bench}``.

Exit codes: 0 success, 1 configuration error, 2 I/O error, 3 numerical
failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import math
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import image as imageio
from .config import (BenchConfig, ConfigError, digest, format_frame, frame_from_block,
                     load_config, parse_blocks)
from .degrade import LrFrame, generate_lr_set
from .ibp import IbpConfig
from .image import Image, NumericalError, PnmError
from .metrics import CSV_HEADER, QualityReport, psnr, ssim
from .pipeline import METHODS, MethodSpec, run_method

log = logging.getLogger("ibpsr")

EXIT_OK, EXIT_CONFIG, EXIT_IO, EXIT_NUMERIC = 0, 1, 2, 3

BENCH_HEADER = CSV_HEADER + ["status", "psnr_gain_vs_bicubic"]


# -- degrade -----------------------------------------------------------------

def frame_filename(image_name: str, k: int) -> str:
    return f"{image_name}_frame{k}.pgm"


def manifest_text(image_name: str, hr: Image, models, files) -> str:
    head = (f"image = {image_name}\n"
            f"hr_width = {hr.width}\n"
            f"hr_height = {hr.height}\n"
            f"peak = {hr.peak:g}\n")
    return head + "".join("\n" + format_frame(m, f) for m, f in zip(models, files))


def cmd_degrade(cfg: BenchConfig, out_dir: Path) -> list[Path]:
    """Write the LR frames and a manifest for every configured image."""
    if not cfg.frame_models:
        raise ConfigError("no [frame] blocks: nothing to generate")
    if not cfg.images:
        raise ConfigError("no [image] blocks given")
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for name, path in cfg.images:
        hr = imageio.load(path)
        frames = generate_lr_set(hr, cfg.frame_models)
        files = []
        for k, fr in enumerate(frames):
            fname = frame_filename(name, k)
            imageio.save(fr.image, out_dir / fname)
            files.append(fname)
            written.append(out_dir / fname)
        manifest = out_dir / f"{name}_manifest.txt"
        manifest.write_text(manifest_text(name, hr, cfg.frame_models, files))
        written.append(manifest)
    return written


# -- sr ----------------------------------------------------------------------

def read_manifest(path: Path) -> tuple[str, list[LrFrame], tuple[int, int]]:
    """Load the frames listed in a manifest written by ``degrade``.

    Returns the image name, the frames and the HR dims ``(width, height)``.
    """
    glob, blocks = parse_blocks(path.read_text(), str(path))
    try:
        hr_dims = (int(glob["hr_width"]), int(glob["hr_height"]))
    except (KeyError, ValueError):
        raise ConfigError(f"{path}: manifest needs integer hr_width and hr_height") from None
    frames = []
    for i, (section, block) in enumerate(blocks):
        where = f"{path}: frame {i}"
        if section != "frame" or "file" not in block:
            raise ConfigError(f"{where}: expected a [frame] block with a 'file' key")
        block = dict(block)
        img = imageio.load(path.parent / block["file"])
        model = frame_from_block(block, where)
        d = model.decimation
        if (img.width * d, img.height * d) != hr_dims:
            raise ConfigError(
                f"{where}: {block['file']} is {img.width}x{img.height}, expected "
                f"{hr_dims[0] // d}x{hr_dims[1] // d} for D={d}")
        frames.append(LrFrame(img, model))
    if not frames:
        raise ConfigError(f"{path}: manifest lists no frames")
    return glob.get("image", path.stem), frames, hr_dims


def cmd_sr(method: str, manifest: Path, out: Path, scale: int | None = None,
           ibp: IbpConfig | None = None) -> tuple[Image, object]:
    _, frames, hr_dims = read_manifest(manifest)
    if scale is None:
        scale = hr_dims[0] // frames[0].image.width
    if ibp is None:
        sigma = frames[0].model.psf_sigma
        ibp = IbpConfig(bp_sigma=sigma, bp_radius=max(3, math.ceil(3 * sigma)))
    spec = MethodSpec(method, ibp=ibp)
    result, trace = run_method(spec, frames, scale, return_trace=True)
    out.parent.mkdir(parents=True, exist_ok=True)
    imageio.save(result, out)
    return result, trace


# -- metrics -----------------------------------------------------------------

def cmd_metrics(reference: Path, test: Path) -> QualityReport:
    ref, tst = imageio.load(reference), imageio.load(test)
    return QualityReport(reference.stem, test.stem, psnr(ref, tst), ssim(ref, tst), 0.0, "")


# -- bench -------------------------------------------------------------------

def _run_cell(cfg: BenchConfig, name: str, hr: Image, frames, spec: MethodSpec):
    cell_digest = digest(name, cfg.scale, cfg.frame_models, spec)
    t0 = time.perf_counter()
    try:
        out, trace = run_method(spec, frames, cfg.scale, return_trace=True)
        if out.shape != hr.shape:
            raise ValueError(f"output {out.width}x{out.height} does not match HR "
                             f"{hr.width}x{hr.height}")
        out = out.clamped()
        ms = (time.perf_counter() - t0) * 1e3
        return QualityReport(name, spec.name, psnr(hr, out), ssim(hr, out), ms, cell_digest), \
            "ok", out, trace
    except (ValueError, NumericalError, FloatingPointError) as exc:
        ms = (time.perf_counter() - t0) * 1e3
        log.error("%s / %s failed: %s", name, spec.name, exc)
        return QualityReport(name, spec.name, math.nan, math.nan, ms, cell_digest), \
            f"error: {exc}", None, None


def _fmt(x: float) -> str:
    if math.isnan(x):
        return ""
    return "inf" if math.isinf(x) else f"{x:.6f}"


def bench_csv(rows) -> str:
    """Render bench rows (report, status) with the bicubic PSNR gain column."""
    bicubic = {r.image: r.psnr_db for r, s in rows if r.method == "bicubic" and s == "ok"}
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(BENCH_HEADER)
    for r, status in rows:
        gain = r.psnr_db - bicubic[r.image] if r.image in bicubic and status == "ok" else math.nan
        w.writerow([r.image, r.method, _fmt(r.psnr_db), _fmt(r.ssim), f"{r.runtime_ms:.1f}",
                    r.config_digest, status, _fmt(gain)])
    return buf.getvalue()


def cmd_bench(cfg: BenchConfig, out_dir: Path | None = None, jobs: int = 1) -> Path:
    """Run every (image, method) cell; write report.csv, traces and images."""
    cfg.validate()
    out_dir = Path(out_dir or cfg.output_dir)
    (out_dir / "traces").mkdir(parents=True, exist_ok=True)
    if cfg.emit_images:
        (out_dir / "images").mkdir(parents=True, exist_ok=True)

    cells = []
    for name, path in cfg.images:
        hr = imageio.load(path)
        frames = generate_lr_set(hr, cfg.frame_models)
        cells += [(name, hr, frames, spec) for spec in cfg.methods]

    with ThreadPoolExecutor(max_workers=max(1, jobs)) as pool:
        results = list(pool.map(lambda c: _run_cell(cfg, *c), cells))

    order = {m: i for i, m in enumerate(METHODS)}
    results.sort(key=lambda r: (r[0].image, order[r[0].method]))
    for report, status, out, trace in results:
        stem = f"{report.image}_{report.method}"
        if trace is not None:
            (out_dir / "traces" / f"{stem}.csv").write_text(trace.to_csv())
        if out is not None and cfg.emit_images:
            imageio.save(out, out_dir / "images" / f"{stem}.pgm")
    report_path = out_dir / "report.csv"
    report_path.write_text(bench_csv([(r, s) for r, s, _, _ in results]))
    return report_path


# -- entry point -------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ibpsr", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("degrade", help="synthesize LR frames from HR images")
    d.add_argument("--config", required=True, type=Path)
    d.add_argument("--out", type=Path, help="output directory (default: config output_dir)")
    d.add_argument("--seed", type=int, help="reseed frame k with seed + k")

    s = sub.add_parser("sr", help="super-resolve the frames listed in a manifest")
    s.add_argument("manifest", type=Path)
    s.add_argument("--method", required=True)
    s.add_argument("--out", required=True, type=Path, help="output PGM file")
    s.add_argument("--scale", type=int)
    s.add_argument("--config", type=Path, help="take IBP settings from this config")

    m = sub.add_parser("metrics", help="PSNR and SSIM of a test image against a reference")
    m.add_argument("reference", type=Path)
    m.add_argument("test", type=Path)

    b = sub.add_parser("bench", help="run the full method comparison")
    b.add_argument("--config", required=True, type=Path)
    b.add_argument("--out", type=Path)
    b.add_argument("--method", action="append", help="restrict to these methods")
    b.add_argument("--scale", type=int)
    b.add_argument("--seed", type=int)
    b.add_argument("--jobs", type=int, default=1)
    return p


def _configure(args) -> BenchConfig:
    cfg = load_config(args.config)
    if getattr(args, "seed", None) is not None:
        cfg = cfg.with_seed(args.seed)
    if getattr(args, "scale", None) is not None:
        cfg.scale = args.scale
    methods = getattr(args, "method", None)
    if methods:
        ibp = cfg.methods[0].ibp if cfg.methods else IbpConfig()
        cfg.methods = [MethodSpec(n, ibp=ibp) for n in methods]
    return cfg


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        if args.command == "degrade":
            cfg = _configure(args)
            for p in cmd_degrade(cfg, args.out or cfg.output_dir):
                print(p)
        elif args.command == "sr":
            ibp = load_config(args.config).methods[0].ibp if args.config else None
            _, trace = cmd_sr(args.method, args.manifest, args.out, args.scale, ibp)
            if trace is not None:
                print(f"iterations_run={trace.iterations_run} stop_reason={trace.stop_reason}")
            print(args.out)
        elif args.command == "metrics":
            r = cmd_metrics(args.reference, args.test)
            print(f"psnr_db={_fmt(r.psnr_db)} ssim={r.ssim:.6f}")
        else:
            print(cmd_bench(_configure(args), args.out, args.jobs))
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (OSError, PnmError) as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (NumericalError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        # invalid method names, shapes and similar user errors
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
