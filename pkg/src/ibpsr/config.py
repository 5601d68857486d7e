"""Plain-text configuration files for the command line tools.

Grammar (one item per line)::

    # comment, also allowed after a value
    key = value          # global setting
    [image]              # starts a new image block
    name = camera
    path = camera.pgm    # relative to the config file
    [frame]              # starts a new frame (degradation model) block
    dx = 0.5
    dy = 0
    psf_sigma = 1.0
    psf_radius = 3
    decimation = 2
    noise_sigma = 0
    noise_seed = 1

Recognised global keys are listed in :data:`GLOBAL_KEYS`. Unknown keys
are rejected so that typos cannot silently fall back to defaults.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path

from .degrade import DegradationModel
from .ibp import IbpConfig
from .interp import KernelSpec
from .pipeline import METHODS, MethodSpec

__all__ = ["ConfigError", "BenchConfig", "parse_blocks", "load_config", "format_frame",
           "digest"]

GLOBAL_KEYS = {
    "scale", "output_dir", "emit_images", "methods", "bicubic_a", "seed",
    "ibp_step", "ibp_max_iters", "ibp_tol", "ibp_bp_sigma", "ibp_bp_radius",
    "ibp_clamp_each_iter",
}
IMAGE_KEYS = {"name", "path"}
FRAME_KEYS = {"dx", "dy", "psf_sigma", "psf_radius", "decimation", "noise_sigma",
              "noise_seed", "file"}


class ConfigError(ValueError):
    """Invalid or inconsistent configuration."""


def parse_blocks(text: str, source: str = "<config>"):
    """Split config text into global settings and ``[section]`` blocks.

    Returns ``(globals, blocks)`` where ``blocks`` is a list of
    ``(section_name, {key: value})`` in file order.
    """
    glob: dict[str, str] = {}
    blocks: list[tuple[str, dict[str, str]]] = []
    current = glob
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip().lower()
            if section not in ("image", "frame"):
                raise ConfigError(f"{source}:{lineno}: unknown section [{section}]")
            current = {}
            blocks.append((section, current))
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {line!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key in current:
            raise ConfigError(f"{source}:{lineno}: duplicate key {key!r}")
        current[key] = value
    return glob, blocks


def _num(block, key, kind, default, where):
    if key not in block:
        return default
    try:
        return kind(block[key])
    except ValueError:
        raise ConfigError(f"{where}: {key} = {block[key]!r} is not a valid {kind.__name__}") \
            from None


def _bool(text: str) -> bool:
    t = text.lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(text)


def frame_from_block(block: dict, where: str) -> DegradationModel:
    unknown = set(block) - FRAME_KEYS
    if unknown:
        raise ConfigError(f"{where}: unknown frame keys {sorted(unknown)}")
    try:
        return DegradationModel(
            psf_sigma=_num(block, "psf_sigma", float, 1.0, where),
            psf_radius=_num(block, "psf_radius", int, 3, where),
            shift=(_num(block, "dx", float, 0.0, where), _num(block, "dy", float, 0.0, where)),
            decimation=_num(block, "decimation", int, 2, where),
            noise_sigma=_num(block, "noise_sigma", float, 0.0, where),
            noise_seed=_num(block, "noise_seed", int, 0, where),
        )
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"{where}: {exc}") from None


def format_frame(model: DegradationModel, file: str | None = None) -> str:
    lines = ["[frame]"]
    if file is not None:
        lines.append(f"file = {file}")
    lines += [
        f"dx = {model.shift[0]!r}",
        f"dy = {model.shift[1]!r}",
        f"psf_sigma = {model.psf_sigma!r}",
        f"psf_radius = {model.psf_radius}",
        f"decimation = {model.decimation}",
        f"noise_sigma = {model.noise_sigma!r}",
        f"noise_seed = {model.noise_seed}",
    ]
    return "\n".join(lines) + "\n"


@dataclass
class BenchConfig:
    """Everything needed to regenerate a benchmark run."""

    images: list[tuple[str, Path]] = field(default_factory=list)
    scale: int = 2
    frame_models: list[DegradationModel] = field(default_factory=list)
    methods: list[MethodSpec] = field(default_factory=list)
    output_dir: Path = Path("out")
    emit_images: bool = True

    def validate(self) -> "BenchConfig":
        if not self.images:
            raise ConfigError("config lists no [image] blocks")
        if not self.frame_models:
            raise ConfigError("config lists no [frame] blocks")
        if not self.methods:
            raise ConfigError("config selects no methods")
        if self.scale < 2:
            raise ConfigError(f"scale must be >= 2, got {self.scale}")
        names = [n for n, _ in self.images]
        if len(set(names)) != len(names):
            raise ConfigError(f"duplicate image names in {names}")
        return self

    def with_seed(self, seed: int) -> "BenchConfig":
        """Reseed frame ``k`` with ``seed + k``."""
        models = [m.replace(noise_seed=seed + k) for k, m in enumerate(self.frame_models)]
        return BenchConfig(self.images, self.scale, models, self.methods, self.output_dir,
                           self.emit_images)


def load_config(path) -> BenchConfig:
    path = Path(path)
    text = path.read_text()
    glob, blocks = parse_blocks(text, str(path))
    where = str(path)
    unknown = set(glob) - GLOBAL_KEYS
    if unknown:
        raise ConfigError(f"{where}: unknown global keys {sorted(unknown)}")

    images, models = [], []
    for i, (section, block) in enumerate(blocks):
        loc = f"{where}: block {i + 1} [{section}]"
        if section == "image":
            if set(block) - IMAGE_KEYS or "path" not in block:
                raise ConfigError(f"{loc}: image blocks need 'path' and optional 'name'")
            p = Path(block["path"])
            if not p.is_absolute():
                p = path.parent / p
            images.append((block.get("name", p.stem), p))
        else:
            models.append(frame_from_block(block, loc))

    try:
        a = _num(glob, "bicubic_a", float, -0.5, where)
        bp_sigma_default = models[0].psf_sigma if models else 1.0
        bp_sigma = _num(glob, "ibp_bp_sigma", float, bp_sigma_default, where)
        ibp = IbpConfig(
            bp_sigma=bp_sigma,
            bp_radius=_num(glob, "ibp_bp_radius", int, max(3, math.ceil(3 * bp_sigma)), where),
            step=_num(glob, "ibp_step", float, 1.0, where),
            max_iters=_num(glob, "ibp_max_iters", int, 50, where),
            tol=_num(glob, "ibp_tol", float, 1e-3, where),
            clamp_each_iter=_bool(glob.get("ibp_clamp_each_iter", "false")),
        )
        names = [m.strip() for m in glob.get("methods", ",".join(METHODS)).split(",") if m.strip()]
        methods = [MethodSpec(n, KernelSpec("bicubic", a), ibp) for n in names]
        cfg = BenchConfig(
            images=images,
            scale=_num(glob, "scale", int, 2, where),
            frame_models=models,
            methods=methods,
            output_dir=Path(glob.get("output_dir", "out")),
            emit_images=_bool(glob.get("emit_images", "true")),
        )
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}") from None
    if "seed" in glob:
        cfg = cfg.with_seed(_num(glob, "seed", int, 0, where))
    return cfg


def _jsonable(obj):
    if isinstance(obj, Path):
        return str(obj)
    if hasattr(obj, "__dataclass_fields__"):
        return {k: _jsonable(v) for k, v in asdict(obj).items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    return obj


def digest(*parts) -> str:
    """Short stable hash of dataclasses / plain values."""
    text = json.dumps(_jsonable(list(parts)), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode()).hexdigest()[:16]
