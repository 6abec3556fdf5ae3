"""Batch corruption of an image tree with a reproducibility manifest.

Output layout is ``<output_root>/<kind>/<level>/<relative_path>.png``;
every output is lossless PNG regardless of corruption (the compression
corruption stores its decoded pixels).  Each task's generator seed is
FNV-1a over ``"<relative_path>|<kind>|<level>"`` XOR the master seed,
so outputs depend only on (input bytes, kind, level, master seed) and
never on worker count or traversal order.

The manifest stores 64-bit quantities (seeds, digests) as decimal or
hex strings so any JSON reader preserves them exactly.
"""

import io
import json
import os
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__, pngio
from .corruptions import apply_corruption
from .errors import EmptyInputError, ParameterError, PartialManifestError
from .params import validate_kind, validate_level

_MASK64 = (1 << 64) - 1
_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3

_IMAGE_SUFFIXES = (".png", ".jpg", ".jpeg")


def fnv1a64(data: bytes) -> int:
    h = _FNV_OFFSET
    for byte in data:
        h ^= byte
        h = (h * _FNV_PRIME) & _MASK64
    return h


def derive_seed(master_seed: int, relative_path: str, kind: str, level: int) -> int:
    """Per-task seed: FNV-1a of "<path>|<kind>|<level>" XOR master seed."""
    if not relative_path:
        raise ParameterError("relative path must be non-empty")
    digest = fnv1a64(f"{relative_path}|{kind}|{level}".encode("utf-8"))
    return digest ^ (master_seed & _MASK64)


@dataclass
class ManifestEntry:
    relative_path: str
    kind: str
    level: int
    derived_seed: str
    output_path: str
    content_digest: str


@dataclass
class SkippedEntry:
    relative_path: str
    reason: str


@dataclass
class Manifest:
    dataset_name: str
    master_seed: str
    tool_version: str
    entries: list[ManifestEntry] = field(default_factory=list)
    skipped: list[SkippedEntry] = field(default_factory=list)

    def to_json(self) -> str:
        data = {
            "dataset_name": self.dataset_name,
            "master_seed": self.master_seed,
            "tool_version": self.tool_version,
            "entries": [asdict(e) for e in self.entries],
            "skipped": [asdict(s) for s in self.skipped],
        }
        return json.dumps(data, sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "Manifest":
        data = json.loads(text)
        return cls(
            dataset_name=data["dataset_name"],
            master_seed=data["master_seed"],
            tool_version=data["tool_version"],
            entries=[ManifestEntry(**e) for e in data["entries"]],
            skipped=[SkippedEntry(**s) for s in data["skipped"]],
        )


def _decode_input(path: Path) -> np.ndarray:
    """Read PNG/JPEG as (H, W, 3) uint8; grayscale replicates channels."""
    data = path.read_bytes()
    if path.suffix.lower() == ".png":
        try:
            px = pngio.read_png(data)
            if px.ndim == 2:
                px = np.stack([px, px, px], axis=-1)
            return px
        except Exception:
            pass  # fall through to the general decoder
    from PIL import Image as PILImage

    with PILImage.open(io.BytesIO(data)) as im:
        return np.asarray(im.convert("RGB"), dtype=np.uint8)


def _find_images(root: Path) -> list[str]:
    rels = []
    for p in sorted(root.rglob("*")):
        if p.is_file() and p.suffix.lower() in _IMAGE_SUFFIXES:
            rels.append(p.relative_to(root).as_posix())
    return rels


def corrupt_dataset(
    input_root,
    output_root,
    kinds,
    levels,
    master_seed: int,
    jobs: int = 1,
    dataset_name: str | None = None,
) -> Manifest:
    """Apply every (kind, level) to every decodable image under a root."""
    input_root = Path(input_root)
    output_root = Path(output_root)
    kinds = [validate_kind(k) for k in kinds]
    levels = [validate_level(l) for l in levels]
    if not input_root.is_dir():
        raise EmptyInputError(f"input root {input_root} is not a directory")
    rels = _find_images(input_root)
    if not rels:
        raise EmptyInputError(f"no images found under {input_root}")

    images: dict[str, np.ndarray] = {}
    skipped: list[SkippedEntry] = []
    for rel in rels:
        try:
            images[rel] = _decode_input(input_root / rel)
        except Exception as exc:
            # class name only: messages may embed addresses, which would
            # break manifest byte-stability
            skipped.append(SkippedEntry(relative_path=rel, reason=type(exc).__name__))
    if not images:
        raise EmptyInputError(f"no decodable images under {input_root}")

    tasks = [(rel, kind, level) for rel in images for kind in kinds for level in levels]

    def run(task: tuple[str, str, int]) -> ManifestEntry:
        rel, kind, level = task
        seed = derive_seed(master_seed, rel, kind, level)
        out = apply_corruption(images[rel], kind, level, seed)
        png = pngio.write_png(out)
        rel_out = Path(kind) / str(level) / Path(rel).with_suffix(".png")
        dest = output_root / rel_out
        dest.parent.mkdir(parents=True, exist_ok=True)
        dest.write_bytes(png)
        return ManifestEntry(
            relative_path=rel,
            kind=kind,
            level=level,
            derived_seed=str(seed),
            output_path=rel_out.as_posix(),
            content_digest=f"{fnv1a64(png):016x}",
        )

    try:
        if jobs > 1:
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                entries = list(pool.map(run, tasks))
        else:
            entries = [run(t) for t in tasks]
    except OSError as exc:
        raise PartialManifestError(f"aborted mid-run, outputs incomplete: {exc}") from exc

    entries.sort(key=lambda e: (e.relative_path, e.kind, e.level))
    manifest = Manifest(
        dataset_name=dataset_name or input_root.name,
        master_seed=str(master_seed & _MASK64),
        tool_version=__version__,
        entries=entries,
        skipped=sorted(skipped, key=lambda s: s.relative_path),
    )
    output_root.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=output_root, suffix=".manifest.tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(manifest.to_json())
        os.replace(tmp, output_root / "manifest.json")
    except OSError as exc:
        raise PartialManifestError(f"could not write manifest: {exc}") from exc
    return manifest


def verify_manifest(output_root) -> list[str]:
    """Re-hash every referenced output; returns paths that do not match."""
    output_root = Path(output_root)
    manifest = Manifest.from_json((output_root / "manifest.json").read_text("utf-8"))
    bad = []
    for entry in manifest.entries:
        path = output_root / entry.output_path
        if not path.is_file() or f"{fnv1a64(path.read_bytes()):016x}" != entry.content_digest:
            bad.append(entry.output_path)
    return bad
