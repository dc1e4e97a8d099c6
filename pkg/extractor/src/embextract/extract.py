"""Batch feature extraction: image directory -> EMB1 file + manifest CSV.

Images are processed in sorted relative-path order; the manifest maps each
row index to its relative path. Undecodable images are skipped with a
warning and excluded from the manifest. Feature vectors are written
unnormalized; consumers normalize at load time.
"""

from __future__ import annotations

import csv
import logging
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import torch

from .models import ENCODERS, get_encoder

logger = logging.getLogger(__name__)

EMB1_MAGIC = b"EMB1"
IMAGE_SUFFIXES = {".jpg", ".jpeg", ".png", ".bmp", ".gif", ".webp", ".tif", ".tiff"}


@dataclass(frozen=True)
class ExtractorConfig:
    model: str
    images: Path
    out: Path
    batch_size: int = 16
    device: str = "cpu"
    pretrained: bool = True

    def __post_init__(self):
        get_encoder(self.model)  # unknown names rejected up front
        if self.batch_size < 1:
            raise ValueError(f"batch size must be >= 1, got {self.batch_size}")
        object.__setattr__(self, "images", Path(self.images))
        object.__setattr__(self, "out", Path(self.out))


@dataclass(frozen=True)
class ExtractResult:
    out: Path
    n: int
    d: int
    skipped: int


def list_images(directory: Path) -> list[Path]:
    if not directory.is_dir():
        raise FileNotFoundError(f"image directory not found: {directory}")
    files = sorted(
        (p for p in directory.rglob("*") if p.is_file() and p.suffix.lower() in IMAGE_SUFFIXES),
        key=lambda p: p.relative_to(directory).as_posix(),
    )
    if not files:
        raise ValueError(f"no images under {directory} (looked for {sorted(IMAGE_SUFFIXES)})")
    return files


def _load_batch(paths: list[Path], transform) -> tuple[torch.Tensor | None, list[Path], int]:
    from PIL import Image

    tensors = []
    kept = []
    skipped = 0
    for p in paths:
        try:
            with Image.open(p) as im:
                tensors.append(transform(im.convert("RGB")))
            kept.append(p)
        except Exception as exc:
            skipped += 1
            logger.warning("skipping undecodable image %s: %s", p, exc)
    if not tensors:
        return None, kept, skipped
    return torch.stack(tensors), kept, skipped


def write_emb1(out: Path, ids: list[str], vectors: np.ndarray, comment: str | None = None) -> None:
    """EMB1 layout: magic, uint32 n and d (little-endian), float32 payload
    row-major; sidecar `<out>.manifest.csv` maps index -> id."""
    vecs = np.ascontiguousarray(vectors.astype("<f4"))
    n, d = vecs.shape
    with open(out, "wb") as fh:
        fh.write(EMB1_MAGIC)
        fh.write(struct.pack("<II", n, d))
        fh.write(vecs.tobytes())
    with open(out.parent / (out.name + ".manifest.csv"), "w", newline="", encoding="utf-8") as fh:
        if comment:
            fh.write(f"# {comment}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["index", "id"])
        writer.writerows(enumerate(ids))


def extract(config: ExtractorConfig) -> ExtractResult:
    """Embed every decodable image under `config.images` into an EMB1 file."""
    spec = get_encoder(config.model)
    files = list_images(config.images)
    device = torch.device(config.device)
    model, forward = spec.build(config.pretrained)
    model.eval()
    model.to(device)
    transform = spec.make_transform(config.pretrained)

    chunks: list[np.ndarray] = []
    kept: list[str] = []
    skipped = 0
    with torch.no_grad():
        for start in range(0, len(files), config.batch_size):
            batch, ok_paths, bad = _load_batch(files[start : start + config.batch_size], transform)
            skipped += bad
            if batch is None:
                continue
            feats = forward(model, batch.to(device))
            chunks.append(feats.float().cpu().numpy())
            kept.extend(p.relative_to(config.images).as_posix() for p in ok_paths)

    if not chunks:
        raise ValueError(f"all {len(files)} images under {config.images} were undecodable")
    features = np.concatenate(chunks, axis=0)
    if features.shape[1] != spec.feature_dim:
        raise AssertionError(
            f"{spec.name} produced width {features.shape[1]}, registry says {spec.feature_dim}"
        )
    note = f"model={spec.name} dim={spec.feature_dim} pretrained={config.pretrained}"
    if spec.note:
        note += f" {spec.note}"
    write_emb1(config.out, kept, features, comment=note)
    if skipped:
        logger.warning("%d of %d images skipped as undecodable", skipped, len(files))
    return ExtractResult(out=config.out, n=features.shape[0], d=features.shape[1], skipped=skipped)


def supported_models() -> list[str]:
    return sorted(ENCODERS)
