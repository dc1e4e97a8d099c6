from __future__ import annotations

import numpy as np
import pytest
from PIL import Image


def write_images(directory, count: int, size: int = 48, seed: int = 0) -> list[str]:
    """Seeded random RGB images; returns the filenames in sorted order."""
    rng = np.random.default_rng(seed)
    names = []
    for i in range(count):
        pixels = rng.integers(0, 256, size=(size, size, 3), dtype=np.uint8)
        name = f"img_{i:03d}.png"
        Image.fromarray(pixels).save(directory / name)
        names.append(name)
    return names


@pytest.fixture
def image_dir(tmp_path):
    d = tmp_path / "images"
    d.mkdir()
    write_images(d, 10)
    return d
