import json
import struct

import pytest

from embextract.cli import main

from conftest import write_images


def test_happy_path(image_dir, tmp_path, capsys):
    out = tmp_path / "features.emb1"
    code = main(
        ["--model", "resnet50", "--images", str(image_dir), "--out", str(out),
         "--no-pretrained", "--batch-size", "4"]
    )
    assert code == 0
    assert "n=10, d=2048" in capsys.readouterr().out
    assert out.read_bytes()[:4] == b"EMB1"


def test_unknown_model_exits_2(image_dir, tmp_path, capsys):
    code = main(
        ["--model", "resnet-51", "--images", str(image_dir), "--out", str(tmp_path / "x")]
    )
    assert code == 2
    assert "unknown model" in capsys.readouterr().err


def test_empty_directory_exits_2(tmp_path, capsys):
    d = tmp_path / "empty"
    d.mkdir()
    code = main(
        ["--model", "resnet50", "--images", str(d), "--out", str(tmp_path / "x"),
         "--no-pretrained"]
    )
    assert code == 2
    assert "no images" in capsys.readouterr().err


def test_missing_required_flags_exit_2():
    assert main([]) == 2
