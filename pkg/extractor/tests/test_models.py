import importlib.util

import pytest

from embextract.models import ENCODERS, ModelUnavailableError, UnknownModelError, get_encoder

DOCUMENTED_WIDTHS = {
    "clip-vit-b32": 512,
    "clip-rn50": 1024,
    "convnext-v2": 1024,
    "dinov2": 768,
    "resnet50": 2048,
    "vit-b32": 768,
    "vgg19-bn": 4096,
    "inception-resnet-v2": 1536,
}


def test_registry_covers_the_supported_set():
    assert set(ENCODERS) == set(DOCUMENTED_WIDTHS)
    for name, width in DOCUMENTED_WIDTHS.items():
        assert get_encoder(name).feature_dim == width


def test_unknown_model_lists_supported_names():
    with pytest.raises(UnknownModelError, match="resnet50"):
        get_encoder("resnet-51")


@pytest.mark.parametrize(
    "name,package", [("clip-rn50", "open_clip"), ("inception-resnet-v2", "timm")]
)
def test_missing_backend_raises_informative_error(name, package):
    if importlib.util.find_spec(package) is not None:
        pytest.skip(f"{package} installed; backend available")
    with pytest.raises(ModelUnavailableError, match=name):
        get_encoder(name).build(False)


def test_every_encoder_has_a_transform():
    for spec in ENCODERS.values():
        transform = spec.make_transform(False)
        assert callable(transform)
