"""Registry of vision encoders: builders, feature widths, preprocessing.

Every encoder is used as a feature extractor: the classification head (where
the architecture has one) is replaced by an identity mapping, so the output
width is a fixed property of the architecture. Preprocessing follows each
source's recommended inference transform; for pretrained torchvision weights
the bundled transform is used verbatim.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import torch
from torchvision import transforms

IMAGENET_MEAN = (0.485, 0.456, 0.406)
IMAGENET_STD = (0.229, 0.224, 0.225)
CLIP_MEAN = (0.48145466, 0.4578275, 0.40821073)
CLIP_STD = (0.26862954, 0.26130258, 0.27577711)


class UnknownModelError(ValueError):
    """Model name outside the supported set."""


class ModelUnavailableError(RuntimeError):
    """The encoder's backing package is not installed in this environment."""

    def __init__(self, name: str, package: str):
        super().__init__(
            f"encoder {name!r} needs the {package!r} package, which is not installed; "
            f"pip install {package} to enable it"
        )


@dataclass(frozen=True)
class EncoderSpec:
    name: str
    feature_dim: int
    build: Callable[[bool], tuple[torch.nn.Module, Callable]]
    make_transform: Callable[[bool], Callable]
    note: str = ""


def _std_transform(resize: int, crop: int, mean, std, bicubic: bool = False):
    interp = (
        transforms.InterpolationMode.BICUBIC
        if bicubic
        else transforms.InterpolationMode.BILINEAR
    )
    return transforms.Compose(
        [
            transforms.Resize(resize, interpolation=interp),
            transforms.CenterCrop(crop),
            transforms.ToTensor(),
            transforms.Normalize(mean=mean, std=std),
        ]
    )


def _call(m, x):
    return m(x)


# -- torchvision families --

def _build_resnet50(pretrained: bool):
    from torchvision.models import ResNet50_Weights, resnet50

    model = resnet50(weights=ResNet50_Weights.IMAGENET1K_V2 if pretrained else None)
    model.fc = torch.nn.Identity()
    return model, _call


def _resnet50_transform(pretrained: bool):
    if pretrained:
        from torchvision.models import ResNet50_Weights

        return ResNet50_Weights.IMAGENET1K_V2.transforms()
    return _std_transform(256, 224, IMAGENET_MEAN, IMAGENET_STD)


def _build_vit_b32(pretrained: bool):
    from torchvision.models import ViT_B_32_Weights, vit_b_32

    model = vit_b_32(weights=ViT_B_32_Weights.IMAGENET1K_V1 if pretrained else None)
    model.heads = torch.nn.Identity()
    return model, _call


def _vit_b32_transform(pretrained: bool):
    if pretrained:
        from torchvision.models import ViT_B_32_Weights

        return ViT_B_32_Weights.IMAGENET1K_V1.transforms()
    return _std_transform(256, 224, IMAGENET_MEAN, IMAGENET_STD)


def _build_vgg19_bn(pretrained: bool):
    from torchvision.models import VGG19_BN_Weights, vgg19_bn

    model = vgg19_bn(weights=VGG19_BN_Weights.IMAGENET1K_V1 if pretrained else None)
    model.classifier[6] = torch.nn.Identity()  # final 4096 -> 1000 layer
    return model, _call


def _vgg19_bn_transform(pretrained: bool):
    if pretrained:
        from torchvision.models import VGG19_BN_Weights

        return VGG19_BN_Weights.IMAGENET1K_V1.transforms()
    return _std_transform(256, 224, IMAGENET_MEAN, IMAGENET_STD)


# -- transformers families --

def _build_clip_vit_b32(pretrained: bool):
    from transformers import CLIPVisionConfig, CLIPVisionModelWithProjection

    if pretrained:
        model = CLIPVisionModelWithProjection.from_pretrained("openai/clip-vit-base-patch32")
    else:
        model = CLIPVisionModelWithProjection(CLIPVisionConfig())
    return model, lambda m, x: m(pixel_values=x).image_embeds


def _build_dinov2(pretrained: bool):
    from transformers import Dinov2Config, Dinov2Model

    if pretrained:
        model = Dinov2Model.from_pretrained("facebook/dinov2-base")
    else:
        model = Dinov2Model(Dinov2Config())
    return model, lambda m, x: m(pixel_values=x).pooler_output


def _build_convnext_v2(pretrained: bool):
    from transformers import ConvNextV2Config, ConvNextV2ForImageClassification

    if pretrained:
        model = ConvNextV2ForImageClassification.from_pretrained(
            "facebook/convnextv2-base-1k-224"
        )
    else:
        config = ConvNextV2Config(
            depths=[3, 3, 27, 3], hidden_sizes=[128, 256, 512, 1024], num_labels=1000
        )
        model = ConvNextV2ForImageClassification(config)
    model.classifier = torch.nn.Identity()
    return model, lambda m, x: m(pixel_values=x).logits


# -- encoders that need packages beyond the core stack --

def _build_clip_rn50(pretrained: bool):
    try:
        import open_clip
    except ImportError:
        raise ModelUnavailableError("clip-rn50", "open-clip-torch") from None
    model = open_clip.create_model("RN50", pretrained="openai" if pretrained else None)
    return model, lambda m, x: m.encode_image(x)


def _build_inception_resnet_v2(pretrained: bool):
    try:
        import timm
    except ImportError:
        raise ModelUnavailableError("inception-resnet-v2", "timm") from None
    model = timm.create_model("inception_resnet_v2", pretrained=pretrained, num_classes=0)
    return model, _call


ENCODERS: dict[str, EncoderSpec] = {
    spec.name: spec
    for spec in (
        EncoderSpec(
            "clip-vit-b32",
            512,
            _build_clip_vit_b32,
            lambda _p: _std_transform(224, 224, CLIP_MEAN, CLIP_STD, bicubic=True),
        ),
        EncoderSpec("clip-rn50", 1024, _build_clip_rn50,
                    lambda _p: _std_transform(224, 224, CLIP_MEAN, CLIP_STD, bicubic=True)),
        EncoderSpec(
            "convnext-v2",
            1024,
            _build_convnext_v2,
            lambda _p: _std_transform(256, 224, IMAGENET_MEAN, IMAGENET_STD),
            note="base, ImageNet-1K head removed",
        ),
        EncoderSpec(
            "dinov2",
            768,
            _build_dinov2,
            lambda _p: _std_transform(256, 224, IMAGENET_MEAN, IMAGENET_STD, bicubic=True),
            note="variant=vit-b/14 (base; upstream size unstated, base chosen)",
        ),
        EncoderSpec("resnet50", 2048, _build_resnet50, _resnet50_transform),
        EncoderSpec("vit-b32", 768, _build_vit_b32, _vit_b32_transform),
        EncoderSpec("vgg19-bn", 4096, _build_vgg19_bn, _vgg19_bn_transform),
        EncoderSpec("inception-resnet-v2", 1536, _build_inception_resnet_v2,
                    lambda _p: _std_transform(342, 299, (0.5,) * 3, (0.5,) * 3)),
    )
}


def get_encoder(name: str) -> EncoderSpec:
    spec = ENCODERS.get(name)
    if spec is None:
        raise UnknownModelError(
            f"unknown model {name!r}; supported: {', '.join(sorted(ENCODERS))}"
        )
    return spec
