"""Image directory -> EMB1 embedding files via pretrained vision encoders."""

from .extract import ExtractorConfig, ExtractResult, extract, supported_models, write_emb1
from .models import ENCODERS, EncoderSpec, ModelUnavailableError, UnknownModelError, get_encoder

__all__ = [
    "ExtractorConfig",
    "ExtractResult",
    "extract",
    "supported_models",
    "write_emb1",
    "ENCODERS",
    "EncoderSpec",
    "ModelUnavailableError",
    "UnknownModelError",
    "get_encoder",
]

__version__ = "0.1.0"
