"""Shapelet discovery, transform, and classification engine."""

from ._core import (
    DatasetValidationError,
    DiscoveryConfig,
    EmptyResult,
    ForestConfig,
    ForestModel,
    InvalidInput,
    NormalizationPolicy,
    Shapelet,
    ShapeletSet,
    bandpass,
    decimate,
    discover,
    entropy,
    information_gain,
    min_subsequence_distance,
    predict,
    rms_envelope,
    segment,
    train_forest,
    transform,
    zero_upcross_waves,
    znormalize,
)

__version__ = "0.1.0"

__all__ = [
    "DatasetValidationError",
    "DiscoveryConfig",
    "EmptyResult",
    "ForestConfig",
    "ForestModel",
    "InvalidInput",
    "NormalizationPolicy",
    "Shapelet",
    "ShapeletSet",
    "bandpass",
    "decimate",
    "discover",
    "entropy",
    "information_gain",
    "min_subsequence_distance",
    "predict",
    "rms_envelope",
    "segment",
    "train_forest",
    "transform",
    "zero_upcross_waves",
    "znormalize",
]
