"""Diversity-based ensemble selection with drift detection for data streams."""

from ._core import (
    ConfigError,
    Error,
    StreamClassifier,
    ambiguity,
    default_probe_lambdas,
    format_config,
    generate,
    generator_names,
    method_names,
    poisson_samples,
    preset_names,
    probe_lambda,
    run_experiment,
    score_detections,
)

__all__ = [
    "ConfigError",
    "Error",
    "StreamClassifier",
    "ambiguity",
    "default_probe_lambdas",
    "format_config",
    "generate",
    "generator_names",
    "method_names",
    "poisson_samples",
    "preset_names",
    "probe_lambda",
    "run_experiment",
    "score_detections",
]
