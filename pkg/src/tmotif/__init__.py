"""Sampling estimator and exact counter for temporal motifs on 3 and 4 vertices."""

from .estimator import (EstimateReport, auto_samples, estimate, exhaustive_estimate, prepare,
                        relative_error, required_samples)
from .exact import WorkCapExceeded, exact_count, exact_count_parallel
from .extend import candidate_lists, check_motif, list_count
from .graph import GraphFormatError, TemporalGraph, load_graph, max_multiplicity
from .motif import (PRESETS, Motif, MotifError, PathClass, WedgeClass, build_extension_plan,
                    choose_anchor, parse_motif, resolve_motif)
from .sampler import NoPathError, SampledPath, enumerate_paths, preprocess, sample_path

__version__ = "0.1.0"

__all__ = [
    "EstimateReport", "GraphFormatError", "Motif", "MotifError", "NoPathError", "PRESETS",
    "PathClass", "SampledPath", "TemporalGraph", "WedgeClass", "WorkCapExceeded",
    "auto_samples", "build_extension_plan", "candidate_lists", "check_motif", "choose_anchor",
    "enumerate_paths", "estimate", "exact_count", "exact_count_parallel",
    "exhaustive_estimate", "list_count", "load_graph", "max_multiplicity", "parse_motif",
    "prepare", "preprocess", "relative_error", "required_samples", "resolve_motif",
    "sample_path",
]
