"""Seeded verification experiments and their report format."""
from .core import (
    Solver,
    alicebob_bound,
    closetounif_bound,
    gaussian_tail_mass,
    reduction_trial,
    run_bias_reduction,
    variation_distance,
    verify_alicebob,
    verify_classical_fc,
    verify_fc,
    verify_ff,
    verify_gaussian_tail_constants,
    verify_independence,
    verify_mostgood,
    verify_orthant_pairs,
    verify_overlap,
    verify_ratio_bound,
    verify_variation_distance,
)
from .parallel import WORKERS_ENV, default_workers
from .report import ExperimentReport, Row, Verdict, dumps_csv, dumps_json, loads_json

__all__ = [
    "ExperimentReport", "Row", "Solver", "Verdict", "WORKERS_ENV",
    "alicebob_bound", "closetounif_bound", "default_workers", "dumps_csv", "dumps_json",
    "gaussian_tail_mass", "loads_json", "reduction_trial", "run_bias_reduction", "variation_distance",
    "verify_alicebob", "verify_classical_fc", "verify_fc", "verify_ff", "verify_gaussian_tail_constants",
    "verify_independence", "verify_mostgood", "verify_orthant_pairs", "verify_overlap",
    "verify_ratio_bound", "verify_variation_distance",
]
