from .campaigns import (
    run_appendix,
    run_bound_sweep,
    run_counterexamples,
    run_entropy,
    run_envariance,
    run_invariance,
    run_mixtures,
    run_suite,
)
from .records import BoundRecord, CampaignConfig, CheckRecord, SuiteReport, emit, load_csv, load_json

__all__ = [
    "BoundRecord", "CampaignConfig", "CheckRecord", "SuiteReport", "emit", "load_csv", "load_json",
    "run_appendix", "run_bound_sweep", "run_counterexamples", "run_entropy", "run_envariance",
    "run_invariance", "run_mixtures", "run_suite",
]
