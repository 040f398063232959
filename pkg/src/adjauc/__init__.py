"""Linear biomarker combinations that maximize a smoothed center-adjusted AUC."""

__version__ = "0.1.0"

from .dataset import CenterView, Dataset, Observation, ScalingRecord, load_table, split_centers, standardize
from .lococv import CvConfig, CvTable, default_grid, emit_cv_table, run_lococv
from .logistic_baseline import LogisticFit, direction_from, fit_logistic
from .pipeline import FitConfig, FitReport, evaluate, fit
from .resample import BootstrapConfig, BootstrapResult, bootstrap_corrected_aauc
from .roc_metrics import PerformanceReport, adjusted_auc, center_weights, empirical_auc, variability
from .simgen import PopulationSpec, StudySummary, run_study, sample_study
from .smooth_objective import Bandwidths, ObjectiveSpec, bandwidths, gradient, penalized_objective, smooth_aauc, smooth_center_auc
from .sphere_optimizer import FitResult, OptimizerConfig, maximize_on_sphere, multi_start

__all__ = [
    "__version__",
    "CenterView",
    "Dataset",
    "Observation",
    "ScalingRecord",
    "load_table",
    "split_centers",
    "standardize",
    "CvConfig",
    "CvTable",
    "default_grid",
    "emit_cv_table",
    "run_lococv",
    "LogisticFit",
    "direction_from",
    "fit_logistic",
    "FitConfig",
    "FitReport",
    "evaluate",
    "fit",
    "BootstrapConfig",
    "BootstrapResult",
    "bootstrap_corrected_aauc",
    "PerformanceReport",
    "adjusted_auc",
    "center_weights",
    "empirical_auc",
    "variability",
    "PopulationSpec",
    "StudySummary",
    "run_study",
    "sample_study",
    "Bandwidths",
    "ObjectiveSpec",
    "bandwidths",
    "gradient",
    "penalized_objective",
    "smooth_aauc",
    "smooth_center_auc",
    "FitResult",
    "OptimizerConfig",
    "maximize_on_sphere",
    "multi_start",
]
