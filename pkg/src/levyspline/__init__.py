"""Adaptive B-spline regression with a compound-Poisson atom prior."""

from .bspline import KnotVector, basis_integral, basis_values, eval_basis, eval_mean
from .model import (
    Atom,
    Dataset,
    DegenerateDataError,
    DegreeComponent,
    Hyperparams,
    ModelState,
    atom_log_prior,
    init_state,
    log_likelihood,
    sample_atom,
)
from .sampler import (
    ChainConfig,
    ChainOutput,
    birth_log_ratio,
    birth_step,
    choose_move,
    death_log_ratio,
    death_step,
    gibbs_M,
    gibbs_beta,
    gibbs_sigma2,
    posterior_curve,
    relocation_step,
    run_chain,
)
from .signals import eval_test_function, generate_dataset, rsnr_sigma, sample_grid
from .bench import ExperimentSpec, ExperimentResult, emit_table, mse, run_experiment

__all__ = [
    "KnotVector", "basis_integral", "basis_values", "eval_basis", "eval_mean",
    "Atom", "Dataset", "DegenerateDataError", "DegreeComponent", "Hyperparams",
    "ModelState", "atom_log_prior", "init_state", "log_likelihood", "sample_atom",
    "ChainConfig", "ChainOutput", "birth_log_ratio", "birth_step", "choose_move",
    "death_log_ratio", "death_step", "gibbs_M", "gibbs_beta", "gibbs_sigma2",
    "posterior_curve", "relocation_step", "run_chain",
    "eval_test_function", "generate_dataset", "rsnr_sigma", "sample_grid",
    "ExperimentSpec", "ExperimentResult", "emit_table", "mse", "run_experiment",
]

__version__ = "0.1.0"
