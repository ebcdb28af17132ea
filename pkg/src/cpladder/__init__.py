"""Numerical toolkit for CP^(N-1) sigma-model ladders and their soliton surfaces in su(N)."""

__version__ = "0.1.0"

from .errors import *  # noqa: E402,F401,F403
from .jets import Jet, MatrixJet, jet_conjugate, jet_lift, jet_reciprocal, matrix_inverse  # noqa: E402
from .seeds import SeedVector, load_seed, regularize_seed, save_seed, veronese_seed  # noqa: E402
from .ladder import Projector, build_ladder, pi_minus, pi_plus  # noqa: E402
from .surfaces import x_k_gy, x_k_limit, x_k_sym_tafel  # noqa: E402
from .geometry import curvature_at, global_invariants, global_invariants_all, metric_at  # noqa: E402
