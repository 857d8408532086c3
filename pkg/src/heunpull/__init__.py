"""Exact and numeric tools for pull-backs of Liouvillian hypergeometric equations to Heun equations."""

from .coverings import Covering, cyclic_covering, dihedral_covering, dihedral_theta, nonbelyi_covering
from .exact import MoebiusMap, Poly, RationalFunction
from .identities import catalog, run_all, run_identity
from .liouvillian import LiouvillianExpr, PowerProduct, lv_eval, lv_ode_residual
from .pullback import ODE, PullbackSpec, heun_ode, hpg_ode, local_exponents, match_heun, transform_ode
from .series import HeunParams, HpgParams, TolerancePolicy, eval_truncated, heun_series, hpg_series

__version__ = "0.1.0"

__all__ = [
    "Covering", "HeunParams", "HpgParams", "LiouvillianExpr", "MoebiusMap", "ODE", "Poly", "PowerProduct",
    "PullbackSpec", "RationalFunction", "TolerancePolicy", "catalog", "cyclic_covering", "dihedral_covering",
    "dihedral_theta", "eval_truncated", "heun_ode", "heun_series", "hpg_ode", "hpg_series", "local_exponents",
    "lv_eval", "lv_ode_residual", "match_heun", "nonbelyi_covering", "run_all", "run_identity", "transform_ode",
]
