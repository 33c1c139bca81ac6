"""Exact q-series, enumeration oracles and asymptotics for k-run overpartitions."""

from .enumeration import Overpartition, count_lower, count_no_k_sequence, count_upper
from .qgen import VerificationReport, gbar_bivariate, gbar_series, gk_series, hk_series
from .series import BiSeries, IntSeries, euler_inverse, pochhammer

__version__ = "0.1.0"

__all__ = [
    "BiSeries",
    "IntSeries",
    "Overpartition",
    "VerificationReport",
    "count_lower",
    "count_no_k_sequence",
    "count_upper",
    "euler_inverse",
    "gbar_bivariate",
    "gbar_series",
    "gk_series",
    "hk_series",
    "pochhammer",
]
