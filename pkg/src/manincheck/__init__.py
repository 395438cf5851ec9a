"""Exact symbolic checks of Manin matrix identities and quantum characteristic polynomials."""

__version__ = "0.1.0"

from .exact_arith import Poly, RatFun, TruncSeries, PoleError  # noqa: E402
from .nc_core import OperatorElement, presentation_build, commutator  # noqa: E402
from .manin import OpMatrix, is_manin, column_det, row_det, adjugate, char_poly  # noqa: E402
from .report import CheckReport  # noqa: E402

__all__ = [
    "Poly", "RatFun", "TruncSeries", "PoleError",
    "OperatorElement", "presentation_build", "commutator",
    "OpMatrix", "is_manin", "column_det", "row_det", "adjugate", "char_poly",
    "CheckReport",
]
