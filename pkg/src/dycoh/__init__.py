"""Exact Davydov-Yetter and Hochschild cohomology of finite presentations."""

__version__ = "0.1.0"

from .errors import *  # noqa: F401,F403
from .linalg import FieldSpec, Matrix, QQ, kernel_basis, rank, solve, in_span  # noqa: F401
from .presentations import (CatPresentation, FunctorPresentation, build_category,  # noqa: F401
                            inclusion_functor, make_group_category, unitalize_category,
                            validate_category, validate_functor)
