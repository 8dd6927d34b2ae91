"""Exact computations for log Euler characteristics on products of projective spaces.

Modules: :mod:`polyring` (polynomials over Q), :mod:`elimination` (Groebner
bases, saturation, quotient dimensions), :mod:`chow` (log pairs and Chern
classes), :mod:`sscycle` (log characteristic cycles and intersection counts),
:mod:`logdr` (rank-one log de Rham stalks) and :mod:`cli`.
"""

from .errors import (ContextMismatch, InputError, InvariantError, LogEulerError, NonTransverseError,
                     ParseError, ResourceError)

__version__ = "0.1.0"

__all__ = ["ContextMismatch", "InputError", "InvariantError", "LogEulerError", "NonTransverseError",
           "ParseError", "ResourceError", "__version__"]
