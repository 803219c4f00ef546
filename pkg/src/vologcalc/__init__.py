"""Branch-parameter calculus for p-adic integrals on semi-stable curves.

Subpackages by task: `padic` (truncated p-adic arithmetic with the formal
branch parameter), `loglaurent` (annulus Laurent-with-log calculus),
`graphs` (exact graph cohomology), `volog` (assembly of universal-branch
integrals and their branch derivatives), `heights` (discrete local height
pairings from intersection data), `fpnmod` (filtered Frobenius-monodromy
modules and the splitting derivative), `cli` (batch JSON front end).
"""

from .errors import (
    LambdaDegreeOverflow,
    LogDegreeOverflow,
    PreconditionError,
    PrecisionOverflow,
    WindowTruncation,
)
from .padic import (
    PadicContext,
    PadicNumber,
    UniversalScalar,
    derive_at_zero,
    iwasawa_log,
    lambda_scalar,
    make_padic,
)

__all__ = [
    "LambdaDegreeOverflow",
    "LogDegreeOverflow",
    "PreconditionError",
    "PrecisionOverflow",
    "WindowTruncation",
    "PadicContext",
    "PadicNumber",
    "UniversalScalar",
    "derive_at_zero",
    "iwasawa_log",
    "lambda_scalar",
    "make_padic",
]
