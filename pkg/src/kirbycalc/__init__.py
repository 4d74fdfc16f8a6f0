"""kirbycalc: exact invariants of combinatorial 4-dimensional 2-handlebodies.

Exact integer linear algebra (Smith normal form, kernels, cokernels,
determinants), split-module form algebra with genus-style value tables,
handlebody diagram moves and their homology bookkeeping, Legendrian
front arithmetic with Stein framing normalization, homology-level
quasi-invertible cobordism calculus, and genus lower-bound machinery.
"""

from .errors import (
    CapacityError,
    DimensionError,
    FormatError,
    InternalCheckError,
    KirbyCalcError,
    PreconditionError,
    VerificationError,
)
from .intmat import (
    FgAbelianGroup,
    IntMatrix,
    SmithDecomposition,
    cokernel,
    determinant,
    kernel_basis,
    signature,
    smith_normal_form,
)
from .values import NEG_INF, POS_INF, OrderedValue

__all__ = [
    "CapacityError",
    "DimensionError",
    "FgAbelianGroup",
    "FormatError",
    "IntMatrix",
    "InternalCheckError",
    "KirbyCalcError",
    "NEG_INF",
    "OrderedValue",
    "POS_INF",
    "PreconditionError",
    "SmithDecomposition",
    "VerificationError",
    "cokernel",
    "determinant",
    "kernel_basis",
    "signature",
    "smith_normal_form",
]
