"""Transfer-matrix asymptotics and spectral classification for unbounded
Jacobi matrices.

Subpackages:

- ``model``     entry sequences, spec variants, JSON interface
- ``transfer``  transfer matrices, window products, closed-form limits
- ``stolz``     discrete regularity diagnostics (bounded-variation classes)
- ``levinson``  diagonalization cascades and solution asymptotics
- ``classify``  self-adjointness and essential-spectrum classification
- ``sections``  finite principal sections and Sturm-count eigensolving
- ``cli``       command-line front end
"""

import os as _os

# Honor JACSPEC_THREADS before any BLAS-backed import happens in this
# process.  setdefault keeps explicit user settings intact.
_threads = _os.environ.get("JACSPEC_THREADS")
if _threads:
    for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS",
                 "MKL_NUM_THREADS", "NUMEXPR_NUM_THREADS"):
        _os.environ.setdefault(_var, _threads)
del _os, _threads

from . import model, transfer, stolz, levinson, classify, sections  # noqa: E402
from .model import (  # noqa: E402
    SpecError, PeriodicSeq, SequenceGen, PowerGen, LogPowerGen, TableGen,
    PeriodicGen, ExprGen, ExpSumGen, ExplicitSpec, ModulatedSpec, BlendedSpec,
    KMSpec, JacobiSpec, build, validate, gamma_to_atilde, parse_spec, load_spec,
)

__version__ = "0.1.0"

__all__ = [
    "model", "transfer", "stolz", "levinson", "classify", "sections",
    "SpecError", "PeriodicSeq", "SequenceGen", "PowerGen", "LogPowerGen",
    "TableGen", "PeriodicGen", "ExprGen", "ExpSumGen", "ExplicitSpec",
    "ModulatedSpec", "BlendedSpec", "KMSpec", "JacobiSpec", "build",
    "validate", "gamma_to_atilde", "parse_spec", "load_spec",
]
