"""Group-theoretic quantization toolkit.

Lie algebras with central extensions, truncated group laws, invariant
geometry (Θ, dΘ, characteristic modules, Noether invariants), space-time
field expressions and the resulting equations of motion.
"""

__version__ = "0.1.0"

from .poly import Chart, ChartError, TruncatedPoly
from .algebra import (
    AlgebraCocycle,
    AlgebraSpec,
    bracket,
    central_extend,
    check_cocycle,
    check_jacobi,
    make_constants,
)
from .catalog import catalog
from .formal_group import GroupLaw, check_group_axioms, closed_form_GE, exponentiate, group_law_PEG
from .geometry import (
    PolyField,
    PolyForm,
    characteristic_module,
    exterior_derivative,
    hamiltonian_lift,
    left_invariant_fields,
    noether,
    right_invariant_fields,
    theta,
)
from .fieldexpr import FieldSpec, differentiate, evaluate, parse
from .dynamics import ForceModel, ParticleState, integrate, kappa_scan, make_rhs

__all__ = [
    "__version__",
    "Chart",
    "ChartError",
    "TruncatedPoly",
    "AlgebraCocycle",
    "AlgebraSpec",
    "bracket",
    "central_extend",
    "check_cocycle",
    "check_jacobi",
    "make_constants",
    "catalog",
    "GroupLaw",
    "check_group_axioms",
    "closed_form_GE",
    "exponentiate",
    "group_law_PEG",
    "PolyField",
    "PolyForm",
    "characteristic_module",
    "exterior_derivative",
    "hamiltonian_lift",
    "left_invariant_fields",
    "noether",
    "right_invariant_fields",
    "theta",
    "FieldSpec",
    "differentiate",
    "evaluate",
    "parse",
    "ForceModel",
    "ParticleState",
    "integrate",
    "kappa_scan",
    "make_rhs",
]
