"""Lattice-valued model checking for fixpoint modal logic and CTL over
continuation coalgebras."""

from .lattice import LatticeElem, LatticeSpec, builtin_lattice, eval_term, load_lattice
from .models import (
    Model,
    Predicate,
    check_constant_linear,
    lift_eval,
    load_model,
    successor_eval,
    to_continuation,
)
from .syntax import (
    FragmentClass,
    classify_fragment,
    encode_ctl,
    parse_formula,
    print_formula,
    to_nnf,
)
from .fml_eval import eval_fml, kleene_fixpoint
from .execution import (
    ExecutionMapHandle,
    compute_execution_value,
    path_extremum,
    shift_shape,
    transferred_execution_eval,
)
from .ctl_eval import (
    TemporalModel,
    check_fixpoint_char_condition,
    check_weak_fixpoint_char,
    eval_ctl,
    eval_ctl_classical,
)
from .transfer import apply_beta, check_morphism_laws, transfer_execution_map

__all__ = [
    "LatticeElem", "LatticeSpec", "builtin_lattice", "eval_term",
    "load_lattice", "Model", "Predicate", "check_constant_linear",
    "lift_eval", "load_model", "successor_eval", "to_continuation",
    "FragmentClass", "classify_fragment", "encode_ctl", "parse_formula",
    "print_formula", "to_nnf", "eval_fml", "kleene_fixpoint",
    "ExecutionMapHandle", "compute_execution_value", "path_extremum",
    "shift_shape", "transferred_execution_eval", "TemporalModel",
    "check_fixpoint_char_condition", "check_weak_fixpoint_char", "eval_ctl",
    "eval_ctl_classical", "apply_beta", "check_morphism_laws",
    "transfer_execution_map",
]

__version__ = "0.1.0"
