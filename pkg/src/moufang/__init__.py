"""Finite commutative Moufang loops and their multiplication groups."""

__version__ = "0.1.0"

from .constructions import build, parse_spec
from .errors import (
    BudgetError,
    CheckViolation,
    InputError,
    MoufangError,
    NoIdentity,
    NotCML,
    NotLatinSquare,
)
from .loop import (
    FiniteLoop,
    LoopMorphism,
    Subloop,
    direct_product,
    generate,
    is_cml,
    is_normal,
    load_loop,
    quotient,
    validate,
)
from .multgroup import inner_mapping_group, multiplication_group
from .perm import Permutation, PermutationGroup
from .report import CheckReport
from .structure import (
    bruck_slaby_check,
    centralizer,
    loop_center,
    min_generators,
    nilpotency_class_loop,
    special_rank,
)
