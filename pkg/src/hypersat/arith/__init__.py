"""Arithmetic formulas and their encodings into hyperproperties."""
from .ast import parse_arith, print_arith, sort_check
from .bounded import eval_bounded_arith
from .ops import (
    OpTraceView, cl_top_member, d_member, gen_phi_op, gen_phi_op_cl,
    is_op_prefix, op_trace, t_op_member,
)
from .structures import (
    StructureGenConfig, gen_kset, gen_phi_set, gen_prefix_tree, gen_tf, gen_tsc,
)
from .translate import TranslationResult, translate_e3a, translate_hyperctl_to_soa
