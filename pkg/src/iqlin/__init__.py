"""Interval-quantifier systems of linear equations with exact rational arithmetic.

The package decides point membership in solution sets of interval
linear systems whose parameters carry arbitrary quantifier prefixes:
the prefix decomposes uniquely into AE-blocks, membership reduces to
quantifier-free interval or midpoint-radius conditions, and
independent game-search oracles cross-validate the closed forms.
"""

from .ivcore import (
    Interval,
    IntervalMatrix,
    IntervalVector,
    PointVector,
    Rational,
    exists_shift_witness,
    rat,
)
from .prefix import (
    BlockBoundaries,
    ClassicIQSystem,
    DisjointnessReport,
    GeneralizedIQSystem,
    ParamRef,
    Quantifier,
    QuantifierPrefix,
    block_assignment,
    block_shapes,
    build_tuples,
    decompose_ae_blocks,
    format_prefix,
    matrix_param,
    parse_prefix,
    parse_prefix_text,
    recompose_prefix,
    rhs_param,
    validate_disjoint,
)
from .charac import (
    AbsFormEvaluator,
    AbsIneqSystem,
    AESystem,
    ConditionKind,
    MembershipVerdict,
    Violation,
    corollary1_construct,
    member_absform,
    member_absform_twosided,
    member_absineq,
    member_controllable,
    member_intervalform,
    member_rohn,
    member_rohn_blocks,
    member_shary,
    member_shary_blocks,
    member_tolerable,
    member_united,
    prop1_construct,
    prop2_flatten,
)
from .oracle import (
    InstanceSpec,
    NodeCapExceeded,
    OracleVerdict,
    Outcome,
    game_oracle,
    random_instance,
    random_point,
    vertex_oracle_k1,
)

__version__ = "0.1.0"

__all__ = [
    "AbsFormEvaluator",
    "AbsIneqSystem",
    "AESystem",
    "BlockBoundaries",
    "ClassicIQSystem",
    "ConditionKind",
    "DisjointnessReport",
    "GeneralizedIQSystem",
    "InstanceSpec",
    "Interval",
    "IntervalMatrix",
    "IntervalVector",
    "MembershipVerdict",
    "NodeCapExceeded",
    "OracleVerdict",
    "Outcome",
    "ParamRef",
    "PointVector",
    "Quantifier",
    "QuantifierPrefix",
    "Rational",
    "Violation",
    "block_assignment",
    "block_shapes",
    "build_tuples",
    "corollary1_construct",
    "decompose_ae_blocks",
    "exists_shift_witness",
    "format_prefix",
    "game_oracle",
    "matrix_param",
    "member_absform",
    "member_absform_twosided",
    "member_absineq",
    "member_controllable",
    "member_intervalform",
    "member_rohn",
    "member_rohn_blocks",
    "member_shary",
    "member_shary_blocks",
    "member_tolerable",
    "member_united",
    "parse_prefix",
    "parse_prefix_text",
    "prop1_construct",
    "prop2_flatten",
    "random_instance",
    "random_point",
    "rat",
    "recompose_prefix",
    "rhs_param",
    "validate_disjoint",
    "vertex_oracle_k1",
]
