"""Typed MILP modeling toolkit.

Build models from semantically typed constraints, lower them to canonical
linear rows with verified logic linearizations, emit LP/MPS/JSON, solve
and check at desk scale by exact enumeration, and elicit models
interactively by walking the modelling tree.
"""

from .core import (
    Alternative,
    Assignment,
    Balance,
    BalanceFlavor,
    Bound,
    ConditionalBound,
    Diagnostic,
    Direction,
    EitherOr,
    IfThen,
    LinearExpr,
    Model,
    Objective,
    OffBehavior,
    RawRow,
    Sense,
    SetCovering,
    SetPacking,
    SetPartitioning,
    TypedConstraint,
    Variable,
    VariableFix,
    VarKind,
    evaluate_expr,
    expr_range,
    validate,
)
from .errors import ParseError, ToolkitError, ValidationFailed
from .implicit import ExpansionResult, ImplicitMapping, expand, get_mapping, list_mappings
from .lowering import (
    CanonicalForm,
    CanonicalRow,
    IfThenStrength,
    LowerOptions,
    derive_big_m,
    lower_constraint,
    lower_model,
)
from .oracle import (
    EquivalenceReport,
    Limits,
    OptimumReport,
    SampleBox,
    build_sample_box,
    check_equivalence,
    enumerate_feasible,
    satisfies,
    solve_by_enumeration,
)
from .tree import (
    OmtNode,
    OmtTree,
    SlotKind,
    SlotSpec,
    TemplateSpec,
    answer_path,
    canonical_tree_json,
    classify,
    descend,
    instantiate,
    load_tree,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
