"""tabforge: tableau-system generation and proving for finite-valued logics.

Feed it any truth-table logic (n values, designated subset, connective
tables); it analyzes expressiveness, builds separating sequences (extending
the logic conservatively when needed), extracts two-signed tableau systems in
both the standard branching style and the cut-based linear style, and decides
entailment with them, cross-checkable against a brute-force oracle.
"""

from .core import (
    App,
    Atom,
    Connective,
    EvaluationError,
    F,
    Formula,
    FormulaSyntaxError,
    Matrix,
    ResourceCapError,
    SignedFormula,
    SpecError,
    T,
    TabforgeError,
    atoms_of,
    bivalent_value,
    bundled_matrix,
    bundled_names,
    depth,
    entails_oracle,
    evaluate,
    formula_to_str,
    oracle_countermodel,
    parse_formula,
    satisfies_signed,
    subformulas,
)
from .prints import (
    binary_print,
    extends,
    minimal_unobtainable_prints,
    obtainable_prints,
    print_table,
)
from .prover import (
    Node,
    ProofMetrics,
    Tableau,
    Verdict,
    applicable_instances,
    apply_rule,
    decide_entailment,
    extract_countermodel,
    fat_formula,
    metrics,
    prove_branching_analytic,
    prove_cutbased_analytic,
    prove_cutbased_ttsim,
    simulate_branching_rule,
)
from .rulegen import (
    BasicFormulaError,
    IntersectionFormulaError,
    Rule,
    RuleContext,
    RuleSet,
    Statement,
    UnsatisfiedVectorError,
    arg_tuples,
    behavior_statement,
    build_branching_system,
    build_cutbased_system,
    complexity,
    entailed_vector,
    eval_via_statements,
    fits,
    generalized_immediate_subformulas,
    ground_statements,
    intersection_formulas,
    linear_statements,
    qm_minimize,
    streamline_behavior,
    streamline_linear,
    unobtainable_statements,
)
from .separation import (
    NotSeparableError,
    SeparatingSequence,
    UnaryFunction,
    conservative_extension,
    definable_unary_functions,
    is_separable,
    make_unary,
    separating_sequence,
    sequence_from_tables,
    sequence_from_witnesses,
    validate_sequence,
)

__version__ = "0.1.0"
