"""One-dimensional cellular automata over full shifts.

Rule algebra and exact decision procedures (injectivity, surjectivity,
inverses, bounded nilpotency), trace-subshift enumeration with entropy
upper bounds, machine-checked strong conjugacies between coupled-track
constructions, and one-sided SFT conjugacy by total amalgamation.
"""

from .core import (
    Alphabet,
    BlockMap,
    BudgetError,
    CyclicConfig,
    LocalRule,
    RuleFormatError,
    Sidedness,
    StateClass,
    all_words,
    apply_cyclic,
    apply_word,
    classify_state,
    compose,
    compose_blockmaps,
    constant_rule,
    equal_rules,
    format_rule,
    identity_rule,
    make_rule,
    pad_blockmap,
    parse_rule,
    power,
    product,
    product_many,
    project,
    projection_map,
    rotate,
    shift_rule,
)
from .debruijn import (
    DecisionWitness,
    EvPeriodicConfig,
    avoiding_configuration,
    configs_equal,
    image_of,
    inverse_rule,
    is_injective,
    is_surjective,
    nilpotency_within,
    periodicity_within,
)
from .reduction import (
    ConjugacyCertificate,
    ReductionInstance,
    build_instance,
    build_phi,
    example_021_inverse,
    example_021_rule,
    instance_trace_complexity,
    product_power,
    search_strong_conjugacy,
    verify_certificate,
)
from .render import render_pgm, render_text, spacetime_rows
from .sft import (
    AmalgamationTrace,
    SftPresentation,
    check_phi_times_phi,
    find_graph_isomorphism,
    format_matrix,
    graph_subshift,
    make_presentation,
    one_sided_conjugate,
    parse_matrix,
    periodic_count,
    positively_expansive_conjugacy,
    sft_from_forbidden,
    total_amalgamation,
    trace_sft_approx,
    word_count,
)
from .trace import (
    EntropyReport,
    TraceTable,
    block_shift_words,
    entropy_upper,
    subword_complexity,
    trace_words,
)

__version__ = "0.1.0"
