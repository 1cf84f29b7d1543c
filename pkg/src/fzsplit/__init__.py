"""Free splittings of free groups: words, Stallings graphs, folds and the
free splitting / free factor complexes."""
from __future__ import annotations

from .beta_graph import (
    BetaGraph,
    FoldCertificate,
    FoldError,
    FoldSequence,
    WordPriority,
    build_beta_graph,
    fold_certificate,
    fold_to_rose,
    is_foldable,
    make_foldable,
    maximal_fold,
    parse_beta_graph,
    parse_fold_sequence,
    stallings_fold,
    standard_rose,
)
from .complexes import (
    AdjacencyCertificate,
    PathCertificate,
    Theorem5Result,
    Unresolved,
    case_criterion,
    decompose,
    distance_upper,
    fz_adjacent,
    halfway_refinement,
    lemma1_normalize,
    theorem5_path,
    unfold_chain,
)
from .formats import (
    FormatError,
    parse_certificate,
    parse_splitting,
    serialize_certificate,
    serialize_splitting,
)
from .splittings import (
    Edge,
    Splitting,
    SplittingError,
    collapse,
    common_refinement,
    cyclic_loop,
    cyclic_segment,
    edge_fold,
    equivalent,
    loop,
    refinement_from,
    segment,
    unfold,
)
from .stallings import (
    CoreGraph,
    build_core,
    conjugacy_equal,
    contains,
    fill,
    intersection,
    is_basis,
    subgroup_contains,
    subgroup_equal,
)
from .words import (
    WordError,
    commutator,
    conjugate,
    cyclically_reduce,
    format_word,
    inverse,
    multiply,
    parse_word,
    parse_words,
    reduce_word,
)

__version__ = "0.1.0"
