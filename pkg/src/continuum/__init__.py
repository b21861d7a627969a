"""Discrete continuum engine: cells as division words, inductively generated adjacency."""

from .adjacency import (
    EdgeOrigin,
    LevelGraph,
    adjacent_general,
    adjacent_same_length,
    check_refinement,
    components,
    connectivity,
    level_graph,
)
from .complexes import (
    BORDER,
    Complex,
    SegmentMap,
    ShapeTree,
    bordered_adjacency,
    path,
    q_e,
    segment_adjacency,
    segments,
)
from .core import (
    AdjacencyPattern,
    Alphabet,
    BorderGluing,
    Cell,
    ContinuumError,
    ContractError,
    DPattern,
    GluingKind,
    InputError,
    MRule,
    PrefixRelation,
    RefinementViolation,
    UnsupportedPatternError,
    is_prefix,
    lex_compare,
    parse_cell,
    pred,
    prefix_relation,
    suc,
    top,
    unit,
)
from .functions import (
    BrouwerWitness,
    CellFunction,
    brouwer_witness,
    builtin_function,
    head_const,
    identity,
    is_continuous,
    is_monotonic,
    is_strict,
    random_monotone_function,
    reverse,
    stream_image,
    streams_equivalent,
)
from .patterns import euclid, get_pattern, glue, sierpinski_carpet, sierpinski_triangle
from .structure import (
    border_rank,
    check_homogeneity,
    check_indiscernibility,
    dimension,
    is_border,
)

__version__ = "0.1.0"
