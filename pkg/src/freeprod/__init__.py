"""Factor-free subgroups of free products of ordered abelian groups.

Words live in a free product of copies of Z and Q, subgroups are encoded as
irreducible bipartite A-graphs, and intersections are computed by pullback.
"""

from .agraph import AGraph, basis, build_from_generators, canonical_form, core, euler_char, membership, reduced_rank
from .errors import FactorFreeViolation, FreeProdError, ParseError
from .factors import FactorKind, FactorSystem
from .magnus import Sign, embed, word_sign
from .maxedges import find_all_certified, find_one_maximal_edge, verify_edge_count_bound
from .pullback import components, pullback, verify_theorem1
from .words import Letter, compare, format_word, is_strongly_positive, parse_word

__all__ = [
    "AGraph", "FactorFreeViolation", "FactorKind", "FactorSystem", "FreeProdError", "Letter",
    "ParseError", "Sign", "basis", "build_from_generators", "canonical_form", "compare",
    "components", "core", "embed", "euler_char", "find_all_certified", "find_one_maximal_edge",
    "format_word", "is_strongly_positive", "membership", "parse_word", "pullback",
    "reduced_rank", "verify_edge_count_bound", "verify_theorem1", "word_sign",
]
