"""Separation and covering for classes enriched with suffix information.

The package reduces separation/covering for an enriched class ``C∘SU`` to
the same problem for ``C`` over an alphabet of *well-formed* triples, and
provides the supporting machinery: finite automata, finite monoids, suffix
partitions and taggings, Ehrenfeucht–Fraïssé games and ω-semigroups.
"""

from .automata import Dfa, parse_dfa, format_dfa, from_regex, equivalent
from .baseclasses import AT, SIGMA1, BaseSolver, get_solver
from .errors import (AlphabetMismatch, CapacityError, InvariantViolation, ParseError,
                     SuenrichError)
from .monoid import (AlgebraicData, FiniteMonoid, Morphism, RecognizedLanguage, algebraic_data,
                     common_morphism, recognized, transition_monoid)
from .reduction import (build_gamma, covering_transfer, eta, eta_preimage, separation_transfer,
                        TransferResult)
from .report import Check
from .su import SuClass, canonical_partition, delta, tag, user_partition
from .wellformed import WfAlphabet, wf_alphabet, wf_language, wfw_language

__version__ = "0.1.0"

__all__ = [
    "AT", "SIGMA1", "AlgebraicData", "AlphabetMismatch", "BaseSolver", "CapacityError", "Check",
    "Dfa", "FiniteMonoid", "InvariantViolation", "Morphism", "ParseError", "RecognizedLanguage",
    "SuClass", "SuenrichError", "TransferResult", "WfAlphabet", "algebraic_data", "build_gamma",
    "canonical_partition", "common_morphism", "covering_transfer", "delta", "equivalent", "eta",
    "eta_preimage", "format_dfa", "from_regex", "get_solver", "parse_dfa", "recognized",
    "separation_transfer", "tag", "transition_monoid", "user_partition", "wf_alphabet",
    "wf_language", "wfw_language",
]
