"""One-counter automata under the classical, visibly and observability semantics."""

from .constructions import (EOca, Nfa, build_benc, build_bomega, build_eoca,
                            complement_obs, complement_vis, decode,
                            determinize_obs, encode, eoca_to_doca, is_encoding,
                            nfa_universal, product, reduce_nfa_universality)
from .core import (DEC, INC, Config, DOca, Oca, accepts_vis, is_well_formed,
                   project, run_vis, step)
from .decision import (Verdict, equiv_obs, includes_obs, member_obs, nonempty,
                       unique_run, universal_obs)
from .errors import (AlphabetMismatch, Cancelled, CapacityError, CapInstability,
                     CertificationError, NotAnEncoding, NotNormalized, OcaError,
                     ParseError, StructuralError)
from .oracle import Window, enumerate_words, window_equal
from .oscillation import (OscillationTable, counter_only_reach,
                          oscillation_sets, straight_run_set)
from .semilinear import (AP, FALSE, TRUE, Rel, UpSet, guard_eval,
                         guard_to_upset, parse_guard, parse_rel, rel_eval,
                         upset_bool, upset_to_guard)
from .strong import (StrongAutomaton, build_cphi, oca_to_sa, sa_member,
                     sa_to_eoca)
from .textio import (format_automaton, format_obs_word, parse_automaton,
                     parse_obs_word)

__version__ = "0.1.0"

__all__ = [
    "EOca", "Nfa", "build_benc", "build_bomega", "build_eoca", "complement_obs",
    "complement_vis", "decode", "determinize_obs", "encode", "eoca_to_doca",
    "is_encoding", "nfa_universal", "product", "reduce_nfa_universality", "DEC", "INC",
    "Config", "DOca", "Oca", "accepts_vis", "is_well_formed", "project", "run_vis",
    "step", "Verdict", "equiv_obs", "includes_obs", "member_obs", "nonempty",
    "unique_run", "universal_obs", "AlphabetMismatch", "Cancelled", "CapacityError",
    "CapInstability", "CertificationError", "NotAnEncoding", "NotNormalized",
    "OcaError", "ParseError", "StructuralError", "Window", "enumerate_words",
    "window_equal", "OscillationTable", "counter_only_reach", "oscillation_sets",
    "straight_run_set", "AP", "FALSE", "TRUE", "Rel", "UpSet", "guard_eval",
    "guard_to_upset", "parse_guard", "parse_rel", "rel_eval", "upset_bool",
    "upset_to_guard", "StrongAutomaton", "build_cphi", "oca_to_sa", "sa_member",
    "sa_to_eoca", "format_automaton", "format_obs_word", "parse_automaton",
    "parse_obs_word",
]
