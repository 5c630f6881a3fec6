"""Lambek-Grishin calculus with (dual) Galois connected negations:
focused display-calculus search, CPS term extraction and lexical readings."""
from .cps import TypedTerm, UnsupportedRule, cps_proof, sequent_target_type
from .lam import alpha_eq, beta_normalize, parse_term, show_term, typecheck
from .oracle import Oracle, oracle_derivable
from .prover import (
    Proof,
    ResourceLimit,
    Search,
    cut,
    derivable,
    enumerate_proofs,
    prove,
    reduce_principal_cut,
    replay,
)
from .semantics import Lexicon, LexEntry, evaluate, lex_term, load_lexicon, paper_lexicon, readings
from .structures import Leaf, RuleConfig, SBin, Sequent, SUn, display_orbit
from .syntax import (
    Formula,
    UnsupportedConnective,
    bowtie,
    cps_type,
    infinity,
    parse_arrow,
    parse_formula,
    show_formula,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
