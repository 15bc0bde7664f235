"""Executable finite combinatorics of structural Ramsey theory.

Finite relational structures and their embeddings, hereditary classes built
from linear orders, graphs, tournaments, K_n-free graphs and linearly
extended posets, amalgamation checks, full products, and partition arrows
with checkable certificates.
"""
from .errors import (AmalgamationError, ParseError, PreconditionError, RamseyKitError,
                     SignatureMismatchError, StructureFormatError)
from .structures import (CanonicalForm, Embedding, Signature, Structure, automorphisms,
                         canonical_form, chain, complete_graph, embeds, enumerate_embeddings,
                         graph, induced, is_embedding, is_homomorphism, is_isomorphic,
                         linear_order, ordered_graph, parse_structure, reduct, render_structure,
                         substructure)
from .formula import evaluate, expand_by_formula, is_strict_linear_order, parse_formula
from .classes import (GRAPHS, LO, POSETS_LINEXT, TOURNAMENTS, Builtin, Forget, Wedge, enumerate_members,
                      forget, kn_free, membership, parse_class_spec, permutations_class,
                      rename_symbols, wedge)
from .amalgamation import (Amalgam, AmalgamationDiagram, check_ap, check_jep, check_sap,
                           find_strong_amalgams, free_amalgam, injectivize)
from .product import diagonal_check, full_product
from .arrow import (ArrowCertificate, ArrowInstance, check_arrow, find_mono_copy, search_witness,
                    transfer_check, validate_certificate)

__all__ = [
    "AmalgamationError", "ParseError", "PreconditionError", "RamseyKitError",
    "SignatureMismatchError", "StructureFormatError", "CanonicalForm", "Embedding", "Signature",
    "Structure", "automorphisms", "canonical_form", "chain", "complete_graph", "embeds",
    "enumerate_embeddings", "graph", "induced", "is_embedding", "is_homomorphism", "is_isomorphic",
    "linear_order", "ordered_graph", "parse_structure", "reduct", "render_structure",
    "substructure", "evaluate", "expand_by_formula", "is_strict_linear_order", "parse_formula",
    "GRAPHS", "LO", "POSETS_LINEXT", "TOURNAMENTS", "Builtin", "Forget", "Wedge",
    "enumerate_members", "forget", "kn_free", "membership", "parse_class_spec",
    "permutations_class", "rename_symbols", "wedge", "Amalgam", "AmalgamationDiagram", "check_ap",
    "check_jep", "check_sap", "find_strong_amalgams", "free_amalgam", "injectivize",
    "diagonal_check", "full_product", "ArrowCertificate", "ArrowInstance", "check_arrow",
    "find_mono_copy", "search_witness", "transfer_check", "validate_certificate",
]

__version__ = "0.1.0"
