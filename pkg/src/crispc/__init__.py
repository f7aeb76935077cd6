"""Reduce finitely valued fuzzy ontologies and queries to classical ones."""

from .chain import Chain, mk_chain
from .crispify import CrispifyOptions, CutTable, crispify, kappa_axiom, rho_concept, rho_role
from .errors import CrispcError
from .model import ClassicalOntology, Ontology
from .normalize import normalize
from .textio import parse_ontology, parse_query, print_ontology

__all__ = [
    "Chain", "ClassicalOntology", "CrispcError", "CrispifyOptions", "CutTable", "Ontology", "crispify",
    "kappa_axiom", "mk_chain", "normalize", "parse_ontology", "parse_query", "print_ontology", "rho_concept",
    "rho_role",
]

__version__ = "0.1.0"
