"""Disjunctive datalog engine: minimal, founded, minimal founded, stable and perfect models."""

from .grounder import Database, GroundProgram, GroundRule, attach_database, ground, herbrand_universe
from .kernel import (head_delete, is_founded, is_model, reduct, rewrite_denials, s_fixpoint,
                     satisfies, t_fixpoint)
from .oracle import oracle_enumerate
from .query import BoundQuery, brave, cautious, load_database
from .solver import (ModelSet, Semantics, characterization_check, enumerate_models, is_minimal_founded,
                     is_minimal_model, is_stable, perfect_models, prefer)
from .syntax import Program, dependency_graph, parse_program, stratify, validate

__all__ = [
    "BoundQuery", "Database", "GroundProgram", "GroundRule", "ModelSet", "Program", "Semantics",
    "attach_database", "brave", "cautious", "characterization_check", "dependency_graph",
    "enumerate_models", "ground", "head_delete", "herbrand_universe", "is_founded", "is_minimal_founded",
    "is_minimal_model", "is_model", "is_stable", "load_database", "oracle_enumerate", "parse_program",
    "perfect_models", "prefer", "reduct", "rewrite_denials", "s_fixpoint", "satisfies", "stratify",
    "t_fixpoint", "validate",
]
