"""Axiom pinpointing for EL+ ontologies via Horn encoding and MCS/MUS duality."""

from .classify import classify, holds
from .encode import build_instance, build_pinpoint_formula, coi_reduce, emit_wcnf
from .errors import GuardError, InstanceSatisfiable, ParseError, PinpointError, QueryNotEntailed, UnknownName
from .normalize import explain_origin, normalize
from .ontology import parse_axiom, parse_ontology, parse_query, render_axiom, render_ontology
from .pinpoint import (
    Budget,
    brute_force_minas,
    enumerate_mcses,
    enumerate_minas,
    explain,
    extract_one_mina,
    minimal_hitting_sets,
    verify_mina,
)
from .satcore import Solver, new_solver

__version__ = "0.1.0"
