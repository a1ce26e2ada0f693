"""Reasoning engine for free monoidal categories with string diagrams."""

from .normalize import Verdict, decide_equal, norm, nmor_equal, print_nmor
from .objects import Arity, Atom, ObjTree, Tensor, Unit, arity_of, list_form
from .parser import ParseError, parse_goal, parse_term
from .terms import print_term
from .typecheck import TypecheckError, typecheck

__all__ = [
    "Arity",
    "Atom",
    "ObjTree",
    "ParseError",
    "Tensor",
    "TypecheckError",
    "Unit",
    "Verdict",
    "arity_of",
    "decide_equal",
    "list_form",
    "nmor_equal",
    "norm",
    "parse_goal",
    "parse_term",
    "print_nmor",
    "print_term",
    "typecheck",
]

__version__ = "0.1.0"
