"""Toolkit for the TPTP non-classical languages TXN and THN: parsing,
logic-specification checking, shallow embedding into classical THF, the
relational first-order translation, and a brute-force Kripke-model oracle."""

from .parser import ParseError, parse_file, parse_formula, parse_problem, tokenize
from .printer import print_node, print_problem, print_type, print_unit
from .syntax import (
    AnnotatedFormula,
    Appl,
    Apply,
    BaseRole,
    BaseType,
    Binary,
    Bool,
    CurriedType,
    DistinctObj,
    Eq,
    Lam,
    Language,
    LogicSpec,
    MappingType,
    NcApply,
    NcConnective,
    Node,
    Not,
    NumberLit,
    Quant,
    Role,
    Subrole,
    Surface,
    TypeDecl,
    Var,
    collect_nc_connectives,
    free_variables,
)

__version__ = "0.1.0"
