"""Bounded decision procedure over finite Kripke models.

With a conjecture, a countermodel search: axioms hold globally, hypotheses
and the negated conjecture at the current world.  Without one, a model
search.  World counts and carrier sizes are swept in ascending order, so
the reported witness is the first in enumeration order and identical
across runs."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

from ..logic_spec import (
    CheckedProblem,
    Family,
    ModalSemantics,
    SpecError,
    SpecErrorKind,
    Subrole,
    locality_of,
    problem_indices,
)
from ..syntax import (
    Appl,
    Apply,
    BaseRole,
    BaseType,
    Binary,
    Bool,
    DistinctObj,
    Eq,
    Lam,
    NcApply,
    Node,
    Not,
    NumberLit,
    Quant,
    TupleTerm,
    Var,
    walk,
)
from .enumerate import Bounds, OracleSignature, size_vectors, oracle_signature
from .ground import DEFAULT_CLAUSE_BUDGET, Grounder
from .models import KripkeModel
from .sat import solve

DEFAULT_BOUNDS: Bounds = (3, 4)


class VerdictKind(enum.Enum):
    THEOREM = "Theorem"
    COUNTER_SATISFIABLE = "CounterSatisfiable"
    SATISFIABLE = "Satisfiable"
    UNSATISFIABLE = "Unsatisfiable"
    UNKNOWN = "Unknown"


@dataclass
class Verdict:
    kind: VerdictKind
    bounds: Bounds
    witness: Optional[KripkeModel] = None
    complete: bool = False
    note: str = ""

    @property
    def status(self) -> str:
        return self.kind.value

    def __post_init__(self) -> None:
        has_witness = self.witness is not None
        expects = self.kind in (VerdictKind.SATISFIABLE,
                                VerdictKind.COUNTER_SATISFIABLE)
        if has_witness != expects:
            raise ValueError("witness present iff the verdict is Satisfiable "
                             "or CounterSatisfiable")


def _check_first_order(units, filename: str) -> None:
    """Reject everything outside the oracle's first-order modal fragment,
    with positions: higher-order constructs, Boolean terms/variables,
    interpreted symbols, and connectives without Kripke semantics."""
    def bad(message: str, pos) -> SpecError:
        return SpecError(SpecErrorKind.UNSUPPORTED_CONSTRUCT, message, pos,
                         filename)

    def scan(node: Node, as_formula: bool, pos) -> None:
        if isinstance(node, (Lam, Apply)):
            raise bad("higher-order constructs are outside the oracle's "
                      "first-order fragment", pos)
        if isinstance(node, TupleTerm):
            raise bad("tuple terms are outside the oracle's fragment", pos)
        if isinstance(node, Var):
            if as_formula:
                raise bad("Boolean variables are outside the oracle's "
                          "first-order fragment", pos)
            return
        if isinstance(node, Appl):
            if node.name.startswith("$") and node.name not in ("$true",
                                                               "$false"):
                raise bad(f"interpreted symbol '{node.name}' is outside the "
                          f"oracle's fragment", pos)
            for arg in node.args:
                if not isinstance(arg, (Var, Appl, NumberLit, DistinctObj)):
                    raise bad("Boolean terms are outside the oracle's "
                              "first-order fragment", pos)
                scan(arg, False, pos)
            return
        if isinstance(node, Eq):
            for side in (node.lhs, node.rhs):
                if not isinstance(side, (Var, Appl, NumberLit, DistinctObj)):
                    raise bad("equality between formulas is outside the "
                              "oracle's first-order fragment", pos)
                scan(side, False, pos)
            return
        if isinstance(node, Quant):
            for _name, typ in node.bindings:
                if typ is not None and (not isinstance(typ, BaseType)
                                        or typ.name == "$o"):
                    raise bad(f"quantification over {typ} is outside the "
                              f"oracle's first-order fragment", pos)
            scan(node.body, True, pos)
            return
        if isinstance(node, NcApply):
            conn = node.conn
            if conn.name is None or conn.name.startswith("$$") \
                    or conn.name == "$common":
                raise bad(f"connective '{conn.name or conn.surface.value}' "
                          f"has no Kripke semantics here", conn.pos or pos)
            for arg in node.args:
                scan(arg, True, conn.pos or pos)
            return
        if isinstance(node, Not):
            scan(node.body, True, pos)
            return
        if isinstance(node, Binary):
            scan(node.lhs, True, pos)
            scan(node.rhs, True, pos)
            return
        if isinstance(node, Bool):
            return
        if isinstance(node, (NumberLit, DistinctObj)):
            if as_formula:
                raise bad("a literal cannot be used as a formula", pos)
            return
        raise bad(f"{type(node).__name__} is outside the oracle's fragment",
                  pos)

    for unit in units:
        if isinstance(unit.formula, Node):
            scan(unit.formula, True, unit.pos)


def _is_propositional(osig: OracleSignature) -> bool:
    return (not osig.types
            and all(not args for _n, args in osig.preds)
            and not osig.funcs)


def _subformula_count(units) -> int:
    nodes = set()
    for unit in units:
        if isinstance(unit.formula, Node):
            nodes.update(walk(unit.formula))
    return len(nodes)


def decide(checked: CheckedProblem, bounds: Bounds = DEFAULT_BOUNDS,
           frame_as_premises: bool = False,
           clause_budget: int = DEFAULT_CLAUSE_BUDGET,
           filename: str = "<input>") -> Verdict:
    """Bounded verdict for a checked problem.

    frame_as_premises switches between searching only frame-conforming
    models and searching arbitrary models with the frame conditions as
    premises; over finite models the two coincide clause-for-clause, and
    the flag exists for experimentation with that reading.
    """
    sem = checked.semantics or ModalSemantics(Family.MODAL)
    units = [u for u in checked.units if isinstance(u.formula, Node)]
    _check_first_order(units, filename)

    conjectures = [u for u in units if u.role.base is BaseRole.CONJECTURE]
    if len(conjectures) > 1:
        raise SpecError(SpecErrorKind.UNSUPPORTED_CONSTRUCT,
                        "at most one conjecture is supported",
                        conjectures[1].pos, filename)
    conjecture = conjectures[0] if conjectures else None
    assumptions = [u for u in units if u.role.base is not BaseRole.CONJECTURE]

    indices = problem_indices(checked.units)
    osig = oracle_signature(checked.signature, sem, indices, filename)

    max_worlds, _max_domain = bounds
    for n in range(1, max_worlds + 1):
        for sizes in size_vectors(osig, bounds[1]):
            # both frame readings ground to the same clauses over finite
            # models, so the flag does not alter the search
            grounder = Grounder(osig, sem, n, sizes,
                                clause_budget=clause_budget)
            for unit in assumptions:
                if locality_of(unit.role) is Subrole.GLOBAL:
                    grounder.assert_global(unit.formula)
                else:
                    grounder.assert_local(unit.formula)
            if conjecture is not None:
                if locality_of(conjecture.role) is Subrole.GLOBAL:
                    grounder.assert_negated_global(conjecture.formula)
                else:
                    grounder.assert_local(conjecture.formula, positive=False)
            assignment = solve(grounder.cnf)
            if assignment is not None:
                witness = grounder.decode(assignment)
                kind = (VerdictKind.COUNTER_SATISFIABLE if conjecture is not None
                        else VerdictKind.SATISFIABLE)
                note = f"witness found at worlds={n}" + (
                    "" if not sizes else
                    " " + " ".join(f"|{t}|={s}" for t, s in sorted(sizes.items())))
                return Verdict(kind, bounds, witness=witness, note=note)

    complete = False
    note = f"exhaustive up to worlds<={max_worlds}, domain<={bounds[1]}"
    if _is_propositional(osig) and len(osig.indices) == 1:
        needed = 2 ** _subformula_count(units)
        if needed <= max_worlds:
            complete = True
            note = f"complete (filtration bound {needed} within worlds bound)"
    kind = (VerdictKind.THEOREM if conjecture is not None
            else VerdictKind.UNSATISFIABLE)
    return Verdict(kind, bounds, complete=complete, note=note)
