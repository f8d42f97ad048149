"""Propositional grounding of first-order modal problems at fixed finite
bounds: worlds, carriers and quantifiers are expanded, uninterpreted
functions become one-hot value choices, frame and domain constraints become
clauses.  The resulting CNF goes to the CDCL solver and satisfying
assignments decode back into Kripke models."""

from __future__ import annotations

import itertools

from ..logic_spec import (
    BOX_NAMES,
    DIA_NAMES,
    DomainKind,
    FrameCondition,
    IndexKey,
    ModalSemantics,
    index_key,
)
from ..syntax import (
    Appl,
    Binary,
    Bool,
    DistinctObj,
    Eq,
    NcApply,
    Node,
    Not,
    NumberLit,
    Quant,
    TYPE_I,
    BaseType,
    Var,
)
from .enumerate import OracleSignature
from .models import KripkeModel, OracleError, OracleResourceError
from .sat import CNF

DEFAULT_CLAUSE_BUDGET = 2_000_000


class Grounder:
    def __init__(self, osig: OracleSignature, sem: ModalSemantics,
                 n_worlds: int, sizes: dict[str, int],
                 clause_budget: int = DEFAULT_CLAUSE_BUDGET):
        self.osig = osig
        self.sem = sem
        self.n = n_worlds
        self.sizes = dict(sizes)
        self.budget = clause_budget
        self.cnf = CNF()
        self.true_lit = self.cnf.new_var(prefer=True)
        self._add([self.true_lit])
        self._and_cache: dict[tuple[int, ...], int] = {}

        self.literal_values: dict[tuple[str, str], int] = {}
        self.distinct_values: dict[str, int] = {}
        for t in osig.types:
            lits, dists = osig.fixed_elements(t)
            self.literal_values.update(lits)
            self.distinct_values.update(dists)

        self.rel_vars: dict[IndexKey, dict[tuple[int, int], int]] = {}
        for index in osig.indices:
            table = {}
            for u in range(self.n):
                for v in range(self.n):
                    table[(u, v)] = self.cnf.new_var(prefer=False)
            self.rel_vars[index] = table

        self.nonconstant = [t for t in osig.types
                            if sem.domain_kind(t) is not DomainKind.CONSTANT]
        self.exists_vars: dict[str, dict[tuple[int, int], int]] = {}
        for t in self.nonconstant:
            table = {}
            for w in range(self.n):
                for x in range(self.sizes[t]):
                    table[(w, x)] = self.cnf.new_var(prefer=True)
            self.exists_vars[t] = table

        # one-hot function cells come before predicate rows so the fixed
        # branching order settles term denotations first
        self.func_vars: dict[str, dict[tuple, list[int]]] = {}
        self.func_rigid: dict[str, bool] = {}
        for name, arg_types, result, rigid in osig.funcs:
            self.func_rigid[name] = rigid
            cells = {}
            arg_rows = list(itertools.product(
                *(range(self.sizes[t]) for t in arg_types)))
            worlds = [None] if rigid else list(range(self.n))
            for w in worlds:
                for row in arg_rows:
                    valvars = [self.cnf.new_var(prefer=True)
                               for _ in range(self.sizes[result])]
                    cells[(w, row)] = valvars
                    self._add(valvars)
                    for i in range(len(valvars)):
                        for j in range(i + 1, len(valvars)):
                            self._add([-valvars[i], -valvars[j]])
            self.func_vars[name] = cells

        self.pred_vars: dict[str, dict[tuple, int]] = {}
        for name, arg_types in osig.preds:
            table = {}
            rows = list(itertools.product(
                *(range(self.sizes[t]) for t in arg_types)))
            for w in range(self.n):
                for row in rows:
                    table[(w,) + row] = self.cnf.new_var(prefer=False)
            self.pred_vars[name] = table

        self._frame_clauses()
        self._domain_clauses()

    # -- clause plumbing

    def _add(self, lits) -> None:
        if len(self.cnf.clauses) >= self.budget:
            raise OracleResourceError(
                f"grounding exceeds the clause budget ({self.budget})")
        self.cnf.add(lits)

    def mk_and(self, lits) -> int:
        out = []
        for lit in lits:
            if lit == -self.true_lit:
                return -self.true_lit
            if lit != self.true_lit and lit not in out:
                if -lit in out:
                    return -self.true_lit
                out.append(lit)
        if not out:
            return self.true_lit
        if len(out) == 1:
            return out[0]
        key = tuple(sorted(out))
        cached = self._and_cache.get(key)
        if cached is not None:
            return cached
        v = self.cnf.new_var()
        for lit in out:
            self._add([-v, lit])
        self._add([v] + [-lit for lit in out])
        self._and_cache[key] = v
        return v

    def mk_or(self, lits) -> int:
        return -self.mk_and([-lit for lit in lits])

    # -- structural clauses

    def _frame_clauses(self) -> None:
        n = self.n
        for index in self.osig.indices:
            r = self.rel_vars[index]
            for condition in self.sem.modality(index).frame_conditions():
                if condition is FrameCondition.UNIVERSAL:
                    for edge, var in r.items():
                        self._add([var])
                elif condition is FrameCondition.REFLEXIVE:
                    for w in range(n):
                        self._add([r[(w, w)]])
                elif condition is FrameCondition.SYMMETRIC:
                    for (u, v), var in r.items():
                        self._add([-var, r[(v, u)]])
                elif condition is FrameCondition.SERIAL:
                    for u in range(n):
                        self._add([r[(u, v)] for v in range(n)])
                elif condition is FrameCondition.TRANSITIVE:
                    for u, v, w in itertools.product(range(n), repeat=3):
                        self._add([-r[(u, v)], -r[(v, w)], r[(u, w)]])
                elif condition is FrameCondition.EUCLIDEAN:
                    for u, v, w in itertools.product(range(n), repeat=3):
                        self._add([-r[(u, v)], -r[(u, w)], r[(v, w)]])
                elif condition is FrameCondition.FUNCTIONAL:
                    for u, v, w in itertools.product(range(n), repeat=3):
                        if v != w:
                            self._add([-r[(u, v)], -r[(u, w)]])
                elif condition is FrameCondition.SHIFT_REFLEXIVE:
                    for (u, v), var in r.items():
                        self._add([-var, r[(v, v)]])
                elif condition is FrameCondition.DENSE:
                    for (u, v), var in r.items():
                        mid = self.mk_or([self.mk_and([r[(u, x)], r[(x, v)]])
                                          for x in range(n)])
                        self._add([-var, mid])
                elif condition is FrameCondition.CONFLUENT:
                    for u, v, w in itertools.product(range(n), repeat=3):
                        join = self.mk_or([self.mk_and([r[(v, x)], r[(w, x)]])
                                           for x in range(n)])
                        self._add([-r[(u, v)], -r[(u, w)], join])

    def _domain_clauses(self) -> None:
        for t in self.nonconstant:
            ex = self.exists_vars[t]
            kind = self.sem.domain_kind(t)
            for w in range(self.n):
                self._add([ex[(w, x)] for x in range(self.sizes[t])])
            if kind in (DomainKind.CUMULATIVE, DomainKind.DECREASING):
                for index in self.osig.indices:
                    r = self.rel_vars[index]
                    for (u, v), var in r.items():
                        src, dst = (u, v) if kind is DomainKind.CUMULATIVE else (v, u)
                        for x in range(self.sizes[t]):
                            self._add([-var, -ex[(src, x)], ex[(dst, x)]])

    # -- term denotations

    def den(self, term: Node, world: int, env: dict[str, int]):
        """Possible denotations: list of (element, condition literals)."""
        if isinstance(term, Var):
            if term.name not in env:
                raise OracleError(f"unbound variable {term.name}")
            return [(env[term.name], ())]
        if isinstance(term, NumberLit):
            return [(self.literal_values[(term.kind, term.lexeme)], ())]
        if isinstance(term, DistinctObj):
            return [(self.distinct_values[term.text], ())]
        if isinstance(term, Appl):
            if term.name not in self.func_vars:
                raise OracleError(f"'{term.name}' is not a function symbol")
            w_key = None if self.func_rigid[term.name] else world
            out = []
            for combo in self._arg_combos(term.args, world, env):
                row, conds = combo
                valvars = self.func_vars[term.name][(w_key, row)]
                for e, valvar in enumerate(valvars):
                    out.append((e, conds + (valvar,)))
            return out
        raise OracleError(
            f"{type(term).__name__} is outside the first-order term fragment")

    def _arg_combos(self, args, world, env):
        combos = [((), ())]
        for arg in args:
            extended = []
            for row, conds in combos:
                for e, c in self.den(arg, world, env):
                    extended.append((row + (e,), conds + c))
            combos = extended
        return combos

    # -- formula grounding

    def ground(self, node: Node, world: int, env: dict[str, int]) -> int:
        if isinstance(node, Bool):
            return self.true_lit if node.value else -self.true_lit
        if isinstance(node, Not):
            return -self.ground(node.body, world, env)
        if isinstance(node, Binary):
            a = self.ground(node.lhs, world, env)
            b = self.ground(node.rhs, world, env)
            if node.op == "&":
                return self.mk_and([a, b])
            if node.op == "|":
                return self.mk_or([a, b])
            if node.op == "=>":
                return self.mk_or([-a, b])
            if node.op == "<=":
                return self.mk_or([a, -b])
            if node.op == "<=>":
                return self.mk_or([self.mk_and([a, b]), self.mk_and([-a, -b])])
            if node.op == "<~>":
                return -self.mk_or([self.mk_and([a, b]), self.mk_and([-a, -b])])
            raise OracleError(f"unknown connective {node.op}")
        if isinstance(node, Eq):
            lits = []
            for le, lc in self.den(node.lhs, world, env):
                for re_, rc in self.den(node.rhs, world, env):
                    if le == re_:
                        lits.append(self.mk_and(lc + rc))
            lit = self.mk_or(lits)
            return -lit if node.negated else lit
        if isinstance(node, Quant):
            return self._ground_quant(node, world, env, 0)
        if isinstance(node, NcApply):
            return self._ground_modal(node, world, env)
        if isinstance(node, Appl):
            if node.name == "$true":
                return self.true_lit
            if node.name == "$false":
                return -self.true_lit
            if node.name not in self.pred_vars:
                raise OracleError(f"'{node.name}' is not a predicate symbol")
            lits = []
            for row, conds in self._arg_combos(node.args, world, env):
                lits.append(self.mk_and(conds + (self.pred_vars[node.name][(world,) + row],)))
            return self.mk_or(lits)
        raise OracleError(
            f"{type(node).__name__} is outside the first-order fragment")

    def _ground_quant(self, node: Quant, world: int, env: dict[str, int],
                      i: int) -> int:
        if i == len(node.bindings):
            return self.ground(node.body, world, env)
        name, typ = node.bindings[i]
        actual = typ if typ is not None else TYPE_I
        if not isinstance(actual, BaseType) or actual.name == "$o":
            raise OracleError(
                f"quantification over {actual} is outside the first-order "
                f"fragment")
        t = actual.name
        if t not in self.sizes:
            raise OracleError(f"type '{t}' has no carrier")
        guard_table = self.exists_vars.get(t)
        parts = []
        for e in range(self.sizes[t]):
            env2 = dict(env)
            env2[name] = e
            sub = self._ground_quant(node, world, env2, i + 1)
            if guard_table is not None:
                guard = guard_table[(world, e)]
                if node.kind == "!":
                    parts.append(self.mk_or([-guard, sub]))
                else:
                    parts.append(self.mk_and([guard, sub]))
            else:
                parts.append(sub)
        return self.mk_and(parts) if node.kind == "!" else self.mk_or(parts)

    def _ground_modal(self, node: NcApply, world: int, env: dict[str, int]) -> int:
        conn = node.conn
        name = conn.name
        box = name in BOX_NAMES or name == "$believes"
        if not box and name not in DIA_NAMES:
            raise OracleError(f"connective '{name}' has no Kripke semantics")
        if len(node.args) != 1:
            raise OracleError(f"'{name}' takes exactly one argument")
        r = self.rel_vars[index_key(conn.index)]
        parts = []
        for v in range(self.n):
            sub = self.ground(node.args[0], v, env)
            edge = r[(world, v)]
            if box:
                parts.append(self.mk_or([-edge, sub]))
            else:
                parts.append(self.mk_and([edge, sub]))
        return self.mk_and(parts) if box else self.mk_or(parts)

    # -- assertions and decoding

    def assert_local(self, node: Node, positive: bool = True) -> None:
        lit = self.ground(node, 0, {})
        self._add([lit if positive else -lit])

    def assert_global(self, node: Node) -> None:
        for w in range(self.n):
            self._add([self.ground(node, w, {})])

    def assert_negated_global(self, node: Node) -> None:
        self._add([self.mk_or([-self.ground(node, w, {})
                               for w in range(self.n)])])

    def decode(self, assignment: list[bool]) -> KripkeModel:
        access = {}
        for index, table in self.rel_vars.items():
            access[index] = frozenset(edge for edge, var in table.items()
                                      if assignment[var])
        world_domains = {}
        for t, table in self.exists_vars.items():
            world_domains[t] = tuple(
                frozenset(x for x in range(self.sizes[t])
                          if assignment[table[(w, x)]])
                for w in range(self.n))
        preds = {}
        for name, table in self.pred_vars.items():
            per_world = []
            for w in range(self.n):
                per_world.append(frozenset(
                    key[1:] for key, var in table.items()
                    if key[0] == w and assignment[var]))
            preds[name] = tuple(per_world)
        rigid_funcs = {}
        flex_funcs = {}
        for name, cells in self.func_vars.items():
            if self.func_rigid[name]:
                table = {}
                for (w, row), valvars in cells.items():
                    table[row] = next(e for e, var in enumerate(valvars)
                                      if assignment[var])
                rigid_funcs[name] = table
            else:
                per_world = [dict() for _ in range(self.n)]
                for (w, row), valvars in cells.items():
                    per_world[w][row] = next(e for e, var in enumerate(valvars)
                                             if assignment[var])
                flex_funcs[name] = tuple(per_world)
        return KripkeModel(
            n_worlds=self.n,
            indices=tuple(self.osig.indices),
            access=access,
            base_domains=dict(self.sizes),
            world_domains=world_domains,
            rigid_funcs=rigid_funcs,
            flex_funcs=flex_funcs,
            preds=preds,
            literal_values=dict(self.literal_values),
            distinct_values=dict(self.distinct_values),
        )
