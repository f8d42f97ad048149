"""Reference evaluators: Kripke satisfaction for the first-order modal
fragment, and Tarskian evaluation of embedded classical formulas over finite
structures.  Both are plain recursive interpreters; they are the ground
truth the rest of the toolkit is tested against."""

from __future__ import annotations

from typing import Optional

from ..logic_spec import BOX_NAMES, DIA_NAMES, index_key
from ..syntax import (
    Appl,
    Apply,
    BaseType,
    Binary,
    Bool,
    DistinctObj,
    Eq,
    Ite,
    Lam,
    Let,
    NcApply,
    Node,
    Not,
    NumberLit,
    Quant,
    TYPE_I,
    Var,
)
from .models import KripkeModel, OracleError, Structure

Env = dict[str, int]


def _binary(op: str, lhs: bool, rhs: bool) -> bool:
    if op == "&":
        return lhs and rhs
    if op == "|":
        return lhs or rhs
    if op == "=>":
        return (not lhs) or rhs
    if op == "<=":
        return lhs or (not rhs)
    if op == "<=>":
        return lhs == rhs
    if op == "<~>":
        return lhs != rhs
    raise OracleError(f"unknown connective {op}")


def eval_term(model: KripkeModel, world: int, term: Node, env: Env) -> int:
    if isinstance(term, Var):
        if term.name not in env:
            raise OracleError(f"unbound variable {term.name}")
        return env[term.name]
    if isinstance(term, NumberLit):
        key = (term.kind, term.lexeme)
        if key not in model.literal_values:
            raise OracleError(f"uninterpreted literal {term.lexeme}")
        return model.literal_values[key]
    if isinstance(term, DistinctObj):
        if term.text not in model.distinct_values:
            raise OracleError(f'uninterpreted distinct object "{term.text}"')
        return model.distinct_values[term.text]
    if isinstance(term, Appl):
        args = tuple(eval_term(model, world, a, env) for a in term.args)
        if term.name in model.rigid_funcs:
            table = model.rigid_funcs[term.name]
        elif term.name in model.flex_funcs:
            table = model.flex_funcs[term.name][world]
        else:
            raise OracleError(f"uninterpreted symbol '{term.name}'")
        if args not in table:
            raise OracleError(f"'{term.name}' undefined on {args}")
        return table[args]
    raise OracleError(
        f"{type(term).__name__} is outside the first-order term fragment")


def eval_modal(model: KripkeModel, world: int, formula: Node,
               env: Optional[Env] = None) -> bool:
    """Standard Kripke satisfaction at a world.

    Box quantifies over the index's accessible worlds; quantifiers range
    over the world's domain for the variable's type (the full carrier for
    constant-domain types, by construction of world_domains).
    """
    env = env if env is not None else {}
    if isinstance(formula, Bool):
        return formula.value
    if isinstance(formula, Not):
        return not eval_modal(model, world, formula.body, env)
    if isinstance(formula, Binary):
        return _binary(formula.op,
                       eval_modal(model, world, formula.lhs, env),
                       eval_modal(model, world, formula.rhs, env))
    if isinstance(formula, Eq):
        same = (eval_term(model, world, formula.lhs, env)
                == eval_term(model, world, formula.rhs, env))
        return same != formula.negated
    if isinstance(formula, Quant):
        domains = []
        for name, typ in formula.bindings:
            actual = typ if typ is not None else TYPE_I
            if not isinstance(actual, BaseType) or actual.name == "$o":
                raise OracleError(
                    f"quantification over {actual} is outside the first-order "
                    f"fragment")
            domains.append((name, model.domain(world, actual.name)))
        return _eval_quant(model, world, formula, env, domains, 0)
    if isinstance(formula, NcApply):
        conn = formula.conn
        name = conn.name
        box = name in BOX_NAMES or name == "$believes"
        if not box and name not in DIA_NAMES:
            raise OracleError(f"connective '{name}' has no Kripke semantics")
        if len(formula.args) != 1:
            raise OracleError(f"'{name}' takes exactly one argument")
        body = formula.args[0]
        succ = model.successors(index_key(conn.index), world)
        if box:
            return all(eval_modal(model, v, body, env) for v in succ)
        return any(eval_modal(model, v, body, env) for v in succ)
    if isinstance(formula, Appl):
        if formula.name == "$true":
            return True
        if formula.name == "$false":
            return False
        if formula.name not in model.preds:
            raise OracleError(f"uninterpreted predicate '{formula.name}'")
        args = tuple(eval_term(model, world, a, env) for a in formula.args)
        return args in model.preds[formula.name][world]
    if isinstance(formula, Var):
        raise OracleError("Boolean variables are outside the first-order "
                          "fragment")
    if isinstance(formula, (Lam, Apply)):
        raise OracleError("higher-order bodies cannot be evaluated")
    if isinstance(formula, (Ite, Let)):
        raise OracleError("$ite/$let cannot be evaluated")
    raise OracleError(f"cannot evaluate {type(formula).__name__}")


def _eval_quant(model, world, formula: Quant, env: Env, domains, i) -> bool:
    if i == len(domains):
        return eval_modal(model, world, formula.body, env)
    name, values = domains[i]
    outer = env.get(name)
    result = formula.kind == "!"
    for value in values:
        env[name] = value
        sub = _eval_quant(model, world, formula, env, domains, i + 1)
        if formula.kind == "!" and not sub:
            result = False
            break
        if formula.kind == "?" and sub:
            result = True
            break
    if outer is None:
        env.pop(name, None)
    else:
        env[name] = outer
    return result


# ---------------------------------------------------------------------------
# Classical side


def eval_classical_term(structure: Structure, term: Node, env: Env) -> int:
    if isinstance(term, Var):
        if term.name not in env:
            raise OracleError(f"unbound variable {term.name}")
        return env[term.name]
    if isinstance(term, NumberLit):
        key = (term.kind, term.lexeme)
        if key not in structure.literal_values:
            raise OracleError(f"uninterpreted literal {term.lexeme}")
        return structure.literal_values[key]
    if isinstance(term, DistinctObj):
        if term.text not in structure.distinct_values:
            raise OracleError(f'uninterpreted distinct object "{term.text}"')
        return structure.distinct_values[term.text]
    if isinstance(term, Appl):
        if term.name not in structure.funcs:
            raise OracleError(f"uninterpreted symbol '{term.name}'")
        args = tuple(eval_classical_term(structure, a, env) for a in term.args)
        table = structure.funcs[term.name]
        if args not in table:
            raise OracleError(f"'{term.name}' undefined on {args}")
        return table[args]
    if isinstance(term, (Lam, Apply)):
        raise OracleError("residual lambda in embedded output")
    raise OracleError(f"cannot evaluate term {type(term).__name__}")


def eval_classical(structure: Structure, formula: Node,
                   env: Optional[Env] = None) -> bool:
    """Tarskian evaluation of a beta-normal embedded classical formula."""
    env = env if env is not None else {}
    if isinstance(formula, Bool):
        return formula.value
    if isinstance(formula, Not):
        return not eval_classical(structure, formula.body, env)
    if isinstance(formula, Binary):
        return _binary(formula.op,
                       eval_classical(structure, formula.lhs, env),
                       eval_classical(structure, formula.rhs, env))
    if isinstance(formula, Eq):
        same = (eval_classical_term(structure, formula.lhs, env)
                == eval_classical_term(structure, formula.rhs, env))
        return same != formula.negated
    if isinstance(formula, Quant):
        domains = []
        for name, typ in formula.bindings:
            if not isinstance(typ, BaseType):
                raise OracleError(
                    f"higher-order quantification over {typ} cannot be "
                    f"evaluated")
            if typ.name not in structure.carriers:
                raise OracleError(f"type '{typ.name}' has no carrier")
            domains.append((name, range(structure.carriers[typ.name])))
        return _eval_classical_quant(structure, formula, env, domains, 0)
    if isinstance(formula, Appl):
        if formula.name == "$true":
            return True
        if formula.name == "$false":
            return False
        if formula.name not in structure.preds:
            raise OracleError(f"uninterpreted predicate '{formula.name}'")
        args = tuple(eval_classical_term(structure, a, env)
                     for a in formula.args)
        return args in structure.preds[formula.name]
    if isinstance(formula, (Lam, Apply)):
        raise OracleError("residual lambda in embedded output")
    if isinstance(formula, NcApply):
        raise OracleError("non-classical connective in embedded output")
    raise OracleError(f"cannot evaluate {type(formula).__name__}")


def _eval_classical_quant(structure, formula: Quant, env: Env, domains, i) -> bool:
    if i == len(domains):
        return eval_classical(structure, formula.body, env)
    name, values = domains[i]
    outer = env.get(name)
    result = formula.kind == "!"
    for value in values:
        env[name] = value
        sub = _eval_classical_quant(structure, formula, env, domains, i + 1)
        if formula.kind == "!" and not sub:
            result = False
            break
        if formula.kind == "?" and sub:
            result = True
            break
    if outer is None:
        env.pop(name, None)
    else:
        env[name] = outer
    return result
