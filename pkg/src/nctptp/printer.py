"""Canonical pretty-printer: the output of print_unit reparses to a
structurally equal unit.  Composite formulas are fully parenthesized, which
keeps the non-associativity rules trivially satisfied."""

from __future__ import annotations

import re

from .syntax import (
    AnnotatedFormula,
    Appl,
    Apply,
    BaseType,
    Binary,
    Bool,
    CurriedType,
    DistinctObj,
    Eq,
    Ite,
    Lam,
    Language,
    Let,
    ListValue,
    LogicSpec,
    MappingType,
    NcApply,
    NcConnective,
    Node,
    Not,
    NumberLit,
    PairItem,
    PlainItem,
    PlainValue,
    Problem,
    PropValue,
    Quant,
    Surface,
    TupleTerm,
    Type,
    TypeDecl,
    Var,
)

_LOWER_WORD = re.compile(r"[a-z][a-zA-Z0-9_]*\Z")


def atom_name(name: str) -> str:
    if name.startswith("$") or _LOWER_WORD.match(name):
        return name
    escaped = name.replace("\\", "\\\\").replace("'", "\\'")
    return f"'{escaped}'"


def print_type(t: Type, language: Language) -> str:
    if isinstance(t, BaseType):
        return t.name
    if isinstance(t, MappingType):
        if len(t.args) == 1:
            return f"{_tff_type_atom(t.args[0])} > {_tff_type_atom(t.result)}"
        args = " * ".join(_tff_type_atom(a) for a in t.args)
        return f"({args}) > {_tff_type_atom(t.result)}"
    if isinstance(t, CurriedType):
        left = print_type(t.arg, language)
        if isinstance(t.arg, (CurriedType, MappingType)):
            left = f"({left})"
        return f"{left} > {print_type(t.result, language)}"
    raise TypeError(f"unknown type node {t!r}")


def _tff_type_atom(t: Type) -> str:
    if isinstance(t, BaseType):
        return t.name
    return f"({print_type(t, Language.TFF)})"


def print_connective(conn: NcConnective) -> str:
    index = "" if conn.index is None else print_node(conn.index, Language.TFF)
    if conn.surface is Surface.BOX:
        return f"[#{index}]" if conn.index is not None else "[.]"
    if conn.surface is Surface.DIAMOND:
        return f"<#{index}>" if conn.index is not None else "<.>"
    if conn.surface is Surface.SLASH:
        return f"/#{index}\\" if conn.index is not None else "/.\\"
    params: list[str] = []
    if conn.index is not None:
        params.append(f"#{index}")
    for key, value in conn.params:
        params.append(f"{key} := {print_node(value, Language.TFF)}")
    if params:
        return "{" + conn.name + "(" + ",".join(params) + ")}"
    return "{" + conn.name + "}"


def _eq_operand(node: Node, language: Language) -> str:
    # prefix-shaped operands would swallow the infix (in)equality when
    # reparsed, so they get explicit parentheses
    text = print_node(node, language)
    if isinstance(node, (Not, Quant, Lam)):
        return f"({text})"
    return text


def _bindings(bindings, language: Language) -> str:
    parts = []
    for name, typ in bindings:
        if typ is None:
            parts.append(name)
        else:
            parts.append(f"{name}: {print_type(typ, language)}")
    return "[" + ",".join(parts) + "]"


def print_node(node: Node, language: Language) -> str:
    """Render a formula or term in the given dialect."""
    thf = language is Language.THF
    if isinstance(node, Var):
        return node.name
    if isinstance(node, NumberLit):
        return node.lexeme
    if isinstance(node, DistinctObj):
        escaped = node.text.replace("\\", "\\\\").replace('"', '\\"')
        return f'"{escaped}"'
    if isinstance(node, Bool):
        return "$true" if node.value else "$false"
    if isinstance(node, TupleTerm):
        return "[" + ",".join(print_node(x, language) for x in node.items) + "]"
    if isinstance(node, Appl):
        name = atom_name(node.name)
        if not node.args:
            return name
        if thf:
            args = " @ ".join(print_node(a, language) for a in node.args)
            return f"({name} @ {args})"
        return name + "(" + ",".join(print_node(a, language) for a in node.args) + ")"
    if isinstance(node, Eq):
        op = "!=" if node.negated else "="
        return (f"({_eq_operand(node.lhs, language)} {op} "
                f"{_eq_operand(node.rhs, language)})")
    if isinstance(node, Not):
        return f"~ {print_node(node.body, language)}"
    if isinstance(node, Binary):
        return (f"({print_node(node.lhs, language)} {node.op} "
                f"{print_node(node.rhs, language)})")
    if isinstance(node, Quant):
        return (f"{node.kind} {_bindings(node.bindings, language)} : "
                f"{print_node(node.body, language)}")
    if isinstance(node, Lam):
        return (f"^ {_bindings(node.bindings, language)} : "
                f"{print_node(node.body, language)}")
    if isinstance(node, Apply):
        spine = [node.arg]
        fn = node.fn
        while isinstance(fn, Apply):
            spine.append(fn.arg)
            fn = fn.fn
        spine.append(fn)
        parts = [print_node(x, language) for x in reversed(spine)]
        return "(" + " @ ".join(parts) + ")"
    if isinstance(node, NcApply):
        conn = print_connective(node.conn)
        if not node.args:
            return conn
        if thf:
            args = " @ ".join(print_node(a, language) for a in node.args)
            return f"({conn} @ {args})"
        return conn + "(" + ",".join(print_node(a, language) for a in node.args) + ")"
    if isinstance(node, Ite):
        parts = [print_node(x, language) for x in (node.cond, node.then, node.els)]
        return "$ite(" + ",".join(parts) + ")"
    if isinstance(node, Let):
        typings = ",".join(f"{atom_name(s)}: {print_type(t, language)}"
                           for s, t in node.types)
        defs = ",".join(f"{print_node(lhs, language)} := {print_node(rhs, language)}"
                        for lhs, rhs in node.defs)
        if len(node.types) != 1:
            typings = f"[{typings}]"
        if len(node.defs) != 1:
            defs = f"[{defs}]"
        return f"$let({typings},{defs},{print_node(node.body, language)})"
    raise TypeError(f"unknown node {node!r}")


def print_prop_value(value: PropValue) -> str:
    if isinstance(value, PlainValue):
        return print_node(value.term, Language.TFF)
    if isinstance(value, ListValue):
        items = []
        for item in value.items:
            if isinstance(item, PlainItem):
                items.append(print_prop_value(item.value))
            elif isinstance(item, PairItem):
                key = print_node(item.key, Language.TFF)
                if item.key_is_index:
                    key = f"[#{key}]"
                items.append(f"{key} == {print_prop_value(item.value)}")
        return "[ " + ", ".join(items) + " ]"
    raise TypeError(f"unknown property value {value!r}")


def print_logic_spec(spec: LogicSpec) -> str:
    if spec.bare_value is not None:
        return f"{spec.logic_name} == {print_node(spec.bare_value, Language.TFF)}"
    props = ", ".join(f"{p.name} == {print_prop_value(p.value)}"
                      for p in spec.properties)
    return f"{spec.logic_name} == [ {props} ]"


def print_unit(unit: AnnotatedFormula) -> str:
    """Render one annotated formula as a `.`-terminated clause."""
    if isinstance(unit.formula, TypeDecl):
        payload = (f"{atom_name(unit.formula.symbol)}: "
                   f"{print_type(unit.formula.typ, unit.language)}")
    elif isinstance(unit.formula, LogicSpec):
        payload = print_logic_spec(unit.formula)
    else:
        payload = print_node(unit.formula, unit.language)
    head = f"{unit.language.value}({atom_name(unit.name)},{unit.role},"
    tail = ""
    if unit.source is not None:
        tail += f",{unit.source}"
        if unit.useful_info is not None:
            tail += f",{unit.useful_info}"
    one_line = f"{head}{payload}{tail})."
    if len(one_line) <= 78 and "\n" not in one_line:
        return one_line
    lines = [head, f"    {payload}"]
    if unit.source is not None:
        lines[-1] += ","
        lines.append(f"    {unit.source}")
        if unit.useful_info is not None:
            lines[-1] += ","
            lines.append(f"    {unit.useful_info}")
    lines[-1] += " )."
    return "\n".join(lines)


def print_problem(problem: Problem, header: list[str] | None = None) -> str:
    """Render a whole problem, one unit per clause, optional comment header."""
    chunks = []
    if header:
        chunks.extend(header)
        chunks.append("")
    chunks.extend(print_unit(u) for u in problem)
    return "\n".join(chunks) + "\n"
