"""Abstract syntax for TPTP problems in the FOF/TFF/TXF/THF dialects and
their non-classical extensions TXN/THN.

There is a single node hierarchy for formulas and terms.  The extended
first-order languages let formulas occur in term positions and Boolean
variables in formula positions, so the classical formula/term split cannot
be maintained syntactically; whether an application is a predicate atom or
a function term is a typing question, not a parsing one.

All nodes are immutable (frozen dataclasses) and hashable, so they can be
shared freely between threads.  Equality is structural and ignores source
positions and the opaque annotation fields of annotated formulas.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from typing import Iterator, Optional, Union

Pos = tuple[int, int]  # 1-based (line, column)


class Language(enum.Enum):
    TFF = "tff"
    THF = "thf"


class BaseRole(enum.Enum):
    AXIOM = "axiom"
    HYPOTHESIS = "hypothesis"
    DEFINITION = "definition"
    LEMMA = "lemma"
    THEOREM = "theorem"
    ASSUMPTION = "assumption"
    CONJECTURE = "conjecture"
    NEGATED_CONJECTURE = "negated_conjecture"
    TYPE = "type"
    LOGIC = "logic"


# Roles that behave like axioms (assumed true when reasoning).
AXIOM_LIKE = frozenset({
    BaseRole.AXIOM,
    BaseRole.HYPOTHESIS,
    BaseRole.DEFINITION,
    BaseRole.LEMMA,
    BaseRole.THEOREM,
    BaseRole.ASSUMPTION,
    BaseRole.NEGATED_CONJECTURE,
})


class Subrole(enum.Enum):
    LOCAL = "local"
    GLOBAL = "global"


@dataclass(frozen=True)
class Role:
    base: BaseRole
    subrole: Optional[Subrole] = None

    def __str__(self) -> str:
        if self.subrole is None:
            return self.base.value
        return f"{self.base.value}-{self.subrole.value}"

    def allows_subrole(self) -> bool:
        return self.base in AXIOM_LIKE or self.base is BaseRole.CONJECTURE


# ---------------------------------------------------------------------------
# Types


@dataclass(frozen=True)
class Type:
    pass


@dataclass(frozen=True)
class BaseType(Type):
    name: str  # "$o", "$i", "$int", "$rat", "$real", "$tType" or a user name


@dataclass(frozen=True)
class MappingType(Type):
    """Uncurried TFF mapping type: (a1 * ... * an) > result."""

    args: tuple[Type, ...]
    result: Type


@dataclass(frozen=True)
class CurriedType(Type):
    """THF arrow type: arg > result."""

    arg: Type
    result: Type


TYPE_O = BaseType("$o")
TYPE_I = BaseType("$i")
TYPE_INT = BaseType("$int")
TYPE_RAT = BaseType("$rat")
TYPE_REAL = BaseType("$real")
TYPE_TTYPE = BaseType("$tType")

DEFINED_TYPES = frozenset({"$o", "$i", "$int", "$rat", "$real", "$tType"})

NUMBER_TYPE = {"int": TYPE_INT, "rat": TYPE_RAT, "real": TYPE_REAL}


def uncurry(t: Type) -> tuple[tuple[Type, ...], Type]:
    """Flatten a type into (argument types, final result type)."""
    if isinstance(t, MappingType):
        inner_args, result = uncurry(t.result)
        return t.args + inner_args, result
    if isinstance(t, CurriedType):
        inner_args, result = uncurry(t.result)
        return (t.arg,) + inner_args, result
    return (), t


def curry(args: tuple[Type, ...], result: Type) -> Type:
    out = result
    for a in reversed(args):
        out = CurriedType(a, out)
    return out


# ---------------------------------------------------------------------------
# Formulas and terms


@dataclass(frozen=True)
class Node:
    pass


@dataclass(frozen=True)
class Var(Node):
    """Variable occurrence; a Boolean-typed variable may stand for a formula."""

    name: str


@dataclass(frozen=True)
class Appl(Node):
    """Applied symbol, or a constant when args is empty.

    Covers predicate atoms and function terms alike; the distinction is
    recovered from the signature, not the syntax.
    """

    name: str
    args: tuple[Node, ...] = ()


@dataclass(frozen=True)
class NumberLit(Node):
    """Numeric literal kept as its source lexeme ('27', '43/92', '-99.66')."""

    kind: str  # "int" | "rat" | "real"
    lexeme: str


@dataclass(frozen=True)
class DistinctObj(Node):
    text: str  # content without the double quotes


@dataclass(frozen=True)
class TupleTerm(Node):
    """[]-ed tuple term, e.g. an agent list used as a parameter value."""

    items: tuple[Node, ...]


@dataclass(frozen=True)
class Bool(Node):
    value: bool


@dataclass(frozen=True)
class Eq(Node):
    lhs: Node
    rhs: Node
    negated: bool = False


@dataclass(frozen=True)
class Not(Node):
    body: Node


BINARY_OPS = ("&", "|", "=>", "<=", "<=>", "<~>")
ASSOCIATIVE_OPS = frozenset({"&", "|"})


@dataclass(frozen=True)
class Binary(Node):
    op: str
    lhs: Node
    rhs: Node


Binding = tuple[str, Optional[Type]]


@dataclass(frozen=True)
class Quant(Node):
    kind: str  # "!" | "?"
    bindings: tuple[Binding, ...]
    body: Node


@dataclass(frozen=True)
class Lam(Node):
    """THF lambda abstraction."""

    bindings: tuple[Binding, ...]
    body: Node


@dataclass(frozen=True)
class Apply(Node):
    """THF explicit application (fn @ arg)."""

    fn: Node
    arg: Node


class Surface(enum.Enum):
    LONG = "long"        # {$name} or {$name(params)}
    BOX = "box"          # [.] or [#i]
    DIAMOND = "diamond"  # <.> or <#i>
    SLASH = "slash"      # /.\ or /#i\


@dataclass(frozen=True)
class NcConnective:
    """Non-classical connective occurrence.

    For the short forms the name is None until resolution against a logic
    specification.  Index terms live on the meta level: an index constant
    `#c` is stored as the plain term `c` but never identified with an
    object-level symbol of the same spelling.
    """

    name: Optional[str]  # "$..." or "$$..." symbol, None for short forms
    index: Optional[Node] = None
    params: tuple[tuple[str, Node], ...] = ()
    surface: Surface = Surface.LONG
    pos: Optional[Pos] = field(default=None, compare=False)


@dataclass(frozen=True)
class NcApply(Node):
    conn: NcConnective
    args: tuple[Node, ...]


@dataclass(frozen=True)
class Ite(Node):
    """$ite(c,t,e): recognized by the grammar, rejected by semantic passes."""

    cond: Node
    then: Node
    els: Node
    pos: Optional[Pos] = field(default=None, compare=False)


@dataclass(frozen=True)
class Let(Node):
    """$let(types,defs,body): recognized by the grammar, rejected later."""

    types: tuple[tuple[str, Type], ...]
    defs: tuple[tuple[Node, Node], ...]
    body: Node
    pos: Optional[Pos] = field(default=None, compare=False)


# ---------------------------------------------------------------------------
# Logic specifications (role `logic` payloads)


@dataclass(frozen=True)
class PropValue:
    pass


@dataclass(frozen=True)
class PlainValue(PropValue):
    term: Node


@dataclass(frozen=True)
class ListItem:
    pass


@dataclass(frozen=True)
class PlainItem(ListItem):
    value: PropValue


@dataclass(frozen=True)
class PairItem(ListItem):
    """`key == value` entry; key_is_index marks `[#i] == value` keys."""

    key: Node
    value: PropValue
    key_is_index: bool = False
    pos: Optional[Pos] = field(default=None, compare=False)


@dataclass(frozen=True)
class ListValue(PropValue):
    items: tuple[ListItem, ...]

    def default(self) -> Optional[PropValue]:
        """Leading plain entry, the default for all unlisted cases."""
        if self.items and isinstance(self.items[0], PlainItem):
            return self.items[0].value
        return None


@dataclass(frozen=True)
class LogicProperty:
    name: str
    value: PropValue
    pos: Optional[Pos] = field(default=None, compare=False)


@dataclass(frozen=True)
class LogicSpec:
    logic_name: str
    properties: tuple[LogicProperty, ...]
    pos: Optional[Pos] = field(default=None, compare=False)
    bare_value: Optional[Node] = None  # `$logic == term` form without a list

    def property(self, name: str) -> Optional[LogicProperty]:
        for prop in self.properties:
            if prop.name == name:
                return prop
        return None


@dataclass(frozen=True)
class TypeDecl:
    """Payload of a `type` role unit: symbol : type."""

    symbol: str
    typ: Type


Payload = Union[Node, LogicSpec, TypeDecl]


@dataclass(frozen=True)
class AnnotatedFormula:
    """One TPTP unit.  source/useful_info are kept verbatim and are not part
    of structural equality, nor are positions or the raw source text."""

    language: Language
    name: str
    role: Role
    formula: Payload
    source: Optional[str] = field(default=None, compare=False)
    useful_info: Optional[str] = field(default=None, compare=False)
    pos: Optional[Pos] = field(default=None, compare=False)
    raw: Optional[str] = field(default=None, compare=False)

    def is_logic(self) -> bool:
        return self.role.base is BaseRole.LOGIC

    def is_type(self) -> bool:
        return self.role.base is BaseRole.TYPE


Problem = list[AnnotatedFormula]


# ---------------------------------------------------------------------------
# Traversal utilities


def children(node: Node) -> Iterator[Node]:
    """Direct subnodes, not descending into binders' binding lists."""
    if isinstance(node, Appl):
        yield from node.args
    elif isinstance(node, TupleTerm):
        yield from node.items
    elif isinstance(node, Eq):
        yield node.lhs
        yield node.rhs
    elif isinstance(node, Not):
        yield node.body
    elif isinstance(node, Binary):
        yield node.lhs
        yield node.rhs
    elif isinstance(node, (Quant, Lam)):
        yield node.body
    elif isinstance(node, Apply):
        yield node.fn
        yield node.arg
    elif isinstance(node, NcApply):
        yield from node.args
        if node.conn.index is not None:
            yield node.conn.index
        for _, value in node.conn.params:
            yield value
    elif isinstance(node, Ite):
        yield node.cond
        yield node.then
        yield node.els
    elif isinstance(node, Let):
        for _, rhs in node.defs:
            yield rhs
        yield node.body


def walk(node: Node) -> Iterator[Node]:
    """All nodes of the tree in depth-first pre-order."""
    yield node
    for child in children(node):
        yield from walk(child)


def free_variables(node: Node) -> frozenset[str]:
    """Variables of a formula or term with no enclosing binder."""
    if isinstance(node, Var):
        return frozenset({node.name})
    if isinstance(node, (Quant, Lam)):
        bound = {name for name, _ in node.bindings}
        return frozenset(free_variables(node.body) - bound)
    out: set[str] = set()
    for child in children(node):
        out |= free_variables(child)
    return frozenset(out)


@dataclass(frozen=True)
class NcOccurrence:
    conn: NcConnective
    unit: str
    pos: Optional[Pos]


def collect_nc_connectives(problem: Problem) -> list[NcOccurrence]:
    """Every non-classical connective application, in source order."""
    out: list[NcOccurrence] = []
    for unit in problem:
        if not isinstance(unit.formula, Node):
            continue
        for node in walk(unit.formula):
            if isinstance(node, NcApply):
                out.append(NcOccurrence(node.conn, unit.name, node.conn.pos))
    return out


def map_nodes(node: Node, fn) -> Node:
    """Rebuild the tree bottom-up, applying fn to every transformed node."""
    if isinstance(node, Appl):
        new: Node = replace(node, args=tuple(map_nodes(a, fn) for a in node.args))
    elif isinstance(node, TupleTerm):
        new = replace(node, items=tuple(map_nodes(a, fn) for a in node.items))
    elif isinstance(node, Eq):
        new = replace(node, lhs=map_nodes(node.lhs, fn), rhs=map_nodes(node.rhs, fn))
    elif isinstance(node, Not):
        new = replace(node, body=map_nodes(node.body, fn))
    elif isinstance(node, Binary):
        new = replace(node, lhs=map_nodes(node.lhs, fn), rhs=map_nodes(node.rhs, fn))
    elif isinstance(node, (Quant, Lam)):
        new = replace(node, body=map_nodes(node.body, fn))
    elif isinstance(node, Apply):
        new = replace(node, fn=map_nodes(node.fn, fn), arg=map_nodes(node.arg, fn))
    elif isinstance(node, NcApply):
        new = replace(node, args=tuple(map_nodes(a, fn) for a in node.args))
    elif isinstance(node, Ite):
        new = replace(node, cond=map_nodes(node.cond, fn),
                      then=map_nodes(node.then, fn), els=map_nodes(node.els, fn))
    elif isinstance(node, Let):
        new = replace(node, defs=tuple((lhs, map_nodes(rhs, fn)) for lhs, rhs in node.defs),
                      body=map_nodes(node.body, fn))
    else:
        new = node
    return fn(new)


def _fresh_name(base: str, avoid: set[str]) -> str:
    i = 0
    name = base
    while name in avoid:
        i += 1
        name = f"{base}_{i}"
    return name


def substitute(node: Node, subst: dict[str, Node]) -> Node:
    """Capture-avoiding substitution of variables by terms."""
    if not subst:
        return node
    if isinstance(node, Var):
        return subst.get(node.name, node)
    if isinstance(node, (Quant, Lam)):
        live = {v: t for v, t in subst.items()
                if v not in {n for n, _ in node.bindings}}
        if not live:
            return node
        clash = set()
        for value in live.values():
            clash |= free_variables(value)
        bindings = list(node.bindings)
        body = node.body
        for i, (name, typ) in enumerate(bindings):
            if name in clash:
                taken = clash | set(live) | free_variables(body)
                fresh = _fresh_name(name, taken)
                body = substitute(body, {name: Var(fresh)})
                bindings[i] = (fresh, typ)
        body = substitute(body, live)
        return replace(node, bindings=tuple(bindings), body=body)
    rebuilt = _substitute_children(node, subst)
    return rebuilt


def _substitute_children(node: Node, subst: dict[str, Node]) -> Node:
    if isinstance(node, Appl):
        return replace(node, args=tuple(substitute(a, subst) for a in node.args))
    if isinstance(node, TupleTerm):
        return replace(node, items=tuple(substitute(a, subst) for a in node.items))
    if isinstance(node, Eq):
        return replace(node, lhs=substitute(node.lhs, subst), rhs=substitute(node.rhs, subst))
    if isinstance(node, Not):
        return replace(node, body=substitute(node.body, subst))
    if isinstance(node, Binary):
        return replace(node, lhs=substitute(node.lhs, subst), rhs=substitute(node.rhs, subst))
    if isinstance(node, Apply):
        return replace(node, fn=substitute(node.fn, subst), arg=substitute(node.arg, subst))
    if isinstance(node, NcApply):
        return replace(node, args=tuple(substitute(a, subst) for a in node.args))
    if isinstance(node, Ite):
        return replace(node, cond=substitute(node.cond, subst),
                       then=substitute(node.then, subst), els=substitute(node.els, subst))
    if isinstance(node, Let):
        return replace(node, defs=tuple((lhs, substitute(rhs, subst)) for lhs, rhs in node.defs),
                       body=substitute(node.body, subst))
    return node


def beta_normalize(node: Node) -> Node:
    """Reduce all beta redexes (lambda applied via @)."""
    while True:
        reduced = _beta_step(node)
        if reduced == node:
            return node
        node = reduced


def _beta_step(node: Node) -> Node:
    def step(n: Node) -> Node:
        if isinstance(n, Apply) and isinstance(n.fn, Lam):
            lam = n.fn
            (name, _typ), rest = lam.bindings[0], lam.bindings[1:]
            body = substitute(lam.body, {name: n.arg})
            if rest:
                return Lam(rest, body)
            return body
        return n

    return map_nodes(node, step)
