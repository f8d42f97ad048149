"""Validation of `$modal`-family logic specifications and problem-level
checks: defaulting and override resolution into a total semantic profile,
canonicalization of short-form connectives, local/global role
classification, and signature inference with TFF default typing."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from typing import Optional

from .syntax import (
    AnnotatedFormula,
    Appl,
    Apply,
    BaseRole,
    BaseType,
    Binary,
    Bool,
    DistinctObj,
    Eq,
    Ite,
    Lam,
    Let,
    ListValue,
    LogicSpec,
    NcApply,
    NcConnective,
    Node,
    Not,
    NumberLit,
    PairItem,
    PlainItem,
    PlainValue,
    Pos,
    Problem,
    PropValue,
    Quant,
    Role,
    Subrole,
    Surface,
    TupleTerm,
    Type,
    TypeDecl,
    TYPE_I,
    TYPE_O,
    NUMBER_TYPE,
    Var,
    children,
    collect_nc_connectives,
    map_nodes,
    uncurry,
    walk,
)


class SpecErrorKind(enum.Enum):
    UNKNOWN_LOGIC_NAME = "UnknownLogicName"
    UNKNOWN_PROPERTY = "UnknownProperty"
    UNKNOWN_VALUE = "UnknownValue"
    MISSING_LOGIC_SPEC = "MissingLogicSpec"
    DUPLICATE_LOGIC_SPEC = "DuplicateLogicSpec"
    BAD_INDEX = "BadIndex"
    BAD_OVERRIDE_KEY = "BadOverrideKey"
    CONNECTIVE_NOT_IN_FAMILY = "ConnectiveNotInFamily"
    UNSUPPORTED_CONSTRUCT = "UnsupportedConstruct"


class SpecError(Exception):
    def __init__(self, kind: SpecErrorKind, message: str,
                 pos: Optional[Pos] = None, filename: str = "<input>"):
        self.kind = kind
        self.message = message
        self.pos = pos
        self.filename = filename
        super().__init__(self.diagnostic())

    def diagnostic(self) -> str:
        line, col = self.pos if self.pos else (0, 0)
        return f"{self.filename}:{line}:{col}: {self.kind.value}: {self.message}"


class Family(enum.Enum):
    MODAL = "$modal"
    ALETHIC = "$alethic_modal"
    DEONTIC = "$deontic_modal"
    EPISTEMIC = "$epistemic_modal"


class Rigidity(enum.Enum):
    RIGID = "$rigid"
    FLEXIBLE = "$flexible"


class DomainKind(enum.Enum):
    CONSTANT = "$constant"
    VARYING = "$varying"
    CUMULATIVE = "$cumulative"
    DECREASING = "$decreasing"


class ModalSystem(enum.Enum):
    K = "K"
    KB = "KB"
    K4 = "K4"
    K5 = "K5"
    K45 = "K45"
    KB5 = "KB5"
    D = "D"
    DB = "DB"
    D4 = "D4"
    D5 = "D5"
    D45 = "D45"
    T = "T"
    B = "B"
    S4 = "S4"
    S5 = "S5"
    S5U = "S5U"


class ModalAxiom(enum.Enum):
    K = "K"
    T = "T"
    B = "B"
    D = "D"
    FOUR = "4"
    FIVE = "5"
    CD = "CD"
    BOX_M = "BoxM"
    C4 = "C4"
    C = "C"


_AX = ModalAxiom
SYSTEM_AXIOMS: dict[ModalSystem, frozenset[ModalAxiom]] = {
    ModalSystem.K: frozenset({_AX.K}),
    ModalSystem.KB: frozenset({_AX.K, _AX.B}),
    ModalSystem.K4: frozenset({_AX.K, _AX.FOUR}),
    ModalSystem.K5: frozenset({_AX.K, _AX.FIVE}),
    ModalSystem.K45: frozenset({_AX.K, _AX.FOUR, _AX.FIVE}),
    ModalSystem.KB5: frozenset({_AX.K, _AX.B, _AX.FIVE}),
    ModalSystem.D: frozenset({_AX.K, _AX.D}),
    ModalSystem.DB: frozenset({_AX.K, _AX.D, _AX.B}),
    ModalSystem.D4: frozenset({_AX.K, _AX.D, _AX.FOUR}),
    ModalSystem.D5: frozenset({_AX.K, _AX.D, _AX.FIVE}),
    ModalSystem.D45: frozenset({_AX.K, _AX.D, _AX.FOUR, _AX.FIVE}),
    ModalSystem.T: frozenset({_AX.K, _AX.T}),
    ModalSystem.B: frozenset({_AX.K, _AX.T, _AX.B}),
    ModalSystem.S4: frozenset({_AX.K, _AX.T, _AX.FOUR}),
    ModalSystem.S5: frozenset({_AX.K, _AX.T, _AX.FIVE}),
    ModalSystem.S5U: frozenset({_AX.K, _AX.T, _AX.FIVE}),
}


class FrameCondition(enum.Enum):
    UNIVERSAL = "universal"
    REFLEXIVE = "reflexive"
    SYMMETRIC = "symmetric"
    SERIAL = "serial"
    TRANSITIVE = "transitive"
    EUCLIDEAN = "euclidean"
    FUNCTIONAL = "functional"
    SHIFT_REFLEXIVE = "shift_reflexive"
    DENSE = "dense"
    CONFLUENT = "confluent"


AXIOM_CONDITIONS: dict[ModalAxiom, tuple[FrameCondition, ...]] = {
    ModalAxiom.K: (),
    ModalAxiom.T: (FrameCondition.REFLEXIVE,),
    ModalAxiom.B: (FrameCondition.SYMMETRIC,),
    ModalAxiom.D: (FrameCondition.SERIAL,),
    ModalAxiom.FOUR: (FrameCondition.TRANSITIVE,),
    ModalAxiom.FIVE: (FrameCondition.EUCLIDEAN,),
    ModalAxiom.CD: (FrameCondition.FUNCTIONAL,),
    ModalAxiom.BOX_M: (FrameCondition.SHIFT_REFLEXIVE,),
    ModalAxiom.C4: (FrameCondition.DENSE,),
    ModalAxiom.C: (FrameCondition.CONFLUENT,),
}

_CONDITION_ORDER = list(FrameCondition)


@dataclass(frozen=True)
class ModalitySpec:
    """Connective semantics for one index: a named system or an axiom set.

    The axiom set always contains K (the languages are normal), and is the
    system's expansion when a system name was given.  S5U is S5 over a
    universal accessibility relation.
    """

    axioms: frozenset[ModalAxiom]
    system: Optional[ModalSystem] = None
    universal: bool = False

    @staticmethod
    def from_system(system: ModalSystem) -> "ModalitySpec":
        return ModalitySpec(SYSTEM_AXIOMS[system], system=system,
                            universal=system is ModalSystem.S5U)

    @staticmethod
    def from_axioms(axioms: frozenset[ModalAxiom]) -> "ModalitySpec":
        return ModalitySpec(axioms | {ModalAxiom.K})

    def frame_conditions(self) -> list[FrameCondition]:
        """Accessibility-relation conditions induced by the axiom set."""
        out = set()
        for axiom in self.axioms:
            out.update(AXIOM_CONDITIONS[axiom])
        if self.universal:
            out.add(FrameCondition.UNIVERSAL)
        return sorted(out, key=_CONDITION_ORDER.index)


# Canonical box/diamond long-form names per family, and which connective
# names each family admits.  The generic $modal family accepts the
# specialized names as well (the reference committee problem applies
# {$necessary} under plain $modal), normalizing them to $box/$dia.
BOX_NAMES = ("$box", "$necessary", "$obligatory", "$knows")
DIA_NAMES = ("$dia", "$possible", "$permissible")

_FAMILY_INFO = {
    Family.MODAL: ("$box", "$dia", frozenset(BOX_NAMES), frozenset(DIA_NAMES),
                   frozenset()),
    Family.ALETHIC: ("$necessary", "$possible",
                     frozenset({"$box", "$necessary"}),
                     frozenset({"$dia", "$possible"}), frozenset()),
    Family.DEONTIC: ("$obligatory", "$permissible",
                     frozenset({"$box", "$obligatory"}),
                     frozenset({"$dia", "$permissible"}), frozenset()),
    Family.EPISTEMIC: ("$knows", "$dia",
                       frozenset({"$box", "$knows"}),
                       frozenset({"$dia"}),
                       frozenset({"$believes", "$common"})),
}


IndexKey = Optional[str]


def index_key(term: Optional[Node]) -> IndexKey:
    """Canonical dictionary key for a meta-level index term."""
    if term is None:
        return None
    if isinstance(term, Appl) and not term.args:
        return term.name
    if isinstance(term, NumberLit):
        return term.lexeme
    raise SpecError(SpecErrorKind.BAD_INDEX,
                    "index must be a constant, a number, or a defined constant")


def valid_index_term(term: Node) -> bool:
    return (isinstance(term, NumberLit)
            or (isinstance(term, Appl) and not term.args))


@dataclass
class ModalSemantics:
    """Fully resolved semantic profile of a `$modal`-family specification.

    Every lookup is total: overrides are consulted first, then the default.
    Instances are not mutated after validation.
    """

    family: Family
    rigidity_default: Rigidity = Rigidity.RIGID
    rigidity_overrides: dict[str, Rigidity] = field(default_factory=dict)
    domain_default: DomainKind = DomainKind.CONSTANT
    domain_overrides: dict[str, DomainKind] = field(default_factory=dict)
    modality_default: ModalitySpec = ModalitySpec.from_system(ModalSystem.K)
    modality_overrides: dict[IndexKey, ModalitySpec] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)

    def rigidity(self, symbol: str) -> Rigidity:
        return self.rigidity_overrides.get(symbol, self.rigidity_default)

    def domain_kind(self, type_name: str) -> DomainKind:
        return self.domain_overrides.get(type_name, self.domain_default)

    def modality(self, index: IndexKey) -> ModalitySpec:
        return self.modality_overrides.get(index, self.modality_default)

    @property
    def box_name(self) -> str:
        return _FAMILY_INFO[self.family][0]

    @property
    def dia_name(self) -> str:
        return _FAMILY_INFO[self.family][1]

    def accepts_box(self, name: str) -> bool:
        return name in _FAMILY_INFO[self.family][2]

    def accepts_dia(self, name: str) -> bool:
        return name in _FAMILY_INFO[self.family][3]

    def accepts_extra(self, name: str) -> bool:
        return name in _FAMILY_INFO[self.family][4]


_FAMILY_BY_NAME = {f.value: f for f in Family}
_RIGIDITY_BY_NAME = {r.value: r for r in Rigidity}
_DOMAIN_BY_NAME = {d.value: d for d in DomainKind}
_SYSTEM_BY_NAME = {f"$modal_system_{s.value}": s for s in ModalSystem}
_AXIOM_BY_NAME = {f"$modal_axiom_{a.value}": a for a in ModalAxiom}


def _plain_name(value: PropValue, what: str, pos: Optional[Pos],
                filename: str = "<input>") -> str:
    if isinstance(value, PlainValue) and isinstance(value.term, Appl) \
            and not value.term.args:
        return value.term.name
    raise SpecError(SpecErrorKind.UNKNOWN_VALUE, f"expected {what}", pos,
                    filename)


def _split_list(value: PropValue) -> tuple[list[PlainItem], list[PairItem]]:
    assert isinstance(value, ListValue)
    plains = [i for i in value.items if isinstance(i, PlainItem)]
    pairs = [i for i in value.items if isinstance(i, PairItem)]
    return plains, pairs


def validate_spec(spec: LogicSpec,
                  known_symbols: Optional[set[str]] = None,
                  known_types: Optional[set[str]] = None,
                  filename: str = "<input>") -> ModalSemantics:
    """Check a raw logic specification and resolve it into a total profile.

    When symbol/type sets are supplied (from a surrounding problem), override
    keys must name them; a standalone specification is checked without that
    restriction.
    """
    def err(kind: SpecErrorKind, message: str, pos: Optional[Pos] = None) -> SpecError:
        return SpecError(kind, message, pos or spec.pos, filename)

    family = _FAMILY_BY_NAME.get(spec.logic_name)
    if family is None:
        raise err(SpecErrorKind.UNKNOWN_LOGIC_NAME,
                  f"unknown logic name '{spec.logic_name}'")
    if spec.bare_value is not None:
        raise err(SpecErrorKind.UNKNOWN_VALUE,
                  f"'{spec.logic_name}' expects a property list")

    sem = ModalSemantics(family)
    seen: set[str] = set()
    for prop in spec.properties:
        if prop.name in seen:
            raise err(SpecErrorKind.UNKNOWN_PROPERTY,
                      f"property '{prop.name}' given more than once", prop.pos)
        seen.add(prop.name)
        if prop.name == "$constants":
            default, overrides = _defaulted(
                prop, _RIGIDITY_BY_NAME, "'$rigid' or '$flexible'",
                Rigidity.RIGID, sem.warnings, filename)
            sem.rigidity_default = default
            for key_item, value in overrides:
                name = _override_symbol(key_item, filename)
                if known_symbols is not None and name not in known_symbols:
                    raise SpecError(SpecErrorKind.BAD_OVERRIDE_KEY,
                                    f"'{name}' is not a known symbol",
                                    key_item.pos, filename)
                sem.rigidity_overrides[name] = value
        elif prop.name == "$quantification":
            default, overrides = _defaulted(
                prop, _DOMAIN_BY_NAME, "a quantification domain kind",
                DomainKind.CONSTANT, sem.warnings, filename)
            sem.domain_default = default
            for key_item, value in overrides:
                name = _override_symbol(key_item, filename)
                if name == "$o":
                    raise SpecError(SpecErrorKind.BAD_OVERRIDE_KEY,
                                    "quantification over $o cannot be restricted",
                                    key_item.pos, filename)
                if known_types is not None and name not in known_types:
                    raise SpecError(SpecErrorKind.BAD_OVERRIDE_KEY,
                                    f"'{name}' is not a known type",
                                    key_item.pos, filename)
                sem.domain_overrides[name] = value
        elif prop.name == "$modalities":
            _validate_modalities(prop, sem, filename)
        elif prop.name.startswith("$$"):
            sem.warnings.append(
                f"system property '{prop.name}' is not checked")
        else:
            raise err(SpecErrorKind.UNKNOWN_PROPERTY,
                      f"unknown property '{prop.name}'", prop.pos)
    for name, fallback in (("$constants", "$rigid"),
                           ("$quantification", "$constant"),
                           ("$modalities", "$modal_system_K")):
        if name not in seen:
            sem.warnings.append(f"{name} not given; defaulting to {fallback}")
    return sem


def _defaulted(prop, vocabulary: dict, what: str, fallback,
               warnings: list[str], filename: str):
    """Interpret a `default + overrides` property value."""
    def lookup(value: PropValue, pos) -> object:
        name = _plain_name(value, what, pos, filename)
        if name not in vocabulary:
            raise SpecError(SpecErrorKind.UNKNOWN_VALUE,
                            f"'{name}' is not {what}", pos, filename)
        return vocabulary[name]

    if isinstance(prop.value, PlainValue):
        return lookup(prop.value, prop.pos), []
    default = None
    overrides = []
    for i, item in enumerate(prop.value.items):
        if isinstance(item, PlainItem):
            if i != 0:
                raise SpecError(SpecErrorKind.UNKNOWN_VALUE,
                                f"{prop.name} admits a single leading default",
                                prop.pos, filename)
            default = lookup(item.value, prop.pos)
        else:
            assert isinstance(item, PairItem)
            if item.key_is_index:
                raise SpecError(SpecErrorKind.BAD_OVERRIDE_KEY,
                                f"{prop.name} overrides are keyed by name, "
                                f"not index", item.pos, filename)
            overrides.append((item, lookup(item.value, item.pos)))
    if default is None:
        default = fallback
        warnings.append(f"{prop.name} list has no leading default; "
                        f"assuming {fallback.value}")
    return default, overrides


def _override_symbol(pair: PairItem, filename: str) -> str:
    key = pair.key
    if isinstance(key, Appl) and not key.args:
        return key.name
    raise SpecError(SpecErrorKind.BAD_OVERRIDE_KEY,
                    "override key must be a plain symbol", pair.pos, filename)


def _axiom_named(value: PropValue, pos, filename: str) -> ModalAxiom:
    name = _plain_name(value, "a modal axiom", pos, filename)
    axiom = _AXIOM_BY_NAME.get(name)
    if axiom is None:
        raise SpecError(SpecErrorKind.UNKNOWN_VALUE,
                        f"'{name}' is not a modal axiom", pos, filename)
    return axiom


def _parse_modality(value: PropValue, pos, filename: str) -> ModalitySpec:
    """A modality value: a system name, an axiom name, or an axiom list."""
    if isinstance(value, PlainValue):
        name = _plain_name(value, "a modal system or axiom", pos, filename)
        system = _SYSTEM_BY_NAME.get(name)
        if system is not None:
            return ModalitySpec.from_system(system)
        if name in _AXIOM_BY_NAME:
            return ModalitySpec.from_axioms(frozenset({_AXIOM_BY_NAME[name]}))
        raise SpecError(SpecErrorKind.UNKNOWN_VALUE,
                        f"'{name}' is not a modal system or axiom", pos, filename)
    plains, pairs = _split_list(value)
    if pairs or not plains:
        raise SpecError(SpecErrorKind.UNKNOWN_VALUE,
                        "expected a modal system or a list of modal axioms",
                        pos, filename)
    axioms = frozenset(_axiom_named(item.value, pos, filename)
                       for item in plains)
    return ModalitySpec.from_axioms(axioms)


def _validate_modalities(prop, sem: ModalSemantics, filename: str) -> None:
    value = prop.value
    if isinstance(value, PlainValue):
        sem.modality_default = _parse_modality(value, prop.pos, filename)
        return
    leading: list[PlainItem] = []
    pairs: list[PairItem] = []
    for item in value.items:
        if isinstance(item, PlainItem):
            if pairs:
                raise SpecError(SpecErrorKind.UNKNOWN_VALUE,
                                "$modalities default entries must precede "
                                "index overrides", prop.pos, filename)
            leading.append(item)
        else:
            assert isinstance(item, PairItem)
            pairs.append(item)
    if not leading:
        sem.warnings.append("$modalities has no default; assuming "
                            "$modal_system_K")
    elif len(leading) == 1:
        sem.modality_default = _parse_modality(leading[0].value, prop.pos,
                                               filename)
    else:
        # several leading plain entries form an axiom-scheme list
        axioms = frozenset(_axiom_named(item.value, prop.pos, filename)
                           for item in leading)
        sem.modality_default = ModalitySpec.from_axioms(axioms)
    for pair in pairs:
        if not pair.key_is_index:
            raise SpecError(SpecErrorKind.BAD_OVERRIDE_KEY,
                            "$modalities overrides must use [#index] keys",
                            pair.pos, filename)
        if not valid_index_term(pair.key):
            raise SpecError(SpecErrorKind.BAD_INDEX,
                            "index must be a constant, a number, or a defined "
                            "constant", pair.pos, filename)
        sem.modality_overrides[index_key(pair.key)] = \
            _parse_modality(pair.value, pair.pos, filename)


# ---------------------------------------------------------------------------
# Short-form resolution


def resolve_connective(conn: NcConnective, sem: ModalSemantics,
                       filename: str = "<input>") -> NcConnective:
    """Canonicalize one connective occurrence to its long form."""
    def err(kind: SpecErrorKind, message: str) -> SpecError:
        return SpecError(kind, message, conn.pos, filename)

    if conn.index is not None and not valid_index_term(conn.index):
        raise err(SpecErrorKind.BAD_INDEX,
                  "index must be a constant, a number, or a defined constant")
    if conn.surface is Surface.BOX:
        name = sem.box_name
    elif conn.surface is Surface.DIAMOND:
        name = sem.dia_name
    elif conn.surface is Surface.SLASH:
        if sem.family is not Family.EPISTEMIC:
            raise err(SpecErrorKind.CONNECTIVE_NOT_IN_FAMILY,
                      f"/...\\ short form is not defined in {sem.family.value}")
        name = "$believes"
    else:
        assert conn.name is not None
        if conn.name.startswith("$$"):
            return conn
        if sem.accepts_box(conn.name):
            name = sem.box_name
        elif sem.accepts_dia(conn.name):
            name = sem.dia_name
        elif sem.accepts_extra(conn.name):
            name = conn.name
        else:
            raise err(SpecErrorKind.CONNECTIVE_NOT_IN_FAMILY,
                      f"connective '{conn.name}' is not defined in "
                      f"{sem.family.value}")
    if conn.params and name != "$common":
        raise err(SpecErrorKind.UNKNOWN_PROPERTY,
                  f"'{name}' takes no key-value parameters")
    return replace(conn, name=name, surface=Surface.LONG)


def resolve_short_forms(problem: Problem, sem: ModalSemantics,
                        filename: str = "<input>") -> Problem:
    """Rewrite all non-classical connectives to canonical long forms.

    Box and diamond stay primitive; duality is a semantic fact, not a
    rewrite.  Idempotent, and touches nothing but connective names/surfaces.
    """
    def visit(node: Node) -> Node:
        if isinstance(node, NcApply):
            conn = resolve_connective(node.conn, sem, filename)
            if conn.name in BOX_NAMES or conn.name in DIA_NAMES \
                    or conn.name == "$believes":
                if len(node.args) != 1:
                    raise SpecError(
                        SpecErrorKind.UNSUPPORTED_CONSTRUCT,
                        f"'{conn.name}' takes exactly one argument",
                        conn.pos, filename)
            return NcApply(conn, node.args)
        return node

    out = []
    for unit in problem:
        if isinstance(unit.formula, Node):
            out.append(replace(unit, formula=map_nodes(unit.formula, visit)))
        else:
            out.append(unit)
    return out


def locality_of(role: Role) -> Subrole:
    """Local/global reading of an assumption or conjecture role."""
    if role.base in (BaseRole.TYPE, BaseRole.LOGIC):
        raise ValueError(f"role '{role.base.value}' has no locality")
    if role.subrole is not None:
        return role.subrole
    if role.base in (BaseRole.HYPOTHESIS, BaseRole.CONJECTURE):
        return Subrole.LOCAL
    return Subrole.GLOBAL


# ---------------------------------------------------------------------------
# Signature inference (TFF default typing)


@dataclass
class SymbolInfo:
    name: str
    arg_types: tuple[Type, ...]
    result: Type
    declared: bool

    @property
    def arity(self) -> int:
        return len(self.arg_types)

    @property
    def is_predicate(self) -> bool:
        return self.result == TYPE_O


@dataclass
class Signature:
    """Typed symbols of a problem; undeclared symbols get TFF default types:
    predicates ($i * ... * $i) > $o and functions ($i * ... * $i) > $i."""

    user_types: list[str] = field(default_factory=list)
    symbols: dict[str, SymbolInfo] = field(default_factory=dict)
    literals: list[NumberLit] = field(default_factory=list)
    distinct_objects: list[str] = field(default_factory=list)
    index_terms: dict[IndexKey, Optional[Node]] = field(default_factory=dict)

    @property
    def indices(self) -> list[IndexKey]:
        return list(self.index_terms.keys())

    def base_types_used(self) -> list[str]:
        """Base types appearing in symbol signatures and literals, minus $o."""
        seen: list[str] = []

        def add(name: str) -> None:
            if name != "$o" and name not in seen:
                seen.append(name)

        for info in self.symbols.values():
            for t in info.arg_types + (info.result,):
                for name in _base_names(t):
                    add(name)
        for lit in self.literals:
            add(NUMBER_TYPE[lit.kind].name)
        for name in self.user_types:
            add(name)
        return seen


def _base_names(t: Type) -> list[str]:
    if isinstance(t, BaseType):
        return [t.name]
    args, result = uncurry(t)
    out = []
    for a in args:
        out.extend(_base_names(a))
    out.extend(_base_names(result))
    return out


_FORMULA_SHAPED = (Quant, Binary, Not, Eq, Bool, NcApply, Lam, Ite, Let)


def problem_signature(problem: Problem, filename: str = "<input>") -> Signature:
    """Collect declared symbols and default-type the undeclared ones."""
    sig = Signature()
    uses: dict[str, tuple[int, bool, Optional[Pos]]] = {}  # arity, as_predicate

    for unit in problem:
        if isinstance(unit.formula, TypeDecl):
            decl = unit.formula
            if decl.typ == BaseType("$tType"):
                if decl.symbol not in sig.user_types:
                    sig.user_types.append(decl.symbol)
            else:
                args, result = uncurry(decl.typ)
                sig.symbols[decl.symbol] = SymbolInfo(decl.symbol, args, result, True)

    def record_use(name: str, arity: int, as_predicate: bool, pos) -> None:
        if name.startswith("$"):
            return
        if name in sig.symbols and sig.symbols[name].declared:
            return
        prev = uses.get(name)
        if prev is not None and (prev[0] != arity or prev[1] != as_predicate):
            raise SpecError(
                SpecErrorKind.UNSUPPORTED_CONSTRUCT,
                f"symbol '{name}' is used inconsistently; default typing "
                f"needs one arity and position per symbol", pos, filename)
        uses[name] = (arity, as_predicate, pos)

    def scan(node: Node, as_formula: bool, pos) -> None:
        if isinstance(node, NumberLit):
            if node not in sig.literals:
                sig.literals.append(node)
            return
        if isinstance(node, DistinctObj):
            if node.text not in sig.distinct_objects:
                sig.distinct_objects.append(node.text)
            return
        if isinstance(node, Appl):
            record_use(node.name, len(node.args), as_formula, pos)
            for arg in node.args:
                scan(arg, isinstance(arg, _FORMULA_SHAPED), pos)
            return
        if isinstance(node, NcApply):
            key = index_key(node.conn.index) if node.conn.index is not None else None
            if node.conn.index is not None and key not in sig.index_terms:
                sig.index_terms[key] = node.conn.index
            for arg in node.args:
                scan(arg, True, node.conn.pos or pos)
            return
        if isinstance(node, Eq):
            scan(node.lhs, isinstance(node.lhs, _FORMULA_SHAPED), pos)
            scan(node.rhs, isinstance(node.rhs, _FORMULA_SHAPED), pos)
            return
        if isinstance(node, Apply):
            spine = [node.arg]
            fn = node.fn
            while isinstance(fn, Apply):
                spine.append(fn.arg)
                fn = fn.fn
            if isinstance(fn, Appl) and not fn.args:
                record_use(fn.name, len(spine), as_formula, pos)
            else:
                scan(fn, False, pos)
            for arg in spine:
                scan(arg, isinstance(arg, _FORMULA_SHAPED), pos)
            return
        if isinstance(node, (Quant, Lam)):
            scan(node.body, True, pos)
            return
        if isinstance(node, Not):
            scan(node.body, True, pos)
            return
        if isinstance(node, Binary):
            scan(node.lhs, True, pos)
            scan(node.rhs, True, pos)
            return
        if isinstance(node, (Ite, Let, TupleTerm, Var, Bool)):
            for child in children(node):
                scan(child, isinstance(child, _FORMULA_SHAPED), pos)
            return

    for unit in problem:
        if isinstance(unit.formula, Node):
            scan(unit.formula, True, unit.pos)

    for name, (arity, as_predicate, _pos) in sorted(uses.items()):
        if name in sig.symbols:
            continue
        result = TYPE_O if as_predicate else TYPE_I
        sig.symbols[name] = SymbolInfo(name, (TYPE_I,) * arity, result, False)
    return sig


def problem_indices(problem: Problem) -> list[IndexKey]:
    """Connective indices used in the problem, None for the unindexed box;
    defaults to the single unindexed relation when no connective occurs."""
    keys: list[IndexKey] = []
    seen = False
    for unit in problem:
        if not isinstance(unit.formula, Node):
            continue
        for node in walk(unit.formula):
            if isinstance(node, NcApply):
                seen = True
                key = index_key(node.conn.index)
                if key not in keys:
                    keys.append(key)
    if not seen:
        return [None]
    return sorted(keys, key=lambda k: (k is not None, k or ""))


# ---------------------------------------------------------------------------
# Whole-problem checking


@dataclass
class CheckedProblem:
    """Result of check_problem: resolved semantics (None for a purely
    classical problem), canonicalized units, and accumulated warnings."""

    semantics: Optional[ModalSemantics]
    units: Problem
    signature: Signature
    warnings: list[str] = field(default_factory=list)

    @property
    def logic_unit(self) -> Optional[AnnotatedFormula]:
        for unit in self.units:
            if unit.is_logic():
                return unit
        return None


def check_problem(problem: Problem, filename: str = "<input>") -> CheckedProblem:
    """Locate and validate the logic specification, reject unsupported
    parse-level constructs, and canonicalize connectives."""
    logic_units = [u for u in problem if u.is_logic()]
    occurrences = collect_nc_connectives(problem)

    for unit in problem:
        if isinstance(unit.formula, Node):
            for node in walk(unit.formula):
                if isinstance(node, (Ite, Let)):
                    what = "$ite" if isinstance(node, Ite) else "$let"
                    raise SpecError(
                        SpecErrorKind.UNSUPPORTED_CONSTRUCT,
                        f"{what} is recognized but not supported by semantic "
                        f"passes", node.pos or unit.pos, filename)

    if not logic_units:
        if occurrences:
            first = occurrences[0]
            raise SpecError(
                SpecErrorKind.MISSING_LOGIC_SPEC,
                "non-classical connective used without a logic specification",
                first.pos, filename)
        return CheckedProblem(None, list(problem), problem_signature(problem, filename))
    if len(logic_units) > 1:
        raise SpecError(
            SpecErrorKind.DUPLICATE_LOGIC_SPEC,
            f"{len(logic_units)} logic specifications in one problem; "
            f"use a generator file and expand it", logic_units[1].pos, filename)

    spec = logic_units[0].formula
    assert isinstance(spec, LogicSpec)
    sig = problem_signature(problem, filename)
    known_symbols = set(sig.symbols)
    known_types = set(sig.user_types) | {"$i", "$int", "$rat", "$real"}
    sem = validate_spec(spec, known_symbols, known_types, filename)
    units = resolve_short_forms(problem, sem, filename)
    return CheckedProblem(sem, units, sig, list(sem.warnings))
