"""Shallow embedding of checked `$modal`-family problems into classical THF,
plus the relational first-order translation for the propositional fragment.

Worlds become an explicit type `mworld` with a distinguished constant
`mactual`; each connective index gets an accessibility relation `mrel[_i]`.
Formulas embed to predicates over worlds: box becomes universal and diamond
existential quantification over accessible worlds.  Flexible symbols (and
all predicates) take the evaluation world as an extra leading argument and
are renamed with an `_at` suffix; rigid symbols keep their name and type.
Boolean-typed arguments and variables are passed as world predicates, so
the FOOL constructs embed without special cases.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional

from .logic_spec import (
    BOX_NAMES,
    DIA_NAMES,
    CheckedProblem,
    DomainKind,
    FrameCondition,
    IndexKey,
    ModalitySpec,
    ModalSemantics,
    Rigidity,
    Signature,
    SpecError,
    SpecErrorKind,
    SymbolInfo,
    index_key,
    locality_of,
    problem_indices,
    problem_signature,
)
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
    Ite,
    Lam,
    Language,
    Let,
    MappingType,
    NcApply,
    Node,
    Not,
    NumberLit,
    Problem,
    Quant,
    Role,
    Subrole,
    TupleTerm,
    Type,
    TypeDecl,
    TYPE_O,
    TYPE_I,
    NUMBER_TYPE,
    Var,
    curry,
    uncurry,
    walk,
)

WORLD_TYPE = "mworld"
WORLD = BaseType(WORLD_TYPE)
CURRENT_WORLD = "mactual"
RESERVED_PREFIXES = ("mrel", "meexists")
RESERVED_NAMES = (WORLD_TYPE, CURRENT_WORLD)


def rel_name(index: IndexKey) -> str:
    if index is None:
        return "mrel"
    return f"mrel_{_sanitize(index)}"


def exists_name(type_name: str) -> str:
    return f"meexists_{_sanitize(type_name)}"


def _sanitize(name: str) -> str:
    return "".join(ch if ch.isalnum() else "_" for ch in name.lstrip("$"))


def frame_conditions(spec: ModalitySpec) -> list[FrameCondition]:
    """Frame conditions corresponding to a modality's axiom set."""
    return spec.frame_conditions()


def _condition_formula(condition: FrameCondition, rel: str) -> Node:
    w, v, u, x = Var("W"), Var("V"), Var("U"), Var("X")
    r = lambda a, b: Appl(rel, (a, b))  # noqa: E731
    wb = (("W", WORLD),)
    wvb = (("W", WORLD), ("V", WORLD))
    wvub = (("W", WORLD), ("V", WORLD), ("U", WORLD))
    if condition is FrameCondition.UNIVERSAL:
        return Quant("!", wvb, r(w, v))
    if condition is FrameCondition.REFLEXIVE:
        return Quant("!", wb, r(w, w))
    if condition is FrameCondition.SYMMETRIC:
        return Quant("!", wvb, Binary("=>", r(w, v), r(v, w)))
    if condition is FrameCondition.SERIAL:
        return Quant("!", wb, Quant("?", (("V", WORLD),), r(w, v)))
    if condition is FrameCondition.TRANSITIVE:
        return Quant("!", wvub,
                     Binary("=>", Binary("&", r(w, v), r(v, u)), r(w, u)))
    if condition is FrameCondition.EUCLIDEAN:
        return Quant("!", wvub,
                     Binary("=>", Binary("&", r(w, v), r(w, u)), r(v, u)))
    if condition is FrameCondition.FUNCTIONAL:
        return Quant("!", wvub,
                     Binary("=>", Binary("&", r(w, v), r(w, u)), Eq(v, u)))
    if condition is FrameCondition.SHIFT_REFLEXIVE:
        return Quant("!", wvb, Binary("=>", r(w, v), r(v, v)))
    if condition is FrameCondition.DENSE:
        return Quant("!", wvb, Binary(
            "=>", r(w, v),
            Quant("?", (("U", WORLD),), Binary("&", r(w, u), r(u, v)))))
    if condition is FrameCondition.CONFLUENT:
        return Quant("!", wvub, Binary(
            "=>", Binary("&", r(w, v), r(w, u)),
            Quant("?", (("X", WORLD),), Binary("&", r(v, x), r(u, x)))))
    raise ValueError(condition)


def frame_axioms(sem: ModalSemantics,
                 indices: Optional[list[IndexKey]] = None,
                 language: Language = Language.THF) -> list[AnnotatedFormula]:
    """Accessibility-relation axioms for each index's modality."""
    units = []
    for index in indices if indices is not None else [None]:
        rel = rel_name(index)
        for condition in sem.modality(index).frame_conditions():
            units.append(AnnotatedFormula(
                language, f"{rel}_{condition.value}", Role(BaseRole.AXIOM),
                _condition_formula(condition, rel)))
    return units


def domain_axioms(sem: ModalSemantics, type_names: list[str],
                  indices: Optional[list[IndexKey]] = None,
                  language: Language = Language.THF) -> list[AnnotatedFormula]:
    """Existence-predicate declarations and axioms for non-constant domains."""
    indices = indices if indices is not None else [None]
    units = []
    for type_name in type_names:
        kind = sem.domain_kind(type_name)
        if kind is DomainKind.CONSTANT:
            continue
        ex = exists_name(type_name)
        t = BaseType(type_name)
        if language is Language.THF:
            ex_type: Type = curry((WORLD, t), TYPE_O)
        else:
            ex_type = MappingType((WORLD, t), TYPE_O)
        units.append(AnnotatedFormula(
            language, f"{ex}_decl", Role(BaseRole.TYPE), TypeDecl(ex, ex_type)))
        units.append(AnnotatedFormula(
            language, f"{ex}_nonempty", Role(BaseRole.AXIOM),
            Quant("!", (("W", WORLD),),
                  Quant("?", (("X", t),), Appl(ex, (Var("W"), Var("X")))))))
        if kind in (DomainKind.CUMULATIVE, DomainKind.DECREASING):
            for index in indices:
                rel = rel_name(index)
                grows = kind is DomainKind.CUMULATIVE
                src, dst = ("W", "V") if grows else ("V", "W")
                axiom = Quant(
                    "!", (("W", WORLD), ("V", WORLD), ("X", t)),
                    Binary("=>",
                           Binary("&", Appl(rel, (Var("W"), Var("V"))),
                                  Appl(ex, (Var(src), Var("X")))),
                           Appl(ex, (Var(dst), Var("X")))))
                suffix = kind.value.lstrip("$")
                name = f"{ex}_{suffix}" if index is None else \
                    f"{ex}_{suffix}_{_sanitize(index)}"
                units.append(AnnotatedFormula(
                    language, name, Role(BaseRole.AXIOM), axiom))
    return units


# ---------------------------------------------------------------------------
# Type lifting


def lift_value_type(t: Type) -> Type:
    """Structural world lifting: $o becomes mworld > $o, arrows map through."""
    if isinstance(t, BaseType):
        if t == TYPE_O:
            return CurriedType(WORLD, TYPE_O)
        return t
    args, result = uncurry(t)
    return curry(tuple(lift_value_type(a) for a in args), lift_value_type(result))


def lift_symbol_type(t: Type, flexible: bool) -> tuple[Type, bool]:
    """Lifted declaration type; returns (type, takes world argument).

    Predicates are world-dependent regardless of the rigidity parameter;
    for functions the world argument follows the symbol's rigidity.
    """
    args, result = uncurry(t)
    takes_world = result == TYPE_O or flexible
    lifted_args = tuple(lift_value_type(a) for a in args)
    if takes_world:
        return curry((WORLD,) + lifted_args, result), True
    return curry(lifted_args, result), False


def lift_type(t: Type, sem: ModalSemantics, symbol: Optional[str] = None) -> Type:
    """Lifted type of a declared symbol (predicates always take a world)."""
    flexible = symbol is not None and sem.rigidity(symbol) is Rigidity.FLEXIBLE
    lifted, _ = lift_symbol_type(t, flexible)
    return lifted


def lifted_name(name: str, takes_world: bool) -> str:
    return f"{name}_at" if takes_world else name


# ---------------------------------------------------------------------------
# Formula embedding


_FORMULA_SHAPED = (Quant, Binary, Not, Eq, Bool, NcApply)


class _Embedder:
    def __init__(self, sem: ModalSemantics, sig: Signature, filename: str):
        self.sem = sem
        self.sig = sig
        self.filename = filename
        self.fresh = 0
        self.avoid: set[str] = set()

    def err(self, message: str, pos=None) -> SpecError:
        return SpecError(SpecErrorKind.UNSUPPORTED_CONSTRUCT, message, pos,
                         self.filename)

    def fresh_world(self) -> str:
        while True:
            self.fresh += 1
            name = f"W{self.fresh}"
            if name not in self.avoid:
                self.avoid.add(name)
                return name

    def info(self, name: str) -> Optional[SymbolInfo]:
        return self.sig.symbols.get(name)

    def takes_world(self, info: SymbolInfo) -> bool:
        if info.is_predicate:
            return True
        return self.sem.rigidity(info.name) is Rigidity.FLEXIBLE

    def symbol_ref(self, name: str) -> tuple[str, bool, SymbolInfo]:
        info = self.info(name)
        if info is None:
            raise self.err(f"symbol '{name}' has no type (THF requires "
                           f"declarations)")
        takes = self.takes_world(info)
        return lifted_name(name, takes), takes, info

    # formula position -------------------------------------------------

    def formula(self, node: Node, w: Node) -> Node:
        if isinstance(node, Bool):
            return node
        if isinstance(node, Not):
            return Not(self.formula(node.body, w))
        if isinstance(node, Binary):
            return Binary(node.op, self.formula(node.lhs, w),
                          self.formula(node.rhs, w))
        if isinstance(node, Eq):
            return Eq(self.term(node.lhs, w), self.term(node.rhs, w),
                      node.negated)
        if isinstance(node, Quant):
            return self.quantifier(node, w)
        if isinstance(node, NcApply):
            return self.modal(node, w)
        if isinstance(node, Appl):
            if node.name.startswith("$"):
                return Appl(node.name,
                            tuple(self.term(a, w) for a in node.args))
            name, takes, _info = self.symbol_ref(node.name)
            args = tuple(self.term(a, w) for a in node.args)
            return Appl(name, ((w,) + args) if takes else args)
        if isinstance(node, Var):
            return Apply(node, w)
        if isinstance(node, Apply):
            return self.apply_chain(node, w, as_formula=True)
        if isinstance(node, Lam):
            return Apply(self.term(node, w), w)
        if isinstance(node, (Ite, Let)):
            raise self.err("$ite/$let cannot be embedded", node.pos)
        raise self.err(f"cannot embed {type(node).__name__} as a formula")

    def quantifier(self, node: Quant, w: Node) -> Node:
        bindings = []
        guards = []
        for name, typ in node.bindings:
            actual = typ if typ is not None else TYPE_I
            bindings.append((name, lift_value_type(actual)))
            if isinstance(actual, BaseType) and actual != TYPE_O \
                    and self.sem.domain_kind(actual.name) is not DomainKind.CONSTANT:
                guards.append(Appl(exists_name(actual.name), (w, Var(name))))
        body = self.formula(node.body, w)
        if guards:
            guard = guards[0]
            for g in guards[1:]:
                guard = Binary("&", guard, g)
            body = Binary("=>" if node.kind == "!" else "&", guard, body)
        return Quant(node.kind, tuple(bindings), body)

    def modal(self, node: NcApply, w: Node) -> Node:
        conn = node.conn
        name = conn.name
        if name is None or name.startswith("$$") or name == "$common":
            raise self.err(f"connective '{name or conn.surface.value}' has no "
                           f"classical embedding", conn.pos)
        box = name in BOX_NAMES or name == "$believes"
        if not box and name not in DIA_NAMES:
            raise self.err(f"connective '{name}' has no classical embedding",
                           conn.pos)
        if len(node.args) != 1:
            raise self.err(f"'{name}' takes exactly one argument", conn.pos)
        rel = rel_name(index_key(conn.index))
        fresh = self.fresh_world()
        v = Var(fresh)
        body = self.formula(node.args[0], v)
        edge = Appl(rel, (w, v))
        if box:
            return Quant("!", ((fresh, WORLD),), Binary("=>", edge, body))
        return Quant("?", ((fresh, WORLD),), Binary("&", edge, body))

    # term position ------------------------------------------------------

    def term(self, node: Node, w: Node) -> Node:
        if isinstance(node, (NumberLit, DistinctObj, Var)):
            return node
        if isinstance(node, _FORMULA_SHAPED):
            fresh = self.fresh_world()
            return Lam(((fresh, WORLD),), self.formula(node, Var(fresh)))
        if isinstance(node, Lam):
            bindings = []
            for name, typ in node.bindings:
                actual = typ if typ is not None else TYPE_I
                bindings.append((name, lift_value_type(actual)))
            return Lam(tuple(bindings), self.term(node.body, w))
        if isinstance(node, Appl):
            if node.name.startswith("$"):
                return Appl(node.name,
                            tuple(self.term(a, w) for a in node.args))
            return self.applied_symbol(node.name, node.args, w)
        if isinstance(node, Apply):
            return self.apply_chain(node, w, as_formula=False)
        if isinstance(node, (Ite, Let)):
            raise self.err("$ite/$let cannot be embedded", node.pos)
        if isinstance(node, TupleTerm):
            raise self.err("tuple terms cannot be embedded")
        raise self.err(f"cannot embed {type(node).__name__} as a term")

    def applied_symbol(self, name: str, raw_args: tuple[Node, ...],
                       w: Node) -> Node:
        lifted, takes, info = self.symbol_ref(name)
        args = tuple(self.term(a, w) for a in raw_args)
        if len(args) == info.arity:
            if takes:
                return Appl(lifted, (w,) + args)
            return Appl(lifted, args)
        if len(args) > info.arity:
            raise self.err(f"'{name}' applied to more arguments than its type "
                           f"admits")
        # Partial application in a value position: predicates can be
        # eta-wrapped to the structurally lifted type, world-dependent
        # functions cannot (their world argument has nowhere to come from).
        if not takes:
            return Appl(lifted, args)
        if not info.is_predicate:
            raise self.err(f"flexible function '{name}' cannot be passed "
                           f"unapplied")
        remaining = info.arg_types[len(args):]
        extra = []
        for i, t in enumerate(remaining):
            extra.append((f"X{self.fresh}_{i}", lift_value_type(t)))
        world = self.fresh_world()
        bindings = tuple(extra) + ((world, WORLD),)
        call = Appl(lifted, (Var(world),) + args + tuple(Var(n) for n, _ in extra))
        return Lam(bindings, call)

    def apply_chain(self, node: Apply, w: Node, as_formula: bool) -> Node:
        spine = [node.arg]
        fn = node.fn
        while isinstance(fn, Apply):
            spine.append(fn.arg)
            fn = fn.fn
        spine.reverse()
        if isinstance(fn, Appl) and not fn.args and not fn.name.startswith("$"):
            name, takes, info = self.symbol_ref(fn.name)
            if len(spine) == info.arity and takes:
                args = tuple(self.term(a, w) for a in spine)
                head: Node = Appl(name, (w,) + args)
            elif len(spine) <= info.arity:
                head = self.applied_symbol(fn.name, tuple(spine), w)
            else:
                raise self.err(f"'{fn.name}' applied to more arguments than "
                               f"its type admits")
            if as_formula and not info.is_predicate:
                raise self.err(f"function '{fn.name}' used as a formula")
            return head
        head = self.term(fn, w)
        for arg in spine:
            head = Apply(head, self.term(arg, w))
        if as_formula:
            return Apply(head, w)
        return head


def embed_formula(formula: Node, sem: ModalSemantics,
                  sig: Optional[Signature] = None,
                  filename: str = "<input>") -> Lam:
    """Embed one canonicalized formula as a world predicate (a lambda over
    mworld); apply it to a world term to obtain the formula's truth there."""
    if sig is None:
        pseudo = AnnotatedFormula(Language.TFF, "f", Role(BaseRole.AXIOM), formula)
        sig = problem_signature([pseudo], filename)
    embedder = _Embedder(sem, sig, filename)
    embedder.avoid = {node.name for node in walk(formula) if isinstance(node, Var)}
    embedder.avoid |= _bound_names(formula)
    world = embedder.fresh_world()
    body = embedder.formula(formula, Var(world))
    return Lam(((world, WORLD),), body)


def _bound_names(formula: Node) -> set[str]:
    out = set()
    for node in walk(formula):
        if isinstance(node, (Quant, Lam)):
            out |= {name for name, _ in node.bindings}
    return out


def embed_formula_at(formula: Node, sem: ModalSemantics, world: Node,
                     sig: Optional[Signature] = None,
                     filename: str = "<input>") -> Node:
    """Embedded truth of the formula at a concrete world term."""
    lam = embed_formula(formula, sem, sig, filename)
    (name, _typ), = lam.bindings
    from .syntax import substitute

    return substitute(lam.body, {name: world})


# ---------------------------------------------------------------------------
# Problem embedding


@dataclass
class EmbedOutput:
    """Classical THF problem produced by the embedding."""

    units: Problem
    symbols: dict[str, tuple[str, Type]]  # original -> (lifted name, type)
    world_type_name: str
    rel_names: dict[IndexKey, str]
    exists_names: dict[str, str]
    header: list[str] = field(default_factory=list)


def _collision_check(sig: Signature, filename: str) -> None:
    for name in list(sig.symbols) + sig.user_types:
        if name in RESERVED_NAMES or \
                any(name == p or name.startswith(p + "_") for p in RESERVED_PREFIXES):
            raise SpecError(SpecErrorKind.UNSUPPORTED_CONSTRUCT,
                            f"symbol '{name}' collides with reserved embedding "
                            f"names", None, filename)
    for name in sig.symbols:
        if f"{name}_at" in sig.symbols:
            raise SpecError(SpecErrorKind.UNSUPPORTED_CONSTRUCT,
                            f"symbol '{name}_at' collides with the lifted name "
                            f"of '{name}'", None, filename)


def embed_problem(checked: CheckedProblem,
                  filename: str = "<input>") -> EmbedOutput:
    """Compile a checked modal problem into a classical THF problem."""
    sem = checked.semantics
    if sem is None:
        raise ValueError("embed_problem needs modal semantics; use "
                         "convert_classical for purely classical problems")
    problem = checked.units
    sig = checked.signature
    _collision_check(sig, filename)
    indices = problem_indices(problem)

    embedder = _Embedder(sem, sig, filename)
    for unit in problem:
        if isinstance(unit.formula, Node):
            for node in walk(unit.formula):
                if isinstance(node, Var):
                    embedder.avoid.add(node.name)
                elif isinstance(node, (Quant, Lam)):
                    embedder.avoid |= {n for n, _ in node.bindings}

    units: Problem = []
    thf = Language.THF

    def decl(name: str, symbol: str, typ: Type) -> None:
        units.append(AnnotatedFormula(thf, name, Role(BaseRole.TYPE),
                                      TypeDecl(symbol, typ)))

    decl("mworld_decl", WORLD_TYPE, BaseType("$tType"))
    decl("mactual_decl", CURRENT_WORLD, WORLD)
    rel_names = {}
    for index in indices:
        rel = rel_name(index)
        if rel in rel_names.values():
            raise SpecError(SpecErrorKind.BAD_INDEX,
                            f"indices collide on relation name '{rel}'",
                            None, filename)
        rel_names[index] = rel
        decl(f"{rel}_decl", rel, curry((WORLD, WORLD), TYPE_O))
    units.extend(frame_axioms(sem, indices))

    base_types = sig.base_types_used()
    nonconstant = [t for t in base_types
                   if sem.domain_kind(t) is not DomainKind.CONSTANT]
    exists_names = {t: exists_name(t) for t in nonconstant}
    units.extend(domain_axioms(sem, base_types, indices))

    symbols: dict[str, tuple[str, Type]] = {}
    auto_declared = []
    for unit in problem:
        if isinstance(unit.formula, TypeDecl) and unit.formula.typ == BaseType("$tType"):
            units.append(replace(unit, language=thf, source=None, useful_info=None))
    for name in sorted(sig.symbols):
        info = sig.symbols[name]
        flexible = sem.rigidity(name) is Rigidity.FLEXIBLE
        lifted, takes = lift_symbol_type(
            curry(info.arg_types, info.result), flexible)
        new_name = lifted_name(name, takes)
        symbols[name] = (new_name, lifted)
        auto_declared.append((name, new_name, lifted))
    for name, new_name, lifted in auto_declared:
        decl(f"{_sanitize(new_name)}_decl", new_name, lifted)

    lits = sorted(sig.literals, key=lambda l: (l.kind, l.lexeme))
    for i, a in enumerate(lits):
        for b in lits[i + 1:]:
            if a.kind == b.kind:
                units.append(AnnotatedFormula(
                    thf, f"mnum_distinct_{_sanitize(a.lexeme)}_{_sanitize(b.lexeme)}",
                    Role(BaseRole.AXIOM), Eq(a, b, negated=True)))

    conjectures = []
    for unit in problem:
        if not isinstance(unit.formula, Node):
            continue
        locality = locality_of(unit.role)
        if locality is Subrole.GLOBAL:
            world = embedder.fresh_world()
            body = embedder.formula(unit.formula, Var(world))
            formula: Node = Quant("!", ((world, WORLD),), body)
        else:
            formula = embedder.formula(unit.formula, Appl(CURRENT_WORLD))
        out_unit = AnnotatedFormula(thf, unit.name, Role(unit.role.base),
                                    formula, pos=unit.pos)
        if unit.role.base is BaseRole.CONJECTURE:
            conjectures.append(out_unit)
        else:
            units.append(out_unit)
    units.extend(conjectures)

    header = ["% Classical THF embedding.",
              "% Originating logic specification:"]
    logic_unit = checked.logic_unit
    if logic_unit is not None and logic_unit.raw:
        header.extend("%    " + line for line in logic_unit.raw.splitlines())
    output = EmbedOutput(units, symbols, WORLD_TYPE, rel_names, exists_names,
                         header)
    return output


def convert_classical(problem: Problem) -> tuple[Problem, list[str]]:
    """Dialect normalization of a purely classical problem to THF; emits
    declarations for default-typed symbols since THF requires them."""
    sig = problem_signature(problem)
    units: Problem = []
    warnings = ["no logic specification; classical problem normalized to THF"]
    declared = set()
    for unit in problem:
        if isinstance(unit.formula, TypeDecl):
            declared.add(unit.formula.symbol)
    for unit in problem:
        if isinstance(unit.formula, TypeDecl):
            decl = unit.formula
            if decl.typ == BaseType("$tType"):
                units.append(replace(unit, language=Language.THF))
            else:
                args, result = uncurry(decl.typ)
                units.append(replace(unit, language=Language.THF,
                                     formula=TypeDecl(decl.symbol, curry(args, result))))
            continue
        if isinstance(unit.formula, Node):
            units.append(replace(unit, language=Language.THF,
                                 formula=_fill_binding_types(unit.formula)))
    auto = [n for n in sorted(sig.symbols) if n not in declared]
    decls = []
    for name in auto:
        info = sig.symbols[name]
        decls.append(AnnotatedFormula(
            Language.THF, f"{_sanitize(name)}_decl", Role(BaseRole.TYPE),
            TypeDecl(name, curry(info.arg_types, info.result))))
    return decls + units, warnings


def _fill_binding_types(node: Node) -> Node:
    from .syntax import map_nodes

    def visit(n: Node) -> Node:
        if isinstance(n, (Quant, Lam)) and any(t is None for _, t in n.bindings):
            bindings = tuple((name, t if t is not None else TYPE_I)
                             for name, t in n.bindings)
            return replace(n, bindings=bindings)
        return n

    return map_nodes(node, visit)


# ---------------------------------------------------------------------------
# Standard relational translation (propositional fragment)


def standard_translation(formula: Node, sem: ModalSemantics,
                         world: Optional[Node] = None,
                         filename: str = "<input>") -> Node:
    """First-order relational rendering of a propositional modal formula.

    Atoms become unary predicates over worlds, box/diamond become guarded
    world quantifiers; the result speaks about `world` (default mactual).
    """
    counter = [0]

    def err(message: str, pos=None) -> SpecError:
        return SpecError(SpecErrorKind.UNSUPPORTED_CONSTRUCT, message, pos,
                         filename)

    def st(node: Node, w: Node) -> Node:
        if isinstance(node, Bool):
            return node
        if isinstance(node, Appl):
            if node.args or node.name.startswith("$"):
                raise err(f"'{node.name}' is outside the propositional "
                          f"modal fragment")
            return Appl(node.name, (w,))
        if isinstance(node, Not):
            return Not(st(node.body, w))
        if isinstance(node, Binary):
            return Binary(node.op, st(node.lhs, w), st(node.rhs, w))
        if isinstance(node, NcApply):
            conn = node.conn
            name = conn.name
            if name is None or (name not in BOX_NAMES and name not in DIA_NAMES
                                and name != "$believes"):
                raise err(f"connective '{name}' has no relational translation",
                          conn.pos)
            if len(node.args) != 1:
                raise err(f"'{name}' takes exactly one argument", conn.pos)
            rel = rel_name(index_key(conn.index))
            counter[0] += 1
            fresh = f"V{counter[0]}"
            v = Var(fresh)
            body = st(node.args[0], v)
            edge = Appl(rel, (w, v))
            if name in DIA_NAMES:
                return Quant("?", ((fresh, WORLD),), Binary("&", edge, body))
            return Quant("!", ((fresh, WORLD),), Binary("=>", edge, body))
        if isinstance(node, Quant):
            raise err("quantifiers are outside the propositional modal fragment")
        raise err(f"{type(node).__name__} is outside the propositional modal "
                  f"fragment")

    return st(formula, world if world is not None else Appl(CURRENT_WORLD))


def translate_problem(checked: CheckedProblem,
                      filename: str = "<input>") -> tuple[Problem, list[str]]:
    """Relational translation of a whole propositional modal problem to TFF."""
    sem = checked.semantics
    if sem is None:
        raise SpecError(SpecErrorKind.MISSING_LOGIC_SPEC,
                        "relational translation needs a logic specification",
                        None, filename)
    sig = checked.signature
    _collision_check(sig, filename)
    indices = problem_indices(checked.units)
    tff = Language.TFF
    units: Problem = []
    units.append(AnnotatedFormula(tff, "mworld_decl", Role(BaseRole.TYPE),
                                  TypeDecl(WORLD_TYPE, BaseType("$tType"))))
    units.append(AnnotatedFormula(tff, "mactual_decl", Role(BaseRole.TYPE),
                                  TypeDecl(CURRENT_WORLD, WORLD)))
    for index in indices:
        rel = rel_name(index)
        units.append(AnnotatedFormula(
            tff, f"{rel}_decl", Role(BaseRole.TYPE),
            TypeDecl(rel, MappingType((WORLD, WORLD), TYPE_O))))
    units.extend(frame_axioms(sem, indices, language=tff))
    for name in sorted(checked.signature.symbols):
        info = checked.signature.symbols[name]
        if info.arity != 0 or not info.is_predicate:
            raise SpecError(SpecErrorKind.UNSUPPORTED_CONSTRUCT,
                            f"'{name}' is outside the propositional modal "
                            f"fragment", None, filename)
        units.append(AnnotatedFormula(
            tff, f"{_sanitize(name)}_decl", Role(BaseRole.TYPE),
            TypeDecl(name, MappingType((WORLD,), TYPE_O))))
    conjectures = []
    counter = [0]
    for unit in checked.units:
        if not isinstance(unit.formula, Node):
            continue
        if locality_of(unit.role) is Subrole.GLOBAL:
            counter[0] += 1
            wname = f"W{counter[0]}"
            formula: Node = Quant(
                "!", ((wname, WORLD),),
                standard_translation(unit.formula, sem, Var(wname), filename))
        else:
            formula = standard_translation(unit.formula, sem, filename=filename)
        out = AnnotatedFormula(tff, unit.name, Role(unit.role.base), formula)
        if unit.role.base is BaseRole.CONJECTURE:
            conjectures.append(out)
        else:
            units.append(out)
    units.extend(conjectures)
    return units, []


# ---------------------------------------------------------------------------
# THF type checking of embedded output


class TypeCheckError(Exception):
    pass


def _normalize(t: Type) -> Type:
    args, result = uncurry(t)
    return curry(tuple(_normalize(a) for a in args), result)


def check_types(problem: Problem) -> None:
    """Check that a classical problem is well-typed and free of non-classical
    connectives.  Unknown defined ($) symbols type-check leniently."""
    env: dict[str, Type] = {}
    type_names = set(DEFAULT_TYPE_NAMES)
    for unit in problem:
        if isinstance(unit.formula, TypeDecl):
            decl = unit.formula
            if decl.typ == BaseType("$tType"):
                type_names.add(decl.symbol)
            else:
                env[decl.symbol] = _normalize(decl.typ)
    for unit in problem:
        if not isinstance(unit.formula, Node):
            continue
        for node in walk(unit.formula):
            if isinstance(node, NcApply):
                raise TypeCheckError(
                    f"unit '{unit.name}' contains a non-classical connective")
        t = _infer(unit.formula, env, dict(), unit.name)
        if t is not None and t != TYPE_O:
            raise TypeCheckError(
                f"unit '{unit.name}' has type {t}, expected $o")


DEFAULT_TYPE_NAMES = ("$o", "$i", "$int", "$rat", "$real")


def _infer(node: Node, env: dict[str, Type], local: dict[str, Type],
           unit: str) -> Optional[Type]:
    def fail(message: str) -> TypeCheckError:
        return TypeCheckError(f"unit '{unit}': {message}")

    def check_expected(t: Optional[Type], expected: Type, what: str) -> None:
        if t is not None and t != expected:
            raise fail(f"{what} has type {t}, expected {expected}")

    if isinstance(node, Bool):
        return TYPE_O
    if isinstance(node, NumberLit):
        return NUMBER_TYPE[node.kind]
    if isinstance(node, DistinctObj):
        return TYPE_I
    if isinstance(node, Var):
        if node.name in local:
            return local[node.name]
        raise fail(f"unbound variable {node.name}")
    if isinstance(node, Appl):
        if node.name.startswith("$") and node.name not in env:
            for arg in node.args:
                _infer(arg, env, local, unit)
            return None
        if node.name not in env:
            raise fail(f"undeclared symbol '{node.name}'")
        t = env[node.name]
        for arg in node.args:
            if not isinstance(t, CurriedType):
                raise fail(f"'{node.name}' applied to too many arguments")
            arg_t = _infer(arg, env, local, unit)
            check_expected(arg_t, t.arg, f"argument of '{node.name}'")
            t = t.result
        return t
    if isinstance(node, Apply):
        fn_t = _infer(node.fn, env, local, unit)
        arg_t = _infer(node.arg, env, local, unit)
        if fn_t is None:
            return None
        if not isinstance(fn_t, CurriedType):
            raise fail(f"application of a non-functional value of type {fn_t}")
        check_expected(arg_t, fn_t.arg, "applied argument")
        return fn_t.result
    if isinstance(node, Eq):
        lhs = _infer(node.lhs, env, local, unit)
        rhs = _infer(node.rhs, env, local, unit)
        if lhs is not None and rhs is not None and lhs != rhs:
            raise fail(f"equality between {lhs} and {rhs}")
        return TYPE_O
    if isinstance(node, Not):
        check_expected(_infer(node.body, env, local, unit), TYPE_O, "negand")
        return TYPE_O
    if isinstance(node, Binary):
        check_expected(_infer(node.lhs, env, local, unit), TYPE_O, "operand")
        check_expected(_infer(node.rhs, env, local, unit), TYPE_O, "operand")
        return TYPE_O
    if isinstance(node, Quant):
        inner = dict(local)
        for name, typ in node.bindings:
            if typ is None:
                raise fail(f"unannotated bound variable {name}")
            inner[name] = _normalize(typ)
        check_expected(_infer(node.body, env, inner, unit), TYPE_O,
                       "quantified body")
        return TYPE_O
    if isinstance(node, Lam):
        inner = dict(local)
        arg_types = []
        for name, typ in node.bindings:
            if typ is None:
                raise fail(f"unannotated lambda binding {name}")
            t = _normalize(typ)
            inner[name] = t
            arg_types.append(t)
        body_t = _infer(node.body, env, inner, unit)
        if body_t is None:
            return None
        return curry(tuple(arg_types), body_t)
    raise fail(f"unexpected node {type(node).__name__}")
