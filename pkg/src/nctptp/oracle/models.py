"""Finite Kripke models and their classical counterparts.

Worlds and carrier elements are plain integers 0..n-1; the distinguished
current world is 0 unless stated otherwise.  Numeric literals denote
injectively into their type's carrier in a fixed order, so two distinct
literals never collide.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from ..logic_spec import IndexKey
from ..syntax import NumberLit

Edge = tuple[int, int]


class OracleError(Exception):
    pass


class OracleResourceError(OracleError):
    """Raised when a bound/cap guard trips; never silently truncated."""


def literal_sort_key(lit: NumberLit):
    if lit.kind == "int":
        value = Fraction(int(lit.lexeme), 1)
    elif lit.kind == "rat":
        num, den = lit.lexeme.split("/")
        value = Fraction(int(num), int(den))
    else:
        value = Fraction(lit.lexeme)
    return (lit.kind, value, lit.lexeme)


@dataclass
class KripkeModel:
    """Finite model: worlds, per-index accessibility, per-world domains and
    interpretations.  Rigid symbols live in rigid_funcs, flexible ones in
    flex_funcs (indexed per world); predicates are always per world."""

    n_worlds: int
    indices: tuple[IndexKey, ...] = (None,)
    access: dict[IndexKey, frozenset[Edge]] = field(default_factory=dict)
    base_domains: dict[str, int] = field(default_factory=dict)
    world_domains: dict[str, tuple[frozenset[int], ...]] = field(default_factory=dict)
    rigid_funcs: dict[str, dict[tuple[int, ...], int]] = field(default_factory=dict)
    flex_funcs: dict[str, tuple[dict[tuple[int, ...], int], ...]] = field(default_factory=dict)
    preds: dict[str, tuple[frozenset[tuple[int, ...]], ...]] = field(default_factory=dict)
    literal_values: dict[tuple[str, str], int] = field(default_factory=dict)
    distinct_values: dict[str, int] = field(default_factory=dict)
    current: int = 0

    def successors(self, index: IndexKey, world: int) -> list[int]:
        rel = self.access.get(index, frozenset())
        return [v for v in range(self.n_worlds) if (world, v) in rel]

    def domain(self, world: int, type_name: str) -> list[int]:
        per_world = self.world_domains.get(type_name)
        if per_world is not None:
            return sorted(per_world[world])
        size = self.base_domains.get(type_name)
        if size is None:
            raise OracleError(f"type '{type_name}' has no carrier")
        return list(range(size))

    def describe(self) -> str:
        """Human-readable witness serialization with a stable line order."""
        lines = []
        lines.append("worlds: " + " ".join(f"w{i}" for i in range(self.n_worlds)))
        lines.append(f"current: w{self.current}")
        for index in self.indices:
            rel = sorted(self.access.get(index, frozenset()))
            label = "r" if index is None else f"r_{index}"
            edges = " ".join(f"(w{u},w{v})" for u, v in rel) or "(none)"
            lines.append(f"relation {label}: {edges}")
        for type_name in sorted(self.base_domains):
            size = self.base_domains[type_name]
            lines.append(f"domain {type_name}: " +
                         " ".join(f"e{i}" for i in range(size)))
            if type_name in self.world_domains:
                for w, dom in enumerate(self.world_domains[type_name]):
                    lines.append(f"domain {type_name} at w{w}: " +
                                 " ".join(f"e{i}" for i in sorted(dom)))
        for (kind, lexeme), value in sorted(self.literal_values.items()):
            lines.append(f"literal {lexeme} -> e{value}")
        for text, value in sorted(self.distinct_values.items()):
            lines.append(f'distinct "{text}" -> e{value}')
        for name in sorted(self.rigid_funcs):
            for args, value in sorted(self.rigid_funcs[name].items()):
                call = name if not args else \
                    f"{name}({','.join(f'e{a}' for a in args)})"
                lines.append(f"rigid {call} = e{value}")
        for name in sorted(self.flex_funcs):
            for w, table in enumerate(self.flex_funcs[name]):
                for args, value in sorted(table.items()):
                    call = name if not args else \
                        f"{name}({','.join(f'e{a}' for a in args)})"
                    lines.append(f"flexible {call} at w{w} = e{value}")
        for name in sorted(self.preds):
            for w, ext in enumerate(self.preds[name]):
                rows = " ".join("(" + ",".join(f"e{a}" for a in args) + ")"
                                for args in sorted(ext)) or "(empty)"
                lines.append(f"pred {name} at w{w}: {rows}")
        return "\n".join(lines)


# Frame-condition checks over explicit relations.

def is_reflexive(rel: frozenset[Edge], n: int) -> bool:
    return all((w, w) in rel for w in range(n))


def is_symmetric(rel: frozenset[Edge], n: int) -> bool:
    return all((v, u) in rel for u, v in rel)


def is_serial(rel: frozenset[Edge], n: int) -> bool:
    return all(any((u, v) in rel for v in range(n)) for u in range(n))


def is_transitive(rel: frozenset[Edge], n: int) -> bool:
    return all((u, w) in rel
               for u, v in rel for v2, w in rel if v == v2)


def is_euclidean(rel: frozenset[Edge], n: int) -> bool:
    return all((v, w) in rel
               for u, v in rel for u2, w in rel if u == u2)


def is_functional(rel: frozenset[Edge], n: int) -> bool:
    return all(v == w
               for u, v in rel for u2, w in rel if u == u2)


def is_shift_reflexive(rel: frozenset[Edge], n: int) -> bool:
    return all((v, v) in rel for _u, v in rel)


def is_dense(rel: frozenset[Edge], n: int) -> bool:
    return all(any((u, x) in rel and (x, v) in rel for x in range(n))
               for u, v in rel)


def is_confluent(rel: frozenset[Edge], n: int) -> bool:
    return all(any((v, x) in rel and (w, x) in rel for x in range(n))
               for u, v in rel for u2, w in rel if u == u2)


def is_universal(rel: frozenset[Edge], n: int) -> bool:
    return len(rel) == n * n


FRAME_CHECKS = {
    "universal": is_universal,
    "reflexive": is_reflexive,
    "symmetric": is_symmetric,
    "serial": is_serial,
    "transitive": is_transitive,
    "euclidean": is_euclidean,
    "functional": is_functional,
    "shift_reflexive": is_shift_reflexive,
    "dense": is_dense,
    "confluent": is_confluent,
}


@dataclass
class Structure:
    """Finite classical structure interpreting an embedded problem."""

    carriers: dict[str, int]
    funcs: dict[str, dict[tuple[int, ...], int]] = field(default_factory=dict)
    preds: dict[str, frozenset[tuple[int, ...]]] = field(default_factory=dict)
    literal_values: dict[tuple[str, str], int] = field(default_factory=dict)
    distinct_values: dict[str, int] = field(default_factory=dict)


def translate_model(model: KripkeModel) -> Structure:
    """Classical mirror of a Kripke model: worlds become the mworld carrier,
    relations and existence predicates become explicit, flexible symbols and
    predicates take the world as their first argument."""
    from ..embedding import CURRENT_WORLD, WORLD_TYPE, exists_name, rel_name

    carriers = {WORLD_TYPE: model.n_worlds}
    carriers.update(model.base_domains)
    funcs: dict[str, dict[tuple[int, ...], int]] = {
        CURRENT_WORLD: {(): model.current}}
    preds: dict[str, frozenset[tuple[int, ...]]] = {}
    for index in model.indices:
        preds[rel_name(index)] = frozenset(model.access.get(index, frozenset()))
    for type_name, per_world in model.world_domains.items():
        preds[exists_name(type_name)] = frozenset(
            (w, x) for w, dom in enumerate(per_world) for x in dom)
    for name, table in model.rigid_funcs.items():
        funcs[name] = dict(table)
    for name, per_world in model.flex_funcs.items():
        merged = {}
        for w, table in enumerate(per_world):
            for args, value in table.items():
                merged[(w,) + args] = value
        funcs[f"{name}_at"] = merged
    for name, per_world in model.preds.items():
        rows = set()
        for w, ext in enumerate(per_world):
            for args in ext:
                rows.add((w,) + args)
        preds[f"{name}_at"] = frozenset(rows)
    return Structure(carriers, funcs, preds, dict(model.literal_values),
                     dict(model.distinct_values))
