"""Exhaustive enumeration of finite Kripke models under frame and domain
constraints.  Worlds and elements are enumerated in a fixed labeled order
with no isomorphism reduction; a candidate-count guard keeps the state
space bounded and raises rather than truncating."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Optional

from ..logic_spec import (
    DomainKind,
    IndexKey,
    ModalSemantics,
    Rigidity,
    Signature,
    SpecError,
    SpecErrorKind,
)
from ..syntax import BaseType, NumberLit
from .models import (
    FRAME_CHECKS,
    Edge,
    KripkeModel,
    OracleResourceError,
    literal_sort_key,
)

DEFAULT_CANDIDATE_CAP = 10_000_000

Bounds = tuple[int, int]  # (max worlds, max carrier size)


@dataclass
class OracleSignature:
    """First-order signature the enumerator and the decision procedure use."""

    types: list[str] = field(default_factory=list)
    preds: list[tuple[str, tuple[str, ...]]] = field(default_factory=list)
    funcs: list[tuple[str, tuple[str, ...], str, bool]] = field(default_factory=list)
    literals: dict[str, list[NumberLit]] = field(default_factory=dict)
    distincts: dict[str, list[str]] = field(default_factory=dict)
    indices: list[IndexKey] = field(default_factory=lambda: [None])

    def min_size(self, type_name: str) -> int:
        fixed = len(self.literals.get(type_name, ()))
        fixed += len(self.distincts.get(type_name, ()))
        return max(1, fixed)

    def fixed_elements(self, type_name: str):
        """Deterministic injective denotations for literals and distinct
        objects of one type: positions in a sorted list."""
        literal_values = {}
        distinct_values = {}
        next_elem = 0
        for lit in sorted(self.literals.get(type_name, ()), key=literal_sort_key):
            literal_values[(lit.kind, lit.lexeme)] = next_elem
            next_elem += 1
        for text in sorted(self.distincts.get(type_name, ())):
            distinct_values[text] = next_elem
            next_elem += 1
        return literal_values, distinct_values


def oracle_signature(sig: Signature, sem: Optional[ModalSemantics],
                     indices: Optional[list[IndexKey]] = None,
                     filename: str = "<input>") -> OracleSignature:
    """Restrict a problem signature to the first-order modal fragment."""
    out = OracleSignature()
    types: list[str] = []

    def add_type(name: str) -> None:
        if name not in types:
            types.append(name)

    def base_name(t, symbol: str) -> str:
        if not isinstance(t, BaseType) or t.name == "$o" or t.name == "$tType":
            raise SpecError(
                SpecErrorKind.UNSUPPORTED_CONSTRUCT,
                f"symbol '{symbol}' is outside the first-order fragment",
                None, filename)
        return t.name

    for name in sorted(sig.symbols):
        info = sig.symbols[name]
        arg_names = tuple(base_name(t, name) for t in info.arg_types)
        for t in arg_names:
            add_type(t)
        if info.is_predicate:
            out.preds.append((name, arg_names))
        else:
            result = base_name(info.result, name)
            add_type(result)
            rigid = sem is None or sem.rigidity(name) is Rigidity.RIGID
            out.funcs.append((name, arg_names, result, rigid))
    for lit in sig.literals:
        type_name = {"int": "$int", "rat": "$rat", "real": "$real"}[lit.kind]
        add_type(type_name)
        out.literals.setdefault(type_name, []).append(lit)
    for text in sig.distinct_objects:
        add_type("$i")
        out.distincts.setdefault("$i", []).append(text)
    out.types = sorted(types)
    if indices is not None:
        out.indices = list(indices)
    elif sig.indices:
        out.indices = sorted(set(sig.indices) | {None},
                             key=lambda k: (k is not None, k or ""))
    return out


def _relations(n: int, sem: Optional[ModalSemantics],
               index: IndexKey) -> Iterator[frozenset[Edge]]:
    checks = []
    if sem is not None:
        checks = [FRAME_CHECKS[c.value]
                  for c in sem.modality(index).frame_conditions()]
    pairs = [(u, v) for u in range(n) for v in range(n)]
    for mask in range(1 << (n * n)):
        rel = frozenset(pairs[i] for i in range(n * n) if mask >> i & 1)
        if all(check(rel, n) for check in checks):
            yield rel


def _nonempty_subsets(size: int) -> list[frozenset[int]]:
    return [frozenset(i for i in range(size) if mask >> i & 1)
            for mask in range(1, 1 << size)]


def _domain_ok(kind: DomainKind, per_world: tuple[frozenset[int], ...],
               access: dict[IndexKey, frozenset[Edge]]) -> bool:
    if kind is DomainKind.VARYING:
        return True
    for rel in access.values():
        for u, v in rel:
            if kind is DomainKind.CUMULATIVE and not per_world[u] <= per_world[v]:
                return False
            if kind is DomainKind.DECREASING and not per_world[v] <= per_world[u]:
                return False
    return True


def _arg_tuples(arg_types: tuple[str, ...], sizes: dict[str, int]):
    return list(itertools.product(*(range(sizes[t]) for t in arg_types)))


def count_candidates(osig: OracleSignature, sem: Optional[ModalSemantics],
                     bounds: Bounds) -> int:
    """Raw candidate count before frame/domain filtering."""
    max_worlds, max_domain = bounds
    total = 0
    for n in range(1, max_worlds + 1):
        for sizes in size_vectors(osig, max_domain):
            c = (1 << (n * n)) ** len(osig.indices)
            if sem is not None:
                for t in osig.types:
                    if sem.domain_kind(t) is not DomainKind.CONSTANT:
                        c *= ((1 << sizes[t]) - 1) ** n
            for _name, arg_types, result, rigid in osig.funcs:
                cells = 1
                for t in arg_types:
                    cells *= sizes[t]
                c *= sizes[result] ** (cells * (1 if rigid else n))
            for _name, arg_types in osig.preds:
                rows = 1
                for t in arg_types:
                    rows *= sizes[t]
                c *= (1 << rows) ** n
            total += c
    return total


def size_vectors(osig: OracleSignature, max_domain: int):
    if not osig.types:
        yield {}
        return
    ranges = []
    for t in osig.types:
        lo = osig.min_size(t)
        if lo > max_domain:
            return
        ranges.append(range(lo, max_domain + 1))
    for combo in itertools.product(*ranges):
        yield dict(zip(osig.types, combo))


def enumerate_models(osig: OracleSignature, sem: Optional[ModalSemantics],
                     bounds: Bounds,
                     cap: int = DEFAULT_CANDIDATE_CAP) -> Iterator[KripkeModel]:
    """All models within the bounds satisfying the frame and domain-kind
    constraints, in a fixed deterministic order."""
    candidates = count_candidates(osig, sem, bounds)
    if candidates > cap:
        raise OracleResourceError(
            f"{candidates} candidate models exceed the enumeration cap {cap}")
    max_worlds, _ = bounds
    for n in range(1, max_worlds + 1):
        for sizes in size_vectors(osig, bounds[1]):
            yield from _models_at(osig, sem, n, sizes)


def _models_at(osig: OracleSignature, sem: Optional[ModalSemantics],
               n: int, sizes: dict[str, int]) -> Iterator[KripkeModel]:
    literal_values = {}
    distinct_values = {}
    for t in osig.types:
        lits, dists = osig.fixed_elements(t)
        literal_values.update(lits)
        distinct_values.update(dists)

    nonconstant = []
    if sem is not None:
        nonconstant = [t for t in osig.types
                       if sem.domain_kind(t) is not DomainKind.CONSTANT]

    func_cells = {name: _arg_tuples(args, sizes)
                  for name, args, _res, _rig in osig.funcs}
    pred_rows = {name: _arg_tuples(args, sizes) for name, args in osig.preds}

    for access_combo in itertools.product(
            *(_relations(n, sem, idx) for idx in osig.indices)):
        access = dict(zip(osig.indices, access_combo))
        domain_choices = []
        for t in nonconstant:
            options = [combo for combo in
                       itertools.product(_nonempty_subsets(sizes[t]), repeat=n)
                       if _domain_ok(sem.domain_kind(t), combo, access)]
            domain_choices.append(options)
        for domain_combo in itertools.product(*domain_choices):
            world_domains = dict(zip(nonconstant, domain_combo))
            yield from _interpretations(
                osig, n, sizes, access, world_domains, func_cells, pred_rows,
                literal_values, distinct_values)


def _interpretations(osig, n, sizes, access, world_domains, func_cells,
                     pred_rows, literal_values, distinct_values):
    func_options = []
    for name, _args, result, rigid in osig.funcs:
        cells = func_cells[name]
        tables = [dict(zip(cells, values))
                  for values in itertools.product(range(sizes[result]),
                                                  repeat=len(cells))]
        if rigid:
            func_options.append([("r", name, t) for t in tables])
        else:
            func_options.append([("f", name, combo) for combo in
                                 itertools.product(tables, repeat=n)])
    pred_options = []
    for name, _args in osig.preds:
        rows = pred_rows[name]
        exts = [frozenset(rows[i] for i in range(len(rows)) if mask >> i & 1)
                for mask in range(1 << len(rows))]
        pred_options.append([(name, combo) for combo in
                             itertools.product(exts, repeat=n)])

    for func_choice in itertools.product(*func_options):
        rigid_funcs = {}
        flex_funcs = {}
        for kind, name, value in func_choice:
            if kind == "r":
                rigid_funcs[name] = value
            else:
                flex_funcs[name] = value
        for pred_choice in itertools.product(*pred_options):
            preds = {name: combo for name, combo in pred_choice}
            yield KripkeModel(
                n_worlds=n,
                indices=tuple(osig.indices),
                access=dict(access),
                base_domains=dict(sizes),
                world_domains=dict(world_domains),
                rigid_funcs=dict(rigid_funcs),
                flex_funcs=dict(flex_funcs),
                preds=preds,
                literal_values=dict(literal_values),
                distinct_values=dict(distinct_values),
            )
