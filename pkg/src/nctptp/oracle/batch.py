"""Vectorized propositional sweeps: evaluate modal formulas and their
classical embeddings over *all* Kripke models of a given size at once.

Models over W worlds and k atoms are indexed by an integer packing the
relation (W*W bits) and the valuation (k*W bits); numpy arrays over the
model axis make the exhaustive per-model/per-world agreement check cheap.
The scalar evaluators in oracle.evaluate stay the reference semantics; the
test suite pins these batch evaluators against them on samples."""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from ..logic_spec import BOX_NAMES, DIA_NAMES
from ..syntax import (
    Appl,
    Apply,
    Binary,
    Bool,
    Eq,
    NcApply,
    NcConnective,
    Node,
    Not,
    Quant,
    Var,
)
from .models import KripkeModel, OracleError


@dataclass
class PropModels:
    """All models over n_worlds and the given atoms, on one numpy axis."""

    n_worlds: int
    atoms: tuple[str, ...]
    succ: list[np.ndarray]        # per world: successor bitmask per model
    ext: dict[str, np.ndarray]    # per atom: truth bitmask over worlds
    n_models: int
    full: int                     # bitmask with one bit per world


def all_models(n_worlds: int, atoms: tuple[str, ...]) -> PropModels:
    w = n_worlds
    n_rel = 1 << (w * w)
    n_val = 1 << (len(atoms) * w)
    ids = np.arange(n_rel * n_val, dtype=np.uint64)
    rel_ids = ids // n_val
    val_ids = ids % n_val
    full = (1 << w) - 1
    succ = [((rel_ids >> np.uint64(u * w)) & np.uint64(full)).astype(np.uint32)
            for u in range(w)]
    ext = {atom: ((val_ids >> np.uint64(k * w)) & np.uint64(full)).astype(np.uint32)
           for k, atom in enumerate(atoms)}
    return PropModels(w, tuple(atoms), succ, ext, int(n_rel * n_val), full)


def model_at(pm: PropModels, m: int) -> KripkeModel:
    """Materialize one model of the sweep as an explicit Kripke model."""
    w = pm.n_worlds
    edges = set()
    for u in range(w):
        mask = int(pm.succ[u][m])
        for v in range(w):
            if mask >> v & 1:
                edges.add((u, v))
    preds = {}
    for atom in pm.atoms:
        mask = int(pm.ext[atom][m])
        preds[atom] = tuple(frozenset([()]) if mask >> world & 1 else frozenset()
                            for world in range(w))
    return KripkeModel(n_worlds=w, indices=(None,),
                       access={None: frozenset(edges)}, preds=preds)


def ext_modal(formula: Node, pm: PropModels) -> np.ndarray:
    """Extension of the formula: per model, a bitmask of satisfying worlds."""
    full = np.uint32(pm.full)
    if isinstance(formula, Bool):
        n = pm.n_models
        return np.full(n, full if formula.value else 0, dtype=np.uint32)
    if isinstance(formula, Appl) and not formula.args:
        if formula.name not in pm.ext:
            raise OracleError(f"unknown atom '{formula.name}'")
        return pm.ext[formula.name]
    if isinstance(formula, Not):
        return ~ext_modal(formula.body, pm) & full
    if isinstance(formula, Binary):
        a = ext_modal(formula.lhs, pm)
        b = ext_modal(formula.rhs, pm)
        if formula.op == "&":
            return a & b
        if formula.op == "|":
            return a | b
        if formula.op == "=>":
            return (~a | b) & full
        if formula.op == "<=":
            return (a | ~b) & full
        if formula.op == "<=>":
            return ~(a ^ b) & full
        if formula.op == "<~>":
            return a ^ b
        raise OracleError(f"unknown connective {formula.op}")
    if isinstance(formula, NcApply):
        name = formula.conn.name
        if formula.conn.index is not None:
            raise OracleError("batch sweep covers the single unindexed relation")
        box = name in BOX_NAMES or name == "$believes"
        if not box and name not in DIA_NAMES:
            raise OracleError(f"connective '{name}' has no Kripke semantics")
        sub = ext_modal(formula.args[0], pm)
        out = np.zeros(pm.n_models, dtype=np.uint32)
        for w in range(pm.n_worlds):
            if box:
                bit = (pm.succ[w] & (~sub & full)) == 0
            else:
                bit = (pm.succ[w] & sub) != 0
            out |= bit.astype(np.uint32) << np.uint32(w)
        return out
    raise OracleError(f"cannot sweep {type(formula).__name__}")


def eval_classical_batch(node: Node, pm: PropModels,
                         env: dict[str, int]) -> np.ndarray:
    """Vectorized Tarskian evaluation of an embedded/translated formula with
    concrete world assignments for its free world variables."""
    def resolve(term: Node) -> int:
        if isinstance(term, Var):
            if term.name not in env:
                raise OracleError(f"unbound world variable {term.name}")
            return env[term.name]
        raise OracleError(f"cannot resolve {type(term).__name__} as a world")

    if isinstance(node, Bool):
        return np.full(pm.n_models, node.value, dtype=bool)
    if isinstance(node, Not):
        return ~eval_classical_batch(node.body, pm, env)
    if isinstance(node, Binary):
        a = eval_classical_batch(node.lhs, pm, env)
        b = eval_classical_batch(node.rhs, pm, env)
        if node.op == "&":
            return a & b
        if node.op == "|":
            return a | b
        if node.op == "=>":
            return ~a | b
        if node.op == "<=":
            return a | ~b
        if node.op == "<=>":
            return a == b
        if node.op == "<~>":
            return a != b
        raise OracleError(f"unknown connective {node.op}")
    if isinstance(node, Eq):
        same = resolve(node.lhs) == resolve(node.rhs)
        value = same != node.negated
        return np.full(pm.n_models, value, dtype=bool)
    if isinstance(node, Quant):
        for _name, typ in node.bindings:
            if typ is None or getattr(typ, "name", None) != "mworld":
                raise OracleError("batch evaluation quantifies over mworld only")
        names = [name for name, _ in node.bindings]
        out = None
        for combo in _world_combos(pm.n_worlds, len(names)):
            env2 = dict(env)
            env2.update(zip(names, combo))
            sub = eval_classical_batch(node.body, pm, env2)
            if out is None:
                out = sub
            elif node.kind == "!":
                out = out & sub
            else:
                out = out | sub
        assert out is not None
        return out
    if isinstance(node, Appl):
        if node.name.startswith("mrel"):
            u = resolve(node.args[0])
            v = resolve(node.args[1])
            return ((pm.succ[u] >> np.uint32(v)) & np.uint32(1)).astype(bool)
        base = node.name[:-3] if node.name.endswith("_at") else node.name
        if base in pm.ext and len(node.args) == 1:
            w = resolve(node.args[0])
            return ((pm.ext[base] >> np.uint32(w)) & np.uint32(1)).astype(bool)
        raise OracleError(f"unknown symbol '{node.name}' in batch evaluation")
    if isinstance(node, Apply):
        raise OracleError("residual application in embedded output")
    raise OracleError(f"cannot batch-evaluate {type(node).__name__}")


def _world_combos(n_worlds: int, depth: int):
    if depth == 0:
        yield ()
        return
    for w in range(n_worlds):
        for rest in _world_combos(n_worlds, depth - 1):
            yield (w,) + rest


# ---------------------------------------------------------------------------
# Deterministic formula pool


BOX = NcConnective("$box")
DIA = NcConnective("$dia")


def box(f: Node) -> Node:
    return NcApply(BOX, (f,))


def dia(f: Node) -> Node:
    return NcApply(DIA, (f,))


def propositional_formulas(count: int = 500, atoms: tuple[str, ...] = ("p", "q"),
                           max_depth: int = 3, pool_limit: int = 4000,
                           seed: int = 2024) -> list[Node]:
    """Deterministic sample of distinct modal formulas of bounded depth."""
    levels: list[list[Node]] = [[Appl(a) for a in atoms]]
    pool: list[Node] = list(levels[0])
    seen: set[Node] = set(pool)

    def push(f: Node) -> bool:
        if f not in seen:
            seen.add(f)
            pool.append(f)
            levels[-1].append(f)
        return len(pool) >= pool_limit

    for depth in range(1, max_depth + 1):
        prev = levels[-1]
        earlier = [f for level in levels for f in level]
        levels.append([])
        done = False
        for f in prev:
            if push(Not(f)) or push(box(f)) or push(dia(f)):
                done = True
                break
        if not done:
            for op in ("&", "|", "=>", "<=>"):
                for a in prev:
                    for b in earlier:
                        if push(Binary(op, a, b)) or push(Binary(op, b, a)):
                            done = True
                            break
                    if done:
                        break
                if done:
                    break
        if done:
            break
    if count > len(pool):
        raise ValueError(f"pool of {len(pool)} formulas cannot supply {count}")
    rng = random.Random(seed)
    return rng.sample(pool, count)
