import random

import numpy as np

from nctptp.embedding import embed_formula, standard_translation
from nctptp.logic_spec import Family, ModalSemantics
from nctptp.oracle import eval_classical, eval_modal, translate_model
from nctptp.oracle.batch import (
    all_models,
    box,
    dia,
    eval_classical_batch,
    ext_modal,
    model_at,
    propositional_formulas,
)
from nctptp.parser import parse_formula
from nctptp.syntax import Binary, NcApply, Node, Not, Var, walk

SEM = ModalSemantics(Family.MODAL)
ATOMS = ("p", "q")


def depth(node: Node) -> int:
    best = 0
    for child in list(walk(node))[1:]:
        pass
    def d(n):
        kids = []
        if isinstance(n, Not):
            kids = [n.body]
        elif isinstance(n, Binary):
            kids = [n.lhs, n.rhs]
        elif isinstance(n, NcApply):
            kids = list(n.args)
        if not kids:
            return 0
        return 1 + max(d(k) for k in kids)
    return d(node)


def test_formula_pool_properties():
    formulas = propositional_formulas(500, ATOMS, max_depth=3)
    assert len(formulas) == 500
    assert len(set(formulas)) == 500
    assert all(depth(f) <= 3 for f in formulas)
    # the sample mixes modal and non-modal shapes
    modal = [f for f in formulas
             if any(isinstance(n, NcApply) for n in walk(f))]
    assert len(modal) > 100
    assert propositional_formulas(500, ATOMS) == propositional_formulas(500, ATOMS)


def test_model_counts():
    assert all_models(1, ATOMS).n_models == 2 * 4
    assert all_models(2, ATOMS).n_models == 16 * 16
    assert all_models(3, ATOMS).n_models == 512 * 64


def test_ext_modal_against_reference():
    rng = random.Random(31337)
    formulas = propositional_formulas(60, ATOMS)
    for w in (1, 2, 3):
        pm = all_models(w, ATOMS)
        for f in rng.sample(formulas, 25):
            memberships = ext_modal(f, pm)
            for _ in range(12):
                m = rng.randrange(pm.n_models)
                world = rng.randrange(w)
                model = model_at(pm, m)
                expected = eval_modal(model, world, f)
                got = bool(int(memberships[m]) >> world & 1)
                assert got == expected


def test_batch_classical_against_reference():
    rng = random.Random(97)
    formulas = propositional_formulas(40, ATOMS)
    for w in (1, 2, 3):
        pm = all_models(w, ATOMS)
        for f in rng.sample(formulas, 15):
            lam = embed_formula(f, SEM)
            (wname, _), = lam.bindings
            for world in range(w):
                vec = eval_classical_batch(lam.body, pm, {wname: world})
                for _ in range(6):
                    m = rng.randrange(pm.n_models)
                    structure = translate_model(model_at(pm, m))
                    assert bool(vec[m]) == eval_classical(
                        structure, lam.body, {wname: world})


def test_batch_standard_translation_against_reference():
    rng = random.Random(17)
    for w in (1, 2):
        pm = all_models(w, ATOMS)
        f = parse_formula("{$box}(p => q) & {$dia}(q)")
        st = standard_translation(f, SEM, world=Var("W0"))
        for world in range(w):
            vec = eval_classical_batch(st, pm, {"W0": world})
            for _ in range(10):
                m = rng.randrange(pm.n_models)
                model = model_at(pm, m)
                assert bool(vec[m]) == eval_modal(model, world, f)


def test_model_at_roundtrip():
    pm = all_models(2, ATOMS)
    seen = set()
    for m in range(pm.n_models):
        model = model_at(pm, m)
        key = (model.access[None], tuple(model.preds["p"]),
               tuple(model.preds["q"]))
        seen.add(key)
    assert len(seen) == pm.n_models


def test_duality_vectorized():
    pm = all_models(3, ATOMS)
    for f in propositional_formulas(30, ATOMS):
        lhs = ext_modal(dia(f), pm)
        rhs = ext_modal(Not(box(Not(f))), pm)
        assert np.array_equal(lhs, rhs)
