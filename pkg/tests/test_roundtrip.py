"""Round-trip: printing any parsed unit and reparsing it yields a
structurally equal unit, over the whole golden corpus and over generated
syntax trees (restricted to shapes the parser itself can produce)."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import corpus_files

from nctptp.parser import parse_file, parse_problem
from nctptp.printer import print_node, print_problem, print_unit
from nctptp.syntax import (
    Appl,
    Apply,
    BaseType,
    Binary,
    Bool,
    CurriedType,
    DistinctObj,
    Eq,
    Language,
    NcApply,
    NcConnective,
    Not,
    NumberLit,
    Quant,
    Surface,
    Var,
)


@pytest.mark.parametrize("path", corpus_files())
def test_corpus_roundtrip(path):
    units = parse_file(path)
    printed = print_problem(units)
    reparsed = parse_problem(printed)
    assert reparsed == units
    # printing is a fixpoint after one round
    assert print_problem(reparsed) == printed


@pytest.mark.parametrize("path", corpus_files())
def test_parse_deterministic(path):
    assert parse_file(path) == parse_file(path)


def test_annotation_text_roundtrips_verbatim():
    text = ("tff(u,axiom,p,file('Ax.ax',u),[relevance(0.9), "
            "description('x y')]).")
    unit = parse_problem(text)[0]
    again = parse_problem(print_unit(unit))[0]
    assert again.source == unit.source
    assert again.useful_info == unit.useful_info


def test_short_form_surfaces_preserved():
    for text, expected in [("[.](p)", "[.]"), ("<.>(p)", "<.>"),
                           ("/.\\(p)", "/.\\"), ("[#1](p)", "[#1]"),
                           ("<#i>(p)", "<#i>"), ("/#alice\\(p)", "/#alice\\")]:
        unit = parse_problem(f"tff(u,axiom,{text}).")[0]
        printed = print_unit(unit)
        assert expected in printed
        assert parse_problem(printed)[0] == unit


def test_long_form_printing():
    unit = parse_problem("tff(u,axiom,{$knows(#alice)}(p)).")[0]
    assert "{$knows(#alice)}" in print_unit(unit)
    unit = parse_problem("tff(u,axiom,{$common($agents := [a,b])}(p)).")[0]
    assert "{$common($agents := [a,b])}" in print_unit(unit)


# --- generated syntax trees -------------------------------------------------

_lower = st.sampled_from(["p", "q", "r", "f", "g", "owner_of", "sun"])
_upper = st.sampled_from(["X", "Y", "Z"])
_base_types = st.sampled_from([None, BaseType("$i"), BaseType("$int"),
                               BaseType("human")])
_numbers = st.sampled_from([NumberLit("int", "0"), NumberLit("int", "27"),
                            NumberLit("int", "-3"), NumberLit("rat", "43/92"),
                            NumberLit("real", "-99.66"),
                            NumberLit("real", "1.5E3")])
_connectives = st.sampled_from([
    NcConnective("$box"),
    NcConnective("$necessary"),
    NcConnective("$$usually"),
    NcConnective("$knows", index=Appl("alice")),
    NcConnective("$box", index=NumberLit("int", "1")),
    NcConnective(None, surface=Surface.BOX),
    NcConnective(None, surface=Surface.DIAMOND, index=Appl("i")),
    NcConnective(None, surface=Surface.SLASH, index=Appl("alice")),
])


def _terms(formula):
    return st.one_of(
        _numbers,
        st.builds(Var, _upper),
        st.builds(DistinctObj, st.sampled_from(["obj", "a b"])),
        st.builds(lambda n, args: Appl(n, tuple(args)),
                  _lower, st.lists(formula, max_size=2)),
    )


def _quant(formula):
    bindings = st.lists(st.tuples(_upper, _base_types), min_size=1,
                        max_size=2, unique_by=lambda b: b[0])
    return st.builds(lambda k, b, body: Quant(k, tuple(b), body),
                     st.sampled_from(["!", "?"]), bindings, formula)


_tff_formula = st.recursive(
    st.one_of(st.builds(Appl, _lower), st.builds(Bool, st.booleans())),
    lambda children: st.one_of(
        st.builds(Not, children),
        st.builds(Binary, st.sampled_from(["&", "|", "=>", "<=", "<=>", "<~>"]),
                  children, children),
        st.builds(lambda a, b, n: Eq(a, b, n), _terms(children),
                  _terms(children), st.booleans()),
        st.builds(lambda c, args: NcApply(c, tuple(args)), _connectives,
                  st.lists(children, min_size=1, max_size=2)),
        _quant(children),
        st.builds(lambda n, args: Appl(n, tuple(args)), _lower,
                  st.lists(_terms(children), min_size=1, max_size=2)),
    ),
    max_leaves=12)


@settings(max_examples=400, deadline=None)
@given(_tff_formula)
def test_generated_tff_roundtrip(formula):
    text = print_node(formula, Language.TFF)
    unit = parse_problem(f"tff(u,axiom,{text}).")[0]
    assert unit.formula == formula


_thf_types = st.sampled_from([
    BaseType("$o"), BaseType("$i"),
    CurriedType(BaseType("$i"), BaseType("$o")),
    CurriedType(CurriedType(BaseType("$o"), BaseType("$o")), BaseType("$o")),
])


def _thf_apply(children):
    head = st.one_of(st.builds(Appl, _lower), st.builds(Var, _upper))
    return st.builds(
        lambda h, args: _chain(h, args),
        head, st.lists(children, min_size=1, max_size=2))


def _chain(head, args):
    node = head
    for arg in args:
        node = Apply(node, arg)
    return node


_thf_formula = st.recursive(
    st.one_of(st.builds(Appl, _lower), st.builds(Var, _upper),
              st.builds(Bool, st.booleans())),
    lambda children: st.one_of(
        st.builds(Not, children),
        st.builds(Binary, st.sampled_from(["&", "|", "=>", "<=>"]),
                  children, children),
        st.builds(lambda a, b: Eq(a, b), children, children),
        _thf_apply(children),
        st.builds(lambda k, n, t, body: Quant(k, ((n, t),), body),
                  st.sampled_from(["!", "?"]), _upper,
                  _thf_types, children),
    ),
    max_leaves=10)


@settings(max_examples=300, deadline=None)
@given(_thf_formula)
def test_generated_thf_roundtrip(formula):
    text = print_node(formula, Language.THF)
    unit = parse_problem(f"thf(u,axiom,{text}).")[0]
    assert unit.formula == formula


def test_type_printing_roundtrip():
    texts = ["tff(d,type,f: (dog * human) > $o).",
             "tff(d,type,g: dog > human).",
             "thf(d,type,fix: ($o > $o) > $o > $o).",
             "thf(d,type,c: $tType)."]
    for text in texts:
        unit = parse_problem(text)[0]
        assert parse_problem(print_unit(unit))[0] == unit


def test_conditional_and_let_roundtrip():
    texts = ["tff(u,axiom,$ite(p,q,r)).",
             "tff(u,axiom,$let(x: $i, x := c, p(x))).",
             "tff(u,axiom,$let([x: $i,y: $i], [x := c,y := d], p(x,y)))."]
    for text in texts:
        unit = parse_problem(text)[0]
        assert parse_problem(print_unit(unit))[0] == unit
