import random

import pytest
from hypothesis import given, settings, strategies as st

from latmc import gen
from latmc.errors import (
    FormulaSyntaxError,
    NegationOfNonAtom,
    NotCtlFragment,
    ShadowedVariable,
)
from latmc import syntax as S
from latmc.syntax import (
    FragmentClass,
    classify_fragment,
    collect_atoms,
    encode_ctl,
    is_alternation_free,
    parse_formula,
    print_formula,
    to_nnf,
)


def test_parse_mu_example():
    f = parse_formula("mu u. p \\/ <> u")
    assert f == S.Mu("u", S.Or(S.Atom("p"), S.Dia(S.Var("u"))))


def test_parse_until_example():
    f = parse_formula("E (p U q)", "ctlstar")
    assert f == S.Exists(S.Until(S.Lift(S.SAtom("p")), S.Lift(S.SAtom("q"))))
    assert classify_fragment(f) is FragmentClass.CtlUOnly


def test_shadowing_rejected():
    with pytest.raises(ShadowedVariable):
        parse_formula("mu u. mu u. p")


def test_syntax_error_position():
    with pytest.raises(FormulaSyntaxError) as err:
        parse_formula("p \\/ $")
    assert err.value.position == 5


def test_nnf_dualizes_fixpoints():
    f = parse_formula("~(mu u. p \\/ <> u)")
    assert f == S.Nu("u", S.And(S.NegAtom("p"), S.Box(S.Var("u"))))


def test_nnf_until_duality():
    # ~(hold U goal) flips to a weak-until with swapped, negated roles
    f = parse_formula("~(E (h U g))", "ctlstar")
    assert f == S.Forall(S.WUntil(S.Lift(S.SNegAtom("g")),
                                  S.Lift(S.SNegAtom("h"))))
    g = parse_formula("~(E (h W r))", "ctlstar")
    assert g == S.Forall(S.Until(S.Lift(S.SNegAtom("r")),
                                 S.Lift(S.SNegAtom("h"))))


def test_nnf_constants():
    assert parse_formula("~tt") == S.FF()
    assert parse_formula("~ff") == S.TT()


def test_negated_fixpoint_variable_rejected():
    with pytest.raises(NegationOfNonAtom):
        parse_formula("mu u. ~u")


def test_negated_free_variable_rejected():
    with pytest.raises(NegationOfNonAtom):
        to_nnf(S.Neg(S.Var("u")))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(1, 5))
def test_nnf_involutive_on_fml(seed, depth):
    f = gen.make_fml(random.Random(seed), depth=depth)
    assert to_nnf(S.Neg(to_nnf(S.Neg(f)))) == to_nnf(f)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(1, 4))
def test_nnf_involutive_on_ctl(seed, depth):
    f = gen.make_ctl(random.Random(seed), depth=depth)
    assert to_nnf(S.SNeg(to_nnf(S.SNeg(f)))) == to_nnf(f)


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(1, 5))
def test_print_parse_roundtrip_fml(seed, depth):
    f = gen.make_fml(random.Random(seed), depth=depth)
    assert parse_formula(print_formula(f)) == f


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(1, 4))
def test_print_parse_roundtrip_ctl(seed, depth):
    f = gen.make_ctl(random.Random(seed), depth=depth)
    assert parse_formula(print_formula(f), "ctlstar") == f


def test_classify_examples():
    assert classify_fragment(parse_formula("E X A X p", "ctlstar")) \
        is FragmentClass.CtlNoUW
    f = parse_formula("E (p U q) /\\ A (r U s)", "ctlstar")
    assert classify_fragment(f) is FragmentClass.CtlUOnly
    assert classify_fragment(parse_formula("E X (p U q)", "ctlstar")) \
        is FragmentClass.GeneralCtlStar
    mixed = parse_formula("E (p U q) \\/ A (p W q)", "ctlstar")
    assert classify_fragment(mixed) is FragmentClass.CtlMixed
    assert classify_fragment(parse_formula("E (p W q)", "ctlstar")) \
        is FragmentClass.CtlWOnly


def test_encode_next():
    assert encode_ctl(parse_formula("E X p", "ctlstar")) == S.Dia(S.Atom("p"))
    assert encode_ctl(parse_formula("A X p", "ctlstar")) == S.Box(S.Atom("p"))


def test_encode_until_role_mapping():
    # E(p U q) unfolds goal-first: mu u. q \/ (p /\ <> u)
    f = encode_ctl(parse_formula("E (p U q)", "ctlstar"))
    assert f == S.Mu("u", S.Or(S.Atom("q"), S.And(S.Atom("p"),
                                                  S.Dia(S.Var("u")))))
    assert print_formula(f) == "mu u. q \\/ (p /\\ <> u)"


def test_encode_wuntil_role_mapping():
    f = encode_ctl(parse_formula("A (p W q)", "ctlstar"))
    assert f == S.Nu("u", S.And(S.Atom("p"), S.Or(S.Atom("q"),
                                                  S.Box(S.Var("u")))))


def test_encode_rejects_ctlstar():
    with pytest.raises(NotCtlFragment):
        encode_ctl(parse_formula("E X (p U q)", "ctlstar"))


def test_encode_fresh_variable_avoids_atoms():
    f = encode_ctl(parse_formula("E (u U u1)", "ctlstar"))
    assert isinstance(f, S.Mu)
    assert f.var not in {"u", "u1"}
    assert f.var in print_formula(f)


def test_encode_alternation_free_on_corpus():
    rng = random.Random(7)
    for _ in range(60):
        f = gen.make_ctl(rng, depth=rng.randint(1, 4))
        enc = encode_ctl(f)
        assert is_alternation_free(enc)


def test_collect_atoms():
    f = parse_formula("E (p U q) /\\ ~r", "ctlstar")
    assert collect_atoms(f) == {"p", "q", "r"}


def test_keywords_not_identifiers():
    with pytest.raises(FormulaSyntaxError):
        parse_formula("mu tt. p")
    with pytest.raises(FormulaSyntaxError):
        parse_formula("E (p U U)", "ctlstar")


def test_chained_until_needs_parens():
    with pytest.raises(FormulaSyntaxError):
        parse_formula("E (p U q U r)", "ctlstar")
    f = parse_formula("E ((p U q) U r)", "ctlstar")
    assert classify_fragment(f) is FragmentClass.GeneralCtlStar


def test_generators_are_deterministic():
    a = [(m.kind, S.print_formula(f))
         for m, f in gen.iter_fml_cases(seed=5, count=10)]
    b = [(m.kind, S.print_formula(f))
         for m, f in gen.iter_fml_cases(seed=5, count=10)]
    assert a == b
    fa = [S.print_formula(f) for f in gen.iter_ctl_formulas(6, 10)]
    fb = [S.print_formula(f) for f in gen.iter_ctl_formulas(6, 10)]
    assert fa == fb
