import random

import pytest

from latmc import gen, oracle
from latmc.errors import NoConvergence, NoInvolution, UnboundVariable
from latmc.fml_eval import eval_fml, kleene_fixpoint
from latmc.lattice import LatticeElem
from latmc.models import (
    Continuation,
    Evaluator,
    Model,
    Predicate,
    successor_eval,
    to_continuation,
)
from latmc import syntax as S
from latmc.syntax import parse_formula, to_nnf
from conftest import pred


def test_kleene_identity_returns_bottom(bool2):
    bot, top = bool2.bot, bool2.top_elem
    fix, iters = kleene_fixpoint(lambda v: v, "least", bot, top, 5)
    assert fix == bot and iters == 1


def test_kleene_join_constant(chain3):
    half = chain3.elem("1/2")
    fix, _ = kleene_fixpoint(lambda v: v.join(half), "least",
                             chain3.bot, chain3.top_elem, 5)
    assert fix == half


def test_kleene_cap_raises():
    class Flip:
        def __init__(self):
            self.v = 0

    state = Flip()

    def bad(v):  # non-monotone oscillation
        state.v = 1 - state.v
        return state.v

    with pytest.raises(NoConvergence):
        kleene_fixpoint(bad, "least", 0, 1, 10)


def test_reachability_matches_bfs_oracle(model_a):
    # mu u. p \/ <> u is EF p; the classical labeling is the oracle
    f = parse_formula("mu u. p \\/ <> u")
    got = eval_fml(model_a, f)
    want = oracle.classical_labeling(
        model_a, parse_formula("E (tt U p)", "ctlstar"))
    assert got == want
    assert got.to_json() == {"s0": "1", "s1": "1"}


def test_greatest_fixpoint_matches_eg_oracle(model_a):
    f = parse_formula("nu u. p /\\ <> u")
    got = eval_fml(model_a, f)
    want = oracle.classical_labeling(
        model_a, parse_formula("E (p W ff)", "ctlstar"))
    assert got == want
    assert got.to_json() == {"s0": "0", "s1": "1"}


def test_tt_is_top(model_a):
    assert eval_fml(model_a, S.TT()) == model_a.top_predicate()


def test_unbound_variable(model_a):
    with pytest.raises(UnboundVariable):
        eval_fml(model_a, S.Var("u"))


def test_environment_binds_variables(model_a):
    k = pred(model_a, {"s0": "1"})
    assert eval_fml(model_a, S.Var("u"), {"u": k}) == k
    assert eval_fml(model_a, S.Dia(S.Var("u")), {"u": k}).to_json() == \
        {"s0": "1", "s1": "0"}


def test_transfer_equivalence_seeded():
    for m, f in gen.iter_fml_cases(seed=42, count=40, max_states=4):
        assert eval_fml(m, f) == eval_fml(to_continuation(m), f), \
            S.print_formula(f)


def test_evaluation_by_evaluation_seeded():
    for m, f in gen.iter_fml_cases(seed=43, count=20, max_states=4):
        cm = to_continuation(m)
        inner = eval_fml(cm, f)
        dia = eval_fml(cm, S.Dia(f))
        for x in cm.states:
            assert dia.at(x) == successor_eval(cm, x, inner)


def test_env_monotonicity():
    rng = random.Random(9)
    body = S.Or(S.Atom("p"), S.Dia(S.Var("u")))
    for _ in range(20):
        m = gen.make_model(rng, "weighted", max_states=4)
        lo = Predicate(m.lattice, m.states,
                       tuple(rng.randrange(m.lattice.n) for _ in m.states))
        hi = lo.join(Predicate(m.lattice, m.states,
                               tuple(rng.randrange(m.lattice.n)
                                     for _ in m.states)))
        assert eval_fml(m, body, {"u": lo}).leq(eval_fml(m, body, {"u": hi}))


def test_negation_coherence():
    rng = random.Random(11)
    for _ in range(30):
        m = gen.make_model(rng, rng.choice(list(gen.MODEL_KINDS)), max_states=4)
        f = gen.make_fml(rng, depth=rng.randint(1, 4))
        assert eval_fml(m, to_nnf(S.Neg(f))) == eval_fml(m, f).neg()


def test_box_requires_involution():
    from latmc.models import load_model
    doc = {"lattice": {"kind": "explicit", "elements": ["0", "1"],
                       "leq": [[1, 1], [0, 1]]},
           "states": ["s0"], "atoms": {"p": {"s0": "1"}},
           "coalgebra": {"kind": "powerset", "succ": {"s0": ["s0"]}}}
    m = load_model(doc)
    with pytest.raises(NoInvolution):
        eval_fml(m, S.Box(S.Atom("p")))
    with pytest.raises(NoInvolution):
        eval_fml(m, S.NegAtom("p"))


def test_non_monotone_evaluator_hits_cap(bool2):
    class Liar(Evaluator):
        monotone_verified = True

        def __init__(self):
            self.lattice = bool2
            self.states = ("s0",)

        def __call__(self, k):  # anti-monotone: breaks the iteration
            return LatticeElem(bool2, bool2.neg[k.value_index("s0")])

    m = Model(bool2, ("s0",), {}, Continuation({"s0": Liar()}),
              flavor="plain")
    with pytest.raises(NoConvergence):
        eval_fml(m, S.Mu("u", S.Dia(S.Var("u"))))


def test_iteration_stats_recorded(model_a):
    stats = {}
    eval_fml(model_a, parse_formula("mu u. p \\/ <> u"), stats=stats)
    assert stats["fixpoints"] == 1 and stats["iterations"] >= 2
