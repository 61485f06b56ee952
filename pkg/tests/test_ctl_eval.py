import random

import pytest

from latmc import gen, oracle
from latmc.ctl_eval import (
    TemporalModel,
    check_fixpoint_char_condition,
    check_weak_fixpoint_char,
    eval_ctl,
    eval_ctl_classical,
)
from latmc.errors import (
    NoInvolution,
    NotBool2,
    NotCtlFragment,
    PreconditionFailed,
)
from latmc.fml_eval import eval_fml
from latmc.models import load_model, to_continuation
from latmc import syntax as S
from latmc.syntax import FragmentClass, encode_ctl, parse_formula, to_nnf


def test_eval_ctl_until_examples(model_a_affine):
    tm = TemporalModel.min_max(to_continuation(model_a_affine), "max")
    assert eval_ctl(tm, parse_formula("E (tt U p)", "ctlstar")).to_json() == \
        {"s0": "1", "s1": "1"}
    assert eval_ctl(tm, parse_formula("A (tt U p)", "ctlstar")).to_json() == \
        {"s0": "0", "s1": "1"}
    assert eval_ctl(tm, parse_formula("E tt", "ctlstar")) == \
        tm.model.top_predicate()


def test_eval_ctl_rejects_ctlstar(model_a_affine):
    tm = TemporalModel.min_max(to_continuation(model_a_affine), "max")
    with pytest.raises(NotCtlFragment):
        eval_ctl(tm, parse_formula("E X (p U q)", "ctlstar"))


def test_eval_ctl_classical_examples(model_a):
    assert eval_ctl_classical(
        model_a, parse_formula("E X p", "ctlstar")).to_json() == \
        {"s0": "1", "s1": "1"}
    assert eval_ctl_classical(
        model_a, parse_formula("E (p W ff)", "ctlstar")).to_json() == \
        {"s0": "0", "s1": "1"}


def test_eval_ctl_classical_dead_end(dead_end):
    got = eval_ctl_classical(dead_end, parse_formula("E tt", "ctlstar"))
    assert got.to_json() == {"s0": "0", "s1": "0"}
    # vacuous universal quantification at states with no run
    got = eval_ctl_classical(dead_end, parse_formula("A ff", "ctlstar"))
    assert got.to_json() == {"s0": "1", "s1": "1"}


def test_eval_ctl_classical_requires_bool2():
    doc = {"lattice": {"kind": "builtin", "name": "chain3"},
           "states": ["s0"], "atoms": {"p": {"s0": "1"}},
           "coalgebra": {"kind": "powerset", "succ": {"s0": ["s0"]}}}
    with pytest.raises(NotBool2):
        eval_ctl_classical(load_model(doc), parse_formula("E X p", "ctlstar"))


def test_transfer_equivalence_against_classical():
    rng = random.Random(47)
    bool2 = gen.builtin_lattice("bool2")
    for _ in range(15):
        m = gen.make_model(rng, "powerset", lattice=bool2, max_states=4)
        tm = TemporalModel.from_powerset(m)
        for _ in range(6):
            f = gen.make_ctl(rng, depth=rng.randint(1, 3))
            assert eval_ctl(tm, f) == eval_ctl_classical(m, f), \
                S.print_formula(f)


def test_double_entry_classical_oracle():
    rng = random.Random(53)
    bool2 = gen.builtin_lattice("bool2")
    for _ in range(15):
        m = gen.make_model(rng, "powerset", lattice=bool2, max_states=4)
        for _ in range(6):
            f = gen.make_ctl(rng, depth=rng.randint(1, 3))
            assert eval_ctl_classical(m, f) == oracle.classical_labeling(m, f)


def test_head_and_step_lemma_on_affine_models():
    rng = random.Random(59)
    from latmc.models import successor_eval
    for _ in range(10):
        m = gen.make_model(rng, rng.choice(["nonempty-powerset",
                                            "affine-weighted"]), max_states=4)
        cm = to_continuation(m)
        psi = gen.make_ctl(rng, depth=1)
        for pol in ("min", "max"):
            tm = TemporalModel.min_max(cm, pol)
            inner = eval_ctl(tm, psi)
            lifted = eval_ctl(tm, S.Exists(S.Lift(psi)))
            assert lifted == inner
            nxt = eval_ctl(tm, S.Exists(S.Next(S.Lift(psi))))
            for x in cm.states:
                assert nxt.at(x) == successor_eval(cm, x, inner)


def test_exists_forall_duality():
    rng = random.Random(61)
    for _ in range(12):
        m = gen.make_model(rng, rng.choice(["nonempty-powerset",
                                            "affine-weighted"]), max_states=4)
        cm = to_continuation(m)
        tm = TemporalModel.min_max(cm, rng.choice(["min", "max"]))
        f = gen.make_ctl(rng, depth=2)
        if not isinstance(f, (S.Exists, S.Forall)):
            f = S.Exists(S.Next(S.Lift(f)))
        dual = to_nnf(S.SNeg(f))
        assert eval_ctl(tm, f) == eval_ctl(tm, dual).neg()


def test_forall_needs_involution():
    doc = {"lattice": {"kind": "explicit", "elements": ["0", "1"],
                       "leq": [[1, 1], [0, 1]]},
           "states": ["s0"], "atoms": {"p": {"s0": "1"}},
           "coalgebra": {"kind": "nonempty-powerset", "succ": {"s0": ["s0"]}}}
    m = load_model(doc)
    tm = TemporalModel.min_max(to_continuation(m), "max")
    with pytest.raises(NoInvolution):
        eval_ctl(tm, S.Forall(S.Next(S.Lift(S.SAtom("p")))))


def test_min_max_sandwich_neg_free():
    rng = random.Random(67)
    bool2 = gen.builtin_lattice("bool2")
    for _ in range(10):
        m = gen.make_model(rng, "powerset", lattice=bool2, max_states=4)
        cm = to_continuation(m)
        t_min = TemporalModel.min_max(cm, "min")
        t_max = TemporalModel.min_max(cm, "max")
        for _ in range(5):
            f = gen.make_ctl(rng, depth=2, allow_neg=False)
            classical = eval_ctl_classical(m, f)
            assert eval_ctl(t_min, f).leq(classical)
            assert classical.leq(eval_ctl(t_max, f))


def test_weak_char_no_uw_equality(model_a_affine):
    tm = TemporalModel.min_max(to_continuation(model_a_affine), "max")
    rep = check_weak_fixpoint_char(
        tm, parse_formula("E X A X p", "ctlstar"))
    assert rep.fragment is FragmentClass.CtlNoUW
    assert rep.relation == "=" and rep.holds


def test_weak_char_u_only_min(model_a_affine):
    tm = TemporalModel.min_max(to_continuation(model_a_affine), "min")
    rep = check_weak_fixpoint_char(tm, parse_formula("E (p U q)", "ctlstar"))
    assert rep.fragment is FragmentClass.CtlUOnly
    assert rep.relation == ">=" and rep.holds


def test_weak_char_mixed_reports_both(model_a_affine):
    tm = TemporalModel.min_max(to_continuation(model_a_affine), "max")
    rep = check_weak_fixpoint_char(
        tm, parse_formula("E (p U q) \\/ E (p W q)", "ctlstar"))
    assert rep.fragment is FragmentClass.CtlMixed
    assert rep.holds is None
    assert isinstance(rep.lhs_geq_rhs, bool) and isinstance(rep.lhs_leq_rhs, bool)


def test_weak_char_bool2_max_equality_without_until():
    # on two-valued maximal models, W-only and U/W-free formulas agree
    # exactly with their encodings (both sides are greatest fixpoints)
    rng = random.Random(71)
    bool2 = gen.builtin_lattice("bool2")
    for _ in range(8):
        m = gen.make_model(rng, "nonempty-powerset", lattice=bool2,
                           max_states=4)
        tm = TemporalModel.min_max(to_continuation(m), "max")
        for symbols in ("", "W"):
            for _ in range(4):
                f = gen.make_ctl(rng, depth=2, symbols=symbols)
                rep = check_weak_fixpoint_char(tm, f)
                assert rep.lhs == rep.rhs, S.print_formula(f)


def test_max_model_until_exceeds_encoding():
    # the maximal continuation execution map is blind to reachability: on
    # two disconnected self-loops with the goal on the far one, an
    # execution map may defer the until forever (u(a)(w) =
    # inf_n sup_pi w(a^n pi) is a fixpoint witnessing the value 1), so
    # E(tt U p) strictly exceeds its least-fixpoint encoding and the
    # sufficiency inequality fails; only the weak direction survives
    doc = {"lattice": {"kind": "builtin", "name": "bool2"},
           "states": ["a", "b"], "atoms": {"p": {"b": "1"}},
           "coalgebra": {"kind": "nonempty-powerset",
                         "succ": {"a": ["a"], "b": ["b"]}}}
    m = load_model(doc)
    cm = to_continuation(m)
    tm = TemporalModel.min_max(cm, "max")
    psi = parse_formula("E (tt U p)", "ctlstar")
    lhs = eval_ctl(tm, psi)
    rhs = eval_fml(cm, encode_ctl(psi))
    assert lhs.to_json() == {"a": "1", "b": "1"}
    assert rhs.to_json() == {"a": "0", "b": "1"}
    assert rhs.leq(lhs) and lhs != rhs
    cond = check_fixpoint_char_condition(
        tm, parse_formula("tt", "ctlstar"), parse_formula("p", "ctlstar"))
    assert not cond.u_holds and cond.w_holds
    # the transferred path-based maximal map recovers the classical value
    tpath = TemporalModel.from_powerset(m)
    assert eval_ctl(tpath, psi) == rhs == eval_ctl_classical(m, psi)


def test_char_precondition_failures(model_a, dead_end):
    tm = TemporalModel.from_powerset(model_a)
    with pytest.raises(PreconditionFailed):
        check_weak_fixpoint_char(tm, parse_formula("E X p", "ctlstar"))
    plain = TemporalModel.min_max(to_continuation(dead_end), "max")
    with pytest.raises(PreconditionFailed):
        check_weak_fixpoint_char(plain, parse_formula("E X p", "ctlstar"))


def test_char_condition_bool2_max(model_a_affine):
    tm = TemporalModel.min_max(to_continuation(model_a_affine), "max")
    rep = check_fixpoint_char_condition(
        tm, parse_formula("tt", "ctlstar"), parse_formula("p", "ctlstar"))
    assert rep.u_holds and rep.w_holds


def test_char_condition_goal_bottom():
    rng = random.Random(73)
    m = gen.make_model(rng, "affine-weighted", max_states=3,
                       lattice=gen.builtin_lattice("chain3"))
    tm = TemporalModel.min_max(to_continuation(m), "min")
    rep = check_fixpoint_char_condition(
        tm, parse_formula("tt", "ctlstar"), parse_formula("ff", "ctlstar"))
    # with a bottom goal both U-sides are bottom, so the inequality holds
    assert rep.u_holds
    assert rep.u_lhs == tm.model.bottom_predicate()
    assert rep.u_rhs == tm.model.bottom_predicate()


def test_char_condition_chain3_min_reports():
    rng = random.Random(79)
    m = gen.make_model(rng, "affine-weighted", max_states=3,
                       lattice=gen.builtin_lattice("chain3"))
    tm = TemporalModel.min_max(to_continuation(m), "min")
    rep = check_fixpoint_char_condition(
        tm, parse_formula("tt", "ctlstar"), parse_formula("p", "ctlstar"))
    assert isinstance(rep.u_holds, bool) and isinstance(rep.w_holds, bool)
    assert set(rep.to_json()) == {"until_inequality_holds",
                                  "wuntil_inequality_holds", "until", "wuntil"}


def test_lattice_valued_powerset_maximal_hand_derived():
    # deterministic chain a -> b -> b over chain3; the until labeling is
    # EU(b) = g(b) \/ (h(b) /\ EU(b)), least solution g(b), and
    # EU(a) = g(a) \/ (h(a) /\ EU(b)); checked by hand: 0 \/ (1/2 /\ 1) = 1/2
    doc = {"lattice": {"kind": "builtin", "name": "chain3"},
           "states": ["a", "b"],
           "atoms": {"h": {"a": "1/2", "b": "0"}, "g": {"a": "0", "b": "1"}},
           "coalgebra": {"kind": "nonempty-powerset",
                         "succ": {"a": ["b"], "b": ["b"]}}}
    m = load_model(doc)
    tm = TemporalModel.from_powerset(m)
    got = eval_ctl(tm, parse_formula("E (h U g)", "ctlstar"))
    assert got.to_json() == {"a": "1/2", "b": "1"}
    # and the A-dual on the same deterministic model coincides
    gotA = eval_ctl(tm, parse_formula("A (h U g)", "ctlstar"))
    assert gotA == got


def test_min_until_and_max_wuntil_are_classical_on_bool2():
    # two theorem squeezes: the weak characterization bounds the min model
    # below by the encoding (= classical EU) while the sandwich bounds it
    # above by the transferred map (= classical EU), and dually for the
    # max model on weak-until formulas
    rng = random.Random(77)
    bool2 = gen.builtin_lattice("bool2")
    eu = parse_formula("E (p U q)", "ctlstar")
    ew = parse_formula("E (p W q)", "ctlstar")
    for _ in range(15):
        m = gen.make_model(rng, "nonempty-powerset", lattice=bool2,
                           max_states=5)
        cm = to_continuation(m)
        assert eval_ctl(TemporalModel.min_max(cm, "min"), eu) == \
            eval_ctl_classical(m, eu)
        assert eval_ctl(TemporalModel.min_max(cm, "max"), ew) == \
            eval_ctl_classical(m, ew)


def test_lattice_valued_sandwich():
    # min <= transferred <= max also holds beyond the booleans for
    # negation-free formulas (the transferred map is some execution map)
    rng = random.Random(97)
    for _ in range(10):
        lat = gen.builtin_lattice(rng.choice(["chain3", "square2"]))
        m = gen.make_model(rng, "powerset", lattice=lat, max_states=4)
        cm = to_continuation(m)
        t_min = TemporalModel.min_max(cm, "min")
        t_max = TemporalModel.min_max(cm, "max")
        t_mid = TemporalModel.from_powerset(m)
        for _ in range(4):
            f = gen.make_ctl(rng, depth=2, allow_neg=False)
            lo, mid, hi = (eval_ctl(t, f) for t in (t_min, t_mid, t_max))
            assert lo.leq(mid) and mid.leq(hi), S.print_formula(f)
