"""CTL semantics over temporal continuation models, the classical Kripke
semantics for boolean powerset models, and the fixpoint-characterization
checkers.

The path quantifier E is interpreted by evaluating the model's execution
map on the continuation shape of the path formula; A dualizes the shape
(swap the U/W roles, negate the parameter predicates) and negates the
result, which needs a de Morgan lattice.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    NoInvolution,
    NotBool2,
    NotCtlFragment,
    PreconditionFailed,
    UnsupportedSource,
)
from .execution import (
    ExecutionMapHandle,
    Head,
    Second,
    until_shape,
    wuntil_shape,
)
from .fml_eval import eval_fml, kleene_fixpoint
from .models import (
    Continuation,
    Model,
    NonemptyPowerset,
    Powerset,
    Predicate,
    check_constant_linear,
    successor_eval,
    to_continuation,
)
from . import syntax as S
from .syntax import FragmentClass, as_state_formula, classify_fragment, encode_ctl


@dataclass
class TemporalModel:
    """A continuation model together with a queryable execution map."""

    model: Model
    exec: ExecutionMapHandle

    def __post_init__(self):
        if not isinstance(self.model.coalgebra, Continuation):
            raise UnsupportedSource("temporal models need a continuation model")
        em = self.exec.model
        if em.lattice is not self.model.lattice or em.states != self.model.states:
            raise UnsupportedSource(
                "execution map belongs to a different model")

    @classmethod
    def min_max(cls, model: Model, polarity) -> "TemporalModel":
        return cls(model, ExecutionMapHandle.continuation_min_max(model, polarity))

    @classmethod
    def from_powerset(cls, m: Model) -> "TemporalModel":
        """The transferred maximal model of a (non-empty) powerset model."""
        return cls(to_continuation(m), ExecutionMapHandle.powerset_maximal(m))


def eval_ctl(tm: TemporalModel, f, stats=None) -> Predicate:
    """Evaluate a CTL formula on a temporal model."""
    if classify_fragment(f) is FragmentClass.GeneralCtlStar:
        raise NotCtlFragment(
            "eval_ctl only evaluates the CTL fragment; use the bounded "
            "bracket oracle for general CTL*")
    return _eval_state(tm, f, stats if stats is not None else {})


def _eval_state(tm, f, stats):
    m = tm.model
    if isinstance(f, S.SAtom):
        return m.label(f.name)
    if isinstance(f, S.SNegAtom):
        if not m.lattice.has_neg:
            raise NoInvolution("negated atoms need a de Morgan involution")
        return m.label(f.name).neg()
    if isinstance(f, S.STT):
        return m.top_predicate()
    if isinstance(f, S.SFF):
        return m.bottom_predicate()
    if isinstance(f, S.SAnd):
        return _eval_state(tm, f.left, stats).meet(_eval_state(tm, f.right, stats))
    if isinstance(f, S.SOr):
        return _eval_state(tm, f.left, stats).join(_eval_state(tm, f.right, stats))
    if isinstance(f, S.Exists):
        shape = _shape_of(tm, f.path, stats)
        return Predicate(m.lattice, m.states,
                         tuple(tm.exec.evaluate(x, shape).index
                               for x in m.states))
    if isinstance(f, S.Forall):
        if not m.lattice.has_neg:
            raise NoInvolution("the A quantifier needs a de Morgan involution")
        shape = _dual_shape_of(tm, f.path, stats)
        neg = m.lattice.neg
        return Predicate(m.lattice, m.states,
                         tuple(neg[tm.exec.evaluate(x, shape).index]
                               for x in m.states))
    raise NotCtlFragment(f"not a CTL state formula: {f!r}")


def _eval_path_state(tm, p, stats):
    s = as_state_formula(p)
    if s is None:
        raise NotCtlFragment(f"path argument is not a state formula: {p!r}")
    return _eval_state(tm, s, stats)


def _shape_of(tm, p, stats):
    """The continuation shape of a CTL path formula."""
    s = as_state_formula(p)
    if s is not None:
        return Head(_eval_state(tm, s, stats))
    if isinstance(p, S.Next):
        return Second(_eval_path_state(tm, p.sub, stats))
    if isinstance(p, S.Until):
        return until_shape(_eval_path_state(tm, p.hold, stats),
                           _eval_path_state(tm, p.goal, stats))
    if isinstance(p, S.WUntil):
        return wuntil_shape(_eval_path_state(tm, p.hold, stats),
                            _eval_path_state(tm, p.release, stats))
    raise NotCtlFragment(f"not a CTL path argument: {p!r}")


def _dual_shape_of(tm, p, stats):
    """The shape of the negated path continuation: U and W swap roles and
    the parameter predicates are negated."""
    s = as_state_formula(p)
    if s is not None:
        return Head(_eval_state(tm, s, stats).neg())
    if isinstance(p, S.Next):
        return Second(_eval_path_state(tm, p.sub, stats).neg())
    if isinstance(p, S.Until):
        return wuntil_shape(_eval_path_state(tm, p.goal, stats).neg(),
                            _eval_path_state(tm, p.hold, stats).neg())
    if isinstance(p, S.WUntil):
        return until_shape(_eval_path_state(tm, p.release, stats).neg(),
                           _eval_path_state(tm, p.hold, stats).neg())
    raise NotCtlFragment(f"not a CTL path argument: {p!r}")


# ---------------------------------------------------------------------------
# classical boolean semantics
# ---------------------------------------------------------------------------

def eval_ctl_classical(m: Model, f) -> Predicate:
    """Standard CTL labeling on a two-valued powerset model, restricted to
    states with at least one infinite run."""
    if m.lattice.n != 2:
        raise NotBool2("classical evaluation needs a two-element lattice")
    if not isinstance(m.coalgebra, (Powerset, NonemptyPowerset)):
        raise UnsupportedSource("classical evaluation needs a powerset model")
    if classify_fragment(f) is FragmentClass.GeneralCtlStar:
        raise NotCtlFragment("classical evaluation covers the CTL fragment")
    lat = m.lattice
    comp = list(range(lat.n))
    comp[lat.bottom], comp[lat.top] = lat.top, lat.bottom
    succ = m.coalgebra.succ
    alive = set(m.states)
    while True:
        keep = {x for x in alive if succ[x] & alive}
        if keep == alive:
            break
        alive = keep
    alive_idx = {x: (lat.top if x in alive else lat.bottom) for x in m.states}

    def ev(g):
        if isinstance(g, S.SAtom):
            return m.label(g.name)
        if isinstance(g, S.SNegAtom):
            base = m.label(g.name)
            return Predicate(lat, m.states, tuple(comp[v] for v in base.values))
        if isinstance(g, S.STT):
            return m.top_predicate()
        if isinstance(g, S.SFF):
            return m.bottom_predicate()
        if isinstance(g, S.SAnd):
            return ev(g.left).meet(ev(g.right))
        if isinstance(g, S.SOr):
            return ev(g.left).join(ev(g.right))
        if isinstance(g, S.Exists):
            return ev_epath(g.path)
        if isinstance(g, S.Forall):
            dual = S.to_nnf(S.PNeg(g.path))
            inner = ev_epath(dual)
            return Predicate(lat, m.states,
                             tuple(comp[v] for v in inner.values))
        raise NotCtlFragment(f"not a CTL state formula: {g!r}")

    def ev_epath(p):
        s = as_state_formula(p)
        if s is not None:
            vals = ev(s)
            return Predicate(lat, m.states,
                             tuple(lat.meet[vals.values[i]][alive_idx[x]]
                                   for i, x in enumerate(m.states)))
        if isinstance(p, S.Next):
            vals = ev(as_state_formula(p.sub))
            return Predicate(lat, m.states, tuple(
                lat.join_all(lat.meet[vals.value_index(y)][alive_idx[y]]
                             for y in succ[x])
                for x in m.states))
        if isinstance(p, S.Until):
            hold, goal = ev(as_state_formula(p.hold)), ev(as_state_formula(p.goal))
            cur = m.bottom_predicate()
            while True:
                vals = []
                for i, x in enumerate(m.states):
                    reach = lat.join_all(cur.value_index(y) for y in succ[x])
                    vals.append(lat.join[
                        lat.meet[goal.values[i]][alive_idx[x]]][
                        lat.meet[hold.values[i]][reach]])
                nxt = Predicate(lat, m.states, tuple(vals))
                if nxt == cur:
                    return cur
                cur = nxt
        if isinstance(p, S.WUntil):
            hold, rel = ev(as_state_formula(p.hold)), ev(as_state_formula(p.release))
            cur = Predicate(lat, m.states,
                            tuple(alive_idx[x] for x in m.states))
            while True:
                vals = []
                for i, x in enumerate(m.states):
                    cont = lat.join_all(
                        lat.meet[cur.value_index(y)][alive_idx[y]]
                        for y in succ[x])
                    vals.append(lat.meet_all([
                        alive_idx[x], hold.values[i],
                        lat.join[rel.values[i]][cont]]))
                nxt = Predicate(lat, m.states, tuple(vals))
                if nxt == cur:
                    return cur
                cur = nxt
        raise NotCtlFragment(f"not a CTL path argument: {p!r}")

    return ev(f)


# ---------------------------------------------------------------------------
# fixpoint-characterization checkers
# ---------------------------------------------------------------------------

@dataclass
class CharReport:
    fragment: FragmentClass
    relation: str  # "=", ">=", "<=", "report"
    holds: object  # bool, or None when only reporting
    lhs: Predicate
    rhs: Predicate
    lhs_geq_rhs: bool
    lhs_leq_rhs: bool

    def to_json(self):
        return {
            "class": self.fragment.value,
            "relation": self.relation,
            "holds": self.holds,
            "lhs": self.lhs.to_json(),
            "rhs": self.rhs.to_json(),
            "lhs_geq_rhs": self.lhs_geq_rhs,
            "lhs_leq_rhs": self.lhs_leq_rhs,
        }


def _require_constant_linear(tm: TemporalModel):
    if tm.exec.backend != "continuation-minmax":
        raise PreconditionFailed(
            "characterization checks need a min/max execution handle")
    if tm.model.flavor != "affine":
        raise PreconditionFailed("characterization checks need an affine model")
    report = getattr(tm.model, "_cl_report", None)
    if report is None:
        report = check_constant_linear(tm.model)
        tm.model._cl_report = report
    if not report.passed:
        raise PreconditionFailed("the coalgebra is not constant-linear")
    return report


def check_weak_fixpoint_char(tm: TemporalModel, f) -> CharReport:
    """Compare a CTL formula against its fixpoint encoding.

    Equality is asserted for U/W-free formulas, one inequality for U-only
    and W-only formulas; mixed formulas report both directions without an
    assertion.
    """
    _require_constant_linear(tm)
    fragment = classify_fragment(f)
    if fragment is FragmentClass.GeneralCtlStar:
        raise NotCtlFragment("the characterization applies to CTL only")
    lhs = eval_ctl(tm, f)
    rhs = eval_fml(tm.model, encode_ctl(f))
    geq, leq = rhs.leq(lhs), lhs.leq(rhs)
    if fragment is FragmentClass.CtlNoUW:
        relation, holds = "=", geq and leq
    elif fragment is FragmentClass.CtlUOnly:
        relation, holds = ">=", geq
    elif fragment is FragmentClass.CtlWOnly:
        relation, holds = "<=", leq
    else:
        relation, holds = "report", None
    return CharReport(fragment, relation, holds, lhs, rhs, geq, leq)


@dataclass
class CondReport:
    u_holds: bool
    w_holds: bool
    u_lhs: Predicate
    u_rhs: Predicate
    w_lhs: Predicate
    w_rhs: Predicate

    def to_json(self):
        return {
            "until_inequality_holds": self.u_holds,
            "wuntil_inequality_holds": self.w_holds,
            "until": {"lhs": self.u_lhs.to_json(), "rhs": self.u_rhs.to_json()},
            "wuntil": {"lhs": self.w_lhs.to_json(), "rhs": self.w_rhs.to_json()},
        }


def check_fixpoint_char_condition(tm: TemporalModel, hold, goal) -> CondReport:
    """Evaluate both sides of the two sufficiency inequalities that turn
    the weak characterization into equalities.

    The left sides apply the execution map to the U/W path fixpoints via
    the shape engine; the right sides run the corresponding one-step state
    operators to their extremal fixpoints over predicates.
    """
    _require_constant_linear(tm)
    m = tm.model
    lat = m.lattice
    k_hold, k_goal = eval_ctl(tm, hold), eval_ctl(tm, goal)
    e_hold = eval_fml(m, encode_ctl(hold))
    e_goal = eval_fml(m, encode_ctl(goal))
    cap = m.fixpoint_cap()

    u_lhs = Predicate(lat, m.states,
                      tuple(tm.exec.evaluate(x, until_shape(k_hold, k_goal)).index
                            for x in m.states))

    def psi_u(k):
        return Predicate(lat, m.states, tuple(
            lat.join[e_goal.values[i]][
                lat.meet[e_hold.values[i]][successor_eval(m, x, k).index]]
            for i, x in enumerate(m.states)))

    u_rhs, _ = kleene_fixpoint(psi_u, "least", m.bottom_predicate(),
                               m.top_predicate(), cap)

    w_lhs = Predicate(lat, m.states,
                      tuple(tm.exec.evaluate(x, wuntil_shape(k_hold, k_goal)).index
                            for x in m.states))

    def psi_w(k):
        return Predicate(lat, m.states, tuple(
            lat.meet[e_hold.values[i]][
                lat.join[e_goal.values[i]][successor_eval(m, x, k).index]]
            for i, x in enumerate(m.states)))

    w_rhs, _ = kleene_fixpoint(psi_w, "greatest", m.bottom_predicate(),
                               m.top_predicate(), cap)

    return CondReport(u_lhs.leq(u_rhs), w_rhs.leq(w_lhs),
                      u_lhs, u_rhs, w_lhs, w_rhs)
