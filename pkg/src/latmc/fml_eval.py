"""Fixpoint modal logic semantics over both concrete-monad and continuation
models, with Kleene iteration for the fixpoint operators.

The iteration cap is |states| * (longest chain in the lattice) + 1: a
monotone operator on the finite predicate lattice stabilizes within the
chain length, so exceeding the cap signals a non-monotone operator that
escaped model validation.
"""

from __future__ import annotations

from .errors import NoConvergence, NoInvolution, UnboundVariable
from .models import Continuation, Model, Predicate, lift_eval, successor_eval
from . import syntax as S


def kleene_fixpoint(step, polarity, bottom, top, cap):
    """Iterate a monotone operator to its least/greatest fixpoint.

    Starts from ``bottom`` (polarity "least") or ``top`` ("greatest") and
    stops when two consecutive iterates are equal.  Returns the fixpoint
    and the iteration count; raises NoConvergence past the cap.
    """
    if polarity not in ("least", "greatest"):
        raise ValueError(f"unknown polarity {polarity!r}")
    cur = bottom if polarity == "least" else top
    for i in range(cap):
        nxt = step(cur)
        if nxt == cur:
            return cur, i + 1
        cur = nxt
    raise NoConvergence(
        f"fixpoint iteration exceeded {cap} steps; operator not monotone?")


def eval_fml(m: Model, f, env=None, stats=None) -> Predicate:
    """Evaluate an FML formula clause by clause.

    ``env`` binds the free variables to predicates.  On continuation models
    the diamond is evaluated through successor_eval; on concrete models
    through the canonical lifting.  Box and negated atoms need a de Morgan
    involution.
    """
    env = dict(env or {})
    for name, pred in env.items():
        if pred.lattice is not m.lattice or pred.states != m.states:
            raise UnboundVariable(
                f"environment value for {name!r} is over the wrong model")
    return _eval(m, f, env, stats if stats is not None else {})


def _dia(m, k):
    if isinstance(m.coalgebra, Continuation):
        return Predicate(m.lattice, m.states,
                         tuple(successor_eval(m, x, k).index for x in m.states))
    return Predicate(m.lattice, m.states,
                     tuple(lift_eval(m, "dia", x, k).index for x in m.states))


def _eval(m, f, env, stats):
    lat = m.lattice
    if isinstance(f, S.Var):
        if f.name not in env:
            raise UnboundVariable(f"unbound variable {f.name!r}")
        return env[f.name]
    if isinstance(f, S.Atom):
        # unlabeled identifiers act as free variables bound by the caller
        if f.name in m.labeling:
            return m.label(f.name)
        if f.name in env:
            return env[f.name]
        return m.label(f.name)
    if isinstance(f, S.NegAtom):
        if not lat.has_neg:
            raise NoInvolution("negated atoms need a de Morgan involution")
        return m.label(f.name).neg()
    if isinstance(f, S.TT):
        return m.top_predicate()
    if isinstance(f, S.FF):
        return m.bottom_predicate()
    if isinstance(f, S.And):
        return _eval(m, f.left, env, stats).meet(_eval(m, f.right, env, stats))
    if isinstance(f, S.Or):
        return _eval(m, f.left, env, stats).join(_eval(m, f.right, env, stats))
    if isinstance(f, S.Dia):
        return _dia(m, _eval(m, f.sub, env, stats))
    if isinstance(f, S.Box):
        if not lat.has_neg:
            raise NoInvolution("box needs a de Morgan involution")
        return _dia(m, _eval(m, f.sub, env, stats).neg()).neg()
    if isinstance(f, (S.Mu, S.Nu)):
        polarity = "least" if isinstance(f, S.Mu) else "greatest"

        def step(k):
            return _eval(m, f.body, {**env, f.var: k}, stats)

        fix, iters = kleene_fixpoint(step, polarity, m.bottom_predicate(),
                                     m.top_predicate(), m.fixpoint_cap())
        stats["iterations"] = stats.get("iterations", 0) + iters
        stats["fixpoints"] = stats.get("fixpoints", 0) + 1
        return fix
    if isinstance(f, S.Neg):
        raise NoInvolution("surface negation must be eliminated by to_nnf")
    raise TypeError(f"not an FML formula: {f!r}")
