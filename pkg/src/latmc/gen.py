"""Seeded random corpora: models and formulas for the differential suites.

All generators take an explicit random.Random so fixed seeds give fixed
corpora; size knobs default to the documented limits (states <= 5, formula
depth <= 5, lattices up to four elements).
"""

from __future__ import annotations

import random

from .lattice import builtin_lattice
from .models import (
    AffineWeighted,
    Model,
    Neighborhood,
    NonemptyPowerset,
    Powerset,
    Predicate,
    Weighted,
    validate_model,
)
from . import syntax as S

LATTICE_NAMES = ("bool2", "chain3", "chain4", "square2")
MODEL_KINDS = ("powerset", "nonempty-powerset", "weighted",
               "affine-weighted", "neighborhood")
DEFAULT_ATOMS = ("p", "q")


def make_lattice(rng: random.Random, names=LATTICE_NAMES):
    return builtin_lattice(rng.choice(list(names)))


def make_model(rng: random.Random, kind, lattice=None, max_states=5,
               atoms=DEFAULT_ATOMS) -> Model:
    if kind == "neighborhood":
        lattice = builtin_lattice("bool2")
    elif lattice is None:
        lattice = make_lattice(rng)
    n = rng.randint(2, max_states)
    states = tuple(f"s{i}" for i in range(n))
    labeling = {a: Predicate(lattice, states,
                             tuple(rng.randrange(lattice.n) for _ in states))
                for a in atoms}
    if kind in ("powerset", "nonempty-powerset"):
        succ = {}
        for x in states:
            size = rng.randint(0 if kind == "powerset" else 1, n)
            if kind == "nonempty-powerset":
                size = max(size, 1)
            succ[x] = frozenset(rng.sample(states, size)) if size else frozenset()
        co = Powerset(succ) if kind == "powerset" else NonemptyPowerset(succ)
    elif kind in ("weighted", "affine-weighted"):
        weights = {}
        for x in states:
            row = {y: rng.randrange(lattice.n) for y in states}
            if kind == "affine-weighted":
                while lattice.join_all(row.values()) != lattice.top:
                    row[rng.choice(states)] = lattice.top
            weights[x] = row
        co = Weighted(weights) if kind == "weighted" else AffineWeighted(weights)
    elif kind == "neighborhood":
        nbhd = {}
        for x in states:
            bases = []
            for _ in range(rng.randint(0, 3)):
                size = rng.randint(0, n)
                bases.append(frozenset(rng.sample(states, size)))
            nbhd[x] = tuple(bases)
        co = Neighborhood(nbhd)
    else:
        raise ValueError(f"unknown model kind {kind!r}")
    m = Model(lattice, states, labeling, co)
    validate_model(m)
    return m


# ---------------------------------------------------------------------------
# formulas
# ---------------------------------------------------------------------------

def make_fml(rng: random.Random, atoms=DEFAULT_ATOMS, depth=5,
             allow_neg=True):
    """A closed FML formula in negation normal form."""
    counter = [0]

    def leaf(bound):
        choices = ["atom", "tt", "ff"]
        if allow_neg:
            choices.append("negatom")
        if bound:
            choices += ["var", "var"]
        pick = rng.choice(choices)
        if pick == "atom":
            return S.Atom(rng.choice(list(atoms)))
        if pick == "negatom":
            return S.NegAtom(rng.choice(list(atoms)))
        if pick == "var":
            return S.Var(rng.choice(bound))
        return S.TT() if pick == "tt" else S.FF()

    def build(d, bound):
        if d <= 0:
            return leaf(bound)
        ops = ["and", "or", "dia", "mu", "nu", "leaf"]
        if allow_neg:
            ops.append("box")
        pick = rng.choice(ops)
        if pick == "leaf":
            return leaf(bound)
        if pick == "and":
            return S.And(build(d - 1, bound), build(d - 1, bound))
        if pick == "or":
            return S.Or(build(d - 1, bound), build(d - 1, bound))
        if pick == "dia":
            return S.Dia(build(d - 1, bound))
        if pick == "box":
            return S.Box(build(d - 1, bound))
        var = f"v{counter[0]}"
        counter[0] += 1
        body = build(d - 1, bound + [var])
        return S.Mu(var, body) if pick == "mu" else S.Nu(var, body)

    return build(depth, [])


def make_ctl(rng: random.Random, atoms=DEFAULT_ATOMS, depth=4, symbols="UW",
             allow_neg=True):
    """A CTL-fragment state formula using only the given path symbols."""

    def lift(s):
        # mirror the parser: in path position, constants and boolean
        # connectives stay at the path level, only atoms and quantified
        # formulas are lifted
        if isinstance(s, S.STT):
            return S.PTT()
        if isinstance(s, S.SFF):
            return S.PFF()
        if isinstance(s, S.SAnd):
            return S.PAnd(lift(s.left), lift(s.right))
        if isinstance(s, S.SOr):
            return S.POr(lift(s.left), lift(s.right))
        return S.Lift(s)

    def state(d):
        if d <= 0:
            pick = rng.choice(["atom", "negatom", "tt", "ff"]
                              if allow_neg else ["atom", "tt", "ff"])
            if pick == "atom":
                return S.SAtom(rng.choice(list(atoms)))
            if pick == "negatom":
                return S.SNegAtom(rng.choice(list(atoms)))
            return S.STT() if pick == "tt" else S.SFF()
        ops = ["and", "or", "ex", "lift", "leaf"]
        if allow_neg:
            ops.append("ax")
        if "U" in symbols:
            ops.append("eu")
            if allow_neg:
                ops.append("au")
        if "W" in symbols:
            ops.append("ew")
            if allow_neg:
                ops.append("aw")
        pick = rng.choice(ops)
        if pick == "leaf":
            return state(0)
        if pick == "and":
            return S.SAnd(state(d - 1), state(d - 1))
        if pick == "or":
            return S.SOr(state(d - 1), state(d - 1))
        if pick == "ex":
            return S.Exists(S.Next(lift(state(d - 1))))
        if pick == "ax":
            return S.Forall(S.Next(lift(state(d - 1))))
        if pick == "lift":
            return S.Exists(lift(state(d - 1)))
        if pick == "eu":
            return S.Exists(S.Until(lift(state(d - 1)), lift(state(d - 1))))
        if pick == "au":
            return S.Forall(S.Until(lift(state(d - 1)), lift(state(d - 1))))
        if pick == "ew":
            return S.Exists(S.WUntil(lift(state(d - 1)), lift(state(d - 1))))
        return S.Forall(S.WUntil(lift(state(d - 1)), lift(state(d - 1))))

    return state(depth)


def iter_fml_cases(seed, count, kinds=MODEL_KINDS, max_states=5, depth=5):
    """Seeded (model, closed formula) pairs cycling over the monad kinds."""
    rng = random.Random(seed)
    for i in range(count):
        kind = kinds[i % len(kinds)]
        m = make_model(rng, kind, max_states=max_states)
        f = make_fml(rng, depth=rng.randint(1, depth))
        yield m, f


def iter_ctl_formulas(seed, count, atoms=DEFAULT_ATOMS, depth=3,
                      symbols="UW", allow_neg=True):
    rng = random.Random(seed)
    for _ in range(count):
        yield make_ctl(rng, atoms, depth=rng.randint(1, depth),
                       symbols=symbols, allow_neg=allow_neg)
