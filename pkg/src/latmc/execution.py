"""Execution maps for continuation coalgebras.

The minimal and maximal execution maps live on the full continuation space
over infinite paths, which is not finitely representable.  The engine
exploits that the CTL-relevant path continuations form a small family
closed under the prefix shift w -> (pi -> w(x pi)):

* ``Const(a)``          pi -> a
* ``Head(k)``           pi -> k(pi_0)
* ``Second(k)``         pi -> k(pi_1)
* ``AffineUntil``       pi -> a \\/ (b /\\ wU(pi)),  wU the least U-fixpoint
* ``AffineWUntil``      pi -> a /\\ (b \\/ wW(pi)),  wW the greatest W-fixpoint

Shifting an until-shape only moves its two constant parameters inside the
lattice (distributivity), so the closure of any query is finite and the
transfinite fixpoint construction restricts to a finite Kleene iteration
on a value table.  Solved tables are asserted to satisfy the execution
operator's fixpoint equation entrywise.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NoConvergence, UnsupportedSource
from .lattice import LatticeElem, LatticeSpec
from .models import (
    Continuation,
    Model,
    NonemptyPowerset,
    Powerset,
    Predicate,
    successor_eval,
)


# ---------------------------------------------------------------------------
# continuation shapes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Const:
    lattice: LatticeSpec
    value: int


@dataclass(frozen=True)
class Head:
    pred: Predicate


@dataclass(frozen=True)
class Second:
    pred: Predicate


@dataclass(frozen=True)
class AffineUntil:
    """pi -> a \\/ (b /\\ wU(pi)) with wU = mu(goal \\/ (hold /\\ next))."""

    a: int
    b: int
    hold: Predicate
    goal: Predicate


@dataclass(frozen=True)
class AffineWUntil:
    """pi -> a /\\ (b \\/ wW(pi)) with wW = nu(k1 /\\ (k2 \\/ next))."""

    a: int
    b: int
    k1: Predicate
    k2: Predicate


SHAPES = (Const, Head, Second, AffineUntil, AffineWUntil)


def shape_lattice(s) -> LatticeSpec:
    if isinstance(s, Const):
        return s.lattice
    if isinstance(s, Head) or isinstance(s, Second):
        return s.pred.lattice
    if isinstance(s, AffineUntil):
        return s.hold.lattice
    if isinstance(s, AffineWUntil):
        return s.k1.lattice
    raise TypeError(f"not a continuation shape: {s!r}")


def until_shape(hold: Predicate, goal: Predicate) -> AffineUntil:
    lat = hold.lattice
    return AffineUntil(lat.bottom, lat.top, hold, goal)


def wuntil_shape(k1: Predicate, k2: Predicate) -> AffineWUntil:
    lat = k1.lattice
    return AffineWUntil(lat.top, lat.bottom, k1, k2)


def shift_shape(s, x):
    """The prefix shift: the shape of pi -> s(x pi).

    The until cases compose through one fixpoint unfolding plus
    distributive rewriting; the W case is the order dual of the U case.
    """
    if isinstance(s, Const):
        return s
    if isinstance(s, Head):
        return Const(s.pred.lattice, s.pred.value_index(x))
    if isinstance(s, Second):
        return Head(s.pred)
    if isinstance(s, AffineUntil):
        lat = s.hold.lattice
        a = lat.join[s.a][lat.meet[s.b][s.goal.value_index(x)]]
        b = lat.meet[s.b][s.hold.value_index(x)]
        return AffineUntil(a, b, s.hold, s.goal)
    if isinstance(s, AffineWUntil):
        lat = s.k1.lattice
        a = lat.meet[s.a][lat.join[s.b][s.k1.value_index(x)]]
        b = lat.join[s.b][s.k2.value_index(x)]
        return AffineWUntil(a, b, s.k1, s.k2)
    raise TypeError(f"not a continuation shape: {s!r}")


# ---------------------------------------------------------------------------
# path extrema (the affine Kleisli bottom and top, shape by shape)
# ---------------------------------------------------------------------------

def path_extremum(lattice, states, base, polarity) -> LatticeElem:
    """Extremum over all infinite paths of a U/W base shape.

    ``base`` is ("U", hold, goal) or ("W", k1, k2); ``polarity`` is "inf"
    or "sup".  Computed as a one-dimensional fixpoint: the least fixpoint
    for U bases and the greatest for W bases, the choice validated against
    the brute-force path oracle by the test suite.
    """
    if polarity not in ("inf", "sup"):
        raise ValueError(f"unknown polarity {polarity!r}")
    agg = lattice.meet_all if polarity == "inf" else lattice.join_all
    kind, k1, k2 = base[0], base[1], base[2]
    if kind == "U":
        hold, goal = k1, k2

        def step(v):
            return agg(
                lattice.join[goal.value_index(x)][lattice.meet[hold.value_index(x)][v]]
                for x in states)

        cur = lattice.bottom
    elif kind == "W":
        def step(v):
            return agg(
                lattice.meet[k1.value_index(x)][lattice.join[k2.value_index(x)][v]]
                for x in states)

        cur = lattice.top
    else:
        raise ValueError(f"unknown base kind {kind!r}")
    for _ in range(lattice.height + 1):
        nxt = step(cur)
        if nxt == cur:
            return LatticeElem(lattice, cur)
        cur = nxt
    raise NoConvergence("path extremum iteration did not stabilize")


def shape_extremum(s, states, polarity) -> int:
    """Value of the affine Kleisli bottom (inf) or top (sup) at a shape."""
    lat = shape_lattice(s)
    if isinstance(s, Const):
        return s.value
    if isinstance(s, (Head, Second)):
        vals = s.pred.values
        return lat.meet_all(vals) if polarity == "inf" else lat.join_all(vals)
    if isinstance(s, AffineUntil):
        w = path_extremum(lat, states, ("U", s.hold, s.goal), polarity).index
        return lat.join[s.a][lat.meet[s.b][w]]
    if isinstance(s, AffineWUntil):
        w = path_extremum(lat, states, ("W", s.k1, s.k2), polarity).index
        return lat.meet[s.a][lat.join[s.b][w]]
    raise TypeError(f"not a continuation shape: {s!r}")


# ---------------------------------------------------------------------------
# the execution operator on shape tables
# ---------------------------------------------------------------------------

def exec_operator_step(m: Model, lookup, x, s) -> int:
    """One application of the execution operator at a state and shape:
    succ(x) applied to y -> u(y, shift(s, x))."""
    shifted = shift_shape(s, x)
    pred = Predicate(m.lattice, m.states,
                     tuple(lookup(y, shifted) for y in m.states))
    return successor_eval(m, x, pred).index


def shape_closure(states, queries):
    """Close a set of shapes under the prefix shift at every state."""
    todo = list(queries)
    seen = set()
    while todo:
        s = todo.pop()
        if s in seen:
            continue
        seen.add(s)
        for x in states:
            todo.append(shift_shape(s, x))
    return seen


def compute_execution_value(m: Model, polarity, queries):
    """Solve the minimal/maximal execution map on the closure of the
    queried (state, shape) pairs.

    Returns {(state, shape): LatticeElem} covering every state and every
    shape in the closure.  The model's monad flavor picks the start of the
    iteration: constants for plain, path extrema for affine.
    """
    if not isinstance(m.coalgebra, Continuation):
        raise UnsupportedSource("execution tables need a continuation model")
    if polarity not in ("min", "max"):
        raise ValueError(f"unknown polarity {polarity!r}")
    lat = m.lattice
    shapes = shape_closure(m.states, [q[1] for q in queries])
    if m.flavor == "affine":
        ext = "inf" if polarity == "min" else "sup"
        init = {s: shape_extremum(s, m.states, ext) for s in shapes}
    else:
        base = lat.bottom if polarity == "min" else lat.top
        init = {s: base for s in shapes}
    table = {(x, s): init[s] for x in m.states for s in shapes}
    cap = len(table) * lat.height + 2

    def lookup(y, shape):
        return table[(y, shape)]

    for _ in range(cap):
        new = {(x, s): exec_operator_step(m, lookup, x, s)
               for x in m.states for s in shapes}
        if new == table:
            break
        table = new
    else:
        raise NoConvergence("execution table iteration exceeded its cap")
    # the solved table must satisfy the fixpoint equation entrywise
    for (x, s), v in table.items():
        if exec_operator_step(m, lookup, x, s) != v:
            raise NoConvergence(f"fixpoint equation fails at ({x}, {s})")
    return {(x, s): LatticeElem(lat, v) for (x, s), v in table.items()}


# ---------------------------------------------------------------------------
# the transferred maximal powerset execution map
# ---------------------------------------------------------------------------

def alive_states(m: Model) -> frozenset:
    """States with at least one infinite run: the greatest fixpoint of
    "has a successor that is alive"."""
    if isinstance(m.coalgebra, NonemptyPowerset):
        return frozenset(m.states)
    if not isinstance(m.coalgebra, Powerset):
        raise UnsupportedSource("aliveness needs a powerset model")
    alive = set(m.states)
    while True:
        keep = {x for x in alive if m.coalgebra.succ[x] & alive}
        if keep == alive:
            return frozenset(alive)
        alive = keep


def _alive_mask(m, alive):
    lat = m.lattice
    return {x: (lat.top if x in alive else lat.bottom) for x in m.states}


def classical_eu(m: Model, hold: Predicate, goal: Predicate,
                 alive=None) -> Predicate:
    """Least-fixpoint labeling of E(hold U goal), restricted to states with
    a non-empty maximal path set.  Lattice-valued and crisp-branching."""
    lat = m.lattice
    alive = alive_states(m) if alive is None else alive
    mask = _alive_mask(m, alive)
    succ = m.coalgebra.succ
    vals = {x: lat.bottom for x in m.states}
    for _ in range(len(m.states) * lat.height + 2):
        new = {}
        for x in m.states:
            reach = lat.join_all(vals[y] for y in succ[x])
            new[x] = lat.join[lat.meet[goal.value_index(x)][mask[x]]][
                lat.meet[hold.value_index(x)][reach]]
        if new == vals:
            break
        vals = new
    else:
        raise NoConvergence("EU labeling did not stabilize")
    return Predicate(lat, m.states, tuple(vals[x] for x in m.states))


def classical_ew(m: Model, k1: Predicate, k2: Predicate,
                 alive=None) -> Predicate:
    """Greatest-fixpoint labeling of E(k1 W k2) on the same restriction."""
    lat = m.lattice
    alive = alive_states(m) if alive is None else alive
    succ = m.coalgebra.succ
    vals = {x: (lat.top if x in alive else lat.bottom) for x in m.states}
    for _ in range(len(m.states) * lat.height + 2):
        new = {}
        for x in m.states:
            if x not in alive:
                new[x] = lat.bottom
                continue
            cont = lat.join_all(vals[y] for y in succ[x] if y in alive)
            new[x] = lat.meet[k1.value_index(x)][lat.join[k2.value_index(x)][cont]]
        if new == vals:
            break
        vals = new
    else:
        raise NoConvergence("EW labeling did not stabilize")
    return Predicate(lat, m.states, tuple(vals[x] for x in m.states))


def transferred_execution_eval(m: Model, x, s) -> LatticeElem:
    """Value of the transferred maximal powerset execution map at a shape:
    the join over all infinite runs from x of the shape's path value,
    computed by the classical labeling algorithms, never by enumeration."""
    if not isinstance(m.coalgebra, (Powerset, NonemptyPowerset)):
        raise UnsupportedSource(
            "transferred evaluation needs a powerset model")
    lat = m.lattice
    alive = alive_states(m)
    if x not in alive:
        return LatticeElem(lat, lat.bottom)
    if isinstance(s, Const):
        return LatticeElem(lat, s.value)
    if isinstance(s, Head):
        return s.pred.at(x)
    if isinstance(s, Second):
        return LatticeElem(lat, lat.join_all(
            s.pred.value_index(y) for y in m.coalgebra.succ[x] if y in alive))
    if isinstance(s, AffineUntil):
        eu = classical_eu(m, s.hold, s.goal, alive)
        return LatticeElem(lat, lat.join[s.a][lat.meet[s.b][eu.value_index(x)]])
    if isinstance(s, AffineWUntil):
        ew = classical_ew(m, s.k1, s.k2, alive)
        return LatticeElem(lat, lat.meet[s.a][lat.join[s.b][ew.value_index(x)]])
    raise TypeError(f"not a continuation shape: {s!r}")


# ---------------------------------------------------------------------------
# queryable execution-map handles
# ---------------------------------------------------------------------------

class ExecutionMapHandle:
    """A queryable execution map.

    Backends: ``continuation-minmax`` solves shape tables on demand for a
    continuation model; ``powerset-maximal`` evaluates the transferred
    classical maximal map for a (non-empty) powerset model.
    """

    def __init__(self, backend, model, polarity=None):
        self.backend = backend
        self.model = model
        self.polarity = polarity
        self._table = {}
        self._solved = set()
        self._labeling_cache = {}
        self._alive = None

    @classmethod
    def continuation_min_max(cls, model, polarity):
        if not isinstance(model.coalgebra, Continuation):
            raise UnsupportedSource("min/max handles need a continuation model")
        if polarity not in ("min", "max"):
            raise ValueError(f"unknown polarity {polarity!r}")
        return cls("continuation-minmax", model, polarity)

    @classmethod
    def powerset_maximal(cls, model):
        if not isinstance(model.coalgebra, (Powerset, NonemptyPowerset)):
            raise UnsupportedSource(
                "the maximal-map handle needs a powerset model")
        return cls("powerset-maximal", model)

    def evaluate(self, x, shape) -> LatticeElem:
        if self.backend == "powerset-maximal":
            return self._eval_powerset(x, shape)
        if shape not in self._solved:
            solved = compute_execution_value(
                self.model, self.polarity, [(x, shape)])
            self._table.update(solved)
            self._solved.update(s for (_, s) in solved)
        return self._table[(x, shape)]

    def _eval_powerset(self, x, shape):
        m = self.model
        lat = m.lattice
        if self._alive is None:
            self._alive = alive_states(m)
        alive = self._alive
        if x not in alive:
            return LatticeElem(lat, lat.bottom)
        if isinstance(shape, (Const, Head, Second)):
            return transferred_execution_eval(m, x, shape)
        if isinstance(shape, AffineUntil):
            key = ("U", shape.hold.values, shape.goal.values)
            if key not in self._labeling_cache:
                self._labeling_cache[key] = classical_eu(
                    m, shape.hold, shape.goal, alive)
            eu = self._labeling_cache[key]
            return LatticeElem(lat, lat.join[shape.a][
                lat.meet[shape.b][eu.value_index(x)]])
        if isinstance(shape, AffineWUntil):
            key = ("W", shape.k1.values, shape.k2.values)
            if key not in self._labeling_cache:
                self._labeling_cache[key] = classical_ew(
                    m, shape.k1, shape.k2, alive)
            ew = self._labeling_cache[key]
            return LatticeElem(lat, lat.meet[shape.a][
                lat.join[shape.b][ew.value_index(x)]])
        raise TypeError(f"not a continuation shape: {shape!r}")

    def orbit_size(self) -> int:
        return len(self._table)

    def check_fixpoint(self) -> bool:
        """Re-assert the execution operator's fixpoint equation on every
        solved entry (continuation backend only)."""
        if self.backend != "continuation-minmax":
            return True

        def lookup(y, shape):
            return self._table[(y, shape)].index

        for (x, s), v in self._table.items():
            if exec_operator_step(self.model, lookup, x, s) != v.index:
                return False
        return True
