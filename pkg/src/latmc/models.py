"""Finite-state models: labelings, coalgebras for the concrete branching
monads, their canonical predicate liftings, and the transfer into
continuation coalgebras.

A continuation coalgebra assigns each state a monotone functional on
lattice-valued predicates; the diamond modality is then interpreted by mere
evaluation.  The concrete monad kinds (powerset, non-empty powerset,
weighted, affine weighted, monotone neighborhood) all embed into that view
through their canonical liftings, which is what ``to_continuation`` does.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from .errors import (
    EmptySuccessor,
    LatticeMismatch,
    NoInvolution,
    NotAffine,
    NotBool2,
    NotMonotone,
    NotUpwardClosed,
    UnknownState,
)
from .lattice import LatticeElem, LatticeSpec, load_lattice


@dataclass(frozen=True)
class Predicate:
    """A total lattice-valued map on an ordered state tuple.

    Doubles as a continuation: evaluators consume predicates and return a
    lattice element.  Values are stored as element indices aligned with
    ``states``.
    """

    lattice: LatticeSpec
    states: tuple
    values: tuple

    @classmethod
    def const(cls, lattice, states, elem_index):
        return cls(lattice, tuple(states), (elem_index,) * len(states))

    @classmethod
    def from_dict(cls, lattice, states, mapping, default=None):
        default = lattice.bottom if default is None else default
        vals = []
        for s in states:
            v = mapping.get(s, default)
            if isinstance(v, LatticeElem):
                if v.lattice is not lattice:
                    raise LatticeMismatch("predicate value from another lattice")
                v = v.index
            elif isinstance(v, str):
                v = lattice.elem(v).index
            vals.append(v)
        return cls(lattice, tuple(states), tuple(vals))

    def value_index(self, state):
        try:
            return self.values[self.states.index(state)]
        except ValueError:
            raise UnknownState(f"state {state!r} not in predicate domain")

    def at(self, state) -> LatticeElem:
        return LatticeElem(self.lattice, self.value_index(state))

    def _check(self, other):
        if other.lattice is not self.lattice or other.states != self.states:
            raise LatticeMismatch("predicates over different lattices or states")

    def meet(self, other) -> "Predicate":
        self._check(other)
        m = self.lattice.meet
        return Predicate(self.lattice, self.states,
                         tuple(m[a][b] for a, b in zip(self.values, other.values)))

    def join(self, other) -> "Predicate":
        self._check(other)
        j = self.lattice.join
        return Predicate(self.lattice, self.states,
                         tuple(j[a][b] for a, b in zip(self.values, other.values)))

    def neg(self) -> "Predicate":
        if not self.lattice.has_neg:
            raise NoInvolution("negating a predicate needs an involution")
        n = self.lattice.neg
        return Predicate(self.lattice, self.states,
                         tuple(n[a] for a in self.values))

    def leq(self, other) -> bool:
        self._check(other)
        le = self.lattice.leq
        return all(le[a][b] for a, b in zip(self.values, other.values))

    def meet_const(self, a) -> "Predicate":
        m = self.lattice.meet
        return Predicate(self.lattice, self.states,
                         tuple(m[a][v] for v in self.values))

    def join_const(self, a) -> "Predicate":
        j = self.lattice.join
        return Predicate(self.lattice, self.states,
                         tuple(j[a][v] for v in self.values))

    def to_json(self):
        return {s: self.lattice.names[v] for s, v in zip(self.states, self.values)}

    def __repr__(self):
        body = ", ".join(f"{s}:{self.lattice.names[v]}"
                         for s, v in zip(self.states, self.values))
        return f"Predicate({body})"


def all_predicates(lattice, states):
    states = tuple(states)
    for vals in itertools.product(range(lattice.n), repeat=len(states)):
        yield Predicate(lattice, states, vals)


# ---------------------------------------------------------------------------
# successor evaluators (elements of the continuation monad)
# ---------------------------------------------------------------------------

class Evaluator:
    """A monotone functional on predicates over a fixed state tuple."""

    lattice: LatticeSpec
    states: tuple

    def __call__(self, k: Predicate) -> LatticeElem:
        raise NotImplementedError

    def value_index(self, k: Predicate) -> int:
        return self(k).index

    def is_affine(self) -> bool:
        for a in range(self.lattice.n):
            if self.value_index(Predicate.const(self.lattice, self.states, a)) != a:
                return False
        return True


class TableEvaluator(Evaluator):
    """Explicit table over all continuations; monotonicity is validated
    exhaustively below the materialization bound and sampled above it."""

    def __init__(self, lattice, states, table, *, check_bound=4096, rng=None):
        self.lattice = lattice
        self.states = tuple(states)
        self.table = dict(table)
        size = lattice.n ** len(self.states)
        if len(self.table) != size:
            raise NotMonotone("continuation table must be total")
        if size <= check_bound:
            self._check_monotone_exhaustive()
            self.monotone_verified = True
        else:
            self._check_monotone_sampled(rng or random.Random(0))
            self.monotone_verified = False

    def _check_monotone_exhaustive(self):
        # covering pairs of the product lattice suffice
        lat = self.lattice
        covers = [[j for j in range(lat.n)
                   if i != j and lat.leq[i][j]
                   and not any(k != i and k != j and lat.leq[i][k] and lat.leq[k][j]
                               for k in range(lat.n))]
                  for i in range(lat.n)]
        for key in self.table:
            v = self.table[key]
            for pos in range(len(self.states)):
                for up in covers[key[pos]]:
                    upper = key[:pos] + (up,) + key[pos + 1:]
                    if not lat.leq[v][self.table[upper]]:
                        raise NotMonotone(
                            f"table evaluator not monotone at {key} -> {upper}")

    def _check_monotone_sampled(self, rng, samples=500):
        lat = self.lattice
        keys = list(self.table)
        for _ in range(samples):
            a = rng.choice(keys)
            b = tuple(lat.join[x][y] for x, y in
                      zip(a, rng.choice(keys)))
            if not lat.leq[self.table[a]][self.table[b]]:
                raise NotMonotone("sampled monotonicity violation")

    def __call__(self, k):
        if k.lattice is not self.lattice or k.states != self.states:
            raise LatticeMismatch("continuation over the wrong lattice or states")
        return LatticeElem(self.lattice, self.table[k.values])


class ExprEvaluator(Evaluator):
    """A lattice term over the variables k(y); negation-free, so monotone
    by construction."""

    def __init__(self, lattice, states, term):
        self.lattice = lattice
        self.states = tuple(states)
        self.term = term
        self._validate(term)

    def _validate(self, term):
        if isinstance(term, str):
            return
        if not isinstance(term, (list, tuple)) or not term:
            raise NotMonotone(f"malformed evaluator term {term!r}")
        op = term[0]
        if op == "var":
            if term[1] not in self.states:
                raise UnknownState(f"evaluator term mentions {term[1]!r}")
            return
        if op == "const":
            self.lattice.elem(term[1])
            return
        if op in ("join", "meet"):
            self._validate(term[1])
            self._validate(term[2])
            return
        if op in ("big_join", "big_meet"):
            for sub in term[1]:
                self._validate(sub)
            return
        raise NotMonotone(f"operator {op!r} not allowed in evaluator terms")

    def _eval(self, term, k):
        lat = self.lattice
        if isinstance(term, str):
            return lat.elem(term).index
        op = term[0]
        if op == "var":
            return k.value_index(term[1])
        if op == "const":
            return lat.elem(term[1]).index
        if op == "join":
            return lat.join[self._eval(term[1], k)][self._eval(term[2], k)]
        if op == "meet":
            return lat.meet[self._eval(term[1], k)][self._eval(term[2], k)]
        if op == "big_join":
            return lat.join_all(self._eval(t, k) for t in term[1])
        if op == "big_meet":
            return lat.meet_all(self._eval(t, k) for t in term[1])
        raise NotMonotone(f"operator {op!r} not allowed in evaluator terms")

    monotone_verified = True

    def __call__(self, k):
        return LatticeElem(self.lattice, self._eval(self.term, k))


class LiftedEvaluator(Evaluator):
    """The canonical lifting of a concrete-monad successor: evaluates a
    continuation through lift_eval on the source model."""

    monotone_verified = True

    def __init__(self, source_model, state):
        self.source = source_model
        self.state = state
        self.lattice = source_model.lattice
        self.states = source_model.states

    def __call__(self, k):
        return lift_eval(self.source, "dia", self.state, k)


# ---------------------------------------------------------------------------
# coalgebras and models
# ---------------------------------------------------------------------------

@dataclass
class Powerset:
    succ: dict
    kind = "powerset"


@dataclass
class NonemptyPowerset:
    succ: dict
    kind = "nonempty-powerset"


@dataclass
class Weighted:
    weights: dict  # state -> {state: element index}
    kind = "weighted"


@dataclass
class AffineWeighted:
    weights: dict
    kind = "affine-weighted"


@dataclass
class Neighborhood:
    nbhd: dict  # state -> tuple of frozensets, upward closed
    kind = "neighborhood"


@dataclass
class Continuation:
    succ: dict  # state -> Evaluator
    kind = "continuation"


@dataclass
class Model:
    lattice: LatticeSpec
    states: tuple
    labeling: dict
    coalgebra: object
    flavor: str = None  # "plain" | "affine" for continuation coalgebras
    verified: bool = True
    notes: list = field(default_factory=list)
    cap_override: int = None

    @property
    def kind(self):
        return self.coalgebra.kind

    def label(self, atom) -> Predicate:
        if atom not in self.labeling:
            raise UnknownState(f"unknown atomic proposition {atom!r}")
        return self.labeling[atom]

    def bottom_predicate(self):
        return Predicate.const(self.lattice, self.states, self.lattice.bottom)

    def top_predicate(self):
        return Predicate.const(self.lattice, self.states, self.lattice.top)

    def fixpoint_cap(self):
        if self.cap_override:
            return self.cap_override
        return len(self.states) * self.lattice.height + 1


def _resolve_states(states, declared):
    out = []
    for s in states:
        if s not in declared:
            raise UnknownState(f"unknown state {s!r}")
        out.append(s)
    return out


def validate_model(m: Model, *, materialize_bound=4096) -> list:
    """Validate the coalgebra block; returns human-readable notes."""
    notes = []
    declared = set(m.states)
    co = m.coalgebra
    if isinstance(co, (Powerset, NonemptyPowerset)):
        for s in m.states:
            succ = co.succ.get(s, frozenset())
            _resolve_states(succ, declared)
            if isinstance(co, NonemptyPowerset) and not succ:
                raise EmptySuccessor(f"state {s!r} has no successor")
            co.succ[s] = frozenset(succ)
    elif isinstance(co, (Weighted, AffineWeighted)):
        for s in m.states:
            row = co.weights.get(s, {})
            _resolve_states(row, declared)
            co.weights[s] = {y: row.get(y, m.lattice.bottom) for y in m.states}
            if isinstance(co, AffineWeighted):
                total = m.lattice.join_all(co.weights[s].values())
                if total != m.lattice.top:
                    raise NotAffine(
                        f"weights at {s!r} join to "
                        f"{m.lattice.names[total]}, not top")
    elif isinstance(co, Neighborhood):
        if m.lattice.n != 2:
            raise NotBool2("neighborhood coalgebras require the bool2 lattice")
        full = frozenset(m.states)
        for s in m.states:
            original = {frozenset(_resolve_states(sub, declared))
                        for sub in co.nbhd.get(s, ())}
            family = set()
            for base in original:  # upward closure completed at load
                rest = sorted(full - base)
                for r in range(len(rest) + 1):
                    for extra in itertools.combinations(rest, r):
                        family.add(base | frozenset(extra))
            if family != original:
                notes.append(f"neighborhood at {s!r} completed upward "
                             f"({len(family)} sets from {len(original)})")
            co.nbhd[s] = tuple(sorted(family,
                                      key=lambda t: (len(t), tuple(sorted(t)))))
    elif isinstance(co, Continuation):
        for s in m.states:
            ev = co.succ[s]
            if ev.lattice is not m.lattice or tuple(ev.states) != m.states:
                raise LatticeMismatch(
                    f"evaluator at {s!r} is over the wrong lattice or states")
            if not getattr(ev, "monotone_verified", True):
                m.verified = False
                notes.append(f"evaluator at {s!r}: monotonicity sampled only")
        if m.flavor is None:
            m.flavor = "affine" if all(co.succ[s].is_affine()
                                       for s in m.states) else "plain"
        elif m.flavor == "affine":
            for s in m.states:
                if not co.succ[s].is_affine():
                    raise NotAffine(f"evaluator at {s!r} is not affine")
    else:
        raise TypeError(f"unknown coalgebra {co!r}")
    m.notes.extend(notes)
    return notes


def check_upward_closed(states, family) -> None:
    """Raise NotUpwardClosed unless the family is closed under supersets."""
    full = frozenset(states)
    fam = {frozenset(s) for s in family}
    for s in fam:
        for extra in full - s:
            if s | {extra} not in fam:
                raise NotUpwardClosed(f"{sorted(s)} lacks superset with {extra!r}")


def load_model(document, *, materialize_bound=4096) -> Model:
    """Build and validate a Model from a parsed JSON document."""
    lattice = load_lattice(document["lattice"])
    states = tuple(document["states"])
    if len(set(states)) != len(states):
        raise UnknownState("duplicate state names")
    labeling = {}
    for atom, mapping in document.get("atoms", {}).items():
        for s in mapping:
            if s not in states:
                raise UnknownState(f"label for unknown state {s!r}")
        labeling[atom] = Predicate.from_dict(lattice, states, mapping)
    block = document["coalgebra"]
    kind = block.get("kind")
    if kind == "powerset":
        co = Powerset({s: frozenset(block.get("succ", {}).get(s, [])) for s in states})
    elif kind == "nonempty-powerset":
        co = NonemptyPowerset({s: frozenset(block.get("succ", {}).get(s, []))
                               for s in states})
    elif kind in ("weighted", "affine-weighted"):
        weights = {}
        for s in states:
            row = block.get("w", {}).get(s, {})
            weights[s] = {y: lattice.elem(v).index for y, v in row.items()}
        co = Weighted(weights) if kind == "weighted" else AffineWeighted(weights)
    elif kind == "neighborhood":
        nbhd = {s: tuple(frozenset(sub) for sub in block.get("nbhd", {}).get(s, []))
                for s in states}
        co = Neighborhood(nbhd)
    elif kind == "continuation":
        succ = {}
        for s in states:
            spec = block["succ"][s]
            if "table" in spec:
                table = {}
                for key, val in spec["table"].items():
                    parts = key.split(",")
                    if len(parts) != len(states):
                        raise NotMonotone(f"bad continuation key {key!r}")
                    table[tuple(lattice.elem(p).index for p in parts)] = \
                        lattice.elem(val).index
                succ[s] = TableEvaluator(lattice, states, table,
                                         check_bound=materialize_bound)
            elif "expr" in spec:
                succ[s] = ExprEvaluator(lattice, states, spec["expr"])
            else:
                raise NotMonotone(f"evaluator at {s!r} needs 'table' or 'expr'")
        co = Continuation(succ)
    else:
        raise UnknownState(f"unknown coalgebra kind {kind!r}")
    m = Model(lattice, states, labeling, co,
              flavor=block.get("flavor") if kind == "continuation" else None)
    validate_model(m, materialize_bound=materialize_bound)
    return m


# ---------------------------------------------------------------------------
# canonical liftings
# ---------------------------------------------------------------------------

def lift_eval(m: Model, polarity, x, k: Predicate) -> LatticeElem:
    """Interpret the diamond (or box) at state x on continuation k.

    dia uses the monad's canonical lifting; box is the de Morgan dual and
    requires an involution.
    """
    if k.lattice is not m.lattice:
        raise LatticeMismatch("continuation over the wrong lattice")
    if polarity == "box":
        if not m.lattice.has_neg:
            raise NoInvolution("box needs a de Morgan involution")
        inner = lift_eval(m, "dia", x, k.neg())
        return LatticeElem(m.lattice, m.lattice.neg[inner.index])
    if polarity != "dia":
        raise ValueError(f"unknown polarity {polarity!r}")
    lat = m.lattice
    co = m.coalgebra
    if isinstance(co, (Powerset, NonemptyPowerset)):
        return LatticeElem(lat, lat.join_all(k.value_index(y) for y in co.succ[x]))
    if isinstance(co, (Weighted, AffineWeighted)):
        row = co.weights[x]
        return LatticeElem(lat, lat.join_all(
            lat.meet[row[y]][k.value_index(y)] for y in m.states))
    if isinstance(co, Neighborhood):
        return LatticeElem(lat, lat.join_all(
            lat.meet_all(k.value_index(y) for y in subset)
            for subset in co.nbhd[x]))
    if isinstance(co, Continuation):
        return co.succ[x](k)
    raise TypeError(f"unknown coalgebra {co!r}")


def successor_eval(m: Model, x, k: Predicate) -> LatticeElem:
    """Evaluate the continuation-coalgebra successor: the single entry point
    for the diamond clause on continuation models."""
    if not isinstance(m.coalgebra, Continuation):
        raise TypeError("successor_eval needs a continuation model")
    return m.coalgebra.succ[x](k)


def to_continuation(m: Model) -> Model:
    """Transfer a concrete-monad model along its canonical lifting."""
    if isinstance(m.coalgebra, Continuation):
        return m
    succ = {x: LiftedEvaluator(m, x) for x in m.states}
    out = Model(m.lattice, m.states, dict(m.labeling), Continuation(succ),
                verified=m.verified, notes=list(m.notes))
    validate_model(out)
    return out


# ---------------------------------------------------------------------------
# constant-linearity
# ---------------------------------------------------------------------------

@dataclass
class ConstantLinearityReport:
    passed: bool
    exhaustive: bool
    failures: list  # (state, law, a, continuation values, got, expected)

    def to_json(self):
        return {
            "passed": self.passed,
            "exhaustive": self.exhaustive,
            "failures": [
                {"state": s, "law": law, "constant": a, "continuation": list(k),
                 "got": got, "expected": want}
                for (s, law, a, k, got, want) in self.failures],
        }


def check_constant_linear(m: Model, *, bound=4096, samples=200,
                          seed=0) -> ConstantLinearityReport:
    """Check h(a /\\ k) = a /\\ h(k) and h(a \\/ k) = a \\/ h(k) for every
    successor evaluator; exhaustive below the bound, sampled above."""
    if not isinstance(m.coalgebra, Continuation):
        raise TypeError("constant-linearity applies to continuation models")
    lat = m.lattice
    size = lat.n ** len(m.states)
    exhaustive = size <= bound
    if exhaustive:
        ks = list(all_predicates(lat, m.states))
    else:
        rng = random.Random(seed)
        ks = [Predicate(lat, m.states,
                        tuple(rng.randrange(lat.n) for _ in m.states))
              for _ in range(samples)]
    failures = []
    for x in m.states:
        h = m.coalgebra.succ[x]
        for k in ks:
            base = h.value_index(k)
            for a in range(lat.n):
                got = h.value_index(k.meet_const(a))
                want = lat.meet[a][base]
                if got != want:
                    failures.append((x, "meet", lat.names[a], k.to_json(),
                                     lat.names[got], lat.names[want]))
                got = h.value_index(k.join_const(a))
                want = lat.join[a][base]
                if got != want:
                    failures.append((x, "join", lat.names[a], k.to_json(),
                                     lat.names[got], lat.names[want]))
    return ConstantLinearityReport(not failures, exhaustive, failures)
