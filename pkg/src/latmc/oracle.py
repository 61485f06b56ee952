"""Independent brute-force reference implementations at enumeration scale.

Everything here recomputes values from first principles: monotone maps are
enumerated, naturality and cartesianness are checked pointwise, execution
values are bracketed by finite iterates with interval bases, and path
extrema are bounded by enumerating finite words with unknown-tail
intervals.  No evaluation code is shared with the engines beyond the
lattice tables and the plain data types (predicates, shapes); hard caps
abort with TooLarge rather than silently sampling.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import NotBool2, NotCtlFragment, TooLarge, UnsupportedSource
from .lattice import LatticeElem, LatticeSpec
from .models import Model, NonemptyPowerset, Powerset, Predicate
from .execution import AffineUntil, AffineWUntil, Const, Head, Second
from . import syntax as S
from .syntax import as_state_formula


# ---------------------------------------------------------------------------
# monotone-map enumeration
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MonotoneMap:
    """An element of the monotone continuation monad at tiny scale."""

    lattice: LatticeSpec
    states: tuple
    table: tuple  # values aligned with the key enumeration below
    affine: bool

    def keys(self):
        return continuation_keys(self.lattice, len(self.states))

    def value(self, key) -> int:
        return self.table[self.keys().index(key)]

    def __call__(self, k: Predicate) -> LatticeElem:
        return LatticeElem(self.lattice, self.value(k.values))


def continuation_keys(lattice, n_states):
    return list(itertools.product(range(lattice.n), repeat=n_states))


def enumerate_monotone(lattice, states, cap=200000):
    """Complete, duplicate-free enumeration of the monotone maps from
    continuations over ``states`` to the lattice; affine ones flagged."""
    states = tuple(states)
    keys = continuation_keys(lattice, len(states))
    if len(keys) > 9 or lattice.n ** len(keys) > cap ** 2:
        raise TooLarge("monotone-map enumeration out of bounds")
    order = sorted(range(len(keys)),
                   key=lambda i: sum(all(lattice.leq[a][b]
                                         for a, b in zip(keys[j], keys[i]))
                                     for j in range(len(keys))))
    below = {i: [j for j in order
                 if j != i and all(lattice.leq[a][b]
                                   for a, b in zip(keys[j], keys[i]))]
             for i in order}
    out = []
    assignment = {}

    def backtrack(pos):
        if len(out) > cap:
            raise TooLarge("more monotone maps than the cap")
        if pos == len(order):
            table = tuple(assignment[i] for i in range(len(keys)))
            affine = all(
                table[keys.index((a,) * len(states))] == a
                for a in range(lattice.n)) if states else True
            out.append(MonotoneMap(lattice, states, table, affine))
            return
        i = order[pos]
        for v in range(lattice.n):
            if all(lattice.leq[assignment[j]][v] for j in below[i]
                   if j in assignment):
                assignment[i] = v
                backtrack(pos + 1)
                del assignment[i]

    backtrack(0)
    return out


# ---------------------------------------------------------------------------
# concrete monads, oracle-side
# ---------------------------------------------------------------------------

def _subsets(xs):
    xs = list(xs)
    return [frozenset(c) for r in range(len(xs) + 1)
            for c in itertools.combinations(xs, r)]


class _PowersetMonad:
    kind = "powerset"

    def __init__(self, lattice, nonempty=False):
        self.lattice = lattice
        self.nonempty = nonempty

    def carrier(self, xs):
        out = _subsets(xs)
        return [s for s in out if s] if self.nonempty else out

    def eta(self, xs, x):
        return frozenset([x])

    def mu(self, xs, tt):
        return frozenset().union(*tt) if tt else frozenset()

    def double(self, xs):
        elems = self.carrier(xs)
        out = _subsets(elems)
        return [s for s in out if s] if self.nonempty else out

    def fmap(self, f, t):
        return frozenset(f[y] for y in t)

    def lift(self, xs, k, t):
        # canonical lifting: the join over the successor set
        return self.lattice.join_all(k[y] for y in t)

    def lift_outer(self, xs, kappa, tt):
        return self.lattice.join_all(kappa[t] for t in tt)


class _WeightedMonad:
    kind = "weighted"

    def __init__(self, lattice, affine=False):
        self.lattice = lattice
        self.affine = affine

    def carrier(self, xs):
        lat = self.lattice
        out = [dict(zip(xs, vals))
               for vals in itertools.product(range(lat.n), repeat=len(xs))]
        if self.affine:
            out = [t for t in out if lat.join_all(t.values()) == lat.top]
        return [_frozendict(t) for t in out]

    def eta(self, xs, x):
        lat = self.lattice
        return _frozendict({y: (lat.top if y == x else lat.bottom) for y in xs})

    def mu(self, xs, tt):
        lat = self.lattice
        return _frozendict({
            x: lat.join_all(lat.meet[w][t[x]] for t, w in tt.items())
            for x in xs})

    def double(self, xs):
        lat = self.lattice
        elems = self.carrier(xs)
        for weights in itertools.product(range(lat.n), repeat=len(elems)):
            tt = dict(zip(elems, weights))
            if self.affine and lat.join_all(weights) != lat.top:
                continue
            yield _frozendict(tt)

    def fmap(self, f, t):
        lat = self.lattice
        out = {}
        for y, w in t.items():
            z = f[y]
            out[z] = lat.join[out.get(z, lat.bottom)][w]
        return _frozendict(out)

    def lift(self, xs, k, t):
        lat = self.lattice
        return lat.join_all(lat.meet[t[y]][k[y]] for y in t)

    def lift_outer(self, xs, kappa, tt):
        lat = self.lattice
        return lat.join_all(lat.meet[w][kappa[t]] for t, w in tt.items())


class _frozendict(dict):
    def __hash__(self):
        return hash(frozenset(self.items()))

    def __setitem__(self, *a):  # pragma: no cover
        raise TypeError("frozen")


class _NeighborhoodMonad:
    """Upward-closed families of subsets; two-valued only.  Supports the
    functor action and unit (round trips, naturality, unit equation); the
    double layer is a family space over a family space and is not
    enumerated."""

    kind = "neighborhood"

    def __init__(self, lattice):
        if lattice.n != 2:
            raise NotBool2("the neighborhood monad lives over bool2")
        self.lattice = lattice

    def carrier(self, xs):
        subs = _subsets(xs)
        out = []
        for picks in itertools.product([0, 1], repeat=len(subs)):
            family = frozenset(s for s, keep in zip(subs, picks) if keep)
            if all(t in family for s in family for t in subs if s <= t):
                out.append(family)
        return out

    def eta(self, xs, x):
        return frozenset(s for s in _subsets(xs) if x in s)

    def mu(self, xs, tt):  # pragma: no cover - double layer not enumerable
        raise TooLarge("no double-layer enumeration for neighborhoods")

    def double(self, xs):
        return iter(())

    def fmap(self, f, family):
        # preimage condition on image subsets; supersets with non-image
        # elements never change the lifting joins
        image = sorted(set(f.values()))
        return frozenset(
            t for t in _subsets(image)
            if frozenset(x for x in f if f[x] in t) in family)

    def lift(self, xs, k, family):
        lat = self.lattice
        return lat.join_all(
            lat.meet_all(k[y] for y in s) for s in family)

    def lift_outer(self, xs, kappa, tt):  # pragma: no cover
        raise TooLarge("no double-layer enumeration for neighborhoods")


def _monad_for(kind, lattice):
    if kind == "powerset":
        return _PowersetMonad(lattice)
    if kind == "nonempty-powerset":
        return _PowersetMonad(lattice, nonempty=True)
    if kind == "weighted":
        return _WeightedMonad(lattice)
    if kind == "affine-weighted":
        return _WeightedMonad(lattice, affine=True)
    if kind == "neighborhood":
        return _NeighborhoodMonad(lattice)
    raise UnsupportedSource(f"no oracle monad for {kind!r}")


@dataclass
class TrinityReport:
    kind: str
    lattice: str
    checked: int = 0
    failures: list = field(default_factory=list)

    @property
    def passed(self):
        return not self.failures

    def note(self, ok, what):
        self.checked += 1
        if not ok:
            self.failures.append(what)

    def to_json(self):
        return {"kind": self.kind, "lattice": self.lattice,
                "checked": self.checked, "passed": self.passed,
                "failures": self.failures[:10]}


def check_trinity(kind, lattice, xs, ys, double_cap=30000,
                  check_cartesian=True) -> TrinityReport:
    """Round-trip the canonical lifting through its natural transformation,
    check naturality on every function between the two state sets, and
    check the cartesian equations for the monad.

    ``check_cartesian=False`` skips the double-layer enumeration (it only
    depends on the X side, so callers sweeping Y sizes can run it once)."""
    report = TrinityReport(kind, lattice.name)
    if kind == "continuation":
        # the canonical lifting of the continuation monad is induced by the
        # identity: its round trip must be the identity on enumerated maps
        for h in enumerate_monotone(lattice, tuple(ys)):
            for key in continuation_keys(lattice, len(ys)):
                lifted = h.value(key)        # triangle(k)(h) = h(k)
                back = h.value(key)          # induced iota is the identity
                report.note(lifted == back, ("continuation-roundtrip", key))
        return report
    monad = _monad_for(kind, lattice)
    xs, ys = list(xs), list(ys)
    all_ky = list(itertools.product(range(lattice.n), repeat=len(ys)))
    all_kx = list(itertools.product(range(lattice.n), repeat=len(xs)))
    ty = monad.carrier(ys)
    tx = monad.carrier(xs)

    def kdict(states, kv):
        return dict(zip(states, kv))

    # lifting table at Y and its double transpose
    lift_table = {(kv, t): monad.lift(ys, kdict(ys, kv), t)
                  for kv in all_ky for t in ty}
    iota = {t: {kv: lift_table[(kv, t)] for kv in all_ky} for t in ty}
    back = {(kv, t): iota[t][kv] for kv in all_ky for t in ty}
    report.note(back == lift_table, "roundtrip-lifting")
    iota2 = {t: {kv: back[(kv, t)] for kv in all_ky} for t in ty}
    report.note(iota2 == iota, "roundtrip-transformation")

    # canonical decomposition: lifting = evaluation after iota
    for t in ty:
        for kv in all_ky:
            report.note(lift_table[(kv, t)] == iota[t][kv],
                        ("decomposition", t, kv))

    # naturality squares for every function X -> Y
    for fv in itertools.product(ys, repeat=len(xs)):
        f = dict(zip(xs, fv))
        for kv in all_ky:
            k = kdict(ys, kv)
            kf = {x: k[f[x]] for x in xs}
            for t in tx:
                lhs = monad.lift(xs, kf, t)
                rhs = monad.lift(ys, k, monad.fmap(f, t))
                report.note(lhs == rhs, ("naturality", fv, kv, t))

    # affine monads must land in the affine part
    if kind in ("nonempty-powerset", "affine-weighted"):
        for t in ty:
            for a in range(lattice.n):
                got = monad.lift(ys, {y: a for y in ys}, t)
                report.note(got == a, ("affine-image", t, a))

    # cartesian equations at X
    if not check_cartesian:
        return report
    kdicts = {kv: kdict(xs, kv) for kv in all_kx}
    for x in xs:
        for kv in all_kx:
            report.note(monad.lift(xs, kdicts[kv], monad.eta(xs, x)) == kv[xs.index(x)],
                        ("cartesian-unit", x, kv))
    inner_by_kv = {kv: {t: monad.lift(xs, kdicts[kv], t) for t in tx}
                   for kv in all_kx}
    count = 0
    for tt in monad.double(xs):
        count += 1
        if count > double_cap:
            raise TooLarge("double-layer enumeration past the cap")
        flat = monad.mu(xs, tt)
        for kv in all_kx:
            lhs = monad.lift(xs, kdicts[kv], flat)
            rhs = monad.lift_outer(xs, inner_by_kv[kv], tt)
            report.note(lhs == rhs, ("cartesian-mult", kv))
    return report


# ---------------------------------------------------------------------------
# interval semantics on finite words (unknown infinite tail)
# ---------------------------------------------------------------------------

def _iv_join(lat, p, q):
    return (lat.join[p[0]][q[0]], lat.join[p[1]][q[1]])


def _iv_meet(lat, p, q):
    return (lat.meet[p[0]][q[0]], lat.meet[p[1]][q[1]])


def _shape_word_bounds(shape, word, lat):
    """Sound value interval of a shape on every infinite extension of a
    finite word."""
    unknown = (lat.bottom, lat.top)
    if isinstance(shape, Const):
        return (shape.value, shape.value)
    if isinstance(shape, Head):
        if word:
            v = shape.pred.value_index(word[0])
            return (v, v)
        return unknown
    if isinstance(shape, Second):
        if len(word) > 1:
            v = shape.pred.value_index(word[1])
            return (v, v)
        return unknown
    if isinstance(shape, AffineUntil):
        # the unknown tail is itself an until-value, capped by the join of
        # all goal values
        iv = (lat.bottom, lat.join_all(shape.goal.values))
        for x in reversed(word):
            g = shape.goal.value_index(x)
            h = shape.hold.value_index(x)
            iv = tuple(lat.join[g][lat.meet[h][v]] for v in iv)
        return (lat.join[shape.a][lat.meet[shape.b][iv[0]]],
                lat.join[shape.a][lat.meet[shape.b][iv[1]]])
    if isinstance(shape, AffineWUntil):
        iv = (lat.meet_all(shape.k1.values), lat.top)
        for x in reversed(word):
            k1 = shape.k1.value_index(x)
            k2 = shape.k2.value_index(x)
            iv = tuple(lat.meet[k1][lat.join[k2][v]] for v in iv)
        return (lat.meet[shape.a][lat.join[shape.b][iv[0]]],
                lat.meet[shape.a][lat.join[shape.b][iv[1]]])
    raise TypeError(f"not a continuation shape: {shape!r}")


def _formula_word_bounds(phi, word, i, labels, lat):
    """Interval semantics of a path formula at position i of a finite word;
    supports arbitrary path nesting, state leaves must be label boolean
    combinations (no nested quantifiers)."""
    unknown = (lat.bottom, lat.top)
    s = as_state_formula(phi)
    if s is not None:
        if i < len(word):
            v = _state_leaf_value(s, word[i], labels, lat)
            return (v, v)
        return unknown
    if isinstance(phi, S.Next):
        return _formula_word_bounds(phi.sub, word, i + 1, labels, lat)
    if isinstance(phi, S.PAnd):
        return _iv_meet(lat,
                        _formula_word_bounds(phi.left, word, i, labels, lat),
                        _formula_word_bounds(phi.right, word, i, labels, lat))
    if isinstance(phi, S.POr):
        return _iv_join(lat,
                        _formula_word_bounds(phi.left, word, i, labels, lat),
                        _formula_word_bounds(phi.right, word, i, labels, lat))
    if isinstance(phi, S.Until):
        if i >= len(word):
            return unknown
        g = _formula_word_bounds(phi.goal, word, i, labels, lat)
        h = _formula_word_bounds(phi.hold, word, i, labels, lat)
        rest = _formula_word_bounds(phi, word, i + 1, labels, lat)
        return _iv_join(lat, g, _iv_meet(lat, h, rest))
    if isinstance(phi, S.WUntil):
        if i >= len(word):
            return unknown
        h = _formula_word_bounds(phi.hold, word, i, labels, lat)
        r = _formula_word_bounds(phi.release, word, i, labels, lat)
        rest = _formula_word_bounds(phi, word, i + 1, labels, lat)
        return _iv_meet(lat, h, _iv_join(lat, r, rest))
    raise NotCtlFragment(f"unsupported path formula in the oracle: {phi!r}")


def _state_leaf_value(s, x, labels, lat):
    if isinstance(s, S.SAtom):
        return labels[s.name].value_index(x)
    if isinstance(s, S.SNegAtom):
        return lat.neg_i(labels[s.name].value_index(x))
    if isinstance(s, S.STT):
        return lat.top
    if isinstance(s, S.SFF):
        return lat.bottom
    if isinstance(s, S.SAnd):
        return lat.meet[_state_leaf_value(s.left, x, labels, lat)][
            _state_leaf_value(s.right, x, labels, lat)]
    if isinstance(s, S.SOr):
        return lat.join[_state_leaf_value(s.left, x, labels, lat)][
            _state_leaf_value(s.right, x, labels, lat)]
    raise NotCtlFragment(
        "oracle state leaves must be label boolean combinations")


def bounded_bracket(m: Model, x, w, depth, horizon=4):
    """Finite iterates of the execution operator from the Kleisli extremes.

    ``w`` is a pair (prefix, target) where the target is a continuation
    shape or a path formula; the continuation evaluated is
    pi -> target(prefix . pi).  Returns (lower, upper): sound bounds on the
    value of every execution map at that continuation, nested in ``depth``.
    Plain models use the constant extremes; affine models evaluate the
    path-extremum extremes through word enumeration up to ``horizon``.
    """
    prefix, target = w
    lat = m.lattice
    if len(m.states) ** max(depth, 1) > 100000:
        raise TooLarge("bracket depth out of bounds")
    if len(m.states) ** horizon > 100000:
        raise TooLarge("bracket horizon out of bounds")

    def bounds_of(word):
        if isinstance(target, (Const, Head, Second, AffineUntil, AffineWUntil)):
            return _shape_word_bounds(target, word, lat)
        return _formula_word_bounds(target, word, 0, m.labeling, lat)

    extensions = list(itertools.product(m.states, repeat=horizon))

    def base(pref, side):
        if m.flavor != "affine":
            v = lat.bottom if side == "lower" else lat.top
            return v
        agg = lat.meet_all if side == "lower" else lat.join_all
        pick = 0 if side == "lower" else 1
        return agg(bounds_of(tuple(pref) + ext)[pick] for ext in extensions)

    def iterate(y, pref, n, side):
        if n == 0:
            return base(pref, side)
        vals = tuple(iterate(z, pref + (y,), n - 1, side) for z in m.states)
        return m.coalgebra.succ[y](Predicate(lat, m.states, vals)).index

    lo = iterate(x, tuple(prefix), depth, "lower")
    hi = iterate(x, tuple(prefix), depth, "upper")
    return (LatticeElem(lat, lo), LatticeElem(lat, hi))


def brute_force_path_values(lattice, states, base, horizon, cap=200000):
    """Interval bounds on the path extrema of a U/W base shape, by
    enumerating all words of the given length.

    Each word gives a pessimistic/optimistic pair (unknown infinite tail)
    and an exact witness: the word repeated forever, whose value closes
    through the one-variable cycle equation.  The witness side tightens
    the bracket so it can actually close (every lasso is a real path).
    Returns ((inf_lo, inf_hi), (sup_lo, sup_hi)) as LatticeElem values.
    """
    if len(states) ** horizon > cap:
        raise TooLarge("word enumeration out of bounds")
    lat = lattice
    kind = base[0]
    if kind not in ("U", "W"):
        raise ValueError(f"unknown base kind {kind!r}")
    # the tail is itself a U/W value: every until-value sits below the join
    # of all goal values, every weak-until value above the meet of all
    # invariant values
    if kind == "U":
        cap_hi = lat.join_all(base[2].value_index(x) for x in states)
        unknown = (lat.bottom, cap_hi)
    else:
        cap_lo = lat.meet_all(base[1].value_index(x) for x in states)
        unknown = (cap_lo, lat.top)
    los, his, exacts = [], [], []
    for word in itertools.product(states, repeat=horizon):
        iv = unknown
        acc = lat.bottom if kind == "U" else lat.top
        for x in reversed(word):
            if kind == "U":
                g = base[2].value_index(x)
                h = base[1].value_index(x)
                iv = tuple(lat.join[g][lat.meet[h][v]] for v in iv)
                acc = lat.join[g][lat.meet[h][acc]]
            else:
                k1 = base[1].value_index(x)
                k2 = base[2].value_index(x)
                iv = tuple(lat.meet[k1][lat.join[k2][v]] for v in iv)
                acc = lat.meet[k1][lat.join[k2][acc]]
        los.append(iv[0])
        his.append(iv[1])
        # acc is now the least (U) / greatest (W) solution of the cycle
        # equation, i.e. the exact value on the path word^omega
        exacts.append(acc)
    inf = (LatticeElem(lat, lat.meet_all(los)),
           LatticeElem(lat, lat.meet_all(exacts)))
    sup = (LatticeElem(lat, lat.join_all(exacts)),
           LatticeElem(lat, lat.join_all(his)))
    return inf, sup


# ---------------------------------------------------------------------------
# second classical CTL implementation (set-based, worklist style)
# ---------------------------------------------------------------------------

def classical_labeling(m: Model, f) -> Predicate:
    """Textbook set-based CTL labeling for two-valued powerset models,
    written independently of the lattice-fixpoint evaluator."""
    if m.lattice.n != 2:
        raise NotBool2("set-based labeling needs the two-element lattice")
    if not isinstance(m.coalgebra, (Powerset, NonemptyPowerset)):
        raise UnsupportedSource("set-based labeling needs a powerset model")
    lat = m.lattice
    succ = m.coalgebra.succ
    states = set(m.states)
    alive = set(states)
    changed = True
    while changed:
        changed = False
        for x in list(alive):
            if not (succ[x] & alive):
                alive.discard(x)
                changed = True

    def truthy(pred, x):
        return pred.value_index(x) == lat.top

    def ev(g):
        if isinstance(g, S.SAtom):
            return {x for x in states if truthy(m.label(g.name), x)}
        if isinstance(g, S.SNegAtom):
            return states - {x for x in states if truthy(m.label(g.name), x)}
        if isinstance(g, S.STT):
            return set(states)
        if isinstance(g, S.SFF):
            return set()
        if isinstance(g, S.SAnd):
            return ev(g.left) & ev(g.right)
        if isinstance(g, S.SOr):
            return ev(g.left) | ev(g.right)
        if isinstance(g, S.Exists):
            return ev_epath(g.path)
        if isinstance(g, S.Forall):
            return states - ev_epath(S.to_nnf(S.PNeg(g.path)))
        raise NotCtlFragment(f"not a CTL state formula: {g!r}")

    def ev_epath(p):
        s = as_state_formula(p)
        if s is not None:
            return ev(s) & alive
        if isinstance(p, S.Next):
            good = ev(as_state_formula(p.sub)) & alive
            return {x for x in states if succ[x] & good}
        if isinstance(p, S.Until):
            hold = ev(as_state_formula(p.hold))
            sat = ev(as_state_formula(p.goal)) & alive
            work = list(sat)
            while work:
                y = work.pop()
                for x in states:
                    if x not in sat and x in hold and y in succ[x]:
                        sat.add(x)
                        work.append(x)
            return sat
        if isinstance(p, S.WUntil):
            hold = ev(as_state_formula(p.hold))
            rel = ev(as_state_formula(p.release))
            sat = hold & alive
            while True:
                keep = {x for x in sat
                        if x in rel or (succ[x] & sat)}
                if keep == sat:
                    return sat
                sat = keep
        raise NotCtlFragment(f"not a CTL path argument: {p!r}")

    result = ev(f)
    return Predicate(lat, m.states,
                     tuple(lat.top if x in result else lat.bottom
                           for x in m.states))


# ---------------------------------------------------------------------------
# lasso paths: exact finite execution maps for the transfer diagram
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Lasso:
    """An ultimately periodic path: stem then repeated cycle."""

    stem: tuple
    cycle: tuple

    def state(self, i):
        if i < len(self.stem):
            return self.stem[i]
        return self.cycle[(i - len(self.stem)) % len(self.cycle)]

    def prepend(self, x):
        return Lasso((x,) + self.stem, self.cycle)


def shape_on_lasso(shape, lasso: Lasso) -> int:
    """Exact value of a shape on an ultimately periodic path: the cycle
    yields a one-variable affine equation whose least (U) or greatest (W)
    solution closes the fixpoint, then the stem composes backwards."""
    lat = shape_lattice_of(shape)
    if isinstance(shape, Const):
        return shape.value
    if isinstance(shape, Head):
        return shape.pred.value_index(lasso.state(0))
    if isinstance(shape, Second):
        return shape.pred.value_index(lasso.state(1))
    if isinstance(shape, AffineUntil):
        a_c, b_c = lat.bottom, lat.top
        for x in reversed(lasso.cycle):
            g, h = shape.goal.value_index(x), shape.hold.value_index(x)
            a_c = lat.join[g][lat.meet[h][a_c]]
            b_c = lat.meet[h][b_c]
        v = a_c  # least solution of v = a_c \/ (b_c /\ v)
        for x in reversed(lasso.stem):
            g, h = shape.goal.value_index(x), shape.hold.value_index(x)
            v = lat.join[g][lat.meet[h][v]]
        return lat.join[shape.a][lat.meet[shape.b][v]]
    if isinstance(shape, AffineWUntil):
        a_c, b_c = lat.top, lat.bottom
        for x in reversed(lasso.cycle):
            k1, k2 = shape.k1.value_index(x), shape.k2.value_index(x)
            a_c = lat.meet[k1][lat.join[k2][a_c]]
            b_c = lat.join[k2][b_c]
        v = a_c  # greatest solution of v = a_c /\ (b_c \/ v)
        for x in reversed(lasso.stem):
            k1, k2 = shape.k1.value_index(x), shape.k2.value_index(x)
            v = lat.meet[k1][lat.join[k2][v]]
        return lat.meet[shape.a][lat.join[shape.b][v]]
    raise TypeError(f"not a continuation shape: {shape!r}")


def shape_lattice_of(shape):
    if isinstance(shape, Const):
        return shape.lattice
    if isinstance(shape, (Head, Second)):
        return shape.pred.lattice
    if isinstance(shape, AffineUntil):
        return shape.hold.lattice
    return shape.k1.lattice


def lasso_map_eval(lattice, umap, x, shape) -> int:
    """iota of a finite lasso-path map, evaluated at a shape: the join of
    the shape's exact values over the path set."""
    return lattice.join_all(shape_on_lasso(shape, l) for l in umap.get(x, ()))


def powerset_exec_on_lassos(m: Model, umap) -> dict:
    """One application of the powerset execution operator to a finite
    lasso-path map: prepend each state to its successors' paths."""
    return {x: frozenset(l.prepend(x)
                         for y in m.coalgebra.succ[x]
                         for l in umap.get(y, ()))
            for x in m.states}
