"""Monad morphisms as executable transformations.

Morphisms are represented extensionally, as evaluation procedures: the
lifting-induced embedding of a concrete branching monad into the
continuation monad, the involution-induced isomorphism between the affine
monotone continuation monads over a de Morgan lattice and its opposite,
and the identity.  Law checking enumerates tiny instances exhaustively.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import LatticeMismatch, NoInvolution, TooLarge, UnsupportedSource
from .lattice import LatticeElem, LatticeSpec
from .models import (
    Evaluator,
    Model,
    NonemptyPowerset,
    Powerset,
    Predicate,
)
from .execution import ExecutionMapHandle, shift_shape


@dataclass(frozen=True)
class Identity:
    kind = "identity"


@dataclass(frozen=True)
class IotaFromLifting:
    source: str  # a concrete monad kind, e.g. "powerset"
    kind = "iota"


@dataclass(frozen=True)
class Beta:
    lattice: LatticeSpec
    kind = "beta"


# ---------------------------------------------------------------------------
# the involution morphism
# ---------------------------------------------------------------------------

class BetaEvaluator(Evaluator):
    """k -> not h(not . k), for h monotone over the opposite order."""

    monotone_verified = True

    def __init__(self, lattice, h):
        if not lattice.has_neg:
            raise NoInvolution("beta needs a de Morgan involution")
        if h.lattice.names != lattice.names:
            raise LatticeMismatch("h must live on the same element carrier")
        for i in range(lattice.n):
            for j in range(lattice.n):
                if h.lattice.leq[i][j] != lattice.leq[j][i]:
                    raise LatticeMismatch("h must be over the opposite order")
        self.lattice = lattice
        self.states = tuple(h.states)
        self.h = h

    def __call__(self, k):
        neg = self.lattice.neg
        flipped = Predicate(self.h.lattice, self.states,
                            tuple(neg[v] for v in k.values))
        return LatticeElem(self.lattice, neg[self.h(flipped).index])


def apply_beta(lattice: LatticeSpec, h) -> BetaEvaluator:
    """Transport an affine evaluator over the opposite order to one over
    ``lattice`` via the involution."""
    return BetaEvaluator(lattice, h)


# ---------------------------------------------------------------------------
# execution-map transfer
# ---------------------------------------------------------------------------

def transfer_execution_map(morphism, m: Model, u="maximal") -> ExecutionMapHandle:
    """Transfer an execution map along a monad morphism.

    Supported sources: the maximal (non-empty) powerset execution map,
    accepted as given (``u == "maximal"``), and continuation-native
    handles under the identity morphism.
    """
    if isinstance(morphism, Identity):
        if isinstance(u, ExecutionMapHandle):
            return u
        raise UnsupportedSource("identity transfer needs a handle")
    if isinstance(morphism, IotaFromLifting):
        if morphism.source not in ("powerset", "nonempty-powerset"):
            raise UnsupportedSource(
                f"no transferable execution map for {morphism.source!r}")
        if not isinstance(m.coalgebra, (Powerset, NonemptyPowerset)):
            raise UnsupportedSource("model is not a powerset coalgebra")
        if u != "maximal":
            raise UnsupportedSource(
                "only the maximal powerset execution map is supported")
        return ExecutionMapHandle.powerset_maximal(m)
    raise UnsupportedSource(f"unknown morphism {morphism!r}")


def check_transferred_fixpoint(m: Model, handle: ExecutionMapHandle,
                               shapes) -> bool:
    """The transferred map is an execution map of the transferred coalgebra:
    its value at (x, s) equals one operator application through the lifted
    successor.  Checked at the given shapes on all states."""
    lat = m.lattice
    for s in shapes:
        for x in m.states:
            want = handle.evaluate(x, s).index
            shifted = shift_shape(s, x)
            got = lat.join_all(handle.evaluate(y, shifted).index
                               for y in m.coalgebra.succ[x])
            if got != want:
                return False
    return True


# ---------------------------------------------------------------------------
# law checking by enumeration
# ---------------------------------------------------------------------------

@dataclass
class LawReport:
    morphism: str
    passed: bool = True
    checks: list = field(default_factory=list)

    def record(self, law, instance, ok, detail=""):
        self.checks.append({"law": law, "instance": instance, "ok": ok,
                            "detail": detail})
        if not ok:
            self.passed = False

    def to_json(self):
        return {"morphism": self.morphism, "passed": self.passed,
                "checks": self.checks}


def _linear_extension(lattice):
    return sorted(range(lattice.n),
                  key=lambda i: sum(lattice.leq[j][i] for j in range(lattice.n)))


def enumerate_monotone_tables(lattice, n_states, affine_only=False, cap=10 ** 6):
    """All monotone maps from continuation tuples to the lattice, as dicts;
    backtracking over a linear extension of the product order."""
    elem_order = _linear_extension(lattice)
    keys = list(itertools.product(elem_order, repeat=n_states))
    if lattice.n ** len(keys) > cap and len(keys) > 12:
        raise TooLarge("monotone-map enumeration out of bounds")
    below = {k: [k2 for k2 in keys
                 if all(lattice.leq[a][b] for a, b in zip(k2, k)) and k2 != k]
             for k in keys}
    out = []
    table = {}

    def assign(i):
        if i == len(keys):
            out.append(dict(table))
            return
        key = keys[i]
        const = key[0] if all(v == key[0] for v in key) else None
        for v in range(lattice.n):
            if affine_only and const is not None and v != const:
                continue
            if all(lattice.leq[table[k2]][v] for k2 in below[key] if k2 in table):
                table[key] = v
                assign(i + 1)
                del table[key]

    assign(0)
    return out


class _TableFn(Evaluator):
    monotone_verified = True

    def __init__(self, lattice, states, table):
        self.lattice = lattice
        self.states = tuple(states)
        self.table = table

    def __call__(self, k):
        return LatticeElem(self.lattice, self.table[k.values])


def _powerset_monad(states):
    xs = list(states)
    elems = [frozenset(c) for r in range(len(xs) + 1)
             for c in itertools.combinations(xs, r)]
    return {
        "elements": elems,
        "eta": lambda x: frozenset([x]),
        "mu": lambda tt: frozenset().union(*tt) if tt else frozenset(),
        "double": [frozenset(c) for r in range(len(elems) + 1)
                   for c in itertools.combinations(elems, r)],
        "iota": lambda lat, t, kvals, pos:
            lat.join_all(kvals[pos[y]] for y in t),
    }


def _weighted_monad(lattice, states):
    xs = list(states)
    elems = list(itertools.product(range(lattice.n), repeat=len(xs)))

    def mu(tt):
        # tt: dict t -> weight index
        return tuple(lattice.join_all(lattice.meet[w][t[i]]
                                      for t, w in tt.items())
                     for i in range(len(xs)))

    def double():
        for weights in itertools.product(range(lattice.n), repeat=len(elems)):
            yield dict(zip(elems, weights))

    return {
        "elements": elems,
        "eta": lambda x: tuple(lattice.top if y == x else lattice.bottom
                               for y in xs),
        "mu": mu,
        "double": double(),
        "iota": lambda lat, t, kvals, pos:
            lat.join_all(lat.meet[t[i]][kvals[i]] for i in range(len(xs))),
    }


def _check_iota_laws(report, kind, lattice, n_states, double_cap=5000):
    xs = [f"x{i}" for i in range(n_states)]
    pos = {x: i for i, x in enumerate(xs)}
    lat = lattice
    all_k = list(itertools.product(range(lat.n), repeat=len(xs)))
    if kind in ("powerset", "nonempty-powerset"):
        monad = _powerset_monad(xs)
    elif kind in ("weighted", "affine-weighted"):
        monad = _weighted_monad(lat, xs)
    else:
        raise UnsupportedSource(f"no lifting-induced morphism for {kind!r}")
    iota = monad["iota"]

    # unit law: iota(eta(x))(k) = k(x)
    ok = all(iota(lat, monad["eta"](x), kv, pos) == kv[pos[x]]
             for x in xs for kv in all_k)
    report.record("unit", f"{kind}/{lat.name}/|X|={n_states}", ok)

    # multiplication law: the grouped composite through the continuation
    # monad against iota of the monad's own multiplication
    double = list(itertools.islice(monad["double"], double_cap + 1))
    sampled = len(double) > double_cap
    if sampled:
        double = double[:double_cap]
    ok = True
    detail = "sampled" if sampled else "exhaustive"
    iota_sig = {t: tuple(iota(lat, t, kv, pos) for kv in all_k)
                for t in monad["elements"]}
    for tt in double:
        flat = monad["mu"](tt)
        if isinstance(tt, frozenset):
            # S iota collapses equal images; a join is insensitive to that
            groups = {iota_sig[t]: lat.top for t in tt}
        else:
            groups = {}
            for t, w in tt.items():
                sig = iota_sig[t]
                groups[sig] = lat.join[groups.get(sig, lat.bottom)][w]
        for ki, kv in enumerate(all_k):
            rhs = iota(lat, flat, kv, pos)
            lhs = lat.join_all(lat.meet[w][sig[ki]]
                               for sig, w in groups.items())
            if lhs != rhs:
                ok = False
                detail = f"counterexample tt={tt!r} k={kv!r}"
                break
        if not ok:
            break
    report.record("multiplication", f"{kind}/{lat.name}/|X|={n_states}", ok,
                  detail)


def _check_beta_laws(report, lattice, n_states):
    if not lattice.has_neg:
        raise NoInvolution("beta laws need a de Morgan lattice")
    lat = lattice
    lop = lat.opposite()
    xs = [f"x{i}" for i in range(n_states)]
    all_k = list(itertools.product(range(lat.n), repeat=n_states))
    seeds = [_TableFn(lop, xs, t)
             for t in enumerate_monotone_tables(lop, n_states, affine_only=True)]
    inst = f"{lat.name}/|X|={n_states}"

    # unit law: beta of the opposite-order unit is the unit
    ok = True
    for i, x in enumerate(xs):
        unit = _TableFn(lop, xs, {k: k[i] for k in all_k})
        b = apply_beta(lat, unit)
        for kv in all_k:
            if b(Predicate(lat, xs, kv)).index != kv[i]:
                ok = False
    report.record("unit", inst, ok)

    # invertibility and affineness preservation on the whole affine family
    ok_inv, ok_aff = True, True
    for h in seeds:
        bb = apply_beta(lop, apply_beta(lat, h))
        for kv in all_k:
            if bb(Predicate(lop, xs, kv)).index != h(Predicate(lop, xs, kv)).index:
                ok_inv = False
        if not apply_beta(lat, h).is_affine():
            ok_aff = False
    report.record("invertibility", inst, ok_inv)
    report.record("affineness", inst, ok_aff)

    # multiplication law over weighted combinations of the enumerated
    # elements (all op-affine functionals built from at most two seeds)
    op_join = lat.meet  # joins of the opposite order
    op_meet = lat.join
    op_top = lat.bottom

    def combos():
        for h in seeds:
            yield [(op_top, h)]
        for h1, h2 in itertools.combinations(seeds, 2):
            for w1 in range(lat.n):
                for w2 in range(lat.n):
                    if op_join[w1][w2] == op_top:
                        yield [(w1, h1), (w2, h2)]

    def eval_H(combo, kappa):
        acc = None
        for w, h in combo:
            v = op_meet[w][kappa(h)]
            acc = v if acc is None else op_join[acc][v]
        return acc

    ok = True
    detail = ""
    for combo in combos():
        for kv in all_k:
            k = Predicate(lat, xs, kv)
            negk = Predicate(lop, xs, tuple(lat.neg[v] for v in kv))
            # left: beta(mu_op(H)) at k
            lhs = lat.neg[eval_H(combo, lambda h: h(negk).index)]
            # right: mu(beta_KX(K_op(beta)(H))) at k, staged literally
            lifted = [(w, apply_beta(lat, h)) for w, h in combo]
            inner = eval_H(
                [(w, g) for w, g in lifted],
                lambda g: lat.neg[g(k).index])
            rhs = lat.neg[inner]
            if lhs != rhs:
                ok = False
                detail = f"counterexample at k={kv!r}"
                break
        if not ok:
            break
    report.record("multiplication", inst, ok, detail)


def check_morphism_laws(morphism, lattice=None, max_states=2) -> LawReport:
    """Verify the monad-morphism equations on all enumerable inputs.

    For lifting-induced morphisms this checks the unit and multiplication
    laws of the chosen concrete monad; for beta it additionally checks
    invertibility and affineness preservation.
    """
    report = LawReport(morphism.kind if not isinstance(morphism, IotaFromLifting)
                       else f"iota({morphism.source})")
    if isinstance(morphism, Identity):
        report.record("identity", "-", True, "vacuous")
        return report
    if isinstance(morphism, IotaFromLifting):
        if lattice is None:
            raise LatticeMismatch("iota laws need a lattice")
        for n in range(1, max_states + 1):
            _check_iota_laws(report, morphism.source, lattice, n)
        return report
    if isinstance(morphism, Beta):
        lat = morphism.lattice if lattice is None else lattice
        for n in range(1, max_states + 1):
            _check_beta_laws(report, lat, n)
        return report
    raise UnsupportedSource(f"unknown morphism {morphism!r}")
