"""Finite distributive truth-value lattices.

Every evaluator in this package computes in a finite bounded distributive
lattice, optionally carrying a de Morgan involution.  Loading validates all
structural requirements exhaustively (order axioms, existence of joins and
meets, distributivity, involution laws), so downstream code can rely on the
operation tables being total and law-abiding.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    BadInvolution,
    ForeignElement,
    NoInvolution,
    NotALattice,
    NotDistributive,
    Unbounded,
)


class LatticeSpec:
    """A validated finite lattice over named elements.

    All tables are index-based: ``leq[i][j]`` says whether element ``i`` is
    below element ``j``, and ``join``/``meet`` hold the indices of least
    upper / greatest lower bounds.  Instances are immutable after
    construction and compared by identity; mixing elements of two specs is
    an error even when the specs happen to be isomorphic.
    """

    __slots__ = ("name", "names", "n", "leq", "join", "meet", "bottom",
                 "top", "neg", "height", "_index")

    def __init__(self, names, leq, neg=None, name="lattice"):
        self.name = name
        self.names = tuple(str(s) for s in names)
        self.n = len(self.names)
        if self.n == 0:
            raise Unbounded("a lattice needs at least one element")
        if len(set(self.names)) != self.n:
            raise NotALattice("duplicate element identifiers")
        self._index = {s: i for i, s in enumerate(self.names)}
        self.leq = tuple(tuple(bool(v) for v in row) for row in leq)
        if len(self.leq) != self.n or any(len(r) != self.n for r in self.leq):
            raise NotALattice("leq table has wrong shape")
        self._check_partial_order()
        self.join, self.meet = self._build_op_tables()
        self.bottom, self.top = self._find_bounds()
        self._check_distributivity()
        if neg is None:
            self.neg = None
        else:
            self.neg = tuple(self._resolve(e) for e in neg)
            self._check_involution()
        self.height = self._chain_height()

    # construction helpers --------------------------------------------------

    def _resolve(self, e):
        if isinstance(e, int):
            if not 0 <= e < self.n:
                raise NotALattice(f"element index {e} out of range")
            return e
        if e not in self._index:
            raise NotALattice(f"unknown element identifier {e!r}")
        return self._index[e]

    def _check_partial_order(self):
        leq = self.leq
        rng = range(self.n)
        for i in rng:
            if not leq[i][i]:
                raise NotALattice(f"leq not reflexive at {self.names[i]}")
        for i in rng:
            for j in rng:
                if i != j and leq[i][j] and leq[j][i]:
                    raise NotALattice(
                        f"leq not antisymmetric on {self.names[i]},{self.names[j]}")
                if leq[i][j]:
                    for k in rng:
                        if leq[j][k] and not leq[i][k]:
                            raise NotALattice("leq not transitive")

    def _build_op_tables(self):
        leq = self.leq
        rng = range(self.n)
        join = [[0] * self.n for _ in rng]
        meet = [[0] * self.n for _ in rng]
        for i in rng:
            for j in rng:
                uppers = [k for k in rng if leq[i][k] and leq[j][k]]
                least = [k for k in uppers if all(leq[k][u] for u in uppers)]
                if len(least) != 1:
                    raise NotALattice(
                        f"join undefined for {self.names[i]},{self.names[j]}")
                join[i][j] = least[0]
                lowers = [k for k in rng if leq[k][i] and leq[k][j]]
                greatest = [k for k in lowers if all(leq[u][k] for u in lowers)]
                if len(greatest) != 1:
                    raise NotALattice(
                        f"meet undefined for {self.names[i]},{self.names[j]}")
                meet[i][j] = greatest[0]
        return (tuple(tuple(r) for r in join), tuple(tuple(r) for r in meet))

    def _find_bounds(self):
        rng = range(self.n)
        bottoms = [i for i in rng if all(self.leq[i][j] for j in rng)]
        tops = [i for i in rng if all(self.leq[j][i] for j in rng)]
        if not bottoms or not tops:
            raise Unbounded("lattice has no bottom or no top element")
        return bottoms[0], tops[0]

    def _check_distributivity(self):
        join, meet = self.join, self.meet
        rng = range(self.n)
        for a in rng:
            for b in rng:
                for c in rng:
                    if meet[a][join[b][c]] != join[meet[a][b]][meet[a][c]]:
                        raise NotDistributive(
                            f"meet does not distribute over join at "
                            f"({self.names[a]},{self.names[b]},{self.names[c]})")

    def _check_involution(self):
        neg = self.neg
        rng = range(self.n)
        for i in rng:
            if neg[neg[i]] != i:
                raise BadInvolution(f"negation not involutive at {self.names[i]}")
        for i in rng:
            for j in rng:
                if self.leq[i][j] and not self.leq[neg[j]][neg[i]]:
                    raise BadInvolution("negation not antitone")

    def _chain_height(self):
        # longest chain length, via DP over the order
        order = sorted(range(self.n), key=lambda i: sum(self.leq[j][i] for j in range(self.n)))
        h = [1] * self.n
        for i in order:
            for j in order:
                if j != i and self.leq[j][i]:
                    h[i] = max(h[i], h[j] + 1)
        return max(h)

    # element access ---------------------------------------------------------

    @property
    def has_neg(self):
        return self.neg is not None

    def elem(self, name) -> "LatticeElem":
        if name not in self._index:
            raise NotALattice(f"unknown element identifier {name!r}")
        return LatticeElem(self, self._index[name])

    def by_index(self, i) -> "LatticeElem":
        if not 0 <= i < self.n:
            raise NotALattice(f"element index {i} out of range")
        return LatticeElem(self, i)

    def elements(self):
        return [LatticeElem(self, i) for i in range(self.n)]

    @property
    def bot(self) -> "LatticeElem":
        return LatticeElem(self, self.bottom)

    @property
    def top_elem(self) -> "LatticeElem":
        return LatticeElem(self, self.top)

    # fast index-level operations (used by the evaluators) -------------------

    def join_i(self, i, j):
        return self.join[i][j]

    def meet_i(self, i, j):
        return self.meet[i][j]

    def leq_i(self, i, j):
        return self.leq[i][j]

    def neg_i(self, i):
        if self.neg is None:
            raise NoInvolution(f"lattice {self.name!r} has no involution")
        return self.neg[i]

    def join_all(self, idxs):
        acc = self.bottom
        for i in idxs:
            acc = self.join[acc][i]
        return acc

    def meet_all(self, idxs):
        acc = self.top
        for i in idxs:
            acc = self.meet[acc][i]
        return acc

    def opposite(self) -> "LatticeSpec":
        """The same carrier with the order reversed (element order kept)."""
        flipped = tuple(tuple(self.leq[j][i] for j in range(self.n))
                        for i in range(self.n))
        neg = [self.names[k] for k in self.neg] if self.neg is not None else None
        return LatticeSpec(self.names, flipped, neg, name=self.name + "^op")

    def __repr__(self):
        return f"LatticeSpec({self.name!r}, {self.n} elements)"


@dataclass(frozen=True)
class LatticeElem:
    """An element of a specific LatticeSpec, identified by index."""

    lattice: LatticeSpec
    index: int

    @property
    def name(self):
        return self.lattice.names[self.index]

    def _check(self, other):
        if not isinstance(other, LatticeElem) or other.lattice is not self.lattice:
            raise ForeignElement("operands belong to different lattices")

    def join(self, other) -> "LatticeElem":
        self._check(other)
        return LatticeElem(self.lattice, self.lattice.join[self.index][other.index])

    def meet(self, other) -> "LatticeElem":
        self._check(other)
        return LatticeElem(self.lattice, self.lattice.meet[self.index][other.index])

    def neg(self) -> "LatticeElem":
        return LatticeElem(self.lattice, self.lattice.neg_i(self.index))

    def leq(self, other) -> bool:
        self._check(other)
        return self.lattice.leq[self.index][other.index]

    def __repr__(self):
        return f"<{self.name}>"


# -- builtin families ---------------------------------------------------------

def builtin_lattice(name) -> LatticeSpec:
    """bool2, chainN (Lukasiewicz involution) or squareM (M-fold bool2 power
    with the coordinate-reversing involution)."""
    if name == "bool2":
        return LatticeSpec(["0", "1"], [[1, 1], [0, 1]], ["1", "0"], name="bool2")
    if name.startswith("chain"):
        try:
            n = int(name[len("chain"):])
        except ValueError:
            raise NotALattice(f"bad builtin lattice name {name!r}")
        if n < 2:
            raise NotALattice("chainN needs N >= 2")
        names = [str(Fraction(k, n - 1)) for k in range(n)]
        leq = [[1 if i <= j else 0 for j in range(n)] for i in range(n)]
        neg = [names[n - 1 - k] for k in range(n)]
        return LatticeSpec(names, leq, neg, name=name)
    if name.startswith("square"):
        try:
            m = int(name[len("square"):])
        except ValueError:
            raise NotALattice(f"bad builtin lattice name {name!r}")
        if m < 1 or m > 6:
            raise NotALattice("squareM needs 1 <= M <= 6")
        vectors = [tuple((k >> b) & 1 for b in range(m)) for k in range(2 ** m)]
        names = ["".join(str(b) for b in v) for v in vectors]
        leq = [[1 if all(x <= y for x, y in zip(u, v)) else 0 for v in vectors]
               for u in vectors]
        # reverse the coordinate list and complement: a proper de Morgan
        # involution that is not Boolean complement for M >= 2
        neg = []
        for v in vectors:
            flipped = tuple(1 - b for b in reversed(v))
            neg.append("".join(str(b) for b in flipped))
        return LatticeSpec(names, leq, neg, name=name)
    raise NotALattice(f"unknown builtin lattice {name!r}")


def load_lattice(document) -> LatticeSpec:
    """Build a LatticeSpec from a parsed JSON document.

    ``{"kind": "builtin", "name": "chain3"}`` or
    ``{"kind": "explicit", "elements": [...], "leq": [[...]], "neg": [...]}``.
    """
    if not isinstance(document, dict) or "kind" not in document:
        raise NotALattice("lattice document must be an object with a 'kind'")
    kind = document["kind"]
    if kind == "builtin":
        return builtin_lattice(document.get("name", ""))
    if kind == "explicit":
        elements = document.get("elements")
        leq = document.get("leq")
        if not elements or leq is None:
            raise NotALattice("explicit lattice needs 'elements' and 'leq'")
        neg = document.get("neg")
        return LatticeSpec(elements, leq, neg,
                           name=document.get("name", "explicit"))
    raise NotALattice(f"unknown lattice kind {kind!r}")


# -- term evaluation -----------------------------------------------------------

def eval_term(lattice: LatticeSpec, term) -> LatticeElem:
    """Evaluate a lattice term.

    Terms are element names, LatticeElem values, or nested lists:
    ``["join", t, t]``, ``["meet", t, t]``, ``["neg", t]``,
    ``["big_join", [t, ...]]``, ``["big_meet", [t, ...]]``.
    The empty big_join is bottom, the empty big_meet is top.
    """
    if isinstance(term, LatticeElem):
        if term.lattice is not lattice:
            raise ForeignElement("term constant from a different lattice")
        return term
    if isinstance(term, str):
        return lattice.elem(term)
    if not isinstance(term, (list, tuple)) or not term:
        raise NotALattice(f"malformed lattice term {term!r}")
    op = term[0]
    if op == "join":
        return eval_term(lattice, term[1]).join(eval_term(lattice, term[2]))
    if op == "meet":
        return eval_term(lattice, term[1]).meet(eval_term(lattice, term[2]))
    if op == "neg":
        if not lattice.has_neg:
            raise NoInvolution("neg used on a lattice without involution")
        return eval_term(lattice, term[1]).neg()
    if op == "big_join":
        acc = lattice.bot
        for sub in term[1]:
            acc = acc.join(eval_term(lattice, sub))
        return acc
    if op == "big_meet":
        acc = lattice.top_elem
        for sub in term[1]:
            acc = acc.meet(eval_term(lattice, sub))
        return acc
    if op == "const":
        return eval_term(lattice, term[1])
    raise NotALattice(f"unknown term operator {op!r}")
