"""Formula syntax: ASTs, parser, printer, negation normal form, fragment
classification and the CTL-to-fixpoint encoding.

Two logics share one surface grammar style:

* fixpoint modal logic: ``tt ff /\\ \\/ ~ <> [] mu nu .``
* CTL*: ``E A X U W`` with ``U``/``W`` infix; parentheses are mandatory
  around the infix path operators.

Precedence: ``~`` binds tightest, then ``<> [] X`` (and the quantifiers
``E``/``A``), then ``/\\``, then ``\\/``; ``mu``/``nu`` bind weakest.
Surface ``~`` is accepted anywhere and eliminated immediately, so parsed
formulas carry negation on atoms only.

Argument roles are pinned by the fixpoint clauses of the semantics:
``hold U goal`` unfolds as ``goal \\/ (hold /\\ <next>)`` and
``hold W release`` as ``hold /\\ (release \\/ <next>)``.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass

from .errors import (
    FormulaSyntaxError,
    NegationOfNonAtom,
    NotCtlFragment,
    ShadowedVariable,
)


# ---------------------------------------------------------------------------
# fixpoint modal logic AST
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Atom:
    name: str


@dataclass(frozen=True)
class NegAtom:
    name: str


@dataclass(frozen=True)
class TT:
    pass


@dataclass(frozen=True)
class FF:
    pass


@dataclass(frozen=True)
class And:
    left: object
    right: object


@dataclass(frozen=True)
class Or:
    left: object
    right: object


@dataclass(frozen=True)
class Dia:
    sub: object


@dataclass(frozen=True)
class Box:
    sub: object


@dataclass(frozen=True)
class Mu:
    var: str
    body: object


@dataclass(frozen=True)
class Nu:
    var: str
    body: object


@dataclass(frozen=True)
class Neg:
    """Surface negation; never survives to_nnf."""

    sub: object


FML_NODES = (Var, Atom, NegAtom, TT, FF, And, Or, Dia, Box, Mu, Nu, Neg)


# ---------------------------------------------------------------------------
# CTL* AST (two sorts)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SAtom:
    name: str


@dataclass(frozen=True)
class SNegAtom:
    name: str


@dataclass(frozen=True)
class STT:
    pass


@dataclass(frozen=True)
class SFF:
    pass


@dataclass(frozen=True)
class SAnd:
    left: object
    right: object


@dataclass(frozen=True)
class SOr:
    left: object
    right: object


@dataclass(frozen=True)
class Exists:
    path: object


@dataclass(frozen=True)
class Forall:
    path: object


@dataclass(frozen=True)
class SNeg:
    sub: object


@dataclass(frozen=True)
class PTT:
    pass


@dataclass(frozen=True)
class PFF:
    pass


@dataclass(frozen=True)
class PAnd:
    left: object
    right: object


@dataclass(frozen=True)
class POr:
    left: object
    right: object


@dataclass(frozen=True)
class Lift:
    """A state formula read as a path formula (evaluated at the head)."""

    state: object


@dataclass(frozen=True)
class Next:
    sub: object


@dataclass(frozen=True)
class Until:
    hold: object
    goal: object


@dataclass(frozen=True)
class WUntil:
    hold: object
    release: object


@dataclass(frozen=True)
class PNeg:
    sub: object


STATE_NODES = (SAtom, SNegAtom, STT, SFF, SAnd, SOr, Exists, Forall, SNeg)
PATH_NODES = (PTT, PFF, PAnd, POr, Lift, Next, Until, WUntil, PNeg)


class FragmentClass(enum.Enum):
    CtlNoUW = "CtlNoUW"
    CtlUOnly = "CtlUOnly"
    CtlWOnly = "CtlWOnly"
    CtlMixed = "CtlMixed"
    GeneralCtlStar = "GeneralCtlStar"


# ---------------------------------------------------------------------------
# tokenizer
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"(/\\|\\/|<>|\[\]|~|\.|\(|\))|([A-Za-z_][A-Za-z0-9_']*)")

FML_KEYWORDS = {"tt", "ff", "mu", "nu"}
CTL_KEYWORDS = {"tt", "ff", "E", "A", "X", "U", "W"}


def _tokenize(text):
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", pos)
        tokens.append((m.group(0), pos))
        pos = m.end()
    tokens.append((None, n))
    return tokens


class _Parser:
    def __init__(self, text, logic):
        self.text = text
        self.logic = logic
        self.tokens = _tokenize(text)
        self.i = 0
        self.keywords = FML_KEYWORDS if logic == "fml" else CTL_KEYWORDS

    def peek(self):
        return self.tokens[self.i][0]

    def pos(self):
        return self.tokens[self.i][1]

    def take(self, expected=None):
        tok, pos = self.tokens[self.i]
        if expected is not None and tok != expected:
            raise FormulaSyntaxError(f"expected {expected!r}, found {tok!r}", pos)
        self.i += 1
        return tok

    def is_ident(self, tok):
        if tok is None or tok in self.keywords:
            return False
        m = _TOKEN_RE.fullmatch(tok)
        return m is not None and m.group(2) is not None

    def done(self):
        if self.peek() is not None:
            raise FormulaSyntaxError(f"trailing input {self.peek()!r}", self.pos())

    # -- FML grammar --------------------------------------------------------

    def fml_formula(self, bound):
        tok = self.peek()
        if tok in ("mu", "nu"):
            self.take()
            var = self.peek()
            if not self.is_ident(var):
                raise FormulaSyntaxError("expected a variable name", self.pos())
            if var in bound:
                raise ShadowedVariable(f"variable {var!r} is already bound")
            self.take()
            self.take(".")
            body = self.fml_formula(bound | {var})
            return Mu(var, body) if tok == "mu" else Nu(var, body)
        return self.fml_or(bound)

    def fml_or(self, bound):
        left = self.fml_and(bound)
        while self.peek() == "\\/":
            self.take()
            left = Or(left, self.fml_and(bound))
        return left

    def fml_and(self, bound):
        left = self.fml_unary(bound)
        while self.peek() == "/\\":
            self.take()
            left = And(left, self.fml_unary(bound))
        return left

    def fml_unary(self, bound):
        tok = self.peek()
        if tok == "~":
            self.take()
            return Neg(self.fml_unary(bound))
        if tok == "<>":
            self.take()
            return Dia(self.fml_unary(bound))
        if tok == "[]":
            self.take()
            return Box(self.fml_unary(bound))
        return self.fml_primary(bound)

    def fml_primary(self, bound):
        tok = self.peek()
        if tok == "(":
            self.take()
            f = self.fml_formula(bound)
            self.take(")")
            return f
        if tok == "tt":
            self.take()
            return TT()
        if tok == "ff":
            self.take()
            return FF()
        if self.is_ident(tok):
            self.take()
            return Var(tok) if tok in bound else Atom(tok)
        raise FormulaSyntaxError(f"unexpected token {tok!r}", self.pos())

    # -- CTL* grammar -------------------------------------------------------

    def state_formula(self):
        return self.state_or()

    def state_or(self):
        left = self.state_and()
        while self.peek() == "\\/":
            self.take()
            left = SOr(left, self.state_and())
        return left

    def state_and(self):
        left = self.state_unary()
        while self.peek() == "/\\":
            self.take()
            left = SAnd(left, self.state_unary())
        return left

    def state_unary(self):
        tok = self.peek()
        if tok == "~":
            self.take()
            return SNeg(self.state_unary())
        if tok == "E":
            self.take()
            return Exists(self.path_unary())
        if tok == "A":
            self.take()
            return Forall(self.path_unary())
        return self.state_primary()

    def state_primary(self):
        tok = self.peek()
        if tok == "(":
            self.take()
            f = self.state_or()
            self.take(")")
            return f
        if tok == "tt":
            self.take()
            return STT()
        if tok == "ff":
            self.take()
            return SFF()
        if self.is_ident(tok):
            self.take()
            return SAtom(tok)
        raise FormulaSyntaxError(f"unexpected token {tok!r}", self.pos())

    def path_infix(self):
        # a single, explicitly parenthesized U/W level
        left = self.path_or()
        tok = self.peek()
        if tok in ("U", "W"):
            self.take()
            right = self.path_or()
            if self.peek() in ("U", "W"):
                raise FormulaSyntaxError(
                    "chained U/W needs parentheses", self.pos())
            return Until(left, right) if tok == "U" else WUntil(left, right)
        return left

    def path_or(self):
        left = self.path_and()
        while self.peek() == "\\/":
            self.take()
            left = POr(left, self.path_and())
        return left

    def path_and(self):
        left = self.path_unary()
        while self.peek() == "/\\":
            self.take()
            left = PAnd(left, self.path_unary())
        return left

    def path_unary(self):
        tok = self.peek()
        if tok == "~":
            self.take()
            return PNeg(self.path_unary())
        if tok == "X":
            self.take()
            return Next(self.path_unary())
        return self.path_primary()

    def path_primary(self):
        tok = self.peek()
        if tok == "(":
            self.take()
            f = self.path_infix()
            self.take(")")
            return f
        if tok == "tt":
            self.take()
            return PTT()
        if tok == "ff":
            self.take()
            return PFF()
        if tok == "E":
            self.take()
            return Lift(Exists(self.path_unary()))
        if tok == "A":
            self.take()
            return Lift(Forall(self.path_unary()))
        if self.is_ident(tok):
            self.take()
            return Lift(SAtom(tok))
        raise FormulaSyntaxError(f"unexpected token {tok!r}", self.pos())


def parse_formula(text, logic="fml"):
    """Parse surface text into a negation-normal AST.

    ``logic`` selects the grammar: ``"fml"`` or ``"ctlstar"``.  Surface
    negation is eliminated on the way out, so the result carries negation
    on atoms only.
    """
    if logic not in ("fml", "ctlstar"):
        raise ValueError(f"unknown logic {logic!r}")
    p = _Parser(text, logic)
    if logic == "fml":
        ast = p.fml_formula(frozenset())
        p.done()
        return to_nnf(ast)
    ast = p.state_formula()
    p.done()
    return to_nnf(ast)


# ---------------------------------------------------------------------------
# negation normal form
# ---------------------------------------------------------------------------

def to_nnf(f):
    """Push all surface negations to the atoms.

    Uses the dualities ``~<> == []~``, ``~[] == <>~``,
    ``~mu u.t(u) == nu u.~t(~u)`` (the inner flips cancel on the positive
    variable occurrences), ``~E == A~`` and the U/W duality
    ``~(a U b) == ~b W ~a`` / ``~(a W b) == ~b U ~a``.
    """
    if isinstance(f, FML_NODES):
        return _nnf_fml(f, False, {})
    if isinstance(f, STATE_NODES):
        return _nnf_state(f, False)
    if isinstance(f, PATH_NODES):
        return _nnf_path(f, False)
    raise TypeError(f"not a formula: {f!r}")


def _nnf_fml(f, neg, binder_neg):
    if isinstance(f, Neg):
        return _nnf_fml(f.sub, not neg, binder_neg)
    if isinstance(f, Var):
        if f.name not in binder_neg:
            if neg:
                raise NegationOfNonAtom(
                    f"cannot negate free variable {f.name!r}")
            return f
        # the binder was dualized iff its occurrences carry a matching flip
        if neg != binder_neg[f.name]:
            raise NegationOfNonAtom(
                f"fixpoint variable {f.name!r} occurs negatively")
        return Var(f.name)
    if isinstance(f, Atom):
        return NegAtom(f.name) if neg else f
    if isinstance(f, NegAtom):
        return Atom(f.name) if neg else f
    if isinstance(f, TT):
        return FF() if neg else f
    if isinstance(f, FF):
        return TT() if neg else f
    if isinstance(f, And):
        l, r = _nnf_fml(f.left, neg, binder_neg), _nnf_fml(f.right, neg, binder_neg)
        return Or(l, r) if neg else And(l, r)
    if isinstance(f, Or):
        l, r = _nnf_fml(f.left, neg, binder_neg), _nnf_fml(f.right, neg, binder_neg)
        return And(l, r) if neg else Or(l, r)
    if isinstance(f, Dia):
        s = _nnf_fml(f.sub, neg, binder_neg)
        return Box(s) if neg else Dia(s)
    if isinstance(f, Box):
        s = _nnf_fml(f.sub, neg, binder_neg)
        return Dia(s) if neg else Box(s)
    if isinstance(f, Mu):
        body = _nnf_fml(f.body, neg, {**binder_neg, f.var: neg})
        return Nu(f.var, body) if neg else Mu(f.var, body)
    if isinstance(f, Nu):
        body = _nnf_fml(f.body, neg, {**binder_neg, f.var: neg})
        return Mu(f.var, body) if neg else Nu(f.var, body)
    raise TypeError(f"not an FML formula: {f!r}")


def _nnf_state(f, neg):
    if isinstance(f, SNeg):
        return _nnf_state(f.sub, not neg)
    if isinstance(f, SAtom):
        return SNegAtom(f.name) if neg else f
    if isinstance(f, SNegAtom):
        return SAtom(f.name) if neg else f
    if isinstance(f, STT):
        return SFF() if neg else f
    if isinstance(f, SFF):
        return STT() if neg else f
    if isinstance(f, SAnd):
        l, r = _nnf_state(f.left, neg), _nnf_state(f.right, neg)
        return SOr(l, r) if neg else SAnd(l, r)
    if isinstance(f, SOr):
        l, r = _nnf_state(f.left, neg), _nnf_state(f.right, neg)
        return SAnd(l, r) if neg else SOr(l, r)
    if isinstance(f, Exists):
        p = _nnf_path(f.path, neg)
        return Forall(p) if neg else Exists(p)
    if isinstance(f, Forall):
        p = _nnf_path(f.path, neg)
        return Exists(p) if neg else Forall(p)
    raise TypeError(f"not a CTL* state formula: {f!r}")


def _nnf_path(f, neg):
    if isinstance(f, PNeg):
        return _nnf_path(f.sub, not neg)
    if isinstance(f, PTT):
        return PFF() if neg else f
    if isinstance(f, PFF):
        return PTT() if neg else f
    if isinstance(f, PAnd):
        l, r = _nnf_path(f.left, neg), _nnf_path(f.right, neg)
        return POr(l, r) if neg else PAnd(l, r)
    if isinstance(f, POr):
        l, r = _nnf_path(f.left, neg), _nnf_path(f.right, neg)
        return PAnd(l, r) if neg else POr(l, r)
    if isinstance(f, Lift):
        return Lift(_nnf_state(f.state, neg))
    if isinstance(f, Next):
        return Next(_nnf_path(f.sub, neg))
    if isinstance(f, Until):
        if neg:
            return WUntil(hold=_nnf_path(f.goal, True),
                          release=_nnf_path(f.hold, True))
        return Until(_nnf_path(f.hold, False), _nnf_path(f.goal, False))
    if isinstance(f, WUntil):
        if neg:
            return Until(hold=_nnf_path(f.release, True),
                         goal=_nnf_path(f.hold, True))
        return WUntil(_nnf_path(f.hold, False), _nnf_path(f.release, False))
    raise TypeError(f"not a CTL* path formula: {f!r}")


# ---------------------------------------------------------------------------
# printing (parse . print == id)
# ---------------------------------------------------------------------------

def print_formula(f) -> str:
    if isinstance(f, FML_NODES):
        return _print_fml(f)
    if isinstance(f, STATE_NODES):
        return _print_state(f)
    if isinstance(f, PATH_NODES):
        return _print_path(f)
    raise TypeError(f"not a formula: {f!r}")


def _fml_atomic(s, f):
    return s if isinstance(f, (Var, Atom, NegAtom, TT, FF, Dia, Box, Neg)) \
        else f"({s})"


def _print_fml(f):
    if isinstance(f, Var) or isinstance(f, Atom):
        return f.name
    if isinstance(f, NegAtom):
        return f"~{f.name}"
    if isinstance(f, TT):
        return "tt"
    if isinstance(f, FF):
        return "ff"
    if isinstance(f, Neg):
        return f"~{_fml_atomic(_print_fml(f.sub), f.sub)}"
    if isinstance(f, And):
        atoms = (Var, Atom, NegAtom, TT, FF, Dia, Box, Neg)
        ls = _print_fml(f.left)
        if not isinstance(f.left, atoms + (And,)):
            ls = f"({ls})"
        rs = _print_fml(f.right)
        if not isinstance(f.right, atoms):
            rs = f"({rs})"
        return f"{ls} /\\ {rs}"
    if isinstance(f, Or):
        atoms = (Var, Atom, NegAtom, TT, FF, Dia, Box, Neg)
        ls = _print_fml(f.left)
        if not isinstance(f.left, atoms + (Or,)):
            ls = f"({ls})"
        rs = _print_fml(f.right)
        if not isinstance(f.right, atoms):
            rs = f"({rs})"
        return f"{ls} \\/ {rs}"
    if isinstance(f, Dia):
        return f"<> {_fml_atomic(_print_fml(f.sub), f.sub)}"
    if isinstance(f, Box):
        return f"[] {_fml_atomic(_print_fml(f.sub), f.sub)}"
    if isinstance(f, Mu):
        return f"mu {f.var}. {_print_fml(f.body)}"
    if isinstance(f, Nu):
        return f"nu {f.var}. {_print_fml(f.body)}"
    raise TypeError(f"not an FML formula: {f!r}")


def _print_state(f):
    if isinstance(f, SAtom):
        return f.name
    if isinstance(f, SNegAtom):
        return f"~{f.name}"
    if isinstance(f, STT):
        return "tt"
    if isinstance(f, SFF):
        return "ff"
    if isinstance(f, SNeg):
        s = _print_state(f.sub)
        return f"~{s}" if isinstance(f.sub, (SAtom, SNegAtom, STT, SFF)) \
            else f"~({s})"
    if isinstance(f, SAnd):
        atoms = (SAtom, SNegAtom, STT, SFF, Exists, Forall, SNeg)
        ls = _print_state(f.left)
        if not isinstance(f.left, atoms + (SAnd,)):
            ls = f"({ls})"
        rs = _print_state(f.right)
        if not isinstance(f.right, atoms):
            rs = f"({rs})"
        return f"{ls} /\\ {rs}"
    if isinstance(f, SOr):
        atoms = (SAtom, SNegAtom, STT, SFF, Exists, Forall, SNeg)
        ls = _print_state(f.left)
        if not isinstance(f.left, atoms + (SOr,)):
            ls = f"({ls})"
        rs = _print_state(f.right)
        if not isinstance(f.right, atoms):
            rs = f"({rs})"
        return f"{ls} \\/ {rs}"
    if isinstance(f, Exists):
        return f"E {_print_quant_arg(f.path)}"
    if isinstance(f, Forall):
        return f"A {_print_quant_arg(f.path)}"
    raise TypeError(f"not a CTL* state formula: {f!r}")


def _print_quant_arg(p):
    # quantifier arguments parse as path_unary: anything binary or infix
    # needs the mandatory parentheses
    s = _print_path(p)
    if isinstance(p, (Until, WUntil, PAnd, POr)):
        return f"({s})"
    if isinstance(p, Lift) and isinstance(p.state, (SAnd, SOr)):
        return f"({s})"
    return s


def _print_path(f):
    if isinstance(f, PTT):
        return "tt"
    if isinstance(f, PFF):
        return "ff"
    if isinstance(f, Lift):
        return _print_state(f.state)
    if isinstance(f, PNeg):
        s = _print_path(f.sub)
        return f"~{s}" if isinstance(f.sub, (PTT, PFF, Lift, Next, PNeg)) \
            else f"~({s})"
    if isinstance(f, Next):
        return f"X {_print_quant_arg(f.sub)}"
    if isinstance(f, PAnd):
        def ok(side, allow_chain):
            return isinstance(side, (PTT, PFF, Next, PNeg) + allow_chain) or \
                (isinstance(side, Lift) and not isinstance(side.state, (SAnd, SOr)))
        ls = _print_path(f.left)
        if not ok(f.left, (PAnd,)):
            ls = f"({ls})"
        rs = _print_path(f.right)
        if not ok(f.right, ()):
            rs = f"({rs})"
        return f"{ls} /\\ {rs}"
    if isinstance(f, POr):
        def ok(side, allow_chain):
            return isinstance(side, (PTT, PFF, Next, PNeg) + allow_chain) or \
                (isinstance(side, Lift) and not isinstance(side.state, (SAnd, SOr)))
        ls = _print_path(f.left)
        if not ok(f.left, (POr,)):
            ls = f"({ls})"
        rs = _print_path(f.right)
        if not ok(f.right, ()):
            rs = f"({rs})"
        return f"{ls} \\/ {rs}"
    if isinstance(f, Until):
        return f"{_print_operand(f.hold)} U {_print_operand(f.goal)}"
    if isinstance(f, WUntil):
        return f"{_print_operand(f.hold)} W {_print_operand(f.release)}"
    raise TypeError(f"not a CTL* path formula: {f!r}")


def _print_operand(p):
    s = _print_path(p)
    if isinstance(p, (Until, WUntil)):
        return f"({s})"
    if isinstance(p, (PAnd, POr)):
        return f"({s})"
    if isinstance(p, Lift) and isinstance(p.state, (SAnd, SOr)):
        return f"({s})"
    return s


# ---------------------------------------------------------------------------
# fragment analysis
# ---------------------------------------------------------------------------

def as_state_formula(p):
    """Read a path formula back as a state formula when it contains no path
    operator; returns None otherwise."""
    if isinstance(p, Lift):
        return p.state
    if isinstance(p, PTT):
        return STT()
    if isinstance(p, PFF):
        return SFF()
    if isinstance(p, PAnd):
        l, r = as_state_formula(p.left), as_state_formula(p.right)
        return SAnd(l, r) if l is not None and r is not None else None
    if isinstance(p, POr):
        l, r = as_state_formula(p.left), as_state_formula(p.right)
        return SOr(l, r) if l is not None and r is not None else None
    return None


def _ctl_quant_arg(p, found):
    """Check a quantifier argument against the CTL shapes; record U/W use."""
    s = as_state_formula(p)
    if s is not None:
        return _ctl_state(s, found)
    if isinstance(p, Next):
        s = as_state_formula(p.sub)
        return s is not None and _ctl_state(s, found)
    if isinstance(p, Until):
        h, g = as_state_formula(p.hold), as_state_formula(p.goal)
        if h is None or g is None:
            return False
        found.add("U")
        return _ctl_state(h, found) and _ctl_state(g, found)
    if isinstance(p, WUntil):
        h, r = as_state_formula(p.hold), as_state_formula(p.release)
        if h is None or r is None:
            return False
        found.add("W")
        return _ctl_state(h, found) and _ctl_state(r, found)
    return False


def _ctl_state(f, found):
    if isinstance(f, (SAtom, SNegAtom, STT, SFF)):
        return True
    if isinstance(f, (SAnd, SOr)):
        return _ctl_state(f.left, found) and _ctl_state(f.right, found)
    if isinstance(f, (Exists, Forall)):
        return _ctl_quant_arg(f.path, found)
    return False


def classify_fragment(f) -> FragmentClass:
    found = set()
    if not _ctl_state(f, found):
        return FragmentClass.GeneralCtlStar
    if "U" in found and "W" in found:
        return FragmentClass.CtlMixed
    if "U" in found:
        return FragmentClass.CtlUOnly
    if "W" in found:
        return FragmentClass.CtlWOnly
    return FragmentClass.CtlNoUW


def is_ctl_fragment(f) -> bool:
    return classify_fragment(f) is not FragmentClass.GeneralCtlStar


# ---------------------------------------------------------------------------
# the fixpoint encoding of CTL into FML
# ---------------------------------------------------------------------------

def collect_atoms(f):
    atoms = set()

    def walk(g):
        if isinstance(g, (Atom, NegAtom, SAtom, SNegAtom)):
            atoms.add(g.name)
        elif isinstance(g, (And, Or, SAnd, SOr, PAnd, POr)):
            walk(g.left)
            walk(g.right)
        elif isinstance(g, (Dia, Box, Neg, SNeg, PNeg, Next)):
            walk(g.sub)
        elif isinstance(g, (Mu, Nu)):
            walk(g.body)
        elif isinstance(g, (Exists, Forall)):
            walk(g.path)
        elif isinstance(g, Lift):
            walk(g.state)
        elif isinstance(g, Until):
            walk(g.hold)
            walk(g.goal)
        elif isinstance(g, WUntil):
            walk(g.hold)
            walk(g.release)

    walk(f)
    return atoms


class _FreshVars:
    def __init__(self, taken):
        self.taken = set(taken)
        self.counter = 0

    def next(self):
        while True:
            name = "u" if self.counter == 0 else f"u{self.counter}"
            self.counter += 1
            if name not in self.taken:
                self.taken.add(name)
                return name


def encode_ctl(f):
    """Translate a CTL formula into an alternation-free FML formula.

    One fresh fixpoint per U/W: ``E(h U g)`` becomes
    ``mu u. g' \\/ (h' /\\ <> u)``, ``E(h W r)`` becomes
    ``nu u. h' /\\ (r' \\/ <> u)``, and the ``A`` forms use ``[]``.
    """
    if not is_ctl_fragment(f):
        raise NotCtlFragment(f"not in the CTL fragment: {print_formula(f)}")
    fresh = _FreshVars(collect_atoms(f))
    return _encode_state(f, fresh)


def _encode_state(f, fresh):
    if isinstance(f, SAtom):
        return Atom(f.name)
    if isinstance(f, SNegAtom):
        return NegAtom(f.name)
    if isinstance(f, STT):
        return TT()
    if isinstance(f, SFF):
        return FF()
    if isinstance(f, SAnd):
        return And(_encode_state(f.left, fresh), _encode_state(f.right, fresh))
    if isinstance(f, SOr):
        return Or(_encode_state(f.left, fresh), _encode_state(f.right, fresh))
    if isinstance(f, Exists):
        return _encode_quant(f.path, Dia, fresh)
    if isinstance(f, Forall):
        return _encode_quant(f.path, Box, fresh)
    raise NotCtlFragment(f"not a CTL state formula: {f!r}")


def _encode_quant(p, modality, fresh):
    s = as_state_formula(p)
    if s is not None:
        # E/A over a pure state formula collapses by the head law
        return _encode_state(s, fresh)
    if isinstance(p, Next):
        return modality(_encode_state(as_state_formula(p.sub), fresh))
    if isinstance(p, Until):
        hold = _encode_state(as_state_formula(p.hold), fresh)
        goal = _encode_state(as_state_formula(p.goal), fresh)
        u = fresh.next()
        return Mu(u, Or(goal, And(hold, modality(Var(u)))))
    if isinstance(p, WUntil):
        hold = _encode_state(as_state_formula(p.hold), fresh)
        release = _encode_state(as_state_formula(p.release), fresh)
        u = fresh.next()
        return Nu(u, And(hold, Or(release, modality(Var(u)))))
    raise NotCtlFragment(f"not a CTL path argument: {p!r}")


# ---------------------------------------------------------------------------
# small structural helpers
# ---------------------------------------------------------------------------

def free_vars(f):
    if isinstance(f, Var):
        return {f.name}
    if isinstance(f, (Atom, NegAtom, TT, FF)):
        return set()
    if isinstance(f, (And, Or)):
        return free_vars(f.left) | free_vars(f.right)
    if isinstance(f, (Dia, Box, Neg)):
        return free_vars(f.sub)
    if isinstance(f, (Mu, Nu)):
        return free_vars(f.body) - {f.var}
    raise TypeError(f"not an FML formula: {f!r}")


def is_alternation_free(f) -> bool:
    """No mu-bound variable occurs free under an inner nu, nor dually."""

    def walk(g, mu_vars, nu_vars):
        if isinstance(g, Var):
            return True
        if isinstance(g, (Atom, NegAtom, TT, FF)):
            return True
        if isinstance(g, (And, Or)):
            return walk(g.left, mu_vars, nu_vars) and walk(g.right, mu_vars, nu_vars)
        if isinstance(g, (Dia, Box)):
            return walk(g.sub, mu_vars, nu_vars)
        if isinstance(g, Mu):
            if free_vars(g.body) & nu_vars:
                return False
            return walk(g.body, mu_vars | {g.var}, nu_vars)
        if isinstance(g, Nu):
            if free_vars(g.body) & mu_vars:
                return False
            return walk(g.body, mu_vars, nu_vars | {g.var})
        return False

    return walk(f, set(), set())
