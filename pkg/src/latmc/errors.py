class LatmcError(Exception):
    """Base class for every error raised by this package."""

    code = "error"

    def to_json(self):
        return {"error": self.code, "message": str(self)}


# -- lattice loading / arithmetic ------------------------------------------

class NotALattice(LatmcError):
    code = "not-a-lattice"


class NotDistributive(LatmcError):
    code = "not-distributive"


class BadInvolution(LatmcError):
    code = "bad-involution"


class Unbounded(LatmcError):
    code = "unbounded"


class NoInvolution(LatmcError):
    code = "no-involution"


class ForeignElement(LatmcError):
    code = "foreign-element"


# -- parsing / formula handling --------------------------------------------

class FormulaSyntaxError(LatmcError):
    code = "syntax-error"

    def __init__(self, message, position):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class ShadowedVariable(LatmcError):
    code = "shadowed-variable"


class NegationOfNonAtom(LatmcError):
    code = "negation-of-non-atom"


class NotCtlFragment(LatmcError):
    code = "not-ctl-fragment"


class UnboundVariable(LatmcError):
    code = "unbound-variable"


# -- model loading / validation --------------------------------------------

class UnknownState(LatmcError):
    code = "unknown-state"


class EmptySuccessor(LatmcError):
    code = "empty-successor"


class NotAffine(LatmcError):
    code = "not-affine"


class NotUpwardClosed(LatmcError):
    code = "not-upward-closed"


class NotMonotone(LatmcError):
    code = "not-monotone"


class LatticeMismatch(LatmcError):
    code = "lattice-mismatch"


# -- evaluation / engines ---------------------------------------------------

class NoConvergence(LatmcError):
    code = "no-convergence"


class UnsupportedSource(LatmcError):
    code = "unsupported-source"


class NotBool2(LatmcError):
    code = "not-bool2"


class PreconditionFailed(LatmcError):
    code = "precondition-failed"


class TooLarge(LatmcError):
    code = "too-large"
