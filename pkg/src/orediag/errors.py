"""Exception hierarchy shared by every layer of the package."""


class OreError(Exception):
    """Base class for all errors raised by orediag."""


class SpecError(OreError):
    """An algebra description is malformed or inconsistent."""


class NonInvertibleSigma(SpecError):
    def __init__(self, var):
        self.var = var
        super().__init__(f"sigma({var}) has zero linear coefficient; sigma is not invertible")


class IncompatibleDerivation(SpecError):
    def __init__(self, var_i, var_j):
        self.pair = (var_i, var_j)
        super().__init__(
            f"derivation images of {var_i} and {var_j} violate "
            f"delta(x_i)*(sigma(x_j)-x_j) = delta(x_j)*(sigma(x_i)-x_i)")


class SpecMismatch(OreError):
    """Operands belong to different algebras."""


class ZeroPolynomialError(OreError):
    """A leading-data query was made on the zero element."""


class ZeroDenominator(OreError):
    """A fraction with zero denominator was requested."""


class NoInvolution(OreError):
    """The algebra carries no involution; use the opposite transport instead."""


class IterationCapExceeded(OreError):
    def __init__(self, cap, what="diagonalization"):
        self.cap = cap
        super().__init__(f"{what} did not finish within {cap} iterations")


class NotSimpleDomain(OreError):
    def __init__(self, preset):
        self.preset = preset
        super().__init__(
            f"Jacobson strengthening needs a simple domain; preset '{preset}' is not simple "
            f"(over the shift algebra Diag(s, s) is annihilated by the two-sided ideal <s> "
            f"and is not equivalent to any Diag(1, p))")


class NoExponentFound(OreError):
    """No shift exponent produced a nonzero remainder; impossible over the Weyl algebra."""


class NonReducedBasis(OreError):
    """A basis passed where a reduced Groebner basis is required is not reduced."""


class VerificationError(OreError):
    def __init__(self, check, detail=""):
        self.check = check
        super().__init__(f"verification failed: {check}" + (f" ({detail})" if detail else ""))


class ParseError(OreError):
    def __init__(self, message, pos=None):
        self.pos = pos
        where = f" at position {pos}" if pos is not None else ""
        super().__init__(message + where)
