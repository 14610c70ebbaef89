"""Exception types raised across the package."""


class UBPError(Exception):
    """Base class for all package errors."""


class IndexOutOfTruncation(UBPError):
    def __init__(self, index, dim):
        super().__init__(f"index {index} exceeds truncation dimension {dim}")
        self.index = index
        self.dim = dim


class PowerIterationStall(UBPError):
    def __init__(self, residual, iterations):
        super().__init__(
            f"power iteration did not settle: movement {residual:.3e} after {iterations} iterations"
        )
        self.residual = residual
        self.iterations = iterations


class ZeroOperator(UBPError):
    pass


class QualityNotMet(UBPError):
    def __init__(self, achieved, required):
        super().__init__(f"near-maximizer reached {achieved!r}, needed {required!r}")
        self.achieved = achieved
        self.required = required


class FamilyUniformlyBounded(UBPError):
    """No growth chain of the requested depth exists in the finite sample."""

    def __init__(self, depth_reached, depth_requested=None):
        msg = f"longest admissible chain has length {depth_reached}"
        if depth_requested is not None:
            msg += f" (requested {depth_requested})"
        super().__init__(msg)
        self.depth_reached = depth_reached
        self.depth_requested = depth_requested


class OverflowDetected(UBPError):
    pass


class InternalInvariantViolation(UBPError):
    pass


class SampleExhausted(UBPError):
    def __init__(self, k):
        super().__init__(f"sample ran out while looking for pick k={k}")
        self.k = k


class NotConvergent(UBPError):
    pass


class HorizonExceeded(UBPError):
    def __init__(self, budget, progress=None):
        super().__init__(f"term budget {budget} exhausted")
        self.budget = budget
        self.progress = progress


class HypothesisViolated(UBPError):
    def __init__(self, n, lhs=None, rhs=None):
        super().__init__(f"pointwise hypothesis fails at n={n}")
        self.n = n
        self.lhs = lhs
        self.rhs = rhs


class QuadratureBudgetExceeded(UBPError):
    def __init__(self, error_estimate, tol):
        super().__init__(
            f"quadrature error estimate {error_estimate:.3e} above tolerance {tol:.3e}"
        )
        self.error_estimate = error_estimate
        self.tol = tol
