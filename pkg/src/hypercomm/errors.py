"""Exception types shared across the library."""


class HypercommError(Exception):
    """Base class for library-specific failures."""


class SizeLimitError(HypercommError):
    """Input exceeds a documented size guard for a dense or brute-force routine."""


class DegenerateGraphError(HypercommError):
    """Graph has no usable structure for the requested method (e.g. every degree is zero)."""


class ConvergenceError(HypercommError):
    """Iterative solver exhausted its iteration budget.

    Attributes
    ----------
    residual : float
        Convergence measure at the final iteration.
    iterations : int
        Number of iterations performed.
    """

    def __init__(self, message: str, residual: float, iterations: int):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations
