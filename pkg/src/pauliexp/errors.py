"""Exception hierarchy for pauliexp."""


class PauliExpError(Exception):
    """Base class for all pauliexp errors."""


class ClosureExplosion(PauliExpError):
    """Raised when a multiplicative closure grows past its cap.

    Attributes
    ----------
    size : int
        Number of non-identity strings accumulated when the cap was hit.
        This is a lower bound on the true closure size.
    cap : int
        The cap that was exceeded.
    """

    def __init__(self, size: int, cap: int):
        self.size = size
        self.cap = cap
        super().__init__(
            f"closure exceeded cap: at least {size} non-identity strings (cap {cap})"
        )


class SingularSystem(PauliExpError):
    """Raised when a shifted linear system (zI - A) r = e0 cannot be solved
    to the required residual, typically because z sits on an eigenvalue of A."""

    def __init__(self, z: complex, residual: float | None = None):
        self.z = z
        self.residual = residual
        detail = f", residual {residual:.3e}" if residual is not None else ""
        super().__init__(f"singular or ill-conditioned system at z = {z}{detail}")


class ContourError(PauliExpError):
    """Raised when an integration contour fails to enclose the spectrum."""


class FormatError(PauliExpError):
    """Raised on malformed input files (Hamiltonian text/JSON, dense JSON/binary)."""
