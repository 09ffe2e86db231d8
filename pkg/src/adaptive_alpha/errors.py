"""Exception hierarchy.

Every error carries a short machine-readable ``code`` so that the command
line front end can report failures in a stable form.
"""


class AdaptiveAlphaError(Exception):
    code = "error"


class DomainError(AdaptiveAlphaError, ValueError):
    code = "domain"


class SingularDesignError(AdaptiveAlphaError, ValueError):
    code = "singular-design"


class DegenerateDataError(AdaptiveAlphaError, ValueError):
    code = "degenerate-data"


class ConvergenceError(AdaptiveAlphaError, ArithmeticError):
    """Raised when an iterative routine exhausts its iteration budget."""

    code = "no-convergence"

    def __init__(self, message, **diagnostics):
        super().__init__(message)
        self.diagnostics = diagnostics

    def __str__(self):
        base = super().__str__()
        if not self.diagnostics:
            return base
        extra = ", ".join(f"{k}={v!r}" for k, v in self.diagnostics.items())
        return f"{base} ({extra})"


class NoSolutionError(AdaptiveAlphaError, ValueError):
    code = "no-solution"


class DatasetError(AdaptiveAlphaError, ValueError):
    code = "dataset"
