"""Exception types shared across the package.

The CLI maps these onto exit codes: ConfigError -> 2,
NonConvergenceError -> 3, HypothesisViolation and failed verification
checks -> 1.
"""


class StarmopError(Exception):
    """Base class for package errors."""


class ConfigError(StarmopError):
    """Invalid or incomplete problem configuration."""


class DomainError(StarmopError, ValueError):
    """Evaluation requested outside a function's domain."""


class SingularityError(StarmopError):
    """Evaluation point too close to an integration interval or branch point."""


class NonConvergenceError(StarmopError):
    """A numerical procedure failed to converge (after any built-in retry)."""


class HypothesisViolation(StarmopError):
    """Computed data contradicts a structural property that is supposed to be
    guaranteed (simple zeros, positivity, exact zero counts, ...).  This is
    never silently repaired: it indicates either a genuine counterexample or
    insufficient precision, and both must surface."""


class ArtifactError(StarmopError):
    """Missing or unreadable artifact files."""
