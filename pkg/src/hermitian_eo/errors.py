"""Exception types shared across the package."""


class ConsistencyError(RuntimeError):
    """An internal invariant failed (a formula produced an impossible value).

    Raised when computed data contradicts something the construction
    guarantees, e.g. an operator image landing outside the index lattice or a
    canonical-filtration closure that is not totally ordered.  User input
    errors raise ValueError instead.
    """


class VerificationFailure(RuntimeError):
    """A cross-check between the two computation paths did not agree."""
