"""Exception types shared across the package."""

from __future__ import annotations


class ValidationError(ValueError):
    """An input violated a structural invariant.

    Parameters
    ----------
    invariant : str
        Name of the violated invariant (for example ``"hermiticity"``).
    residual : float, optional
        Measured violation, when one is available.
    limit : float, optional
        Tolerance the residual was checked against.
    detail : str, optional
        Extra context appended to the message.
    """

    def __init__(self, invariant: str, residual: float | None = None,
                 limit: float | None = None, detail: str | None = None):
        self.invariant = invariant
        self.residual = residual
        self.limit = limit
        parts = [invariant]
        if residual is not None and limit is not None:
            parts.append(f"residual {residual:.3e} exceeds tolerance {limit:.1e}")
        elif residual is not None:
            parts.append(f"residual {residual:.3e}")
        if detail:
            parts.append(detail)
        super().__init__(": ".join(parts))


class UnsupportedCaseError(NotImplementedError):
    """The requested case lies outside the domain this operation supports."""
