"""Computable bounds on distillable entanglement and entanglement cost.

The asymptotic measures are not directly computable, but they are pinned
between quantities that are: the hashing bound from below, and
log-negativity, numeric relative-entropy distance, and the Rains bound
from above.  This module evaluates those bounds, provides the Werner-state
and twirling constructors used to probe them, and aggregates everything
into a single consistency-checked report.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .closed_form import log_negativity
from .errors import ValidationError
from .states import (
    DensityOperator,
    partial_trace,
    partial_transpose,
    von_neumann_entropy,
)
from .variational import (
    SolverConfig,
    rains_bound,
    relative_entropy_of_entanglement,
    witness_violation,
)

__all__ = [
    "BoundsReport",
    "bounds_report",
    "conditional_entropy",
    "hashing_lower_bound",
    "is_ppt",
    "uu_twirl_two_qubit",
    "werner_state",
]

PPT_TOLERANCE = -1e-10
SANDWICH_SLACK = 1e-3

_CERTIFIED = ("exact", "converged")


@dataclass(frozen=True)
class BoundsReport:
    """Aggregated lower and upper bounds on distillable entanglement.

    Attributes
    ----------
    lower : dict
        Lower bounds in bits, keyed by bound name.
    upper : dict
        Upper bounds in bits, keyed by bound name.
    ppt : bool
        Whether the state has a positive partial transpose.
    notes : dict
        Status string per entry; entries marked ``"exact"`` or
        ``"converged"`` are certified.
    """

    lower: dict[str, float] = field(default_factory=dict)
    upper: dict[str, float] = field(default_factory=dict)
    ppt: bool = False
    notes: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        for name, low in self.lower.items():
            for uname, up in self.upper.items():
                if not self.notes.get(uname, "").startswith(_CERTIFIED):
                    continue
                if low > up + SANDWICH_SLACK:
                    raise ValidationError(
                        "bounds-order", residual=low - up, limit=SANDWICH_SLACK,
                        detail=f"lower[{name}] exceeds certified upper[{uname}]")
        if self.ppt:
            if self.lower.get("hashing", 0.0) > 0.0:
                raise ValidationError(
                    "ppt-hashing",
                    detail="PPT states admit no positive hashing bound")
            if self.upper.get("distillable") != 0.0:
                raise ValidationError(
                    "ppt-distillable",
                    detail="PPT reports must pin distillable entanglement to 0")


def conditional_entropy(rho) -> float:
    """Conditional entropy S(A|B) of a bipartite state, in bits.

    Parameters
    ----------
    rho : DensityOperator
        Bipartite state on A tensor B.

    Returns
    -------
    float
        ``S(rho_AB) - S(rho_B)``; negative values signal entanglement
        usable for distillation.
    """
    rho = _as_bipartite(rho)
    return von_neumann_entropy(rho) - von_neumann_entropy(partial_trace(rho, 0))


def hashing_lower_bound(rho) -> float:
    """Hashing lower bound on distillable entanglement, in bits.

    Takes the better of the two one-way directions, floored at zero:
    ``max(S(rho_A), S(rho_B)) - S(rho_AB)`` when positive.

    Parameters
    ----------
    rho : DensityOperator
        Bipartite state.

    Returns
    -------
    float
        Nonnegative bound; 0 whenever both conditional entropies are
        nonnegative.
    """
    rho = _as_bipartite(rho)
    s_ab = von_neumann_entropy(rho)
    s_a = von_neumann_entropy(partial_trace(rho, 1))
    s_b = von_neumann_entropy(partial_trace(rho, 0))
    return max(s_a - s_ab, s_b - s_ab, 0.0)


def is_ppt(rho, cut: int = 0) -> bool:
    """Test positivity of the partial transpose across a bipartite cut.

    Parameters
    ----------
    rho : DensityOperator
        State with at least two subsystems.
    cut : int, optional
        Index of the transposed party.

    Returns
    -------
    bool
        True iff the minimum partial-transpose eigenvalue is >= -1e-10.
    """
    pt = partial_transpose(rho, cut)
    return bool(np.linalg.eigvalsh(pt)[0] >= PPT_TOLERANCE)


def werner_state(d: int, p: float) -> DensityOperator:
    """Werner state ``p*sigma_a + (1-p)*sigma_s`` on two d-level systems.

    ``sigma_a`` and ``sigma_s`` are the normalized projectors onto the
    antisymmetric and symmetric subspaces; the family is exactly the set
    of states invariant under all U (x) U rotations.

    Parameters
    ----------
    d : int
        Local dimension, at least 2.
    p : float
        Antisymmetric weight in [0, 1].

    Returns
    -------
    DensityOperator
        The Werner state with dims ``(d, d)``.
    """
    if not (isinstance(d, (int, np.integer)) and d >= 2):
        raise ValidationError("werner-dimension",
                              detail=f"local dimension must be >= 2, got {d!r}")
    if not 0.0 <= p <= 1.0:
        raise ValidationError("werner-weight", residual=float(p),
                              detail="antisymmetric weight must lie in [0, 1]")
    flip = np.eye(d * d).reshape(d, d, d, d).transpose(1, 0, 2, 3).reshape(d * d, d * d)
    eye = np.eye(d * d)
    sigma_a = (eye - flip) / (d * d - d)
    sigma_s = (eye + flip) / (d * d + d)
    return DensityOperator(p * sigma_a + (1.0 - p) * sigma_s, (d, d))


def uu_twirl_two_qubit(rho) -> DensityOperator:
    """Project a two-qubit state onto the U (x) U invariant Werner family.

    Averaging over random bi-local rotations U (x) U keeps exactly the
    component commuting with all of them, which is determined by the
    singlet fidelity alone.

    Parameters
    ----------
    rho : DensityOperator
        Two-qubit state.

    Returns
    -------
    DensityOperator
        Werner-family state with the same singlet fidelity as the input.
    """
    rho = _as_bipartite(rho)
    if rho.dims != (2, 2):
        raise ValidationError("twirl-dims",
                              detail=f"twirl needs dims (2, 2), got {rho.dims}")
    singlet = np.array([0.0, 1.0, -1.0, 0.0]) / np.sqrt(2.0)
    fidelity = float(np.real(singlet @ rho.matrix @ singlet))
    return werner_state(2, min(max(fidelity, 0.0), 1.0))


def bounds_report(rho, config: SolverConfig | None = None,
                  skip: tuple[str, ...] = ()) -> BoundsReport:
    """Evaluate all computable bounds on a state and cross-check them.

    Parameters
    ----------
    rho : DensityOperator
        Bipartite state within the variational solver's dimension limits.
    config : SolverConfig, optional
        Shared solver settings for the numeric upper bounds.
    skip : tuple of str, optional
        Bound names to omit; ``"rains"`` and ``"ree"`` are recognized.

    Returns
    -------
    BoundsReport
        Lower and upper bounds with per-entry status notes; when the
        state is PPT the report additionally pins distillable
        entanglement to exactly 0.
    """
    rho = _as_bipartite(rho)
    unknown = set(skip) - {"rains", "ree"}
    if unknown:
        raise ValidationError("skip-names",
                              detail=f"unknown bound names {sorted(unknown)}")
    ppt = is_ppt(rho)
    lower = {"hashing": 0.0 if ppt else hashing_lower_bound(rho)}
    notes = {"hashing": "exact"}
    _, violation = witness_violation(rho)
    lower["witness"] = 0.0
    notes["witness"] = ("exact; violation %.6g" % violation if violation > 0.0
                        else "exact; no violation found")
    upper = {"log_negativity": log_negativity(rho)}
    notes["log_negativity"] = "exact"
    if "ree" not in skip:
        ree = relative_entropy_of_entanglement(rho, config=config)
        upper["ree"] = ree.value
        notes["ree"] = ree.status
    if "rains" not in skip:
        rains = rains_bound(rho, config=config)
        upper["rains"] = rains.value
        notes["rains"] = rains.status
    if ppt:
        upper["distillable"] = 0.0
        notes["distillable"] = "exact; PPT states yield no distillable entanglement"
    return BoundsReport(lower=lower, upper=upper, ppt=ppt, notes=notes)


def _as_bipartite(rho) -> DensityOperator:
    if not isinstance(rho, DensityOperator):
        rho = rho.to_density() if hasattr(rho, "to_density") else DensityOperator(rho)
    if len(rho.dims) != 2:
        raise ValidationError("bipartite",
                              detail=f"expected two subsystems, got dims {rho.dims}")
    return rho
