"""Finite-dimensional quantum states and the entropic primitives built on them.

All entropies and logarithms are base 2, so every quantity is reported in
bits.  Subsystems are ordered left to right in row-major (C) tensor order,
matching ``numpy.kron``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import ValidationError

HERMITICITY_TOL = 1e-10
TRACE_TOL = 1e-10
POSITIVITY_TOL = 1e-10
NORM_TOL = 1e-10
COMPLETENESS_TOL = 1e-9
SPECTRUM_CUTOFF = 1e-12
OUTCOME_CUTOFF = 1e-14
CMI_TOL = 1e-9

_STATUSES = ("exact", "converged", "best_effort")


def _as_matrix(data, name: str = "matrix") -> np.ndarray:
    mat = np.asarray(data, dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValidationError("shape", detail=f"{name} must be square, got {mat.shape}")
    return mat


def _check_dims(dims: Sequence[int], size: int) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if not dims or any(d < 1 for d in dims):
        raise ValidationError("dims", detail=f"subsystem dimensions must be positive, got {dims}")
    if int(np.prod(dims)) != size:
        raise ValidationError(
            "dims", detail=f"product of dims {dims} does not match size {size}")
    return dims


class DensityOperator:
    """A validated density operator over an ordered list of subsystems.

    Parameters
    ----------
    matrix : array_like
        Square complex matrix.  Hermiticity, unit trace, and positive
        semidefiniteness are enforced at construction; the stored matrix
        is the symmetrized copy and is marked read-only.
    dims : sequence of int
        Subsystem dimensions whose product equals the matrix size.

    Raises
    ------
    ValidationError
        Naming the violated invariant together with the measured residual.
    """

    __slots__ = ("matrix", "dims")

    def __init__(self, matrix, dims: Sequence[int]):
        mat = _as_matrix(matrix)
        herm = np.max(np.abs(mat - mat.conj().T)) if mat.size else 0.0
        if herm > HERMITICITY_TOL:
            raise ValidationError("hermiticity", herm, HERMITICITY_TOL)
        mat = (mat + mat.conj().T) / 2.0
        tr = float(np.real(np.trace(mat)))
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValidationError("unit-trace", abs(tr - 1.0), TRACE_TOL)
        lo = float(np.linalg.eigvalsh(mat)[0])
        if lo < -POSITIVITY_TOL:
            raise ValidationError("positivity", -lo, POSITIVITY_TOL)
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)
        object.__setattr__(self, "dims", _check_dims(dims, mat.shape[0]))

    def __setattr__(self, name, value):
        raise AttributeError("DensityOperator is immutable")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __repr__(self) -> str:
        return f"DensityOperator(dims={list(self.dims)})"


class PureState:
    """A validated state vector over an ordered list of subsystems.

    Parameters
    ----------
    vector : array_like
        Complex vector with unit norm (tolerance 1e-10).
    dims : sequence of int
        Subsystem dimensions whose product equals the vector length.
    """

    __slots__ = ("vector", "dims")

    def __init__(self, vector, dims: Sequence[int]):
        vec = np.asarray(vector, dtype=complex).reshape(-1)
        nrm = float(np.linalg.norm(vec))
        if abs(nrm - 1.0) > NORM_TOL:
            raise ValidationError("normalization", abs(nrm - 1.0), NORM_TOL)
        vec.setflags(write=False)
        object.__setattr__(self, "vector", vec)
        object.__setattr__(self, "dims", _check_dims(dims, vec.size))

    def __setattr__(self, name, value):
        raise AttributeError("PureState is immutable")

    @property
    def dim(self) -> int:
        return self.vector.size

    def to_density(self) -> DensityOperator:
        """Return the projector onto this vector as a density operator."""
        return DensityOperator(np.outer(self.vector, self.vector.conj()), self.dims)

    def __repr__(self) -> str:
        return f"PureState(dims={list(self.dims)})"


class KrausSet:
    """A finite collection of Kraus operators acting on a common input space.

    Parameters
    ----------
    operators : sequence of array_like
        Operators with a shared number of columns (the input dimension).
        Output dimensions may differ across operators.
    trace_preserving : bool, optional
        When True (default), completeness ``sum_i A_i^dag A_i = 1`` is
        enforced within 1e-9.
    """

    __slots__ = ("operators", "trace_preserving")

    def __init__(self, operators: Sequence, trace_preserving: bool = True):
        ops = [np.asarray(op, dtype=complex) for op in operators]
        if not ops:
            raise ValidationError("kraus-set", detail="at least one operator is required")
        d_in = ops[0].shape[-1]
        for op in ops:
            if op.ndim != 2 or op.shape[1] != d_in:
                raise ValidationError(
                    "kraus-set", detail="operators must share a common input dimension")
            op.setflags(write=False)
        if trace_preserving:
            total = sum(op.conj().T @ op for op in ops)
            resid = float(np.max(np.abs(total - np.eye(d_in))))
            if resid > COMPLETENESS_TOL:
                raise ValidationError("kraus-completeness", resid, COMPLETENESS_TOL)
        object.__setattr__(self, "operators", tuple(ops))
        object.__setattr__(self, "trace_preserving", bool(trace_preserving))

    def __setattr__(self, name, value):
        raise AttributeError("KrausSet is immutable")

    def __len__(self) -> int:
        return len(self.operators)


@dataclass(frozen=True)
class MeasureResult:
    """Outcome of a measure evaluation.

    Attributes
    ----------
    value : float
        Nonnegative value in bits; ``math.inf`` encodes an infinite result.
    status : str
        One of ``"exact"``, ``"converged"``, ``"best_effort"``.
    gap : float
        Certified optimality gap; zero whenever ``status == "exact"``.
    iterations : int
        Iterations consumed by the underlying solver, if any.
    witness_payload : dict or None
        Optional certificate data (closest states, witness operators, ...).
    """

    value: float
    status: str
    gap: float = 0.0
    iterations: int = 0
    witness_payload: dict | None = None

    def __post_init__(self):
        if self.status not in _STATUSES:
            raise ValidationError("status", detail=f"unknown status {self.status!r}")
        if not self.value >= 0.0:
            raise ValidationError("value", detail="measure values must be nonnegative")
        if self.status == "exact" and self.gap != 0.0:
            raise ValidationError("gap", detail="exact results must report a zero gap")
        if self.gap < 0.0:
            raise ValidationError("gap", detail="gap must be nonnegative")


def _mat_of(state) -> np.ndarray:
    if isinstance(state, PureState):
        return np.outer(state.vector, state.vector.conj())
    if isinstance(state, DensityOperator):
        return state.matrix
    return _as_matrix(state)


def _dims_of(state) -> tuple[int, ...]:
    return tuple(state.dims)


def partial_trace(rho: DensityOperator, keep: Iterable[int] | int) -> DensityOperator:
    """Trace out all subsystems except ``keep``.

    Parameters
    ----------
    rho : DensityOperator
    keep : int or iterable of int
        Indices of the subsystems to retain, in their original order.

    Returns
    -------
    DensityOperator
        Reduced operator whose ``dims`` are the retained dimensions.
    """
    dims = _dims_of(rho)
    keep = (keep,) if isinstance(keep, (int, np.integer)) else tuple(keep)
    keep = tuple(sorted(set(int(k) for k in keep)))
    n = len(dims)
    if not keep or any(k < 0 or k >= n for k in keep):
        raise ValidationError("subsystem-index",
                              detail=f"keep={keep} out of range for {n} subsystems")
    tensor = _mat_of(rho).reshape(dims + dims)
    traced = [k for k in range(n) if k not in keep]
    for offset, k in enumerate(traced):
        axis = k - offset
        tensor = np.trace(tensor, axis1=axis, axis2=axis + tensor.ndim // 2)
    d_keep = int(np.prod([dims[k] for k in keep]))
    return DensityOperator(tensor.reshape(d_keep, d_keep), [dims[k] for k in keep])


def partial_transpose(rho, parties: Iterable[int] | int) -> np.ndarray:
    """Transpose the given subsystem(s) of an operator.

    Parameters
    ----------
    rho : DensityOperator or ndarray with matching product structure
        For a raw array, pass a ``DensityOperator``-like object instead when
        dimensions are ambiguous.
    parties : int or iterable of int
        Subsystem indices to transpose.

    Returns
    -------
    ndarray
        Hermitian matrix with the same trace; not necessarily positive.
    """
    dims = _dims_of(rho)
    parties = (parties,) if isinstance(parties, (int, np.integer)) else tuple(parties)
    parties = tuple(sorted(set(int(p) for p in parties)))
    n = len(dims)
    if not parties or any(p < 0 or p >= n for p in parties):
        raise ValidationError("subsystem-index",
                              detail=f"parties={parties} out of range for {n} subsystems")
    tensor = _mat_of(rho).reshape(dims + dims)
    axes = list(range(2 * n))
    for p in parties:
        axes[p], axes[n + p] = axes[n + p], axes[p]
    d = int(np.prod(dims))
    return tensor.transpose(axes).reshape(d, d)


def permute_subsystems(state, order: Sequence[int]):
    """Reorder the subsystems of a state.

    Parameters
    ----------
    state : DensityOperator or PureState
    order : sequence of int
        Permutation such that new subsystem ``k`` is old subsystem
        ``order[k]``.

    Returns
    -------
    Same type as ``state`` with permuted dims.
    """
    dims = _dims_of(state)
    order = tuple(int(p) for p in order)
    if sorted(order) != list(range(len(dims))):
        raise ValidationError("permutation", detail=f"{order} is not a permutation")
    new_dims = [dims[p] for p in order]
    if isinstance(state, PureState):
        vec = state.vector.reshape(dims).transpose(order).reshape(-1)
        return PureState(vec, new_dims)
    n = len(dims)
    axes = list(order) + [n + p for p in order]
    d = int(np.prod(dims))
    mat = state.matrix.reshape(dims + dims).transpose(axes).reshape(d, d)
    return DensityOperator(mat, new_dims)


def _entropy_of_spectrum(eigs: np.ndarray) -> float:
    probs = eigs[eigs > SPECTRUM_CUTOFF]
    if probs.size == 0:
        return 0.0
    return float(-np.sum(probs * np.log2(probs)))


def von_neumann_entropy(rho) -> float:
    """Von Neumann entropy in bits.

    Eigenvalues below 1e-12 are discarded before taking logarithms.

    Parameters
    ----------
    rho : DensityOperator or PureState

    Returns
    -------
    float
        Entropy in bits, nonnegative.
    """
    if isinstance(rho, PureState):
        return 0.0
    mat = _mat_of(rho)
    mat = (mat + mat.conj().T) / 2.0
    return max(0.0, _entropy_of_spectrum(np.linalg.eigvalsh(mat)))


def relative_entropy(rho, sigma) -> float:
    """Quantum relative entropy ``S(rho || sigma)`` in bits.

    Returns ``math.inf`` when the support of ``rho`` is not contained in
    the support of ``sigma`` (support detected with eigenvalue cutoff
    1e-12).

    Parameters
    ----------
    rho, sigma : DensityOperator or PureState

    Returns
    -------
    float
        Nonnegative, possibly ``inf``.
    """
    r = _mat_of(rho)
    s = _mat_of(sigma)
    if r.shape != s.shape:
        raise ValidationError("shape", detail="operators must share a dimension")
    r = (r + r.conj().T) / 2.0
    s = (s + s.conj().T) / 2.0
    s_eigs, s_vecs = np.linalg.eigh(s)
    support = s_eigs > SPECTRUM_CUTOFF
    if not np.all(support):
        null_vecs = s_vecs[:, ~support]
        mass = float(np.real(np.einsum("ij,jk,ki->", null_vecs.conj().T, r, null_vecs)))
        if mass > SPECTRUM_CUTOFF:
            return np.inf
    r_eigs = np.linalg.eigvalsh(r)
    first = _entropy_of_spectrum(r_eigs)
    kept_vecs = s_vecs[:, support]
    kept_eigs = s_eigs[support]
    overlaps = np.real(np.einsum("ji,jk,ki->i", kept_vecs.conj(), r, kept_vecs))
    cross = float(-np.sum(overlaps * np.log2(kept_eigs)))
    return max(0.0, -first + cross)


def trace_norm(operator) -> float:
    """Trace norm (sum of absolute eigenvalues) of a Hermitian operator.

    Parameters
    ----------
    operator : ndarray or DensityOperator
        Hermitian within 1e-10; the symmetrized matrix is used.

    Returns
    -------
    float
    """
    mat = _mat_of(operator)
    herm = float(np.max(np.abs(mat - mat.conj().T))) if mat.size else 0.0
    if herm > HERMITICITY_TOL:
        raise ValidationError("hermiticity", herm, HERMITICITY_TOL)
    mat = (mat + mat.conj().T) / 2.0
    return float(np.sum(np.abs(np.linalg.eigvalsh(mat))))


def mutual_information(rho: DensityOperator) -> float:
    """Quantum mutual information ``S(A) + S(B) - S(AB)`` in bits.

    Parameters
    ----------
    rho : DensityOperator
        Bipartite state (exactly two subsystems).

    Returns
    -------
    float
        Nonnegative.
    """
    if len(rho.dims) != 2:
        raise ValidationError("dims", detail="mutual information requires exactly 2 subsystems")
    s_a = von_neumann_entropy(partial_trace(rho, 0))
    s_b = von_neumann_entropy(partial_trace(rho, 1))
    s_ab = von_neumann_entropy(rho)
    return max(0.0, s_a + s_b - s_ab)


def conditional_mutual_information(rho: DensityOperator) -> float:
    """Conditional mutual information ``I(A;B|E)`` of a tripartite state.

    Computed as ``S(AE) + S(BE) - S(ABE) - S(E)``; values within 1e-9
    below zero are clamped to zero.

    Parameters
    ----------
    rho : DensityOperator
        Tripartite state with subsystem order (A, B, E).

    Returns
    -------
    float
        Nonnegative.
    """
    if len(rho.dims) != 3:
        raise ValidationError("dims",
                              detail="conditional mutual information requires 3 subsystems")
    s_ae = von_neumann_entropy(partial_trace(rho, (0, 2)))
    s_be = von_neumann_entropy(partial_trace(rho, (1, 2)))
    s_abe = von_neumann_entropy(rho)
    s_e = von_neumann_entropy(partial_trace(rho, 2))
    value = s_ae + s_be - s_abe - s_e
    if value < -CMI_TOL:
        raise ValidationError("strong-subadditivity", -value, CMI_TOL)
    return max(0.0, value)


def apply_kraus(kraus: KrausSet, rho: DensityOperator, mode: str = "averaged"):
    """Apply a Kraus operation to a state.

    Parameters
    ----------
    kraus : KrausSet
    rho : DensityOperator
    mode : {"averaged", "selective"}
        ``"averaged"`` returns the channel output ``sum_i A_i rho A_i^dag``
        (renormalized by its trace to absorb roundoff).  ``"selective"``
        returns the list of ``(probability, post-measurement state)``
        pairs; outcomes with probability below 1e-14 are dropped.

    Returns
    -------
    DensityOperator or list of (float, DensityOperator)
    """
    d = rho.dim
    for op in kraus.operators:
        if op.shape[1] != d:
            raise ValidationError("shape", detail="Kraus input dimension does not match state")

    def out_dims(op):
        return rho.dims if op.shape[0] == d else (op.shape[0],)

    if mode == "averaged":
        total = sum(op @ rho.matrix @ op.conj().T for op in kraus.operators)
        tr = float(np.real(np.trace(total)))
        if kraus.trace_preserving and abs(tr - 1.0) > COMPLETENESS_TOL:
            raise ValidationError("trace-preservation", abs(tr - 1.0), COMPLETENESS_TOL)
        if tr < OUTCOME_CUTOFF:
            raise ValidationError("trace-preservation", detail="channel output has vanishing trace")
        return DensityOperator(total / tr, out_dims(kraus.operators[0]))
    if mode == "selective":
        outcomes = []
        total_p = 0.0
        for op in kraus.operators:
            raw = op @ rho.matrix @ op.conj().T
            p = float(np.real(np.trace(raw)))
            total_p += p
            if p < OUTCOME_CUTOFF:
                continue
            outcomes.append((p, DensityOperator(raw / p, out_dims(op))))
        if kraus.trace_preserving and abs(total_p - 1.0) > COMPLETENESS_TOL:
            raise ValidationError("trace-preservation", abs(total_p - 1.0), COMPLETENESS_TOL)
        return outcomes
    raise ValidationError("mode", detail=f"unknown mode {mode!r}")


def max_entangled(d: int = 2) -> PureState:
    """Maximally entangled state ``sum_i |ii> / sqrt(d)`` on two qudits."""
    if d < 2:
        raise ValidationError("dims", detail="local dimension must be at least 2")
    vec = np.zeros(d * d, dtype=complex)
    vec[:: d + 1] = 1.0 / np.sqrt(d)
    return PureState(vec, (d, d))


def ghz_state(n: int = 3) -> PureState:
    """GHZ state ``(|0...0> + |1...1>)/sqrt(2)`` on ``n`` qubits."""
    if n < 2:
        raise ValidationError("dims", detail="GHZ needs at least 2 qubits")
    vec = np.zeros(2 ** n, dtype=complex)
    vec[0] = vec[-1] = 1.0 / np.sqrt(2)
    return PureState(vec, (2,) * n)


def w_state(n: int = 3) -> PureState:
    """W state, the uniform superposition of single-excitation basis states."""
    if n < 2:
        raise ValidationError("dims", detail="W needs at least 2 qubits")
    vec = np.zeros(2 ** n, dtype=complex)
    for k in range(n):
        vec[2 ** k] = 1.0 / np.sqrt(n)
    return PureState(vec, (2,) * n)


def _pairs_to_array(data, name: str) -> np.ndarray:
    arr = np.asarray(data, dtype=float)
    if arr.ndim < 1 or arr.shape[-1] != 2:
        raise ValidationError("state-format",
                              detail=f"{name} entries must be [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def _array_to_pairs(arr: np.ndarray) -> list:
    stacked = np.stack([np.real(arr), np.imag(arr)], axis=-1)
    return stacked.tolist()


def state_from_dict(payload: dict):
    """Build a state from its JSON dictionary form.

    The dictionary must contain ``dims`` plus either ``matrix`` (nested
    ``[re, im]`` pairs, row-major) for a density operator or ``vector``
    for a pure state.

    Returns
    -------
    DensityOperator or PureState
    """
    if not isinstance(payload, dict) or "dims" not in payload:
        raise ValidationError("state-format", detail="missing 'dims' field")
    dims = payload["dims"]
    if "matrix" in payload:
        return DensityOperator(_pairs_to_array(payload["matrix"], "matrix"), dims)
    if "vector" in payload:
        return PureState(_pairs_to_array(payload["vector"], "vector"), dims)
    raise ValidationError("state-format", detail="expected a 'matrix' or 'vector' field")


def state_to_dict(state) -> dict:
    """Serialize a state to its JSON dictionary form."""
    if isinstance(state, PureState):
        return {"dims": list(state.dims), "vector": _array_to_pairs(state.vector)}
    if isinstance(state, DensityOperator):
        return {"dims": list(state.dims), "matrix": _array_to_pairs(state.matrix)}
    raise ValidationError("state-format", detail=f"cannot serialize {type(state).__name__}")


def load_state(path):
    """Load a density operator or pure state from a JSON file.

    Parameters
    ----------
    path : str or Path

    Returns
    -------
    DensityOperator or PureState

    Raises
    ------
    json.JSONDecodeError
        For malformed JSON (carries line and column).
    ValidationError
        For structurally invalid payloads.
    """
    with open(path, "r", encoding="utf-8") as fh:
        payload = json.load(fh)
    return state_from_dict(payload)


def save_state(state, path) -> None:
    """Write a state to a JSON file in the canonical dictionary form."""
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(state_to_dict(state), fh)
        fh.write("\n")
