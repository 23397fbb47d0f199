"""Shared random-state generators for the test suite."""

import numpy as np
import pytest

from entmeas import DensityOperator, PureState


def rand_unitary(rng, d):
    """Haar-distributed unitary via QR of a Ginibre matrix with phase fix."""
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    q, r = np.linalg.qr(g)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def rand_pure(rng, dims):
    d = int(np.prod(dims))
    vec = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return PureState(vec / np.linalg.norm(vec), dims)


def rand_rho(rng, dims, rank=None):
    """Random density operator; full Ginibre induces the Hilbert-Schmidt measure."""
    d = int(np.prod(dims))
    k = rank or d
    g = rng.standard_normal((d, k)) + 1j * rng.standard_normal((d, k))
    mat = g @ g.conj().T
    return DensityOperator(mat / np.trace(mat), dims)


@pytest.fixture
def rng():
    return np.random.default_rng(7)
