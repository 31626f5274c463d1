"""Bloch-sphere primitives for a single qubit.

States and observables are kept as Bloch vectors (arrays whose last axis has
length 3, optionally batched); 2x2 matrices are produced on demand.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .entropy import renyi_entropy
from .errors import ValidationError

NORM_TOL = 1e-12
MATRIX_TOL = 1e-12

IDENTITY = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = np.stack([SIGMA_X, SIGMA_Y, SIGMA_Z])


def snap_unit(x, tol: float = NORM_TOL) -> np.ndarray:
    """Round values within ``tol`` of +-1 to exactly +-1 and clip into [-1, 1].

    Rounding leaves e.g. ``p . p`` at ``1 - 1e-16``; for orders below 1 that
    residue would surface as ~1e-8 of spurious entropy.
    """
    x = np.clip(np.asarray(x, dtype=float), -1.0, 1.0)
    return np.where(np.abs(x) >= 1.0 - tol, np.sign(x), x)


def _vector(v, name: str) -> np.ndarray:
    a = np.array(v, dtype=float)
    if a.ndim == 0 or a.shape[-1] != 3:
        raise ValidationError(f"{name}: Bloch vector must have 3 components, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValidationError(f"{name}: Bloch vector components must be finite")
    return a


@dataclass(frozen=True, eq=False)
class QubitState:
    """Qubit state with Bloch vector ``r``, ``|r| <= 1``.

    ``r`` may carry leading batch axes, e.g. shape ``(n, 3)`` for ``n`` states.
    """

    r: np.ndarray

    def __post_init__(self):
        r = _vector(self.r, "state")
        if np.any(np.linalg.norm(r, axis=-1) > 1 + NORM_TOL):
            raise ValidationError("state: Bloch vector norm exceeds 1")
        r.setflags(write=False)
        object.__setattr__(self, "r", r)

    @property
    def radius(self) -> np.ndarray:
        """``|r|``, with values within ``NORM_TOL`` of 1 set to exactly 1."""
        return snap_unit(np.linalg.norm(self.r, axis=-1))

    @property
    def is_pure(self):
        return self.radius == 1.0

    @classmethod
    def from_angles(cls, theta, varphi, radius=1.0) -> "QubitState":
        """Polar/azimuthal parameterisation ``r = radius (sin t cos f, sin t sin f, cos t)``."""
        theta, varphi, radius = np.broadcast_arrays(
            np.asarray(theta, float), np.asarray(varphi, float), np.asarray(radius, float)
        )
        s = np.sin(theta)
        r = radius[..., None] * np.stack([s * np.cos(varphi), s * np.sin(varphi), np.cos(theta)], axis=-1)
        return cls(r)

    def __len__(self):
        return len(self.r)


@dataclass(frozen=True, eq=False)
class Observable:
    """Non-degenerate two-outcome observable ``axis . sigma`` with a unit axis."""

    axis: np.ndarray

    def __post_init__(self):
        a = _vector(self.axis, "observable")
        if np.any(np.abs(np.linalg.norm(a, axis=-1) - 1.0) > NORM_TOL):
            raise ValidationError("observable: axis must be a unit vector (degenerate observables are not supported)")
        a.setflags(write=False)
        object.__setattr__(self, "axis", a)

    @classmethod
    def normalized(cls, v) -> "Observable":
        v = _vector(v, "observable")
        n = np.linalg.norm(v, axis=-1, keepdims=True)
        if np.any(n == 0):
            raise ValidationError("observable: zero axis")
        return cls(v / n)

    def __neg__(self) -> "Observable":
        return Observable(-self.axis)


def bloch_to_matrix(v) -> np.ndarray:
    """``(I + v . sigma) / 2`` for a (batched) real 3-vector ``v``."""
    v = np.asarray(v, dtype=float)
    return 0.5 * (IDENTITY + np.einsum("...i,ijk->...jk", v, PAULI))


def projectors(obs: Observable) -> tuple[np.ndarray, np.ndarray]:
    """Eigenprojectors for outcomes +1 and -1 of ``obs``."""
    return bloch_to_matrix(obs.axis), bloch_to_matrix(-obs.axis)


def state_to_matrix(state: QubitState) -> np.ndarray:
    return bloch_to_matrix(state.r)


def check_density_matrix(m) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.shape[-2:] != (2, 2):
        raise ValidationError(f"density matrix must be 2x2, got shape {m.shape}")
    if np.any(np.abs(m - np.swapaxes(m.conj(), -1, -2)) > MATRIX_TOL):
        raise ValidationError("density matrix must be Hermitian")
    if np.any(np.abs(np.trace(m, axis1=-2, axis2=-1) - 1.0) > MATRIX_TOL):
        raise ValidationError("density matrix must have unit trace")
    if np.any(np.linalg.eigvalsh(m) < -MATRIX_TOL):
        raise ValidationError("density matrix must be positive semidefinite")
    return m


def matrix_to_state(m) -> QubitState:
    """Inverse of :func:`state_to_matrix`: ``r_i = tr(rho sigma_i)``."""
    m = check_density_matrix(m)
    r = np.einsum("...jk,ikj->...i", m, PAULI).real
    return QubitState(r)


def state_spectrum(state: QubitState) -> np.ndarray:
    """Eigenvalues ``((1 + |r|)/2, (1 - |r|)/2)`` of the density matrix."""
    radius = state.radius
    return np.stack([(1 + radius) / 2, (1 - radius) / 2], axis=-1)


def state_renyi(state: QubitState, order):
    """Renyi entropy of the state's spectrum (von Neumann entropy for order 1)."""
    return renyi_entropy(state_spectrum(state), order)


def overlap_c(p: Observable, q: Observable):
    """Largest eigenvector overlap ``max |<x_i|y_j>| = sqrt((1 + |p.q|)/2)``."""
    m = np.abs(snap_unit(np.sum(p.axis * q.axis, axis=-1)))
    c = np.sqrt((1 + m) / 2)
    return float(c) if np.ndim(c) == 0 else c
