"""Two successive projective measurements on a qubit.

Two procedures are modelled:

* erased: P is measured, the outcome is discarded, and Q is measured on the
  resulting state ``eps(rho) = P1 * proj1 + P2 * proj2``;
* conditional: Q is measured on the post-measurement projector of each P
  outcome, giving a table of conditional probabilities.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .entropy import conditional_renyi, renyi_entropy
from .qubit import Observable, QubitState, snap_unit


def binary(x) -> np.ndarray:
    """The distribution ``((1 + x)/2, (1 - x)/2)`` along a new last axis."""
    x = np.asarray(x, dtype=float)
    return np.stack([(1 + x) / 2, (1 - x) / 2], axis=-1)


def _dot(a, b):
    return snap_unit(np.sum(a * b, axis=-1))


@dataclass(frozen=True, eq=False)
class MeasurementPair:
    """First observable ``p``, second observable ``q`` and their overlap ``m = p.q``."""

    p: Observable
    q: Observable
    m: np.ndarray = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "m", _dot(self.p.axis, self.q.axis))

    @classmethod
    def from_axes(cls, p, q) -> "MeasurementPair":
        return cls(Observable(p), Observable(q))


@dataclass(frozen=True, eq=False)
class SuccessiveOutcome:
    first: np.ndarray
    erased: QubitState
    second: np.ndarray
    conditionals: np.ndarray


def first_probs(pair: MeasurementPair, rho: QubitState) -> np.ndarray:
    """Born probabilities of the two outcomes of ``pair.p`` on ``rho``."""
    return binary(_dot(pair.p.axis, rho.r))


def erased_state(pair: MeasurementPair, rho: QubitState) -> QubitState:
    """State after measuring ``p`` and forgetting the outcome: Bloch vector ``(p.r) p``."""
    k = _dot(pair.p.axis, rho.r)[..., None] * pair.p.axis
    return QubitState(k)


def second_probs(pair: MeasurementPair, rho: QubitState) -> np.ndarray:
    """Outcome probabilities of ``q`` measured on the erased state."""
    return binary(_dot(pair.p.axis, rho.r) * pair.m)


def conditional_probs(pair: MeasurementPair) -> np.ndarray:
    """Table ``[i, j]`` = probability of ``q`` outcome ``j`` given ``p`` outcome ``i``.

    The post-measurement state for outcome ``i`` is the projector itself, so the
    table depends on ``m`` only.
    """
    m = np.asarray(pair.m)
    return np.stack([binary(m), binary(-m)], axis=-2)


def measure(pair: MeasurementPair, rho: QubitState) -> SuccessiveOutcome:
    return SuccessiveOutcome(
        first=first_probs(pair, rho),
        erased=erased_state(pair, rho),
        second=second_probs(pair, rho),
        conditionals=conditional_probs(pair),
    )


def conditional_renyi_qp(pair: MeasurementPair, rho: QubitState, order):
    """Conditional Renyi entropy of Q given P for the conditional procedure.

    Computed as the weighted average over P outcomes (weights from ``rho``);
    the result does not depend on ``rho`` and equals the entropy of
    ``((1 + m)/2, (1 - m)/2)``.
    """
    weights = first_probs(pair, rho)
    table = np.broadcast_to(conditional_probs(pair), weights.shape[:-1] + (2, 2))
    return conditional_renyi(weights, table, order)


def overlap_entropy(pair: MeasurementPair, order):
    """Entropy of ``((1 + m)/2, (1 - m)/2)``; the state-free value of ``R(Q|P)``."""
    return renyi_entropy(binary(pair.m), order)
