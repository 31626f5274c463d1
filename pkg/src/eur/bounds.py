"""Lower bounds on the entropy sum of two successive measurements.

``lhs_reur`` is the quantity being bounded: the entropy of the first
measurement plus the entropy of the second measurement performed on the erased
state. Each bound below is a function of the measurement pair and, for the
state-dependent ones, of the state's Bloch radius or of the erased state.

Bound            depends on     valid for
---------------  -------------  -------------------
reur_bound       pair, |r|      every order
creur_bound      pair           every order
maassen_uffink   pair           Shannon order
improved_mu      pair, eps(rho) Shannon order
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .entropy import SHANNON, renyi_entropy
from .qubit import QubitState, state_renyi
from .successive import (
    MeasurementPair,
    binary,
    erased_state,
    first_probs,
    overlap_entropy,
    second_probs,
)

SLACK_TOL = 1e-10
# below this a bound is treated as zero and its ratio is undefined
RATIO_FLOOR = 1e-12


def _unwrap(x):
    x = np.asarray(x, dtype=float)
    return float(x) if x.ndim == 0 else x


def lhs_reur(pair: MeasurementPair, rho: QubitState, order):
    """``R(P) + R(Q on eps(rho))`` for the erased-outcome procedure."""
    return _unwrap(
        np.asarray(renyi_entropy(first_probs(pair, rho), order))
        + np.asarray(renyi_entropy(second_probs(pair, rho), order))
    )


def reur_bound(pair: MeasurementPair, rho: QubitState, order):
    """State-dependent bound ``R(rho) + R((1 +- m|r|)/2)``.

    Saturated when the Bloch vector of ``rho`` is parallel to ``p``.
    """
    scaled = pair.m * rho.radius
    return _unwrap(
        np.asarray(state_renyi(rho, order)) + np.asarray(renyi_entropy(binary(scaled), order))
    )


def _binary_shannon(x):
    h = np.zeros(np.shape(x))
    for v in ((1 + np.asarray(x)) / 2, (1 - np.asarray(x)) / 2):
        v = np.clip(v, 0.0, 1.0)
        h -= np.where(v > 0, v * np.log(np.where(v > 0, v, 1.0)), 0.0)
    return h


def shannon_reur_bound(pair: MeasurementPair, rho: QubitState):
    """Shannon specialisation ``H((1 +- |r|)/2) + H((1 +- m|r|)/2)``, written out directly."""
    radius = rho.radius
    return _unwrap(_binary_shannon(radius) + _binary_shannon(pair.m * radius))


def min_entropy_bound(pair: MeasurementPair, rho: QubitState):
    """Min-entropy specialisation ``-ln(max_i P_i * max_j Q_j)``."""
    radius = rho.radius
    top_p = (1 + radius) / 2
    top_q = (1 + np.abs(pair.m) * radius) / 2
    return _unwrap(-np.log(top_p * top_q))


def creur_bound(pair: MeasurementPair, order):
    """State-independent bound: the conditional entropy ``R(Q|P)``.

    Equal to :func:`reur_bound` at ``|r| = 1`` and never larger than it;
    saturated by eigenstates of ``p``.
    """
    return overlap_entropy(pair, order)


def conditional_min_entropy_bound(pair: MeasurementPair):
    """Min-entropy form of :func:`creur_bound`: ``-ln max_i K_i``."""
    return _unwrap(-np.log((1 + np.abs(pair.m)) / 2))


def maassen_uffink_bound(pair: MeasurementPair):
    """``-2 ln c`` with ``c`` the largest eigenvector overlap, i.e. ``-ln((1 + |m|)/2)``."""
    return _unwrap(-np.log((1 + np.abs(pair.m)) / 2))


def improved_mu_bound(pair: MeasurementPair, rho: QubitState):
    """``S(eps(rho)) - 2 ln c``: Maassen-Uffink raised by the von Neumann entropy of the erased state.

    Measuring ``p`` on ``eps(rho)`` reproduces the first-measurement
    statistics, so this bounds the same Shannon entropy sum as the others.
    """
    return _unwrap(
        np.asarray(state_renyi(erased_state(pair, rho), SHANNON)) + maassen_uffink_bound(pair)
    )


@dataclass(frozen=True)
class BoundReport:
    lhs: float
    bound: float
    slack: float
    ratio: float | None

    @property
    def holds(self) -> bool:
        return self.slack >= -SLACK_TOL


def slack_and_ratio(lhs, bound):
    """Array version of :func:`report`; undefined ratios come back as NaN."""
    lhs = np.asarray(lhs, dtype=float)
    bound = np.asarray(bound, dtype=float)
    safe = np.where(bound > RATIO_FLOOR, bound, 1.0)
    ratio = np.where(bound > RATIO_FLOOR, lhs / safe, math.nan)
    return lhs - bound, ratio


def report(lhs: float, bound: float) -> BoundReport:
    slack, ratio = slack_and_ratio(lhs, bound)
    ratio = float(ratio)
    return BoundReport(float(lhs), float(bound), float(slack), None if math.isnan(ratio) else ratio)
