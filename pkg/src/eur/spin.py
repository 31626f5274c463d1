"""Closed forms for two spin observables in the x-y plane measured on a pure state.

Observables ``X = cos(phi) sx + sin(phi) sy`` and ``Y = sin(phi) sx + cos(phi) sy``
(overlap ``sin 2phi``) and the pure state with polar angle ``theta`` and azimuth
``varphi``. Nothing here calls the generic ``successive``/``bounds`` pipeline,
so these formulas serve as an independent check on it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .entropy import SHANNON, conditional_renyi, renyi_entropy
from .errors import ValidationError
from .qubit import Observable, QubitState
from .successive import MeasurementPair

RATIO_FLOOR = 1e-12
ANGLE_TOL = 1e-12

# panel values of the three spin figures; varphi is swept on [0, 2pi]
FIGURE_PANELS = {
    1: {"fixed": "phi", "value": 0.0, "sweep": "theta",
        "panels": (0.0, math.pi / 4, 5 * math.pi / 9, math.pi / 2)},
    2: {"fixed": "theta", "value": math.pi / 4, "sweep": "phi",
        "panels": (0.0, math.pi / 7, math.pi / 3, math.pi / 2)},
    3: {"fixed": "theta", "value": math.pi / 4, "sweep": "phi",
        "panels": (0.0, math.pi / 15, math.pi / 10, math.pi / 5,
                   math.pi / 2, 13 * math.pi / 30, 2 * math.pi / 5, 3 * math.pi / 10)},
}
FIGURE_ORDERS = (0.5, 1.0, 2.0, math.inf)
DEFAULT_POINTS = 721


@dataclass(frozen=True, eq=False)
class SpinScenario:
    """Angles ``phi`` (observable half-angle), ``theta`` in [0, pi], ``varphi`` (mod 2pi).

    Fields broadcast against each other, so a grid is one scenario object.
    """

    phi: np.ndarray
    theta: np.ndarray
    varphi: np.ndarray

    def __post_init__(self):
        phi, theta, varphi = np.broadcast_arrays(
            np.asarray(self.phi, float), np.asarray(self.theta, float), np.asarray(self.varphi, float)
        )
        if not (np.all(np.isfinite(phi)) and np.all(np.isfinite(theta)) and np.all(np.isfinite(varphi))):
            raise ValidationError("spin scenario: angles must be finite")
        if np.any(theta < -ANGLE_TOL) or np.any(theta > math.pi + ANGLE_TOL):
            raise ValidationError("spin scenario: theta must lie in [0, pi]")
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "varphi", varphi)

    @classmethod
    def grid(cls, phi, theta, varphi) -> "SpinScenario":
        """Outer product of the three 1-D angle arrays (``ij`` indexing)."""
        return cls(*np.meshgrid(phi, theta, varphi, indexing="ij"))

    @property
    def overlap(self) -> np.ndarray:
        return np.sin(2 * self.phi)


def to_generic(s: SpinScenario) -> tuple[MeasurementPair, QubitState]:
    p = np.stack([np.cos(s.phi), np.sin(s.phi), np.zeros_like(s.phi)], axis=-1)
    q = np.stack([np.sin(s.phi), np.cos(s.phi), np.zeros_like(s.phi)], axis=-1)
    return MeasurementPair(Observable(p), Observable(q)), QubitState.from_angles(s.theta, s.varphi)


def _pm(x):
    return np.stack([(1 + x) / 2, (1 - x) / 2], axis=-1)


def closed_form_first(s: SpinScenario) -> np.ndarray:
    """``P_pm = [1 pm cos(phi - varphi) sin(theta)] / 2``."""
    return _pm(np.cos(s.phi - s.varphi) * np.sin(s.theta))


def closed_form_second(s: SpinScenario) -> np.ndarray:
    """``[1 pm cos(phi - varphi) sin(theta) sin(2 phi)] / 2`` for Y on the erased state."""
    return _pm(np.cos(s.phi - s.varphi) * np.sin(s.theta) * np.sin(2 * s.phi))


def closed_form_erased_matrix(s: SpinScenario) -> np.ndarray:
    off = 0.5 * np.cos(s.phi - s.varphi) * np.sin(s.theta)
    m = np.empty(np.shape(s.phi) + (2, 2), dtype=complex)
    m[..., 0, 0] = 0.5
    m[..., 1, 1] = 0.5
    m[..., 0, 1] = off * np.exp(-1j * s.phi)
    m[..., 1, 0] = off * np.exp(1j * s.phi)
    return m


def closed_form_conditionals(s: SpinScenario) -> np.ndarray:
    """Rows ``x+``, ``x-``; columns ``y+``, ``y-``."""
    k = np.sin(2 * s.phi)
    return np.stack([_pm(k), _pm(-k)], axis=-2)


def closed_form_conditional_renyi(s: SpinScenario, order):
    """``R(X|Y)`` as the entropy of ``(1 pm sin 2phi)/2``."""
    return renyi_entropy(_pm(np.sin(2 * s.phi)), order)


@dataclass(frozen=True)
class SpinRatios:
    """Normalised uncertainties; each is >= 1 and equals 1 when tight. NaN = undefined."""

    reur: np.ndarray
    creur: np.ndarray
    seurp: np.ndarray
    cseurp: np.ndarray


def _ratio(num, den):
    num = np.asarray(num, float)
    den = np.asarray(den, float)
    ok = den > RATIO_FLOOR
    return np.where(ok, num / np.where(ok, den, 1.0), math.nan)


def ratios(s: SpinScenario, order) -> SpinRatios:
    """The four normalised forms of the spin-example relations.

    ``reur`` and ``creur`` use order ``order`` over the Renyi bound
    ``R((1 pm sin 2phi)/2)``; ``seurp`` and ``cseurp`` are Shannon sums over
    the Maassen-Uffink bound ``-ln((1 + |sin 2phi|)/2)`` and do not depend on
    ``order``.
    """
    first = closed_form_first(s)
    second = closed_form_second(s)
    table = closed_form_conditionals(s)
    renyi_den = renyi_entropy(_pm(np.sin(2 * s.phi)), order)
    mu_den = -np.log((1 + np.abs(np.sin(2 * s.phi))) / 2)

    lhs = np.asarray(renyi_entropy(first, order)) + np.asarray(renyi_entropy(second, order))
    cond = conditional_renyi(first, table, order)
    shannon_lhs = np.asarray(renyi_entropy(first, SHANNON)) + np.asarray(renyi_entropy(second, SHANNON))
    shannon_cond = conditional_renyi(first, table, SHANNON)
    return SpinRatios(
        reur=_ratio(lhs, renyi_den),
        creur=_ratio(cond, renyi_den),
        seurp=_ratio(shannon_lhs, mu_den),
        cseurp=_ratio(shannon_cond, mu_den),
    )
