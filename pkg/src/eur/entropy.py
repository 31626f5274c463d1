"""Renyi entropies of discrete probability distributions.

All entropies are in nats. Distributions are arrays whose last axis runs over
outcomes, so a stack of distributions of shape ``(n, N)`` yields ``n``
entropies in one call.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

PROB_TOL = 1e-12
# an entry counts towards the support (max-entropy branch) only above this
SUPPORT_THRESHOLD = 1e-12
# finite orders closer than this to 1 must be built as the Shannon branch
ONE_GUARD = 1e-9


@dataclass(frozen=True)
class EntropyOrder:
    """The Renyi parameter alpha.

    ``0``, ``1`` and ``inf`` select the max-entropy, Shannon and min-entropy
    branches; any other positive value is a finite order. Values within
    ``ONE_GUARD`` of 1 (but not 1 itself) are rejected.
    """

    alpha: float

    def __post_init__(self):
        a = float(self.alpha)
        if math.isnan(a) or a < 0:
            raise ValidationError(f"entropy order must be >= 0, got {self.alpha!r}")
        if a != 1.0 and abs(a - 1.0) < ONE_GUARD:
            raise ValidationError(
                f"finite order {a!r} lies within {ONE_GUARD:g} of 1; use the Shannon order"
            )
        object.__setattr__(self, "alpha", a)

    @property
    def kind(self) -> str:
        if self.alpha == 0.0:
            return "zero"
        if self.alpha == 1.0:
            return "one"
        if math.isinf(self.alpha):
            return "infinity"
        return "finite"

    @property
    def label(self) -> str:
        """Text form used in CSV/JSON output (``inf`` for the min-entropy)."""
        if math.isinf(self.alpha):
            return "inf"
        return format(self.alpha, "g")

    @classmethod
    def parse(cls, text: str) -> "EntropyOrder":
        t = text.strip().lower()
        if t in ("inf", "infinity", "min"):
            return cls(math.inf)
        if t in ("shannon",):
            return cls(1.0)
        if "/" in t:
            num, den = t.split("/", 1)
            return cls(float(num) / float(den))
        try:
            return cls(float(t))
        except ValueError:
            raise ValidationError(f"cannot parse entropy order {text!r}") from None

    def __str__(self) -> str:
        return self.label


ZERO = EntropyOrder(0.0)
SHANNON = EntropyOrder(1.0)
COLLISION = EntropyOrder(2.0)
MIN_ENTROPY = EntropyOrder(math.inf)


def as_order(order) -> EntropyOrder:
    """Coerce a number, string or ``EntropyOrder`` into an ``EntropyOrder``."""
    if isinstance(order, EntropyOrder):
        return order
    if isinstance(order, str):
        return EntropyOrder.parse(order)
    return EntropyOrder(order)


def check_distribution(probs, name: str = "distribution") -> np.ndarray:
    """Validate probability vectors along the last axis and return them as floats.

    Entries may undershoot 0 or overshoot 1 by at most ``PROB_TOL``; they are
    clipped into [0, 1] after the check.
    """
    p = np.asarray(probs, dtype=float)
    if p.ndim == 0 or p.shape[-1] == 0:
        raise ValidationError(f"{name}: needs at least one outcome")
    if not np.all(np.isfinite(p)):
        raise ValidationError(f"{name}: entries must be finite")
    if np.any(p < -PROB_TOL):
        raise ValidationError(f"{name}: entries must be >= 0 (min {p.min()!r})")
    if np.any(p > 1 + PROB_TOL):
        raise ValidationError(f"{name}: entries must be <= 1 (max {p.max()!r})")
    total = p.sum(axis=-1)
    if np.any(np.abs(total - 1.0) > PROB_TOL):
        worst = np.max(np.abs(total - 1.0))
        raise ValidationError(f"{name}: entries must sum to 1 (off by {worst:.3g})")
    return np.clip(p, 0.0, 1.0)


def _shannon(p: np.ndarray) -> np.ndarray:
    safe = np.where(p > 0, p, 1.0)
    return -np.sum(np.where(p > 0, p * np.log(safe), 0.0), axis=-1)


def _finite_renyi(p: np.ndarray, alpha) -> np.ndarray:
    # no guard on alpha here: callers near alpha = 1 get the raw formula
    alpha = np.asarray(alpha, dtype=float)
    a = alpha[..., None]
    powered = np.where(p > 0, np.power(np.where(p > 0, p, 1.0), a), 0.0)
    return np.log(np.sum(powered, axis=-1)) / (1.0 - alpha)


def _unwrap(x: np.ndarray):
    return float(x) if np.ndim(x) == 0 else x


def renyi_entropy(probs, order=SHANNON):
    """Renyi entropy of order ``order`` along the last axis of ``probs``.

    Returns a float for a single distribution, an array for a stack.

    >>> round(renyi_entropy([0.3, 0.7], "inf"), 6)
    0.356675
    """
    p = check_distribution(probs)
    o = as_order(order)
    kind = o.kind
    if kind == "zero":
        h = np.log(np.count_nonzero(p > SUPPORT_THRESHOLD, axis=-1).astype(float))
    elif kind == "one":
        h = _shannon(p)
    elif kind == "infinity":
        h = -np.log(np.max(p, axis=-1))
    else:
        h = _finite_renyi(p, o.alpha)
    return _unwrap(np.maximum(h, 0.0))


def shannon_entropy(probs):
    """Shannon entropy in nats; shorthand for ``renyi_entropy(probs, 1)``."""
    return renyi_entropy(probs, SHANNON)


def conditional_renyi(weights, conditionals, order=SHANNON):
    """Outcome-weighted average of conditional Renyi entropies.

    ``weights`` has shape ``(..., k)`` and ``conditionals`` shape ``(..., k, n)``:
    row ``i`` of ``conditionals`` is the distribution given outcome ``i``.
    """
    w = check_distribution(weights, "weights")
    c = np.asarray(conditionals, dtype=float)
    if c.ndim < 2 or c.shape[-2] != w.shape[-1]:
        raise ValidationError(
            f"need one conditional distribution per weight: "
            f"{w.shape[-1]} weights, conditionals of shape {c.shape}"
        )
    h = np.asarray(renyi_entropy(check_distribution(c, "conditionals"), order))
    return _unwrap(np.sum(w * h, axis=-1))
