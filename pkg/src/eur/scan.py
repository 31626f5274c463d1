"""Sweeps, randomized verification and figure data.

Everything here is vectorised over the sample/grid axis; records are built
only at the output boundary.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import asdict, dataclass, field, fields

import numpy as np
from scipy import ndimage

from . import spin
from .bounds import (
    SLACK_TOL,
    creur_bound,
    improved_mu_bound,
    lhs_reur,
    maassen_uffink_bound,
    min_entropy_bound,
    reur_bound,
    shannon_reur_bound,
    slack_and_ratio,
)
from .entropy import ONE_GUARD, SHANNON, EntropyOrder, as_order, renyi_entropy
from .errors import ValidationError
from .qubit import Observable, QubitState
from .successive import MeasurementPair, conditional_renyi_qp, overlap_entropy

RNG_NAME = "numpy.random.Generator(PCG64)"
VERIFY_ORDERS = (0.0, 0.5, 1.0, 2.0, 5.0, math.inf)
RANDOM_ORDER_RANGE = (0.1, 10.0)
RANDOM_ORDER_COUNT = 8
EQUALITY_SAMPLES = 1000
REGION_MARGIN = 1e-12
FIG4_P = (0.1, 0.4, math.sqrt(1 - 0.1**2 - 0.4**2))
FIG4_Q = (0.15, 0.5, math.sqrt(1 - 0.15**2 - 0.5**2))
MAX_REPORTED_VIOLATIONS = 20


# ---------------------------------------------------------------------------
# sampling


def random_unit_vectors(rng: np.random.Generator, n: int) -> np.ndarray:
    v = rng.standard_normal((n, 3))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def random_pairs(rng: np.random.Generator, n: int) -> MeasurementPair:
    """Observables drawn uniformly from the unit sphere."""
    return MeasurementPair(Observable(random_unit_vectors(rng, n)), Observable(random_unit_vectors(rng, n)))


def random_states(rng: np.random.Generator, n: int) -> QubitState:
    """States drawn uniformly from the Bloch ball."""
    radius = rng.random(n) ** (1.0 / 3.0)
    return QubitState(random_unit_vectors(rng, n) * radius[:, None])


def random_orders(rng: np.random.Generator, n: int) -> list[EntropyOrder]:
    """Log-uniform orders on ``RANDOM_ORDER_RANGE``."""
    lo, hi = np.log(RANDOM_ORDER_RANGE)
    out = []
    for a in np.exp(rng.uniform(lo, hi, n)):
        out.append(EntropyOrder(1.0 if abs(a - 1.0) < ONE_GUARD else float(a)))
    return out


# ---------------------------------------------------------------------------
# theorem verification


def _vec(a) -> list[float]:
    return [float(x) for x in a]


def _witness(pair: MeasurementPair, rho: QubitState, i: int, value: float) -> dict:
    return {
        "p": _vec(pair.p.axis[i]),
        "q": _vec(pair.q.axis[i]),
        "r": _vec(rho.r[i]),
        "value": float(value),
    }


def _min_check(name, order, slack, pair, rho, tol, violations) -> dict:
    i = int(np.argmin(slack))
    bad = np.flatnonzero(slack < -tol)
    for j in bad[: max(0, MAX_REPORTED_VIOLATIONS - len(violations))]:
        violations.append({"check": name, "order": order.label, **_witness(pair, rho, j, slack[j])})
    return {
        "check": name,
        "order": order.label,
        "min_slack": float(slack[i]),
        "passed": bool(bad.size == 0),
        "worst": _witness(pair, rho, i, slack[i]),
    }


def _max_check(name, order, residual, tol) -> dict:
    worst = float(np.max(residual)) if residual.size else 0.0
    return {"check": name, "order": order.label, "max_residual": worst, "passed": bool(worst <= tol)}


def verify_theorems(samples: int = 100_000, seed: int = 42, tolerance: float = SLACK_TOL) -> dict:
    """Randomised check of every bound; deterministic in ``seed``.

    Inequalities are checked on uniform random (pair, state) samples; the
    equality conditions on states parallel to the first observable; the
    closed-form corollaries and the state independence of ``R(Q|P)`` as
    residuals.
    """
    if samples < 1:
        raise ValidationError("samples must be >= 1")
    rng = np.random.default_rng(seed)
    pair = random_pairs(rng, samples)
    rho = random_states(rng, samples)
    orders = [EntropyOrder(a) for a in VERIFY_ORDERS] + random_orders(rng, RANDOM_ORDER_COUNT)

    inequalities, equalities, residuals, violations = [], [], [], []

    for order in orders:
        lhs = np.asarray(lhs_reur(pair, rho, order))
        t1 = np.asarray(reur_bound(pair, rho, order))
        t3 = np.asarray(creur_bound(pair, order))
        inequalities.append(_min_check("reur", order, lhs - t1, pair, rho, tolerance, violations))
        inequalities.append(_min_check("creur", order, lhs - t3, pair, rho, tolerance, violations))
        # creur is the |r| = 1 case of reur, so it can never exceed it
        inequalities.append(_min_check("creur_below_reur", order, t1 - t3, pair, rho, tolerance, violations))

    lhs = np.asarray(lhs_reur(pair, rho, SHANNON))
    inequalities.append(
        _min_check("maassen_uffink", SHANNON, lhs - maassen_uffink_bound(pair), pair, rho, tolerance, violations)
    )
    inequalities.append(
        _min_check("improved_mu", SHANNON, lhs - improved_mu_bound(pair, rho), pair, rho, tolerance, violations)
    )

    # equality loci
    n_eq = min(samples, EQUALITY_SAMPLES)
    eq_pair = random_pairs(rng, n_eq)
    sign = np.where(rng.random(n_eq) < 0.5, -1.0, 1.0)[:, None]
    eigen = QubitState(sign * eq_pair.p.axis)
    parallel = QubitState(sign * rng.random(n_eq)[:, None] * eq_pair.p.axis)
    for order in orders:
        lhs_e = np.asarray(lhs_reur(eq_pair, eigen, order))
        equalities.append(
            _max_check("reur_eigenstate", order, np.abs(lhs_e - reur_bound(eq_pair, eigen, order)), tolerance)
        )
        equalities.append(
            _max_check("creur_eigenstate", order, np.abs(lhs_e - creur_bound(eq_pair, order)), tolerance)
        )
        lhs_m = np.asarray(lhs_reur(eq_pair, parallel, order))
        equalities.append(
            _max_check("reur_parallel_mixed", order, np.abs(lhs_m - reur_bound(eq_pair, parallel, order)), tolerance)
        )

    # closed-form specialisations and state independence
    exact = 1e-12
    residuals.append(
        _max_check("shannon_form", SHANNON,
                   np.abs(np.asarray(reur_bound(pair, rho, SHANNON)) - shannon_reur_bound(pair, rho)), exact)
    )
    inf = EntropyOrder(math.inf)
    residuals.append(
        _max_check("min_entropy_form", inf,
                   np.abs(np.asarray(reur_bound(pair, rho, inf)) - min_entropy_bound(pair, rho)), exact)
    )
    n_pairs = min(samples, 100)
    fixed = random_pairs(rng, n_pairs)
    tiled = MeasurementPair(Observable(np.repeat(fixed.p.axis, 100, axis=0)),
                            Observable(np.repeat(fixed.q.axis, 100, axis=0)))
    states = random_states(rng, n_pairs * 100)
    for order in orders:
        values = np.asarray(conditional_renyi_qp(tiled, states, order)).reshape(n_pairs, 100)
        spread = values.max(axis=1) - values.min(axis=1)
        closed = np.abs(values - np.asarray(overlap_entropy(fixed, order))[:, None]).max(axis=1)
        residuals.append(_max_check("conditional_state_independence", order, np.maximum(spread, closed), exact))

    passed = all(c["passed"] for c in inequalities + equalities + residuals)
    return {
        "seed": seed,
        "samples": samples,
        "tolerance": tolerance,
        "rng": RNG_NAME,
        "orders": [o.label for o in orders],
        "passed": passed,
        "inequalities": inequalities,
        "equalities": equalities,
        "residuals": residuals,
        "violations": violations,
    }


# ---------------------------------------------------------------------------
# records


@dataclass
class ScanRecord:
    """One output row: inputs, entropy sum, every bound with its slack and ratio.

    Slacks of ``t1``/``t3`` are theorem-backed for every order; ``mu`` and
    ``eq45`` only for the Shannon order. Undefined ratios are NaN.
    """

    phi: float | None
    theta: float | None
    varphi: float | None
    alpha: str
    lhs: float
    bound_t1: float
    bound_t3: float
    bound_mu: float
    bound_eq45: float
    slack_t1: float
    ratio_t1: float
    slack_t3: float
    ratio_t3: float
    slack_mu: float
    ratio_mu: float
    slack_eq45: float
    ratio_eq45: float
    reur_ratio: float
    creur_ratio: float
    seurp_ratio: float
    cseurp_ratio: float
    violation: bool
    p: tuple = field(default=())
    q: tuple = field(default=())
    r: tuple = field(default=())


CSV_COLUMNS = [f.name for f in fields(ScanRecord) if f.name not in ("p", "q", "r")] + [
    "px", "py", "pz", "qx", "qy", "qz", "rx", "ry", "rz",
]


def _evaluate(pair: MeasurementPair, rho: QubitState, order: EntropyOrder, tol: float) -> dict:
    """Column arrays for every record field except the angles and figure ratios."""
    lhs = np.asarray(lhs_reur(pair, rho, order))
    n = lhs.shape
    t1 = np.asarray(reur_bound(pair, rho, order))
    t3 = np.broadcast_to(np.asarray(creur_bound(pair, order)), n)
    mu = np.broadcast_to(np.asarray(maassen_uffink_bound(pair)), n)
    e45 = np.asarray(improved_mu_bound(pair, rho))
    cols = {"lhs": lhs, "bound_t1": t1, "bound_t3": t3, "bound_mu": mu, "bound_eq45": e45}
    for key, bound in (("t1", t1), ("t3", t3), ("mu", mu), ("eq45", e45)):
        cols[f"slack_{key}"], cols[f"ratio_{key}"] = slack_and_ratio(lhs, bound)
    violation = (cols["slack_t1"] < -tol) | (cols["slack_t3"] < -tol)
    if order.kind == "one":
        violation |= (cols["slack_mu"] < -tol) | (cols["slack_eq45"] < -tol)
    cols["violation"] = violation
    return cols


def _generic_ratios(pair: MeasurementPair, rho: QubitState, order: EntropyOrder, lhs) -> dict:
    shannon_lhs = np.asarray(lhs_reur(pair, rho, SHANNON))
    mu = np.asarray(maassen_uffink_bound(pair))
    _, reur = slack_and_ratio(lhs, creur_bound(pair, order))
    _, creur = slack_and_ratio(conditional_renyi_qp(pair, rho, order), creur_bound(pair, order))
    _, seurp = slack_and_ratio(shannon_lhs, mu)
    _, cseurp = slack_and_ratio(overlap_entropy(pair, SHANNON), mu)
    return {"reur_ratio": reur, "creur_ratio": creur, "seurp_ratio": seurp, "cseurp_ratio": cseurp}


def _to_records(cols: dict, n: int, pair, rho) -> list[ScanRecord]:
    names = [f.name for f in fields(ScanRecord) if f.name not in ("p", "q", "r")]
    flat = {}
    for k in names:
        v = cols[k]
        flat[k] = [v] * n if isinstance(v, str) or v is None else np.broadcast_to(np.asarray(v), (n,)).tolist()
    p = np.broadcast_to(pair.p.axis, (n, 3)).tolist()
    q = np.broadcast_to(pair.q.axis, (n, 3)).tolist()
    r = np.broadcast_to(rho.r, (n, 3)).tolist()
    return [
        ScanRecord(**{k: flat[k][i] for k in names}, p=tuple(p[i]), q=tuple(q[i]), r=tuple(r[i]))
        for i in range(n)
    ]


def eval_point(p, q, r, orders=VERIFY_ORDERS, tol: float = SLACK_TOL) -> list[ScanRecord]:
    """Exact evaluation of every entropy and bound at a single (p, q, r)."""
    try:
        po = Observable(p)
    except ValidationError as exc:
        raise ValidationError(f"p: {exc}") from None
    try:
        qo = Observable(q)
    except ValidationError as exc:
        raise ValidationError(f"q: {exc}") from None
    try:
        rho = QubitState(r)
    except ValidationError as exc:
        raise ValidationError(f"r: {exc}") from None
    pair = MeasurementPair(po, qo)
    records = []
    for order in map(as_order, orders):
        cols = _evaluate(pair, rho, order, tol)
        cols.update(_generic_ratios(pair, rho, order, cols["lhs"]))
        cols.update(phi=None, theta=None, varphi=None, alpha=order.label)
        records += _to_records(cols, 1, pair, rho)
    return records


def figure_curves(figure: int, orders=spin.FIGURE_ORDERS, points: int = spin.DEFAULT_POINTS,
                  tol: float = SLACK_TOL) -> list[ScanRecord]:
    """Ratio curves against ``varphi`` for each panel of spin figure 1, 2 or 3.

    Figure ratios come from the closed forms in :mod:`eur.spin`; bounds and
    slacks from the generic pipeline.
    """
    if figure not in spin.FIGURE_PANELS:
        raise ValidationError(f"figure must be one of {sorted(spin.FIGURE_PANELS)}, got {figure!r}")
    if points < 2:
        raise ValidationError("points must be >= 2")
    layout = spin.FIGURE_PANELS[figure]
    varphi = np.linspace(0.0, 2 * math.pi, points)
    records = []
    for value in layout["panels"]:
        angles = {layout["fixed"]: layout["value"], layout["sweep"]: value}
        scenario = spin.SpinScenario(angles["phi"], angles["theta"], varphi)
        pair, rho = spin.to_generic(scenario)
        for order in map(as_order, orders):
            cols = _evaluate(pair, rho, order, tol)
            ratios = spin.ratios(scenario, order)
            cols.update(
                phi=scenario.phi, theta=scenario.theta, varphi=scenario.varphi, alpha=order.label,
                reur_ratio=ratios.reur, creur_ratio=ratios.creur,
                seurp_ratio=ratios.seurp, cseurp_ratio=ratios.cseurp,
            )
            records += _to_records(cols, points, pair, rho)
    return records


# ---------------------------------------------------------------------------
# bound-comparison region


@dataclass(frozen=True, eq=False)
class RegionMask:
    """Grid over pure (or fixed-radius) states where the Shannon REUR bound beats the improved MU bound."""

    theta: np.ndarray
    varphi: np.ndarray
    radius: float
    lhs: np.ndarray
    reur: np.ndarray
    improved: np.ndarray
    tighter: np.ndarray

    @property
    def shape(self) -> tuple[int, int]:
        return self.tighter.shape

    def components(self) -> int:
        """Number of 4-connected regions of ``tighter`` on the (theta, varphi) grid."""
        return int(ndimage.label(self.tighter)[1])

    def violation(self, tol: float = SLACK_TOL) -> bool:
        return bool(np.any(self.lhs - self.reur < -tol) or np.any(self.lhs - self.improved < -tol))


def region_fig4(p=FIG4_P, q=FIG4_Q, grid: tuple[int, int] = (361, 721), radius: float = 1.0) -> RegionMask:
    """Compare the Shannon REUR bound with the improved MU bound over states.

    States are ``radius * (sin t cos f, sin t sin f, cos t)`` on a uniform
    grid of ``t`` in [0, pi] and ``f`` in [0, 2 pi]. A cell is marked when the
    REUR bound exceeds the improved bound by more than ``REGION_MARGIN``.
    """
    n_theta, n_varphi = grid
    if n_theta < 2 or n_varphi < 2:
        raise ValidationError("grid needs at least 2 steps per axis")
    if not 0.0 <= radius <= 1.0:
        raise ValidationError("radius must lie in [0, 1]")
    pair = MeasurementPair(Observable(p), Observable(q))
    theta = np.linspace(0.0, math.pi, n_theta)
    varphi = np.linspace(0.0, 2 * math.pi, n_varphi)
    t, f = np.meshgrid(theta, varphi, indexing="ij")
    rho = QubitState.from_angles(t, f, radius)
    lhs = np.asarray(lhs_reur(pair, rho, SHANNON))
    reur = np.asarray(reur_bound(pair, rho, SHANNON))
    improved = np.asarray(improved_mu_bound(pair, rho))
    return RegionMask(theta, varphi, radius, lhs, reur, improved, reur > improved + REGION_MARGIN)


# ---------------------------------------------------------------------------
# serialisation


def fmt(x) -> str:
    """17 significant digits; ``inf`` for infinity; empty for undefined."""
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, str):
        return x
    x = float(x)
    if math.isnan(x):
        return ""
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".17g")


def record_row(rec: ScanRecord) -> list[str]:
    d = asdict(rec)
    row = [fmt(d[c]) for c in CSV_COLUMNS[:-9]]
    return row + [fmt(v) for v in (*rec.p, *rec.q, *rec.r)]


def write_csv(records, out) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for rec in records:
        writer.writerow(record_row(rec))


def records_csv(records) -> str:
    buf = io.StringIO()
    write_csv(records, buf)
    return buf.getvalue()


def _json_value(x):
    if isinstance(x, float):
        if math.isnan(x):
            return None
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
    return x


def record_json(rec: ScanRecord) -> dict:
    return {k: (list(v) if isinstance(v, tuple) else _json_value(v)) for k, v in asdict(rec).items()}


REGION_COLUMNS = ["theta", "varphi", "radius", "lhs", "bound_t1", "bound_eq45", "tighter"]


def write_region_csv(region: RegionMask, out) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(REGION_COLUMNS)
    for i, t in enumerate(region.theta):
        for j, f in enumerate(region.varphi):
            writer.writerow([
                fmt(t), fmt(f), fmt(region.radius), fmt(region.lhs[i, j]),
                fmt(region.reur[i, j]), fmt(region.improved[i, j]), fmt(bool(region.tighter[i, j])),
            ])
