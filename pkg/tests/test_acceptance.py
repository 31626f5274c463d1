"""Exit criteria for the package, one test per criterion.

Each test registers a one-line summary through the ``criterion`` fixture;
the lines are printed with PASS/FAIL at the end of the pytest run.
"""

import math
import subprocess
import sys
import time

import numpy as np
import pytest
from scipy import ndimage

from eur import scan, spin
from eur.bounds import (
    creur_bound,
    improved_mu_bound,
    lhs_reur,
    maassen_uffink_bound,
    reur_bound,
)
from eur.entropy import _finite_renyi, conditional_renyi, renyi_entropy
from eur.qubit import Observable, QubitState, state_to_matrix
from eur.spin import SpinScenario
from eur.successive import (
    MeasurementPair,
    conditional_probs,
    conditional_renyi_qp,
    erased_state,
    first_probs,
    second_probs,
)

ORDERS = [0.5, 1.0, 2.0, 5.0, math.inf]
SLACK_TOL = 1e-10
EXACT_TOL = 1e-12
N_SAMPLES = 100_000
LN2 = math.log(2)


def draw(seed, n):
    rng = np.random.default_rng(seed)
    pair = scan.random_pairs(rng, n)
    rho = scan.random_states(rng, n)
    return pair, rho


@pytest.fixture(scope="module")
def samples():
    return draw(2024, N_SAMPLES)


def k_closed_form(m, alpha):
    """Entropy of K = (1 +- m)/2 written out per branch, independent of eur.entropy."""
    k = np.stack([(1 + m) / 2, (1 - m) / 2], -1)
    if alpha == 1:
        safe = np.where(k > 0, k, 1.0)
        return -np.sum(np.where(k > 0, k * np.log(safe), 0.0), -1)
    if math.isinf(alpha):
        return -np.log(k.max(-1))
    return np.log(np.sum(k**alpha, -1)) / (1 - alpha)


def test_01_reur_inequality(samples, criterion):
    pair, rho = samples
    start = time.perf_counter()
    worst = min(float(np.min(np.asarray(lhs_reur(pair, rho, a)) - reur_bound(pair, rho, a))) for a in ORDERS)
    elapsed = time.perf_counter() - start
    criterion(1, f"REUR bound over 1e5 samples x 5 orders: min slack {worst:+.2e} (>= -1e-10), {elapsed:.2f}s (< 10s)")
    assert worst >= -SLACK_TOL
    assert elapsed < 10.0


def test_02_reur_equality_locus(criterion):
    rng = np.random.default_rng(7)
    n = 1000
    pair = scan.random_pairs(rng, n)
    sign = np.where(rng.random(n) < 0.5, -1.0, 1.0)[:, None]
    rho = QubitState(sign * pair.p.axis)
    worst = max(float(np.max(np.abs(np.asarray(lhs_reur(pair, rho, a)) - reur_bound(pair, rho, a)))) for a in ORDERS)
    criterion(2, f"REUR saturation at r = +-p, 1e3 samples: max |slack| {worst:.2e} (<= 1e-10)")
    assert worst <= SLACK_TOL


def test_03_conditional_state_independence(criterion):
    rng = np.random.default_rng(8)
    fixed = scan.random_pairs(rng, 100)
    spread = closed = 0.0
    for i in range(100):
        p = np.tile(fixed.p.axis[i], (100, 1))
        q = np.tile(fixed.q.axis[i], (100, 1))
        pair = MeasurementPair(Observable(p), Observable(q))
        rho = scan.random_states(rng, 100)
        m = float(fixed.m[i])
        for a in ORDERS:
            values = np.asarray(conditional_renyi_qp(pair, rho, a))
            spread = max(spread, float(np.ptp(values)))
            closed = max(closed, float(np.max(np.abs(values - k_closed_form(np.array(m), a)))))
    criterion(3, f"R(Q|P) over 100 pairs x 100 states: spread {spread:.1e}, closed-form residual {closed:.1e} (<= 1e-12)")
    assert spread <= EXACT_TOL
    assert closed <= EXACT_TOL


def test_04_creur_inequality(samples, criterion):
    pair, rho = samples
    worst = below = math.inf
    for a in ORDERS:
        lhs = np.asarray(lhs_reur(pair, rho, a))
        t1 = np.asarray(reur_bound(pair, rho, a))
        t3 = np.asarray(creur_bound(pair, a))
        worst = min(worst, float(np.min(lhs - t3)))
        below = min(below, float(np.min(t1 - t3)))
    rng = np.random.default_rng(9)
    eq_pair = scan.random_pairs(rng, 1000)
    eigen = QubitState(eq_pair.p.axis)
    eq = max(
        float(np.max(np.abs(np.asarray(lhs_reur(eq_pair, eigen, a)) - creur_bound(eq_pair, a)))) for a in ORDERS
    )
    criterion(
        4,
        f"CREUR bound: min slack {worst:+.2e}; eigenstate |slack| {eq:.1e}; "
        f"min(reur - creur) {below:+.1e}",
    )
    assert worst >= -SLACK_TOL
    assert eq <= SLACK_TOL
    assert below >= -SLACK_TOL


def test_05_corollary_forms(criterion):
    pair, rho = draw(10, 10_000)
    radius = np.linalg.norm(rho.r, axis=-1)
    m = pair.m

    def h(x):
        out = 0.0
        for v in ((1 + x) / 2, (1 - x) / 2):
            out = out - np.where(v > 0, v * np.log(np.where(v > 0, v, 1.0)), 0.0)
        return out

    shannon = h(radius) + h(m * radius)
    minent = -np.log(np.maximum((1 + radius) / 2, (1 - radius) / 2) * np.maximum((1 + m * radius) / 2, (1 - m * radius) / 2))
    d1 = float(np.max(np.abs(np.asarray(reur_bound(pair, rho, 1)) - shannon)))
    d2 = float(np.max(np.abs(np.asarray(reur_bound(pair, rho, math.inf)) - minent)))
    criterion(5, f"Shannon / min-entropy specialisations on 1e4 samples: residuals {d1:.1e}, {d2:.1e} (<= 1e-12)")
    assert d1 <= EXACT_TOL
    assert d2 <= EXACT_TOL


@pytest.fixture(scope="module")
def spin_grid():
    return SpinScenario.grid(
        np.linspace(0, math.pi / 2, 50), np.linspace(0, math.pi, 50), np.linspace(0, 2 * math.pi, 50)
    )


def test_06_oracle_equivalence(spin_grid, criterion):
    s = spin_grid
    pair, rho = spin.to_generic(s)
    residuals = {
        "first": np.abs(spin.closed_form_first(s) - first_probs(pair, rho)).max(),
        "erased": np.abs(spin.closed_form_erased_matrix(s) - state_to_matrix(erased_state(pair, rho))).max(),
        "second": np.abs(spin.closed_form_second(s) - second_probs(pair, rho)).max(),
        "conditional": np.abs(spin.closed_form_conditionals(s) - conditional_probs(pair)).max(),
    }
    for a in [0.0, *ORDERS]:
        residuals[f"R(X|Y) a={a:g}"] = np.abs(
            np.asarray(spin.closed_form_conditional_renyi(s, a)) - conditional_renyi_qp(pair, rho, a)
        ).max()
    worst = max(residuals, key=residuals.get)
    criterion(6, f"spin closed forms vs generic pipeline on 50^3 grid: max residual {residuals[worst]:.1e} ({worst}) (<= 1e-12)")
    assert all(v <= EXACT_TOL for v in residuals.values()), residuals


def test_07_creur_ratio_identity(spin_grid, criterion):
    worst, defined = 0.0, 0
    for a in [0.0, *ORDERS]:
        r = spin.ratios(spin_grid, a)
        ok = ~np.isnan(r.creur)
        defined += int(ok.sum())
        worst = max(worst, float(np.max(np.abs(r.creur[ok] - 1.0))))
    criterion(7, f"CREUR ratio over {defined} defined grid points: max |ratio - 1| {worst:.1e} (<= 1e-12)")
    assert defined > 0
    assert worst <= EXACT_TOL


def test_08_shannon_baselines(samples, criterion):
    pair, rho = samples
    lhs = np.asarray(lhs_reur(pair, rho, 1))
    mu = float(np.min(lhs - maassen_uffink_bound(pair)))
    improved = float(np.min(lhs - improved_mu_bound(pair, rho)))
    criterion(8, f"Maassen-Uffink / improved bound on 1e5 samples: min slack {mu:+.2e}, {improved:+.2e} (>= -1e-10)")
    assert mu >= -SLACK_TOL
    assert improved >= -SLACK_TOL


def test_09_region_scan(criterion):
    start = time.perf_counter()
    region = scan.region_fig4(
        (0.1, 0.4, math.sqrt(0.83)), (0.15, 0.5, math.sqrt(0.7275)), grid=(361, 721)
    )
    elapsed = time.perf_counter() - start
    tighter = region.tighter
    interior = tighter[1:-1, 1:-1]
    n_components = int(ndimage.label(interior)[1])
    criterion(
        9,
        f"bound-comparison region on 361x721 pure states: {int(tighter.sum())} tighter cells, "
        f"{int((~tighter).sum())} not; {n_components} 4-connected component(s) (need 1); {elapsed:.2f}s (< 5s)",
    )
    assert tighter.any()
    assert (~tighter).any()
    assert elapsed < 5.0
    assert n_components == 1


@pytest.mark.parametrize("varphi", [0.0, math.pi, 2 * math.pi])
def test_10_fig1_endpoints(varphi, criterion):
    s = SpinScenario(0.0, math.pi / 2, varphi)
    worst = max(abs(float(spin.ratios(s, a).reur) - 1.0) for a in [0.0, 0.25, *ORDERS, 20.0])
    criterion(10, f"figure 1 endpoint varphi={varphi:.4f}: max |REUR ratio - 1| over orders {worst:.1e} (<= 1e-10)")
    assert worst <= SLACK_TOL


def test_11_entropy_units(criterion):
    all_orders = [0.0, 0.1, *ORDERS, 10.0]
    uniform = max(abs(renyi_entropy([0.5, 0.5], a) - LN2) for a in all_orders)
    deterministic = max(renyi_entropy([1.0, 0.0], a) for a in all_orders if a != 0)
    deterministic = max(deterministic, renyi_entropy([1.0, 0.0], 0))

    rng = np.random.default_rng(11)
    dists = rng.dirichlet(np.ones(4) * 0.7, size=10_000)
    alphas = [0.1, 0.3, 0.5, 0.9, 1.1, 2.0, 3.0, 5.0, 10.0]
    values = np.stack([np.asarray(renyi_entropy(dists, a)) for a in alphas])
    mono = float(np.min(values[:-1] - values[1:]))

    sane = dists[(dists >= 1e-3).all(axis=1)]
    shannon = np.asarray(renyi_entropy(sane, 1))
    limit = max(float(np.max(np.abs(_finite_renyi(sane, a) - shannon))) for a in (1 - 1e-6, 1 + 1e-6))
    cond = abs(conditional_renyi([0.5, 0.5], [[0.5, 0.5], [0.5, 0.5]], 2) - LN2)
    criterion(
        11,
        f"entropy units: uniform err {uniform:.1e}, deterministic {deterministic:.1e}, "
        f"monotonicity min step {mono:+.1e} (>= -1e-12), Shannon-limit residual {limit:.1e} (<= 1e-5)",
    )
    assert uniform <= 1e-15 and cond <= 1e-15
    assert deterministic == 0.0
    assert mono >= -1e-12
    assert limit <= 1e-5


def test_12_verify_determinism(tmp_path, criterion):
    cmd = [sys.executable, "-m", "eur", "verify", "--seed", "7", "--json"]
    first = subprocess.run(cmd, capture_output=True, check=False)
    second = subprocess.run(cmd, capture_output=True, check=False)
    same = first.stdout == second.stdout
    criterion(
        12,
        f"`eur verify --seed 7 --json` twice: byte-identical={same}, "
        f"exit codes {first.returncode}/{second.returncode}, {len(first.stdout)} bytes",
    )
    assert first.returncode == 0 and second.returncode == 0, first.stderr.decode()
    assert same
    assert len(first.stdout) > 0
