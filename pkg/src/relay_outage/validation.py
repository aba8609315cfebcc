"""Self-checks wiring the analytical paths against independent oracles.

Each check compares one production code path against a route that does
not share its implementation: quadrature of the normal tail for the
Q-function, exact per-sample determinants for the pairing bounds, the
scalar Rayleigh closed form for the half-duplex single-antenna chain, and
Monte Carlo means for the spectral quadrature.  ``relay-outage validate``
runs them all and reports one line per check.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from . import outage as _outage
from .mutual_info import DuplexMode, HopConfig, sample_logdet_pairs
from .outage import NetworkConfig, sample_min_mutual_info
from .randmat import WishartParams, descending_spectra, receive_gram, sample_channels
from .rng import STREAM_VALIDATION, substream
from .scenario import DEFAULT_SEED
from .wishart_stats import (
    expected_logdet,
    integration_cutoff,
    marginal_eigen_density,
)

SANDWICH_PAIRS = ((10.0, 1.0), (1.0, 10.0), (100.0, 0.1))
DENSITY_GRID = ((1, 1), (2, 3), (4, 6), (8, 12))
MOMENT_CASES = ((1, 1, 1.0), (2, 2, 10.0), (2, 4, 100.0))


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    measured: float
    limit: float
    detail: str
    seconds: float


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple[CheckResult, ...]
    seconds: float

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def failures(self) -> list[str]:
        return [check.name for check in self.checks if not check.passed]


def _timed(fn) -> CheckResult:
    start = time.perf_counter()
    name, measured, limit, detail = fn()
    elapsed = time.perf_counter() - start
    return CheckResult(
        name=name,
        passed=bool(measured <= limit),
        measured=float(measured),
        limit=float(limit),
        detail=detail,
        seconds=elapsed,
    )


def _normal_tail(x: float) -> float:
    value, _ = quad(
        lambda t: math.exp(-0.5 * t * t) / math.sqrt(2.0 * math.pi), x, np.inf
    )
    return value


def check_q_function() -> tuple[str, float, float, str]:
    grid = np.linspace(-8.0, 8.0, 65)
    worst = max(abs(float(_outage.q_function(x)) - _normal_tail(x)) for x in grid)
    return "q-function", worst, 1e-12, "max |Q(x) - normal tail quadrature|, |x| <= 8"


def check_sandwich_bound(seed: int, n_samples: int) -> tuple[str, float, float, str]:
    worst = -np.inf
    for i, (eta, rho) in enumerate(SANDWICH_PAIRS):
        rng = substream(seed, STREAM_VALIDATION, 0, i)
        pairs = sample_logdet_pairs(n_samples, 2, 2, eta, rho, rng)
        worst = max(
            worst,
            float((pairs.lower - pairs.exact).max()),
            float((pairs.exact - pairs.upper).max()),
        )
    return (
        "sandwich-bound",
        worst,
        1e-9,
        f"max bound violation, {n_samples} draws x {len(SANDWICH_PAIRS)} scale pairs",
    )


def check_density_normalization() -> tuple[str, float, float, str]:
    worst = 0.0
    for m, p in DENSITY_GRID:
        params = WishartParams(m, p)
        mass, _ = quad(
            lambda lam: marginal_eigen_density(params, lam),
            0.0,
            integration_cutoff(params),
            epsabs=1e-10,
            epsrel=1e-10,
            limit=200,
        )
        worst = max(worst, abs(mass - 1.0))
    return (
        "density-normalization",
        worst,
        1e-6,
        f"max |integral f - 1| over orders {DENSITY_GRID}",
    )


def check_siso_rayleigh(seed: int, n_realizations: int) -> tuple[str, float, float, str]:
    snr = 100.0  # 20 dB
    cfg = NetworkConfig(
        hops=(HopConfig(tx_antennas=1, rx_antennas=1, snr_db=20.0),),
        mode=DuplexMode.HALF_DUPLEX,
    )
    rng = substream(seed, STREAM_VALIDATION, 1)
    samples = sample_min_mutual_info(cfg, n_realizations, rng)
    rates = np.linspace(0.5, 3.5, 10)
    worst = 0.0
    for rate in rates:
        exact = 1.0 - math.exp(-(2.0 ** (2.0 * rate) - 1.0) / snr)
        se = math.sqrt(exact * (1.0 - exact) / n_realizations)
        empirical = float(np.mean(samples < rate))
        worst = max(worst, abs(empirical - exact) / se)
    return (
        "siso-rayleigh-outage",
        worst,
        3.0,
        f"max |z| vs scalar Rayleigh closed form, {n_realizations} realizations",
    )


def check_logdet_moments(seed: int, n_samples: int) -> tuple[str, float, float, str]:
    worst = 0.0
    for i, (m, p, scale) in enumerate(MOMENT_CASES):
        params = WishartParams(m, p)
        analytic = expected_logdet(params, scale)
        rng = substream(seed, STREAM_VALIDATION, 2, i)
        spectra = descending_spectra(
            receive_gram(sample_channels(n_samples, m, p, rng))
        )
        values = np.log1p(scale * spectra).sum(axis=-1) / math.log(2.0)
        gap = abs(float(values.mean()) - analytic)
        tolerance = max(
            0.01 * analytic, 3.0 * float(values.std(ddof=1)) / math.sqrt(n_samples)
        )
        worst = max(worst, gap / tolerance)
    return (
        "logdet-moments",
        worst,
        1.0,
        "max |quadrature - MC mean| / max(1%, 3 SE) over (m, p, scale) cases",
    )


def run_validation(
    seed: int = DEFAULT_SEED,
    n_sandwich: int = 100_000,
    n_mc: int = 100_000,
    n_moments: int = 20_000,
) -> ValidationReport:
    """Run every check; all must pass for a healthy installation."""
    start = time.perf_counter()
    checks = (
        _timed(check_q_function),
        _timed(lambda: check_sandwich_bound(seed, n_sandwich)),
        _timed(check_density_normalization),
        _timed(lambda: check_siso_rayleigh(seed, n_mc)),
        _timed(lambda: check_logdet_moments(seed, n_moments)),
    )
    return ValidationReport(checks=checks, seconds=time.perf_counter() - start)
