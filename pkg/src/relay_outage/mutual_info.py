"""Per-hop mutual information for full- and half-duplex MIMO links.

Full-duplex mutual information through a self-interfering relay is

    I = log2 det(I + rho*Wbar + eta*W) - log2 det(I + rho*Wbar)

with ``W`` the desired-link and ``Wbar`` the self-interference Gram
matrices.  The additive form above is the numerically stable rearrangement
of the matrix-quotient expression; no inversion is ever performed.

The log-determinant of the two-matrix sum admits eigenvalue-pairing
bounds: with both spectra sorted descending, pairing same ranks gives a
lower bound and pairing opposite ranks an upper bound on
``log2 det(I + rho*Wbar + eta*W)``.  Their midpoint is the approximation
used for moment estimation; sampled moments feed the Gaussian outage
closed form in :mod:`relay_outage.outage`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .randmat import descending_spectra, receive_gram, sample_channels
from .rng import CHUNK_SIZE, run_chunks
from .wishart_stats import LN2, logdet_from_spectrum

# Half-duplex spends half the channel uses per hop on each phase.
HD_TIME_SHARE = 0.5

MIN_MOMENT_SAMPLES = 100


class DuplexMode(Enum):
    FULL_DUPLEX = "fd"
    HALF_DUPLEX = "hd"

    @classmethod
    def parse(cls, text: str) -> "DuplexMode":
        for mode in cls:
            if mode.value == text:
                return mode
        raise ValueError(f"unknown duplex mode {text!r} (expected 'fd' or 'hd')")


@dataclass(frozen=True)
class HopConfig:
    """Antenna counts and power parameters of one hop.

    ``snr_db`` is the desired-link SNR; ``rsi_snr_db`` the residual
    self-interference power ratio at the receiving node (``None`` means no
    self-interference).  ``rsi_tx_antennas`` is the antenna count of the
    interfering transmitter (the next stage); defaults to ``tx_antennas``.
    """

    tx_antennas: int
    rx_antennas: int
    snr_db: float
    rsi_snr_db: float | None = None
    rsi_tx_antennas: int | None = None

    def __post_init__(self) -> None:
        if self.tx_antennas < 1 or self.rx_antennas < 1:
            raise ValueError(
                f"antenna counts must be >= 1, got "
                f"{self.tx_antennas}x{self.rx_antennas}"
            )
        if self.rsi_tx_antennas is not None and self.rsi_tx_antennas < 1:
            raise ValueError(
                f"rsi_tx_antennas must be >= 1, got {self.rsi_tx_antennas}"
            )

    @property
    def eta(self) -> float:
        """Per-antenna power ratio of the desired link."""
        return 10.0 ** (self.snr_db / 10.0) / self.tx_antennas

    @property
    def rho(self) -> float:
        """Per-antenna power ratio of the self-interference link (0 if none)."""
        if self.rsi_snr_db is None:
            return 0.0
        m_next = self.rsi_tx_antennas or self.tx_antennas
        return 10.0 ** (self.rsi_snr_db / 10.0) / m_next

    @property
    def has_rsi(self) -> bool:
        return self.rsi_snr_db is not None


@dataclass(frozen=True)
class HopMoments:
    """Sample mean and unbiased variance of one hop's mutual information."""

    mean: float
    variance: float
    n_samples: int

    def __post_init__(self) -> None:
        if self.variance < 0.0:
            raise ValueError(f"variance must be >= 0, got {self.variance}")
        if self.n_samples < 1:
            raise ValueError(f"n_samples must be >= 1, got {self.n_samples}")

    @property
    def std(self) -> float:
        return math.sqrt(self.variance)

    @property
    def std_error_mean(self) -> float:
        return math.sqrt(self.variance / self.n_samples)


def logdet2_psd(a: np.ndarray) -> np.ndarray | float:
    """``log2 det(A)`` for Hermitian positive definite ``A`` via Cholesky.

    This is the production log-det path; ``logdet2_psd_eig`` is the
    eigenvalue reference route.  Stacked matrices allowed.
    """
    chol = np.linalg.cholesky(np.asarray(a))
    diag = np.diagonal(chol, axis1=-2, axis2=-1).real
    out = 2.0 * np.log(diag).sum(axis=-1) / LN2
    return out if out.ndim else float(out)


def logdet2_psd_eig(a: np.ndarray) -> np.ndarray | float:
    """Eigenvalue route for ``log2 det(A)``; reference for the Cholesky path."""
    vals = np.linalg.eigvalsh(np.asarray(a))
    out = np.log(vals).sum(axis=-1) / LN2
    return out if out.ndim else float(out)


def _check_scales(eta: float, rho: float) -> None:
    if eta < 0.0:
        raise ValueError(f"eta must be non-negative, got {eta}")
    if rho < 0.0:
        raise ValueError(f"rho must be non-negative, got {rho}")


def _eye_like(w: np.ndarray) -> np.ndarray:
    return np.eye(w.shape[-1])


def mi_fd_exact(
    w: np.ndarray, wbar: np.ndarray, eta: float, rho: float
) -> np.ndarray | float:
    """Exact full-duplex mutual information in bits (stacked inputs allowed).

    ``w`` and ``wbar`` are the receive-side Gram forms of the desired and
    self-interference channels and must share the matrix dimension.
    """
    _check_scales(eta, rho)
    w = np.asarray(w)
    wbar = np.asarray(wbar)
    if w.shape[-1] != w.shape[-2]:
        raise ValueError(f"w must be square, got shape {w.shape}")
    if wbar.shape[-2:] != w.shape[-2:]:
        raise ValueError(
            f"w and wbar dimensions differ: {w.shape[-2:]} vs {wbar.shape[-2:]}"
        )
    base = _eye_like(w) + rho * wbar
    return logdet2_psd(base + eta * w) - logdet2_psd(base)


def mi_hd_exact(w: np.ndarray, eta: float) -> np.ndarray | float:
    """Half-duplex mutual information: time-shared ``log2 det(I + eta W)``."""
    _check_scales(eta, 0.0)
    w = np.asarray(w)
    if w.shape[-1] != w.shape[-2]:
        raise ValueError(f"w must be square, got shape {w.shape}")
    return HD_TIME_SHARE * logdet2_psd(_eye_like(w) + eta * w)


def _pairing_bounds(
    alpha: np.ndarray, beta: np.ndarray, eta: float, rho: float
) -> tuple[np.ndarray, np.ndarray]:
    lower = np.log1p(rho * alpha + eta * beta).sum(axis=-1) / LN2
    upper = np.log1p(rho * alpha + eta * beta[..., ::-1]).sum(axis=-1) / LN2
    return lower, upper


def _check_descending(name: str, values: np.ndarray) -> None:
    if values.shape[-1] > 1 and np.any(np.diff(values, axis=-1) > 0.0):
        raise ValueError(f"{name} spectrum must be sorted descending")


def fiedler_bounds(
    alpha: np.ndarray, beta: np.ndarray, eta: float, rho: float
) -> tuple[np.ndarray | float, np.ndarray | float]:
    """Pairing bounds on ``log2 det(I + rho*Wbar + eta*W)`` in bits.

    ``alpha`` (spectrum of ``Wbar``) and ``beta`` (spectrum of ``W``) must
    be descending and of equal length.  Same-rank pairing gives the lower
    bound, opposite-rank pairing the upper bound.
    """
    _check_scales(eta, rho)
    alpha = np.asarray(alpha, dtype=float)
    beta = np.asarray(beta, dtype=float)
    if alpha.shape != beta.shape:
        raise ValueError(
            f"spectra must have matching shapes, got {alpha.shape} vs {beta.shape}"
        )
    _check_descending("alpha", alpha)
    _check_descending("beta", beta)
    lower, upper = _pairing_bounds(alpha, beta, eta, rho)
    if lower.ndim:
        return lower, upper
    return float(lower), float(upper)


def midpoint_logdet(
    alpha: np.ndarray, beta: np.ndarray, eta: float, rho: float
) -> np.ndarray | float:
    """Midpoint of the pairing bounds; the log-det approximation in bits."""
    lower, upper = fiedler_bounds(alpha, beta, eta, rho)
    return 0.5 * (lower + upper)


def mi_fd_approx(
    alpha: np.ndarray, beta: np.ndarray, eta: float, rho: float
) -> np.ndarray | float:
    """Approximate full-duplex mutual information from the two spectra.

    Midpoint approximation of the sum log-det minus the exact
    self-interference term.  May come out slightly negative for extreme
    samples; deliberately not clamped, since clamping would bias the
    moment estimates built on it.
    """
    return midpoint_logdet(alpha, beta, eta, rho) - logdet_from_spectrum(alpha, rho)


@dataclass(frozen=True)
class PairedLogdetSamples:
    """Per-realization log-det statistics from common channel draws.

    ``exact`` is ``log2 det(I + rho*Wbar + eta*W)`` by Cholesky; ``lower``
    and ``upper`` the pairing bounds from the sampled spectra;
    ``rsi_logdet`` the interference-only term ``log2 det(I + rho*Wbar)``.
    """

    exact: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    rsi_logdet: np.ndarray

    @property
    def midpoint(self) -> np.ndarray:
        return 0.5 * (self.lower + self.upper)

    @property
    def approx_mi(self) -> np.ndarray:
        return self.midpoint - self.rsi_logdet

    @property
    def exact_mi(self) -> np.ndarray:
        return self.exact - self.rsi_logdet


def sample_logdet_pairs(
    n_samples: int,
    rx_antennas: int,
    tx_antennas: int,
    eta: float,
    rho: float,
    rng: np.random.Generator,
    rsi_tx_antennas: int | None = None,
    chunk_size: int = CHUNK_SIZE,
) -> PairedLogdetSamples:
    """Sample exact and bound-based log-det statistics over common draws.

    Per chunk the desired channel is drawn first, then (only if
    ``rho > 0``) the interference channel, so runs that differ only in the
    interference level share the desired-channel realizations.
    """
    _check_scales(eta, rho)
    m_rsi = rsi_tx_antennas or tx_antennas
    eye = np.eye(rx_antennas)

    def chunk(stream: np.random.Generator, count: int):
        h = sample_channels(count, rx_antennas, tx_antennas, stream)
        w = receive_gram(h)
        beta = descending_spectra(w)
        if rho > 0.0:
            hbar = sample_channels(count, rx_antennas, m_rsi, stream)
            wbar = receive_gram(hbar)
            alpha = descending_spectra(wbar)
            arg = eye + rho * wbar + eta * w
        else:
            alpha = np.zeros_like(beta)
            arg = eye + eta * w
        exact = logdet2_psd(arg)
        lower, upper = _pairing_bounds(alpha, beta, eta, rho)
        rsi_term = logdet_from_spectrum(alpha, rho)
        return exact, lower, upper, rsi_term

    fields = run_chunks(n_samples, rng, chunk, chunk_size)
    return PairedLogdetSamples(*fields)


def hop_mi_samples(
    hop: HopConfig,
    mode: DuplexMode,
    n_samples: int,
    rng: np.random.Generator,
    chunk_size: int = CHUNK_SIZE,
) -> np.ndarray:
    """Per-realization mutual information samples for one hop.

    Full-duplex samples use the midpoint approximation (the quantity whose
    Gaussian moments drive the closed-form outage); half-duplex samples
    are exact.  Half-duplex ignores any configured self-interference.
    """
    rho = hop.rho if mode is DuplexMode.FULL_DUPLEX else 0.0
    pairs = sample_logdet_pairs(
        n_samples,
        hop.rx_antennas,
        hop.tx_antennas,
        hop.eta,
        rho,
        rng,
        rsi_tx_antennas=hop.rsi_tx_antennas,
        chunk_size=chunk_size,
    )
    if mode is DuplexMode.HALF_DUPLEX:
        return HD_TIME_SHARE * pairs.approx_mi
    return pairs.approx_mi


def estimate_hop_moments(
    hop: HopConfig,
    mode: DuplexMode,
    n_samples: int,
    rng: np.random.Generator,
    chunk_size: int = CHUNK_SIZE,
) -> HopMoments:
    """Monte Carlo mean and variance of one hop's mutual information.

    The midpoint and interference terms inside each sample share the same
    interference spectrum, so their correlation is kept intact.
    """
    if n_samples < MIN_MOMENT_SAMPLES:
        raise ValueError(
            f"need at least {MIN_MOMENT_SAMPLES} samples for moment "
            f"estimation, got {n_samples}"
        )
    samples = hop_mi_samples(hop, mode, n_samples, rng, chunk_size)
    return HopMoments(
        mean=float(samples.mean()),
        variance=float(samples.var(ddof=1)),
        n_samples=n_samples,
    )
