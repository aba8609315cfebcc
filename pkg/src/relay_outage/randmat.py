"""Complex Gaussian channel sampling and Wishart eigen-spectra.

Channel matrices are dense complex arrays whose entries are i.i.d.
circularly symmetric complex Gaussian with zero mean and unit total
variance (real and imaginary parts each have variance 1/2), so the mean
squared magnitude of an entry is 1.  All sampling is a pure function of
the generator handed in; see :mod:`relay_outage.rng` for the stream
addressing scheme.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Relative tolerance for the Hermitian-symmetry check.
SYMMETRY_RTOL = 1e-10
# Eigenvalues of a PSD Gram matrix may come back slightly negative from
# the solver; anything above -PSD_RTOL * max(1, |lambda|_max) is clamped
# to zero, anything below is an error.
PSD_RTOL = 1e-8

_SQRT_HALF = np.sqrt(0.5)


@dataclass(frozen=True)
class WishartParams:
    """Order ``m`` and degrees of freedom ``p`` of a Gram-form sample.

    ``m`` is the smaller of the two channel dimensions, ``p`` the larger.
    """

    m: int
    p: int

    def __post_init__(self) -> None:
        if not (1 <= self.m <= self.p):
            raise ValueError(f"need p >= m >= 1, got m={self.m}, p={self.p}")

    @property
    def d(self) -> int:
        """Dimension surplus ``p - m``."""
        return self.p - self.m

    @classmethod
    def from_shape(cls, rows: int, cols: int) -> "WishartParams":
        return cls(m=min(rows, cols), p=max(rows, cols))


def sample_channels(
    n: int, rows: int, cols: int, rng: np.random.Generator
) -> np.ndarray:
    """Draw ``n`` independent ``rows x cols`` channel matrices.

    Draw order is fixed: one block of real parts, then one block of
    imaginary parts, each of shape ``(n, rows, cols)``.
    """
    if rows < 1 or cols < 1:
        raise ValueError(f"channel dimensions must be positive, got {rows}x{cols}")
    if n < 1:
        raise ValueError(f"need at least one sample, got {n}")
    real = rng.standard_normal((n, rows, cols))
    imag = rng.standard_normal((n, rows, cols))
    return _SQRT_HALF * (real + 1j * imag)


def sample_channel(rows: int, cols: int, rng: np.random.Generator) -> np.ndarray:
    """Draw a single Rayleigh-fading channel matrix."""
    return sample_channels(1, rows, cols, rng)[0]


def wishart_from_channel(h: np.ndarray) -> tuple[np.ndarray, WishartParams]:
    """Gram form of a channel matrix: ``H H^+`` if rows <= cols else ``H^+ H``.

    Returns the ``m x m`` Hermitian PSD matrix (``m`` the smaller channel
    dimension) together with its :class:`WishartParams`.
    """
    h = np.asarray(h)
    if h.ndim != 2 or h.shape[0] < 1 or h.shape[1] < 1:
        raise ValueError(f"expected a non-empty 2-d matrix, got shape {h.shape}")
    rows, cols = h.shape
    if rows <= cols:
        w = h @ h.conj().T
    else:
        w = h.conj().T @ h
    return w, WishartParams.from_shape(rows, cols)


def receive_gram(h: np.ndarray) -> np.ndarray:
    """Receive-side Gram form ``H H^+`` (stacked matrices allowed).

    Always ``N x N`` for an ``N x M`` channel, regardless of which
    dimension is smaller; rank-deficient when ``N > M``.
    """
    h = np.asarray(h)
    return h @ np.conj(np.swapaxes(h, -1, -2))


def _clamped_descending(vals: np.ndarray) -> np.ndarray:
    """Validate PSD within tolerance, clamp round-off negatives, sort descending."""
    scale = np.maximum(np.abs(vals).max(axis=-1), 1.0)
    tol = PSD_RTOL * scale
    worst = (vals.min(axis=-1) + tol).min()
    if worst < 0.0:
        raise ValueError(
            f"matrix is not positive semidefinite within tolerance "
            f"(eigenvalue undershoot {worst:.3e})"
        )
    return np.maximum(vals[..., ::-1], 0.0)


def hermitian_spectrum(w: np.ndarray) -> np.ndarray:
    """Eigenvalues of a Hermitian PSD matrix, descending.

    The matrix must be Hermitian within ``SYMMETRY_RTOL`` (relative to its
    largest entry).  Round-off negatives within the PSD tolerance are
    clamped to zero; larger negatives raise ``ValueError``.  Solver
    non-convergence surfaces as ``numpy.linalg.LinAlgError``.
    """
    w = np.asarray(w)
    if w.ndim != 2 or w.shape[0] != w.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {w.shape}")
    asym = np.abs(w - w.conj().T).max()
    scale = max(np.abs(w).max(), 1.0)
    if asym > SYMMETRY_RTOL * scale:
        raise ValueError(
            f"matrix is not Hermitian within tolerance "
            f"(asymmetry {asym:.3e}, scale {scale:.3e})"
        )
    return _clamped_descending(np.linalg.eigvalsh(w))


def descending_spectra(ws: np.ndarray) -> np.ndarray:
    """Spectra of a stack of Hermitian PSD matrices, descending per matrix.

    Fast path for matrices that are Hermitian by construction (Gram
    forms); skips the symmetry check but keeps the PSD clamp.
    """
    return _clamped_descending(np.linalg.eigvalsh(np.asarray(ws)))
