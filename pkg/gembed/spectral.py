"""Triple correlation and bispectrum on Z_n, inverted up to cyclic shift."""

import logging
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .error import (
    ConditionViolated,
    FactorizationMismatch,
    InconsistentBispectrum,
    LengthMismatch,
    NegativeMagnitude,
)
from .util.config import DEFAULTS

log = logging.getLogger("gembed.spectral")

FACTORIZATION_TOL = 1e-8
REALNESS_TOL = 1e-8


def _fourier_matrix(n: int, sign: float = 1.0) -> np.ndarray:
    k = np.arange(n)
    # Reduced exponents keep every angle inside [0, 2π)
    return np.exp(sign * 2j * np.pi * (np.outer(k, k) % n) / n)


def _as_signal(z: Any) -> np.ndarray:
    vec = np.asarray(z, dtype=float)
    if vec.ndim != 1 or not len(vec):
        raise LengthMismatch(
            f"Signal must be a non-empty vector, got shape {vec.shape}")

    return vec


@dataclass(frozen=True)
class Spectrum:
    """ẑ(k) = Σ_g z_g e^{2πikg/n}."""

    coeffs: np.ndarray

    @property
    def n(self) -> int:
        return len(self.coeffs)


def dft(z: Any) -> Spectrum:
    vec = _as_signal(z)
    return Spectrum(_fourier_matrix(len(vec)) @ vec)


def inverse_dft(spectrum: Spectrum) -> np.ndarray:
    """Complex inverse of :func:`dft`; callers take the real part."""

    return _fourier_matrix(spectrum.n, -1.0) @ spectrum.coeffs / spectrum.n


def _circulant(vec: np.ndarray) -> np.ndarray:
    # row g holds z shifted by g: S[g, σ] = z[σ + g]
    n = len(vec)
    return vec[(np.arange(n)[:, None] + np.arange(n)[None, :]) % n]


def triple_correlation(z: Any) -> np.ndarray:
    """A(g, h) = Σ_σ z_σ z_{σ+g} z_{σ+h}, indices mod n."""

    vec = _as_signal(z)
    shifts = _circulant(vec)
    return (shifts * vec[None, :]) @ shifts.T


@dataclass(frozen=True)
class Bispectrum:
    """B(k1, k2), taken as the 2-D transform of the triple correlation.

    ``direct`` holds the factorized form ẑ(k1)ẑ(k2)conj(ẑ(k1+k2)).
    """

    values: np.ndarray
    direct: np.ndarray = field(repr=False)

    @property
    def n(self) -> int:
        return len(self.values)


def factorized_bispectrum(spectrum: Spectrum) -> np.ndarray:
    c = spectrum.coeffs
    n = spectrum.n
    k = np.arange(n)
    return c[:, None] * c[None, :] * np.conj(c[(k[:, None] + k[None, :]) % n])


def bispectrum(z: Any) -> Bispectrum:
    vec = _as_signal(z)
    w = _fourier_matrix(len(vec))
    values = w @ triple_correlation(vec) @ w.T
    direct = factorized_bispectrum(dft(vec))

    scale = max(float(np.abs(direct).max()), 1e-300)
    gap = float(np.abs(values - direct).max())
    if gap > FACTORIZATION_TOL * scale:
        raise FactorizationMismatch(
            f"Bispectrum paths differ by {gap:.3e} (scale {scale:.3e})")

    return Bispectrum(values=values, direct=direct)


def condition_tolerance(b: np.ndarray, z0: complex,
                        cond_tol: float = DEFAULTS["cond_tol"]) -> float:
    """cond_tol · (|ẑ(0)|/n + max_k |B(0, k)|^{1/3})."""

    n = len(b)
    return cond_tol * (abs(z0) / n + float(np.abs(b[0]).max())**(1.0 / 3.0))


def invert_bispectrum(b: Any, cond_tol: float = DEFAULTS["cond_tol"]) -> np.ndarray:
    """Recovers a real signal whose bispectrum is ``b``, unique up to cyclic shift.

    ẑ(1) is first taken real and non-negative, then rotated by the phase that closes the
    recurrence at k = n, which keeps the output real.
    """

    values = b.values if isinstance(b, Bispectrum) else np.asarray(b, dtype=complex)
    n = len(values)
    if values.shape != (n, n) or not n:
        raise LengthMismatch(
            f"Bispectrum must be a square table, got shape {values.shape}")

    # Entries at the table's rounding-noise level are exact zeros
    noise = n**3 * np.finfo(float).eps * float(np.abs(values).max())
    values = np.where(np.abs(values) <= noise, 0.0, values)

    z0 = float(np.cbrt(values[0, 0].real))
    tol = condition_tolerance(values, z0, cond_tol)
    if abs(z0) <= tol:
        raise ConditionViolated(0, abs(z0), tol)

    coeffs = np.zeros(n, dtype=complex)
    coeffs[0] = z0
    if n == 1:
        return np.array([z0])

    mag_sq = values[0, 1].real / z0
    if mag_sq < -tol:
        raise NegativeMagnitude(f"B(0,1)/z(0) = {mag_sq:.3e} is negative")
    z1 = np.sqrt(max(mag_sq, 0.0))
    if z1 <= tol:
        raise ConditionViolated(1, float(z1), tol)
    coeffs[1] = z1

    for k in range(1, n - 1):
        coeffs[k + 1] = np.conj(values[k, 1] / (coeffs[k] * z1))
        if abs(coeffs[k + 1]) <= tol:
            raise ConditionViolated(k + 1, float(abs(coeffs[k + 1])), tol)

    closing = np.conj(values[n - 1, 1] / (coeffs[n - 1] * z1))
    phase = -np.angle(closing / z0) / n
    coeffs *= np.exp(1j * phase * np.arange(n))

    signal = inverse_dft(Spectrum(coeffs))
    residue = float(np.abs(signal.imag).max())
    limit = REALNESS_TOL * max(1.0, float(np.abs(signal).max()))
    if residue > limit:
        raise InconsistentBispectrum(residue, limit)

    log.debug("Inverted bispectrum of size %d, imaginary residue %.3e", n, residue)
    return signal.real.copy()


def cyclic_shift(z: Any, s: int) -> np.ndarray:
    """``out[g] = z[g + s]``."""

    vec = _as_signal(z)
    return np.roll(vec, -s)


def shift_distance(z: Any, w: Any) -> float:
    """min over s of ‖shift_s(z) − w‖_∞."""

    zv = _as_signal(z)
    wv = _as_signal(w)
    if zv.shape != wv.shape:
        raise LengthMismatch(f"Signals of length {len(zv)} and {len(wv)} differ")

    return float(min(np.abs(cyclic_shift(zv, s) - wv).max() for s in range(len(zv))))
