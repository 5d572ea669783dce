"""Fading variates: complex Gaussian and Nakagami-m matrices, gamma sampling,
and the Nakagami instantaneous-SNR density."""

from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .errors import DomainError, InvalidShape

MIN_SHAPE = 0.5
_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class NakagamiParams:
    m: float = 1.0
    omega: float = 1.0

    def __post_init__(self):
        if not self.m >= MIN_SHAPE:
            raise InvalidShape(f"fading figure m={self.m} below {MIN_SHAPE}")
        if not self.omega > 0:
            raise DomainError(f"omega must be positive, got {self.omega}")


@dataclass(frozen=True)
class RngStream:
    """Counter-based random stream identified by ``(seed, stream_id)``.

    Each call to :meth:`generator` returns a fresh Philox generator keyed on
    ``(seed, stream_id)``; ``substream`` offsets the counter's top word so
    redraws of a trial get a disjoint, reproducible sequence.
    """

    seed: int
    stream_id: int = 0
    substream: int = 0

    def generator(self):
        key = ((self.stream_id & _MASK64) << 64) | (self.seed & _MASK64)
        counter = (self.substream & _MASK64) << 192
        return np.random.Generator(np.random.Philox(key=key, counter=counter))

    def child(self, substream):
        return RngStream(self.seed, self.stream_id, substream)


def as_generator(rng):
    if isinstance(rng, RngStream):
        return rng.generator()
    if isinstance(rng, np.random.Generator):
        return rng
    raise TypeError(f"expected RngStream or numpy Generator, got {type(rng).__name__}")


def _standard_gamma(shape, gen, size):
    """Marsaglia-Tsang squeeze/rejection sampler for Gamma(shape, 1).

    Valid for shape >= 1 directly; shape in [0.5, 1) is handled by the
    caller through the U**(1/shape) boost.
    """
    d = shape - 1.0 / 3.0
    c = 1.0 / np.sqrt(9.0 * d)
    out = np.empty(size)
    flat = out.reshape(-1)
    pending = np.arange(flat.size)
    while pending.size:
        x = gen.standard_normal(pending.size)
        u = gen.random(pending.size)
        v = (1.0 + c * x) ** 3
        with np.errstate(invalid="ignore", divide="ignore"):
            ok = (v > 0) & (np.log(u) < 0.5 * x * x + d - d * v + d * np.log(v))
        flat[pending[ok]] = d * v[ok]
        pending = pending[~ok]
    return out


def gamma_sample(shape, scale, rng, size=None):
    """Draw Gamma(shape, scale) variates (mean ``shape*scale``).

    Returns a float when ``size`` is None, else an array of that shape.
    """
    if not shape >= MIN_SHAPE:
        raise InvalidShape(f"gamma shape {shape} below {MIN_SHAPE}")
    if not scale > 0:
        raise DomainError(f"gamma scale must be positive, got {scale}")
    gen = as_generator(rng)
    n = () if size is None else size
    if shape < 1.0:
        g = _standard_gamma(shape + 1.0, gen, n)
        g = g * gen.random(n) ** (1.0 / shape)
    else:
        g = _standard_gamma(shape, gen, n)
    g = g * scale
    return float(g) if size is None else g


def nakagami_envelope(params, rng, size=None):
    """Nakagami-m envelope ``r = sqrt(g)`` with ``g ~ Gamma(m, omega/m)``."""
    g = gamma_sample(params.m, params.omega / params.m, rng, size)
    return np.sqrt(g)


def complex_gaussian_matrix(nr, nt, rng):
    """``nr x nt`` matrix of i.i.d. CN(0, 1) entries."""
    if nr < 1 or nt < 1:
        raise DomainError("matrix dimensions must be positive")
    gen = as_generator(rng)
    re = gen.standard_normal((nr, nt))
    im = gen.standard_normal((nr, nt))
    return (re + 1j * im) * np.sqrt(0.5)


def nakagami_entry_matrix(params, nr, nt, rng):
    """``nr x nt`` matrix with Nakagami-m magnitudes and uniform phases."""
    if nr < 1 or nt < 1:
        raise DomainError("matrix dimensions must be positive")
    gen = as_generator(rng)
    r = nakagami_envelope(params, gen, (nr, nt))
    theta = 2.0 * np.pi * gen.random((nr, nt))
    return r * np.exp(1j * theta)


def snr_pdf(gamma, m, gbar):
    """Density of the instantaneous SNR under Nakagami-m fading.

    Gamma density with shape ``m`` and mean ``gbar``:
    ``(m/gbar)^m gamma^(m-1) exp(-m gamma/gbar) / Gamma(m)``.
    """
    g = np.asarray(gamma, dtype=float)
    if np.any(g < 0):
        raise DomainError("SNR must be nonnegative")
    if not m >= MIN_SHAPE:
        raise InvalidShape(f"fading figure m={m} below {MIN_SHAPE}")
    if not gbar > 0:
        raise DomainError("mean SNR must be positive")
    with np.errstate(divide="ignore", invalid="ignore"):
        logp = m * np.log(m / gbar) + (m - 1.0) * np.log(g) - m * g / gbar - gammaln(m)
    p = np.exp(logp)
    if m == 1.0:
        p = np.where(g == 0, 1.0 / gbar, p)
    return float(p) if p.ndim == 0 else p
