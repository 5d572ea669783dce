"""Kronecker-correlated MIMO channels ``H = R_rx^{1/2} W R_tx^{H/2}``."""

from dataclasses import dataclass

import numpy as np

from .config import RHO_MAX, ChannelKind
from .errors import DimensionMismatch, RhoOutOfRange
from .fading import NakagamiParams, RngStream, complex_gaussian_matrix, nakagami_entry_matrix
from .matkernel import cholesky


@dataclass(frozen=True, eq=False)
class CorrelationMatrix:
    n: int
    rho: float
    matrix: np.ndarray
    root: np.ndarray

    @property
    def is_identity(self):
        return self.rho == 0.0 or self.n == 1


def exp_correlation(n, rho):
    """Exponential correlation matrix ``R[i, j] = rho**|i - j|`` and its Cholesky root."""
    if n < 1:
        raise DimensionMismatch("correlation matrix size must be >= 1")
    if not 0.0 <= rho <= RHO_MAX:
        raise RhoOutOfRange(f"rho={rho} outside [0, {RHO_MAX}]")
    k = np.arange(n)
    R = float(rho) ** np.abs(k[:, None] - k[None, :]).astype(float)
    R[k, k] = 1.0
    L = np.eye(n) if rho == 0.0 else cholesky(R)
    R.setflags(write=False)
    L.setflags(write=False)
    return CorrelationMatrix(n, float(rho), R, L)


@dataclass(frozen=True, eq=False)
class ChannelRealization:
    inner: np.ndarray
    h: np.ndarray
    kind: ChannelKind = ChannelKind.GAUSSIAN
    params: NakagamiParams = NakagamiParams()

    @property
    def nr(self):
        return self.h.shape[-2]

    @property
    def nt(self):
        return self.h.shape[-1]


def color(inner, rtx, rrx):
    """Apply Kronecker coloring to one matrix or a stack ``(..., nr, nt)``.

    Identity roots are skipped so an uncorrelated channel stays bit-identical
    to its inner draw.
    """
    inner = np.asarray(inner)
    if rrx.n != inner.shape[-2] or rtx.n != inner.shape[-1]:
        raise DimensionMismatch(
            f"inner is {inner.shape[-2]}x{inner.shape[-1]}, correlation sizes rx={rrx.n} tx={rtx.n}")
    h = inner
    if not rrx.is_identity:
        h = (rrx.root[:, :, None] * h[..., None, :, :]).sum(axis=-2)
    if not rtx.is_identity:
        # h @ rtx.root^H
        h = (h[..., :, :, None] * rtx.root.T.conj()[None, :, :]).sum(axis=-2)
    return h


def build_channel(inner, rtx, rrx, kind=ChannelKind.GAUSSIAN, params=NakagamiParams()):
    inner = np.asarray(inner)
    return ChannelRealization(inner, color(inner, rtx, rrx), ChannelKind(kind), params)


def draw_inner(cfg, trial, attempt=0):
    """Uncorrelated ``nr x nt`` draw for one trial; pure in ``(cfg.seed, trial, attempt)``."""
    stream = RngStream(cfg.seed, trial, attempt)
    if cfg.kind is ChannelKind.NAKAGAMI:
        return nakagami_entry_matrix(cfg.params, cfg.nr, cfg.nt, stream)
    return complex_gaussian_matrix(cfg.nr, cfg.nt, stream)


def draw_inner_batch(cfg, trials, attempts=None):
    trials = np.asarray(trials, dtype=np.int64)
    if attempts is None:
        attempts = np.zeros_like(trials)
    out = np.empty((trials.size, cfg.nr, cfg.nt), dtype=complex)
    for i, (t, a) in enumerate(zip(trials.tolist(), np.asarray(attempts).tolist())):
        out[i] = draw_inner(cfg, t, a)
    return out


def draw_realization(cfg, trial, attempt=0):
    inner = draw_inner(cfg, trial, attempt)
    return build_channel(inner, cfg.rtx, cfg.rrx, cfg.kind, cfg.params)
