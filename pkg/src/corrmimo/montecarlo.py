"""Monte Carlo ensembles, capacity statistics and parameter sweeps.

Every trial owns the random stream ``(seed, trial)``; a draw whose Gram
matrix is numerically singular is replaced by the next substream of the same
trial. Channel draws are shared across SNR points and across the receivers,
and inner draws are shared across correlation values, so comparisons are
paired (common random numbers).
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .channel import color, draw_inner_batch, exp_correlation
from .config import ChannelKind, clamp_rho
from .errors import BadProbability, EmptySamples, RankDeficient
from .matkernel import herm_gram, inv_diag_pd
from .receivers import (MAX_CONDITION, SnrSpec, gram_condition, mmse_from_gram,
                        zf_from_inverse_diag)

MAX_REDRAWS = 64
RECEIVERS = ("zf", "mmse")

# (row id, nt, nr, receiver, capacity at F(x)=0.8 in b/s/Hz), m=1, rx corr 0.2
TABLE1_ROWS = (
    (1, 4, 4, "zf", 1.26),
    (2, 8, 8, "zf", 2.975),
    (3, 4, 4, "mmse", 12.92),
    (4, 8, 8, "mmse", 27.32),
)
TABLE1_SNR_GRID = tuple(float(s) for s in range(0, 41))


@dataclass(frozen=True, eq=False)
class CapacitySamples:
    label: str
    values: np.ndarray
    rejected_draws: int = 0

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.size and (not np.all(np.isfinite(v)) or np.any(v < 0)):
            raise ValueError("capacity samples must be finite and nonnegative")
        object.__setattr__(self, "values", v)

    def __len__(self):
        return self.values.size


@dataclass(eq=False)
class Ensemble:
    """Colored channel draws plus the quantities every receiver needs."""

    h: np.ndarray
    attempts: np.ndarray
    rejected: int
    gram: np.ndarray = field(init=False)
    zf_inv_diag: np.ndarray = field(init=False)

    def __post_init__(self):
        self.gram = herm_gram(self.h)
        self.zf_inv_diag = inv_diag_pd(self.gram)

    @property
    def trials(self):
        return self.h.shape[0]


def _chunks(n, workers):
    if workers <= 1 or n < 2:
        return [(0, n)]
    step = math.ceil(n / workers)
    return [(a, min(a + step, n)) for a in range(0, n, step)]


def _map_chunks(fn, n, workers):
    spans = _chunks(n, workers)
    if len(spans) == 1:
        return [fn(*spans[0])]
    with ThreadPoolExecutor(max_workers=len(spans)) as pool:
        return list(pool.map(lambda s: fn(*s), spans))


def _colored_ensemble(cfg, trials, inner, rtx, rrx):
    """Color ``inner`` and redraw singular trials; returns (h, attempts, rejected)."""
    attempts = np.zeros(trials.size, dtype=np.int64)
    h = color(inner, rtx, rrx)
    bad = np.flatnonzero(gram_condition(h) > MAX_CONDITION)
    rejected = 0
    while bad.size:
        rejected += bad.size
        attempts[bad] += 1
        if attempts[bad].max() > MAX_REDRAWS:
            raise RankDeficient(f"trial {trials[bad[0]]} stayed singular after {MAX_REDRAWS} redraws")
        h = h.copy() if h is inner else h
        h[bad] = color(draw_inner_batch(cfg, trials[bad], attempts[bad]), rtx, rrx)
        bad = bad[gram_condition(h[bad]) > MAX_CONDITION]
    return h, attempts, rejected


def simulate_channels(cfg, workers=1, rtx=None, rrx=None, inner=None):
    """Draw ``cfg.trials`` colored channels.

    ``inner`` may be passed to reuse uncorrelated draws across correlation
    settings; ``rtx``/``rrx`` default to the config's matrices.
    """
    rtx = cfg.rtx if rtx is None else rtx
    rrx = cfg.rrx if rrx is None else rrx

    def work(a, b):
        trials = np.arange(a, b, dtype=np.int64)
        w = draw_inner_batch(cfg, trials) if inner is None else inner[a:b]
        return _colored_ensemble(cfg, trials, w, rtx, rrx)

    parts = _map_chunks(work, cfg.trials, workers)
    h = np.concatenate([p[0] for p in parts])
    attempts = np.concatenate([p[1] for p in parts])
    return Ensemble(h, attempts, sum(p[2] for p in parts))


def evaluate(ens, snr):
    """Total ZF and MMSE capacity per trial at one SNR."""
    rho_eff = snr.effective(ens.h.shape[-1])
    zf = zf_from_inverse_diag(ens.zf_inv_diag, rho_eff).total
    mmse = mmse_from_gram(ens.gram, rho_eff).total
    return zf, mmse


def scenario_label(cfg, receiver, snr_db=None):
    parts = [receiver, f"{cfg.nr}x{cfg.nt}", cfg.kind.value, f"m={cfg.m:g}",
             f"rho_tx={cfg.rho_tx:g}", f"rho_rx={cfg.rho_rx:g}"]
    if snr_db is not None:
        parts.append(f"snr={snr_db:g}dB")
    return " ".join(parts)


def _samples(cfg, ens, snr_db):
    zf, mmse = evaluate(ens, SnrSpec(snr_db, cfg.power_split))
    return (CapacitySamples(scenario_label(cfg, "zf", snr_db), zf, ens.rejected),
            CapacitySamples(scenario_label(cfg, "mmse", snr_db), mmse, ens.rejected))


def run_scenario(cfg, snr_db, workers=1):
    """Evaluate both receivers on the same ``cfg.trials`` draws at one SNR."""
    return _samples(cfg, simulate_channels(cfg, workers), snr_db)


def _values(samples):
    v = samples.values if isinstance(samples, CapacitySamples) else np.asarray(samples, dtype=float)
    if v.size == 0:
        raise EmptySamples("no capacity samples")
    return v


def ergodic_capacity(samples):
    """Sample mean and its standard error ``std(ddof=1) / sqrt(n)``."""
    v = _values(samples)
    if v.size == 1:
        return float(v[0]), 0.0
    return float(v.mean()), float(v.std(ddof=1) / np.sqrt(v.size))


def ecdf_at(samples, x):
    """Right-continuous ECDF: fraction of samples ``<= x``."""
    v = np.sort(_values(samples))
    return np.searchsorted(v, x, side="right") / v.size


def empirical_cdf(samples, points=200):
    """ECDF on ``points`` evenly spaced capacities spanning ``[min, max]``."""
    v = np.sort(_values(samples))
    if points < 2:
        raise ValueError("points must be >= 2")
    grid = np.linspace(v[0], v[-1], points)
    grid[-1] = v[-1]
    F = np.searchsorted(v, grid, side="right") / v.size
    return list(zip(grid.tolist(), F.tolist()))


def empirical_pdf(samples, bins=50):
    """Density-normalised histogram as ``(bin centers, densities)``."""
    v = _values(samples)
    if bins < 1:
        raise ValueError("bins must be >= 1")
    lo, hi = float(v.min()), float(v.max())
    if hi == lo:
        lo, hi = lo - 0.5, hi + 0.5
    density, edges = np.histogram(v, bins=bins, range=(lo, hi), density=True)
    return 0.5 * (edges[:-1] + edges[1:]), density


def quantile_at_cdf(samples, p):
    """Smallest sample ``v`` with ``ECDF(v) >= p`` (lower order statistic)."""
    if not 0.0 < p < 1.0:
        raise BadProbability(f"p={p} outside (0, 1)")
    v = np.sort(_values(samples))
    # round away float noise in p*n so decimal levels such as 0.8*5 hit exactly
    k = math.ceil(round(p * v.size, 9))
    return float(v[max(k, 1) - 1])


class SnrRow(NamedTuple):
    snr_db: float
    receiver: str
    ergodic_capacity: float
    stderr: float
    quantile: float


class RhoRow(NamedTuple):
    rho: float
    receiver: str
    ergodic_capacity: float
    stderr: float


class Table1Row(NamedTuple):
    candidate_snr_db: float
    row_id: int
    receiver: str
    nt: int
    nr: int
    quantile: float
    target: float
    relative_error: float


@dataclass
class SweepResult:
    rows: list
    rejected: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)
    extra: dict = field(default_factory=dict)


def sweep_snr(cfg, workers=1):
    """Ergodic capacity and CDF-level quantile at every grid SNR, common draws."""
    ens = simulate_channels(cfg, workers)
    rows = []
    for snr_db in cfg.snr_db_grid:
        for s, rx in zip(_samples(cfg, ens, snr_db), RECEIVERS):
            mean, se = ergodic_capacity(s)
            rows.append(SnrRow(snr_db, rx, mean, se, quantile_at_cdf(s, cfg.cdf_level)))
    return SweepResult(rows, {"all": ens.rejected}, list(cfg.warnings))


def sweep_rho(cfg, snr_db=None, workers=1):
    """Ergodic capacity vs correlation coefficient (applied at both ends)."""
    snr_db = cfg.snr_db_grid[0] if snr_db is None else snr_db
    inner = simulate_inner(cfg, workers)
    rows, rejected, notes = [], {}, list(cfg.warnings)
    for rho_req in cfg.rho_grid:
        rho, note = clamp_rho(rho_req)
        if note:
            notes.append(note)
        ens = simulate_channels(cfg, workers, exp_correlation(cfg.nt, rho),
                                exp_correlation(cfg.nr, rho), inner=inner)
        rejected[f"{rho_req:g}"] = ens.rejected
        for s, rx in zip(_samples(cfg, ens, snr_db), RECEIVERS):
            mean, se = ergodic_capacity(s)
            rows.append(RhoRow(rho_req, rx, mean, se))
    return SweepResult(rows, rejected, notes, {"snr_db": snr_db})


def simulate_inner(cfg, workers=1):
    """Uncorrelated draws for all trials (attempt 0)."""
    parts = _map_chunks(
        lambda a, b: draw_inner_batch(cfg, np.arange(a, b, dtype=np.int64)), cfg.trials, workers)
    return np.concatenate(parts)


def capacity_samples(cfg, snr_db, workers=1):
    """``{receiver: CapacitySamples}`` at one SNR; used for CDF/PDF output."""
    zf, mmse = run_scenario(cfg, snr_db, workers)
    return {"zf": zf, "mmse": mmse}


def table1_search(cfg, snr_grid=TABLE1_SNR_GRID, workers=1, rows=TABLE1_ROWS):
    """Grid search for the SNR that best reproduces the target quantile table.

    Uses ``cfg``'s fading, correlation, trials, seed and power split; each
    row overrides the antenna counts. Scores a candidate SNR by the sum of
    squared relative errors of the ``cdf_level`` quantiles against the
    targets.
    """
    ensembles = {}
    for _, nt, nr, _, _ in rows:
        if (nt, nr) not in ensembles:
            sub = cfg.replace(nt=nt, nr=nr)
            ensembles[nt, nr] = (sub, simulate_channels(sub, workers))
    table = []
    for snr_db in snr_grid:
        per_size = {k: _samples(sub, ens, snr_db) for k, (sub, ens) in ensembles.items()}
        for row_id, nt, nr, rx, target in rows:
            q = quantile_at_cdf(per_size[nt, nr][RECEIVERS.index(rx)], cfg.cdf_level)
            table.append(Table1Row(float(snr_db), row_id, rx, nt, nr, q, target, (q - target) / target))
    scores = {}
    for r in table:
        scores[r.candidate_snr_db] = scores.get(r.candidate_snr_db, 0.0) + r.relative_error ** 2
    best = min(scores, key=lambda s: (scores[s], s))
    best_rows = [r for r in table if r.candidate_snr_db == best]
    rejected = {f"{nr}x{nt}": ens.rejected for (nt, nr), (_, ens) in ensembles.items()}
    return SweepResult(table, rejected, list(cfg.warnings),
                       {"best_snr_db": best, "best_rows": best_rows, "scores": scores})


def quantile_ratios(best_rows):
    """8x8 / 4x4 quantile ratio per receiver from a target-table fit."""
    by = {(r.receiver, r.nt): r.quantile for r in best_rows}
    return {rx: by[rx, 8] / by[rx, 4] for rx in RECEIVERS if (rx, 8) in by and (rx, 4) in by}


__all__ = [
    "CapacitySamples", "ChannelKind", "Ensemble", "RhoRow", "SnrRow", "SweepResult",
    "TABLE1_ROWS", "TABLE1_SNR_GRID", "Table1Row", "capacity_samples", "ecdf_at",
    "empirical_cdf", "empirical_pdf", "ergodic_capacity", "evaluate", "quantile_at_cdf",
    "quantile_ratios", "run_scenario", "simulate_channels", "simulate_inner", "sweep_rho",
    "sweep_snr", "table1_search",
]
