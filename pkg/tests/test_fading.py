import numpy as np
import pytest
from scipy import integrate, stats
from scipy.special import gammainc

from corrmimo.errors import DomainError, InvalidShape
from corrmimo.fading import (NakagamiParams, RngStream, complex_gaussian_matrix, gamma_sample,
                             nakagami_entry_matrix, nakagami_envelope, snr_pdf)

N = 10**6


@pytest.mark.parametrize("shape,scale", [(1.0, 1.0), (3.0, 1 / 3), (0.5, 2.0), (2.5, 0.7)])
def test_gamma_moments(shape, scale):
    g = gamma_sample(shape, scale, RngStream(11, 3), N)
    assert g.mean() == pytest.approx(shape * scale, rel=0.01)
    assert g.var() == pytest.approx(shape * scale**2, rel=0.03)
    assert np.all(g > 0)


def test_gamma_rejects_small_shape():
    with pytest.raises(InvalidShape):
        gamma_sample(0.4, 1.0, RngStream(0))
    with pytest.raises(InvalidShape):
        NakagamiParams(m=0.3)


def test_gamma_scalar_draw():
    assert isinstance(gamma_sample(2.0, 1.0, RngStream(1)), float)


def test_envelope_rayleigh_at_m1():
    r = nakagami_envelope(NakagamiParams(1.0, 1.0), RngStream(5), N)
    ks = stats.kstest(r, lambda x: 1 - np.exp(-x * x)).statistic
    assert ks < 0.002


@pytest.mark.parametrize("m", [0.5, 1.0, 2.0, 3.0])
def test_envelope_moments(m):
    omega = 2.0 if m == 0.5 else 1.0
    p = nakagami_envelope(NakagamiParams(m, omega), RngStream(7, int(m * 10)), N) ** 2
    assert p.mean() == pytest.approx(omega, rel=0.01)
    assert (p**2).mean() / omega**2 == pytest.approx(1 + 1 / m, rel=0.03)
    if m == 3.0:
        assert p.var() == pytest.approx(1 / 3, rel=0.03)


def test_complex_gaussian_unit_power_and_exponential():
    g = complex_gaussian_matrix(N, 1, RngStream(2)).ravel()
    p = np.abs(g) ** 2
    assert p.mean() == pytest.approx(1.0, rel=0.01)
    assert stats.kstest(p, "expon").pvalue > 0.01
    assert g.real.var() == pytest.approx(0.5, rel=0.01)


def test_complex_gaussian_entries_uncorrelated():
    G = np.stack([complex_gaussian_matrix(4, 4, RngStream(3, t)) for t in range(10**5)]).reshape(-1, 16)
    C = np.abs(G.conj().T @ G) / G.shape[0]
    off = C[~np.eye(16, dtype=bool)]
    assert off.max() < 0.01


def test_determinism():
    a = complex_gaussian_matrix(4, 4, RngStream(9, 1))
    b = complex_gaussian_matrix(4, 4, RngStream(9, 1))
    assert a.tobytes() == b.tobytes()
    c = complex_gaussian_matrix(4, 4, RngStream(9, 2))
    assert not np.array_equal(a, c)
    p = NakagamiParams(2.3)
    assert np.array_equal(nakagami_entry_matrix(p, 3, 2, RngStream(1, 1)),
                          nakagami_entry_matrix(p, 3, 2, RngStream(1, 1)))
    assert gamma_sample(0.7, 1.0, RngStream(4, 4)) == gamma_sample(0.7, 1.0, RngStream(4, 4))


def test_substreams_differ():
    s = RngStream(1, 1)
    assert not np.array_equal(complex_gaussian_matrix(2, 2, s), complex_gaussian_matrix(2, 2, s.child(1)))


def test_nakagami_entries_m1_match_gaussian():
    a = np.abs(nakagami_entry_matrix(NakagamiParams(1.0), N, 1, RngStream(21))).ravel() ** 2
    b = np.abs(complex_gaussian_matrix(N, 1, RngStream(22))).ravel() ** 2
    assert stats.kstest(a, "expon").statistic < 0.002
    assert stats.ks_2samp(a, b).pvalue > 0.01


def test_nakagami_entries_power_and_phase():
    e = nakagami_entry_matrix(NakagamiParams(3.0), N, 1, RngStream(23)).ravel()
    assert np.var(np.abs(e) ** 2) == pytest.approx(1 / 3, rel=0.03)
    assert np.mean(np.abs(e) ** 2) == pytest.approx(1.0, rel=0.01)
    assert abs(np.mean(e / np.abs(e))) < 0.005


def test_snr_pdf_values():
    assert snr_pdf(0.0, 1.0, 1.0) == 1.0
    assert snr_pdf(1.0, 1.0, 1.0) == pytest.approx(np.exp(-1.0), rel=1e-14)
    assert snr_pdf(0.0, 3.0, 1.0) == 0.0
    with pytest.raises(DomainError):
        snr_pdf(-1.0, 1.0, 1.0)


@pytest.mark.parametrize("m,gbar", [(3.0, 1.0), (1.0, 2.0), (0.5, 1.0), (4.5, 10.0)])
def test_snr_pdf_normalised(m, gbar):
    total, _ = integrate.quad(snr_pdf, 0, 50 * gbar, args=(m, gbar), limit=200)
    assert total == pytest.approx(1.0, abs=1e-6)


@pytest.mark.parametrize("m", [1.0, 3.0])
def test_instantaneous_snr_matches_pdf(m):
    gbar = 4.0
    r = nakagami_envelope(NakagamiParams(m, 1.0), RngStream(31, int(m)), 200_000)
    gamma = gbar * r**2
    res = stats.kstest(gamma, lambda x: gammainc(m, m * np.asarray(x) / gbar))
    assert res.pvalue > 0.01
