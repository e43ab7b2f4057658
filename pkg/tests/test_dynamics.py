import math

import numpy as np
import pytest

from hahnchain.chain import ChainSpec, Family, build, perturb_coupling
from hahnchain.dynamics import (AmplitudeMatrix, amplitude_matrix, amplitude_sweep, amplitude_via_divided_difference,
                                claimed_fr_support, claimed_pst_pairs, detect_fr, detect_pst, fidelity_sweep,
                                measure_return, measured_pst_phase, pst_time_condition, transport_report,
                                verify_return)
from hahnchain.errors import InvalidSite, InvalidSpec, PremiseViolated
from hahnchain.hahn_m1 import DualM1HahnParams
from hahnchain.spectral import SpectralMode, spectral_data

from conftest import ETA_GRID, N_GRID, dense_propagator

T = math.pi / 4


def sd_of(spec, mode=SpectralMode.NUMERIC):
    return spectral_data(build(spec), mode)


def _small_chains():
    for N in (1, 3, 5, 7, 9):
        for eta in (0, 1, 2.5):
            yield ChainSpec.asymmetric(N, eta)
            yield ChainSpec.symmetric(N, eta)
    rng = np.random.default_rng(7)
    for N in (2, 4, 8):
        yield ChainSpec.custom(rng.uniform(0.5, 3.0, N), rng.normal(size=N + 1))


SMALL = list(_small_chains())


@pytest.mark.parametrize("spec", SMALL, ids=lambda s: f"{s.family.value}-N{s.N}-eta{s.eta}")
def test_spectral_synthesis_matches_dense_exponential(spec):
    op = build(spec)
    sd = spectral_data(op)
    rng = np.random.default_rng(spec.N)
    for t in rng.uniform(0, 8 * math.pi, 25):
        ref = dense_propagator(op, t)
        assert np.max(np.abs(amplitude_matrix(sd, t).entries - ref)) <= 1e-8


@pytest.mark.parametrize("spec", SMALL + [ChainSpec.asymmetric(31, 3), ChainSpec.symmetric(15, 2)],
                         ids=lambda s: f"{s.family.value}-N{s.N}-eta{s.eta}")
def test_unitarity_and_group_property(spec):
    sd = sd_of(spec)
    rng = np.random.default_rng(99)
    for t in rng.uniform(0, 8 * math.pi, 100):
        assert amplitude_matrix(sd, t).unitarity_defect() <= 1e-9
    for t1, t2 in rng.uniform(0, 4 * math.pi, (10, 2)):
        prod = amplitude_matrix(sd, t1).entries @ amplitude_matrix(sd, t2).entries
        assert np.max(np.abs(prod - amplitude_matrix(sd, t1 + t2).entries)) <= 1e-8


def test_identity_at_zero():
    am = amplitude_matrix(sd_of(ChainSpec.asymmetric(7, 2)), 0.0)
    assert np.max(np.abs(am.entries - np.eye(8))) <= 1e-13
    assert [(p.source, p.target) for p in detect_pst(am)] == [(n, n) for n in range(8)]


def test_hand_amplitudes():
    am = amplitude_matrix(sd_of(ChainSpec.asymmetric(3, 0)), T)
    assert abs(am.entries[0, 2] - 1.0) <= 1e-13
    assert abs(am.entries[1, 1] - 2 / 3) <= 1e-13
    np.testing.assert_allclose(am.entries, am.entries.T, atol=1e-14)


@pytest.mark.parametrize("N", N_GRID)
@pytest.mark.parametrize("eta", ETA_GRID)
def test_divided_difference_formula(N, eta):
    op = build(ChainSpec.asymmetric(N, eta))
    sd = spectral_data(op)
    rec = op.recurrence
    A = amplitude_matrix(sd, T).entries
    for l in range(N + 1):
        for m in range(N + 1):
            got = amplitude_via_divided_difference(sd, rec, l, m, T)
            if l + m < N - 1:
                assert got == 0j
            elif N <= 15:
                assert abs(got - A[l, m]) <= 1e-8


def test_divided_difference_closed_values():
    op = build(ChainSpec.asymmetric(3, 0))
    sd = spectral_data(op)
    phi = measured_pst_phase(sd, T)
    assert abs(phi) <= 1e-12
    got = amplitude_via_divided_difference(sd, op.recurrence, 1, 1, T)
    assert abs(got - 2 / 3 * np.exp(1j * phi)) <= 1e-12
    for n in range(2):
        got = amplitude_via_divided_difference(sd, op.recurrence, 2 * n, 3 - 2 * n - 1, T)
        assert abs(abs(got) - 1.0) <= 1e-12


def test_divided_difference_premise():
    op = build(ChainSpec.asymmetric(5, 1))
    sd = spectral_data(op)
    with pytest.raises(PremiseViolated):
        amplitude_via_divided_difference(sd, op.recurrence, 0, 4, 0.3)
    with pytest.raises(InvalidSite):
        amplitude_via_divided_difference(sd, op.recurrence, 0, 6, T)


def test_detect_pst_realized_pairs():
    # set derived from the dense exponential; (2, 2) is a return to the same site
    op = build(ChainSpec.asymmetric(5, 1))
    ref = dense_propagator(op, T)
    oracle = {(m, l) for l in range(6) for m in range(6) if abs(ref[l, m]) >= 1 - 1e-9}
    assert oracle == {(0, 4), (2, 2), (4, 0)}
    pairs = detect_pst(amplitude_matrix(spectral_data(op), T))
    assert [(p.source, p.target) for p in pairs] == [(0, 4), (2, 2), (4, 0)]
    assert all(-math.pi < p.phase <= math.pi for p in pairs)


def test_detect_pst_perturbed_chain():
    op = perturb_coupling(build(ChainSpec.asymmetric(5, 1)), 1, 1.05)
    pairs = detect_pst(amplitude_matrix(spectral_data(op), T), tol=1e-6)
    assert all(p.source == p.target for p in pairs)


def test_detect_fr_examples():
    am = amplitude_matrix(sd_of(ChainSpec.asymmetric(3, 0)), T)
    ev = detect_fr(am, 1)
    assert ev.support == [1, 3]
    np.testing.assert_allclose(ev.probabilities, [4 / 9, 5 / 9], atol=1e-12)
    assert abs(sum(ev.probabilities) - 1) <= 1e-9

    op = build(ChainSpec.asymmetric(5, 0))
    am = amplitude_matrix(spectral_data(op), T)
    ev = detect_fr(am, 3)
    assert set(ev.support) <= {1, 3, 5}
    ref = np.abs(dense_propagator(op, T)[:, 3]) ** 2
    np.testing.assert_allclose(ev.probabilities, ref[ev.support], atol=1e-10)
    for bad in (0, 2, 6, -1):
        with pytest.raises(InvalidSite):
            detect_fr(am, bad)


@pytest.mark.parametrize("N", N_GRID)
@pytest.mark.parametrize("eta", ETA_GRID)
def test_fr_support_claim(N, eta):
    am = amplitude_matrix(sd_of(ChainSpec.asymmetric(N, eta)), T)
    for src in range(1, N + 1, 2):
        ev = detect_fr(am, src)
        assert set(ev.support) <= set(claimed_fr_support(N, src))
        assert abs(sum(ev.probabilities) - 1) <= 1e-9


def test_claimed_supports_and_pairs():
    assert claimed_fr_support(5, 1) == [3, 5]
    assert claimed_fr_support(5, 3) == [1, 3, 5]
    assert claimed_fr_support(7, 5) == [1, 3, 5, 7]
    assert claimed_pst_pairs(5, Family.ASYMMETRIC) == [(0, 4), (2, 2), (4, 0)]
    assert claimed_pst_pairs(3, Family.SYMMETRIC) == [(0, 3), (1, 2), (2, 1), (3, 0)]
    with pytest.raises(InvalidSpec):
        claimed_pst_pairs(4, Family.CUSTOM)


@pytest.mark.parametrize("N", N_GRID)
@pytest.mark.parametrize("eta", ETA_GRID)
def test_even_odd_separation(N, eta):
    A = amplitude_matrix(sd_of(ChainSpec.asymmetric(N, eta)), T).entries
    assert np.max(np.abs(A[0::2, 1::2])) <= 1e-9
    assert np.max(np.abs(A[1::2, 0::2])) <= 1e-9
    assert abs(A[1, N - 1]) <= 1e-9


def test_verify_return_examples():
    residual, psi = measure_return(sd_of(ChainSpec.asymmetric(3, 0)), T)
    assert residual <= 1e-12 and abs(psi) <= 1e-12
    residual, psi = measure_return(sd_of(ChainSpec.symmetric(3, 1)), T)
    assert residual <= 1e-12 and abs(psi - math.pi) <= 1e-12
    assert verify_return(sd_of(ChainSpec.asymmetric(5, 2)), 0.0) <= 1e-13


def test_return_holds_for_non_integer_eta():
    # eta = 1/2 breaks PST but every eigenvalue stays an odd multiple of 2
    residual, psi = measure_return(sd_of(ChainSpec.asymmetric(5, 0.5)), T)
    assert residual <= 1e-12 and abs(abs(psi) - math.pi) <= 1e-12


def test_sweeps():
    sd = sd_of(ChainSpec.asymmetric(5, 1))
    t = np.linspace(0, math.pi / 2, 201)
    fid = fidelity_sweep(sd, 0, 4, t)
    best = max(fid, key=lambda r: r[1])
    assert abs(best[0] - T) <= 1e-12 and abs(best[1] - 1) <= 1e-9
    assert fidelity_sweep(sd, 3, 3, [0.0]) == [(0.0, pytest.approx(1.0, abs=1e-14))]
    amps = amplitude_sweep(sd, 1, 5, t)
    ref = [amplitude_matrix(sd, tt).entries[5, 1] for tt in t[::40]]
    np.testing.assert_allclose(amps[::40], ref, atol=1e-13)
    with pytest.raises(InvalidSite):
        fidelity_sweep(sd, 0, 6, t)
    with pytest.raises(ValueError):
        amplitude_sweep(sd, 0, 1, [0.0, np.nan])


@pytest.mark.parametrize("N", [3, 5, 9, 15])
@pytest.mark.parametrize("eta", ETA_GRID)
def test_no_transfer_to_last_site(N, eta):
    sd = sd_of(ChainSpec.asymmetric(N, eta))
    t = np.linspace(0, 4 * math.pi, 4001)
    assert np.max(np.abs(amplitude_sweep(sd, 0, N, t)) ** 2) < 1 - 1e-3


def test_pst_time_condition():
    assert pst_time_condition(DualM1HahnParams.asymmetric(5, 1), T)
    assert pst_time_condition(DualM1HahnParams.asymmetric(5, 1), 5 * T)
    assert not pst_time_condition(DualM1HahnParams.asymmetric(5, 1), math.pi / 2)
    assert not pst_time_condition(DualM1HahnParams.asymmetric(5, 0.5), T)
    assert pst_time_condition(DualM1HahnParams.asymmetric(5, 1 + 1e-12), 3 * T)


def test_amplitude_matrix_is_immutable():
    am = AmplitudeMatrix(0.0, np.eye(2))
    with pytest.raises(ValueError):
        am.entries[0, 0] = 2.0


def test_transport_report_positive_and_negative():
    rep = transport_report(build(ChainSpec.asymmetric(5, 1)))
    assert rep.ok
    assert [(p.source, p.target) for p in rep.pst] == [(0, 4), (2, 2), (4, 0)]
    assert list(rep.to_dict()) == ["chain", "time", "pst", "fr", "return_residual", "return_phase",
                                   "verdict", "tolerances"]
    bad = transport_report(build(ChainSpec.asymmetric(5, 0.5)))
    assert not bad.verdict["pst"] and bad.verdict["return"]
    sym = transport_report(build(ChainSpec.symmetric(5, 1)))
    assert sym.ok and sym.fr == []


def test_analytic_and_numeric_reports_agree():
    op = build(ChainSpec.asymmetric(21, 2))
    a = transport_report(op, mode="numeric")
    b = transport_report(op, mode="analytic")
    assert a.verdict == b.verdict
    for pa, pb in zip(a.pst, b.pst):
        assert abs(pa.fidelity - pb.fidelity) <= 1e-9
