"""Phase evolution, measurement models, classical Fisher, Monte Carlo runs."""
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ghzmetro import (
    DomainError,
    FisherSingularityError,
    GlobalParity,
    LikelihoodDegeneracyError,
    PhaseGenerator,
    SectorParity,
    build_rho_nk,
    classical_fisher,
    classical_fisher_fd,
    evolve,
    evolved_dense,
    get_model,
    ghz_basis_vector,
    ghz_state,
    outcome_distribution,
    qfi_ghz_diagonal,
    run_monte_carlo,
    to_dense,
    weight,
)
from conftest import random_state_strategy


# -- evolution -----------------------------------------------------------------

def test_evolve_zero_phase_identity():
    state = build_rho_nk(4, 2)
    ev = evolve(state, 0.0)
    for i in state.coherence_support():
        assert ev.coherence[i] == pytest.approx(float(state.sector_diff(i)) / 2)
    for i in state.support():
        assert ev.sector_sum[i] == state.sector_sum(i)


def test_evolve_ghz_half_period():
    n = 4
    ev = evolve(ghz_state(n), np.pi / n)
    assert ev.coherence[0] == pytest.approx(-0.5)  # phase angle pi


@settings(max_examples=40, deadline=None)
@given(random_state_strategy(max_n=5), st.floats(-3.0, 3.0))
def test_evolve_matches_dense_conjugation(state, theta):
    z = PhaseGenerator(state.n).diagonal()
    u = np.exp(-1j * theta * z)
    expected = (u[:, None] * to_dense(state)) * np.conj(u)[None, :]
    got = evolved_dense(evolve(state, theta))
    assert np.max(np.abs(expected - got)) < 1e-12


# -- outcome distributions -------------------------------------------------------

def test_ghz_parity_fringe():
    n, model = 4, GlobalParity()
    for theta in (0.0, 0.1, 0.7, 2.0):
        p = outcome_distribution(ghz_state(n), theta, model)
        assert p[0] == pytest.approx((1 + np.cos(n * theta)) / 2)
        assert p[1] == pytest.approx((1 - np.cos(n * theta)) / 2)


def test_sector_parity_at_zero_phase():
    state = build_rho_nk(4, 2)
    model = SectorParity()
    p = outcome_distribution(state, 0.0, model)
    for (i, sign), prob in zip(model.outcomes(state), p):
        expected = state.lam_plus(i) if sign > 0 else state.lam_minus(i)
        assert prob == pytest.approx(float(expected))


@pytest.mark.parametrize("model_name", ["global-parity", "sector-parity"])
def test_distribution_normalization(model_name):
    model = get_model(model_name)
    for state in (ghz_state(3), build_rho_nk(6, 2), build_rho_nk(5, 2)):
        for theta in np.linspace(-2, 2, 17):
            p = outcome_distribution(state, theta, model)
            assert p.min() > -1e-15
            assert abs(p.sum() - 1.0) < 1e-12


def test_global_parity_matches_born_rule():
    state = build_rho_nk(5, 2)
    n = 5
    sx = np.array([[0, 1], [1, 0]], dtype=complex)
    op = sx
    for _ in range(n - 1):
        op = np.kron(op, sx)
    proj_plus = (np.eye(1 << n) + op) / 2
    model = GlobalParity()
    for theta in (0.2, 0.9):
        rho_t = evolved_dense(evolve(state, theta))
        born = float(np.trace(proj_plus @ rho_t).real)
        assert outcome_distribution(state, theta, model)[0] == pytest.approx(born, abs=1e-12)


def test_sector_parity_matches_born_rule():
    state = build_rho_nk(4, 1)
    model = SectorParity()
    for theta in (0.3, 1.1):
        rho_t = evolved_dense(evolve(state, theta))
        p = outcome_distribution(state, theta, model)
        for (i, sign), prob in zip(model.outcomes(state), p):
            v = ghz_basis_vector(4, i, sign)
            assert prob == pytest.approx(float((v @ rho_t @ v).real), abs=1e-12)


# -- classical Fisher information ---------------------------------------------------

def test_ghz_parity_reaches_quantum_limit():
    for n in (2, 4, 5):
        state = ghz_state(n)
        for theta in (0.05, 0.3, 1.0):
            if abs(np.sin(n * theta)) < 1e-6:
                continue
            f = classical_fisher(state, theta, GlobalParity())
            assert f == pytest.approx(n**2, abs=1e-9)


def test_fisher_finite_difference_agreement():
    model = GlobalParity()
    for state in (build_rho_nk(6, 2), build_rho_nk(5, 2)):
        for theta in (0.15, 0.6):
            a = classical_fisher(state, theta, model)
            b = classical_fisher_fd(state, theta, model)
            assert a == pytest.approx(b, abs=1e-6)


def test_probability_derivatives_match_finite_differences():
    step = 1e-5
    for model in (GlobalParity(), SectorParity()):
        for state in (build_rho_nk(6, 2), build_rho_nk(4, 2), ghz_state(5)):
            for theta in (0.1, 0.45, 1.2):
                analytic = model.derivatives(state, theta)
                fd = (model.probabilities(state, theta + step)
                      - model.probabilities(state, theta - step)) / (2 * step)
                assert np.max(np.abs(analytic - fd)) < 1e-6


def test_fisher_never_exceeds_qfi():
    states = [build_rho_nk(n, k) for n in range(4, 9) for k in range(1, n // 2 + 1)]
    states += [ghz_state(4), build_rho_nk(5, 2)]
    for state in states:
        fq = float(qfi_ghz_diagonal(state))
        for model in (GlobalParity(), SectorParity()):
            for theta in np.linspace(0.01, 1.5, 40):
                f = classical_fisher(state, theta, model)
                assert f <= fq * (1 + 1e-9) + 1e-12


def test_sector_parity_saturates_sector_term():
    state = build_rho_nk(4, 2)
    model = SectorParity()
    i0 = 0  # dominant sector, w = 4
    theta = np.pi / (2 * weight(4, i0))
    p = model.probabilities(state, theta)
    dp = model.derivatives(state, theta)
    outcomes = model.outcomes(state)
    contrib = sum(
        d * d / v for (o, _), v, d in zip(outcomes, p, dp) if o == i0
    )
    s, d = state.sector_sum(i0), state.sector_diff(i0)
    expected = float(weight(4, i0) ** 2 * d * d / s)
    assert contrib == pytest.approx(expected, abs=1e-12)


def test_sector_parity_saturates_family_qfi_everywhere():
    # pure sectors contribute w^2 * lambda at any phase where their fringe turns
    state = build_rho_nk(6, 2)
    fq = float(qfi_ghz_diagonal(state))
    for theta in (0.19, 0.52, 0.91):
        assert classical_fisher(state, theta, SectorParity()) == pytest.approx(fq, abs=1e-9)


def test_fisher_singularity_reported():
    class StuckModel:
        name = "stuck"

        def probabilities(self, state, theta):
            return np.array([1.0, 0.0])

        def derivatives(self, state, theta):
            return np.array([-1.0, 1.0])

    with pytest.raises(FisherSingularityError):
        classical_fisher(ghz_state(2), 0.1, StuckModel())


# -- Monte Carlo -----------------------------------------------------------------------

def test_run_reproducible():
    state = ghz_state(4)
    kwargs = dict(theta_true=np.pi / 16, model="global-parity",
                  shots=1000, repetitions=5, seed=7)
    a = run_monte_carlo(state, **kwargs)
    b = run_monte_carlo(state, **kwargs)
    assert a.estimates == b.estimates
    assert a.to_json_dict() == b.to_json_dict()
    c = run_monte_carlo(state, **{**kwargs, "seed": 8})
    assert c.estimates != a.estimates


def test_run_tracks_cramer_rao():
    run = run_monte_carlo(
        ghz_state(4), theta_true=np.pi / 16, model="global-parity",
        shots=10_000, repetitions=60, seed=11,
    )
    assert run.crlb == pytest.approx(1 / (4 * 100))
    assert 0.85 < run.empirical_std / run.crlb < 1.35


def test_quadruple_shots_halves_spread():
    base = dict(theta_true=np.pi / 16, model="global-parity", repetitions=40)
    state = ghz_state(4)
    small = run_monte_carlo(state, shots=2_500, seed=3, **base)
    big = run_monte_carlo(state, shots=10_000, seed=4, **base)
    assert small.empirical_std / big.empirical_std == pytest.approx(2.0, abs=0.5)


def test_degenerate_bracket_reported():
    # symmetric likelihood: a bracket spanning both mirror maxima is ambiguous
    with pytest.raises(LikelihoodDegeneracyError):
        run_monte_carlo(
            ghz_state(2), theta_true=0.3, model="global-parity",
            shots=1000, repetitions=1, seed=0, bracket_halfwidth=1.0,
        )


def test_run_validates_inputs():
    with pytest.raises(DomainError):
        run_monte_carlo(ghz_state(2), 0.3, "global-parity",
                        shots=50, repetitions=1, seed=0)
    with pytest.raises(DomainError):
        run_monte_carlo(ghz_state(2), 0.3, "no-such-model",
                        shots=1000, repetitions=1, seed=0)


def test_run_json_fields():
    run = run_monte_carlo(
        build_rho_nk(4, 2), theta_true=0.4, model="sector-parity",
        shots=500, repetitions=3, seed=1, state_params={"n": 4, "k": 2},
    )
    blob = run.to_json_dict()
    assert blob["rng_algorithm"] == "philox4x64"
    assert blob["state_params"] == {"n": 4, "k": 2}
    assert len(blob["estimates"]) == 3
    assert blob["fisher_quantum"] == pytest.approx(32 / 11)
