import numpy as np
import pytest

from wqed import (ModelParams, evolve_emission, find_bound_state_single,
                  markov_rates, markov_sigma_z, solve_single_qubit,
                  spectral_density, stationary_magnetization)
from wqed.emission import (dressed_magnetization, fit_decay_rate,
                           laplace_pole_residual)


class TestEvolution:
    def test_decoupled_qubit_never_decays(self):
        model = ModelParams.single_qubit(0.3, 0.0, n_sites=400)
        sol = solve_single_qubit(model)
        result = evolve_emission(sol, model, t_max=200, dt=0.5)
        assert np.allclose(result.sigma_z, 1.0, atol=1e-12)

    def test_norm_conservation(self):
        model = ModelParams.single_qubit(0.3, 0.3, n_sites=400)
        sol = solve_single_qubit(model)
        result = evolve_emission(sol, model, t_max=1e3 / 0.3, dt=1.0)
        assert result.norm_drift < 1e-8

    def test_plateau_matches_stationary_prediction(self):
        for delta in (0.3, 0.5):
            model = ModelParams.single_qubit(delta, 0.3, n_sites=1000)
            sol = solve_single_qubit(model)
            result = evolve_emission(sol, model, t_max=4000, dt=1.0)
            assert abs(result.tail_mean
                       - result.stationary_prediction) < 1e-2

    def test_initial_value_is_dressed_excited_state(self):
        model = ModelParams.single_qubit(0.3, 0.3, n_sites=400)
        sol = solve_single_qubit(model)
        result = evolve_emission(sol, model, t_max=100, dt=0.5)
        assert result.sigma_z[0] == pytest.approx(sol.delta_r / 0.3, abs=1e-10)

    def test_magnetization_bounded(self):
        model = ModelParams.single_qubit(0.5, 0.3, n_sites=400)
        sol = solve_single_qubit(model)
        result = evolve_emission(sol, model, t_max=2000, dt=1.0)
        assert np.all(result.sigma_z <= 1 + 1e-9)
        assert np.all(result.sigma_z >= -1 - 1e-9)

    def test_in_band_decay_rate_matches_renormalized_fgr(self):
        # Delta_r well inside the band: the early-time population decay
        # follows J(Delta_r)
        model = ModelParams.single_qubit(1.0, 0.1, n_sites=2000)
        sol = solve_single_qubit(model)
        result = evolve_emission(sol, model, t_max=60, dt=0.025)
        rate = fit_decay_rate(result.times, result.sigma_z)
        expected = spectral_density(model, sol.delta_r)
        assert rate == pytest.approx(expected, rel=0.15)


class TestStationaryValue:
    def test_full_overlap_limit(self):
        # g -> 0 with Delta below the band: lambda0 -> 1, magnetization -> +1
        model = ModelParams.single_qubit(0.3, 1e-4, n_sites=400)
        sol = solve_single_qubit(model)
        bound = find_bound_state_single(sol, model)
        assert stationary_magnetization(bound, sol, model) == pytest.approx(
            1.0, abs=1e-6)

    def test_zero_overlap_relaxes_to_gs(self):
        model = ModelParams.single_qubit(0.3, 0.3, n_sites=400)
        sol = solve_single_qubit(model)
        bound = find_bound_state_single(sol, model)
        detached = bound.__class__(
            energy=bound.energy, qubit_amplitudes=(0.0,),
            lambda_k=bound.lambda_k, lambda_n=bound.lambda_n)
        assert stationary_magnetization(detached, sol, model) == pytest.approx(
            -sol.delta_r / 0.3)

    def test_agrees_with_time_average(self):
        model = ModelParams.single_qubit(0.3, 0.3, n_sites=1000)
        sol = solve_single_qubit(model)
        result = evolve_emission(sol, model, t_max=4000, dt=1.0)
        bound = find_bound_state_single(sol, model)
        direct = stationary_magnetization(bound, sol, model)
        assert abs(result.tail_mean - direct) < 1e-2

    def test_gap_to_gs_grows_with_coupling_ratio(self):
        # fixed g, decreasing splitting: g/Delta grows and the failure to
        # relax to the ground-state magnetization becomes more pronounced
        gaps = []
        for delta in (1.2, 0.8, 0.5, 0.3, 0.1):
            model = ModelParams.single_qubit(delta, 0.3, n_sites=400)
            sol = solve_single_qubit(model)
            bound = find_bound_state_single(sol, model)
            stat = stationary_magnetization(bound, sol, model)
            gaps.append(abs(stat - (-sol.delta_r / delta)))
        assert all(a < b for a, b in zip(gaps, gaps[1:]))

    def test_dressed_magnetization_sign(self):
        model = ModelParams.single_qubit(0.3, 0.3, n_sites=400)
        sol = solve_single_qubit(model)
        bound = find_bound_state_single(sol, model)
        value = dressed_magnetization(bound, sol, model)
        assert -1 <= value <= 1


class TestMarkov:
    def test_curve_limits(self):
        model = ModelParams.single_qubit(1.0, 0.1, n_sites=400)
        times = np.array([0.0, 1e6])
        curve = markov_sigma_z(model, times, rate=0.05)
        assert curve[0] == pytest.approx(1.0)
        assert curve[1] == pytest.approx(-1.0)

    def test_out_of_band_raises(self):
        model = ModelParams.single_qubit(0.3, 0.3, n_sites=400)
        with pytest.raises(ValueError):
            markov_rates(model)

    def test_non_strict_returns_none(self):
        model = ModelParams.single_qubit(0.3, 0.3, n_sites=400)
        sol = solve_single_qubit(model)
        bare, renorm = markov_rates(model, sol, strict=False)
        assert bare is None and renorm is None

    def test_rate_ordering_follows_band_geometry(self):
        # J is minimal at the band center; above it J increases with
        # frequency, so the renormalized rate drops below the bare one
        model_above = ModelParams.single_qubit(1.3, 0.1, n_sites=400)
        sol = solve_single_qubit(model_above)
        bare, renorm = markov_rates(model_above, sol)
        assert sol.delta_r > model_above.omega0
        assert renorm < bare
        # below the center the ordering flips: the renormalized splitting
        # moves toward the band edge where the mode density diverges
        model_below = ModelParams.single_qubit(0.8, 0.1, n_sites=400)
        sol_b = solve_single_qubit(model_below)
        bare_b, renorm_b = markov_rates(model_below, sol_b)
        assert renorm_b > bare_b


class TestLaplaceDiagnostic:
    def test_pole_residual_is_higher_order(self):
        model = ModelParams.single_qubit(0.3, 0.3, n_sites=400)
        sol = solve_single_qubit(model)
        bound = find_bound_state_single(sol, model)
        residual = laplace_pole_residual(bound, sol, model)
        assert residual < 1e-2 * abs(bound.energy)
        model_w, sol_w = model, solve_single_qubit(
            ModelParams.single_qubit(0.3, 0.05, n_sites=400))
        bound_w = find_bound_state_single(sol_w, model_w)
        assert laplace_pole_residual(bound_w, sol_w, model_w) < residual
