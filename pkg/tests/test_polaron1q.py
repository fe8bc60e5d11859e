import numpy as np
import pytest
from scipy.optimize import brentq

from wqed import (ModelParams, excited_probability, gs_localization_length,
                  gs_photon_numbers, sigma_z_gs, solve_single_qubit)
from wqed.errors import ConfigError, ConvergenceError
from wqed.model import coupling_strength
from wqed.polaron1q import fit_tail_rate, gs_energy_functional, site_amplitudes

# frozen from the first converged run at N = 2000 (regression constants)
DELTA_R_03_G03 = 0.2628317225652006
DELTA_R_03_G05 = 0.19789351563659396


def scalar_fixed_point(model):
    """Independent oracle: eliminate f_k and root-find the scalar map."""
    grid = model.grid()
    ck = coupling_strength(model.couplings[0], model.n_sites)

    def h(dr):
        return dr - model.delta * np.exp(
            -2 * np.sum((ck / (dr + grid.omega)) ** 2))

    return brentq(h, 1e-9, model.delta, xtol=1e-15)


class TestSolve:
    def test_decoupled_limit(self, solution_cache):
        model, sol = solution_cache(0.3, 0.0)
        assert sol.delta_r == pytest.approx(0.3, abs=1e-15)
        assert np.all(sol.f_k == 0)
        assert sol.e_gs == pytest.approx(-0.15, abs=1e-15)

    def test_small_g_against_scalar_oracle(self, solution_cache):
        model, sol = solution_cache(0.3, 0.1)
        assert sol.delta_r == pytest.approx(scalar_fixed_point(model), abs=1e-11)

    def test_small_g_leading_order(self, solution_cache):
        # one sweep from Delta_r = Delta gives 1 - 2 sum c^2/(Delta+w)^2
        g = 0.02
        model, sol = solution_cache(0.3, g)
        grid = model.grid()
        ck = coupling_strength(g, model.n_sites)
        leading = 0.3 * (1 - 2 * np.sum((ck / (0.3 + grid.omega)) ** 2))
        assert sol.delta_r == pytest.approx(leading, abs=5 * g**4)

    def test_frozen_regression_values(self):
        for g, frozen in [(0.3, DELTA_R_03_G03), (0.5, DELTA_R_03_G05)]:
            model = ModelParams.single_qubit(0.3, g)
            sol = solve_single_qubit(model)
            assert sol.delta_r == pytest.approx(frozen, abs=1e-10)

    def test_monotone_decrease_in_g(self, solution_cache):
        values = [solution_cache(0.3, g)[1] for g in
                  (0.05, 0.1, 0.2, 0.3, 0.4, 0.5)]
        drs = [s.delta_r for s in values]
        egs = [s.e_gs for s in values]
        assert all(a > b for a, b in zip(drs, drs[1:]))
        assert all(a > b for a, b in zip(egs, egs[1:]))

    def test_residual_contract(self, solution_cache):
        model, sol = solution_cache(0.3, 0.3)
        target = model.delta * np.exp(-2 * np.sum(sol.f_k**2))
        assert abs(sol.delta_r - target) < 1e-12 * model.delta
        assert sol.residual < 1e-12 * model.delta

    def test_f_k_even(self, solution_cache):
        model, sol = solution_cache(0.3, 0.3)
        grid = model.grid()
        folded = np.mod(-grid.k + np.pi, 2 * np.pi) - np.pi
        idx = {round(k, 12): i for i, k in enumerate(grid.k)}
        partner = [idx[round(k, 12)] for k in folded]
        assert np.max(np.abs(sol.f_k - sol.f_k[partner])) < 1e-14

    def test_energy_below_decoupled(self, solution_cache):
        for g in (0.1, 0.3, 0.5):
            _, sol = solution_cache(0.3, g)
            assert sol.e_gs <= -0.15 + 1e-15

    def test_variational_optimality(self, solution_cache, rng):
        model, sol = solution_cache(0.3, 0.3)
        e0 = gs_energy_functional(sol.f_k, model)
        # stored energy re-derivable from f up to the fixed-point residual
        assert e0 == pytest.approx(sol.e_gs, abs=1e-11)
        n = model.n_sites
        m = np.arange(n)
        partner = (n - m) % n
        for _ in range(20):
            pert = rng.normal(size=n)
            pert = 0.5 * (pert + pert[partner])      # exactly even on the grid
            pert = 1e-4 * pert / np.linalg.norm(pert)
            for sign in (+1, -1):
                assert gs_energy_functional(sol.f_k + sign * pert, model) >= e0

    def test_rejects_two_qubit_model(self):
        model = ModelParams.two_qubit(0.3, 0.3, 5, n_sites=400)
        with pytest.raises(ConfigError):
            solve_single_qubit(model)

    def test_convergence_error_carries_residual(self):
        model = ModelParams.single_qubit(0.3, 0.3, n_sites=400)
        with pytest.raises(ConvergenceError) as err:
            solve_single_qubit(model, max_iter=2)
        assert err.value.residual is not None


class TestObservables:
    def test_excited_probability_algebra(self, solution_cache):
        model, sol = solution_cache(0.3, 0.0)
        assert excited_probability(sol, model) == 0.0
        half = sol.__class__(f_k=sol.f_k, delta_r=0.15, e_gs=sol.e_gs,
                             iterations=1, residual=0.0)
        assert excited_probability(half, model) == pytest.approx(0.25)
        tiny = sol.__class__(f_k=sol.f_k, delta_r=1e-14, e_gs=sol.e_gs,
                             iterations=1, residual=0.0)
        assert excited_probability(tiny, model) == pytest.approx(0.5, abs=1e-12)

    def test_sigma_z_is_minus_ratio(self, solution_cache):
        model, sol = solution_cache(0.3, 0.3)
        assert sigma_z_gs(sol, model) == pytest.approx(-sol.delta_r / 0.3)

    def test_photons_zero_at_zero_coupling(self, solution_cache):
        model, sol = solution_cache(0.3, 0.0)
        assert np.all(gs_photon_numbers(sol, model) == 0)

    def test_photon_parseval(self, solution_cache):
        model, sol = solution_cache(0.3, 0.3, n_sites=2000)
        total_sites = float(np.sum(gs_photon_numbers(sol, model)))
        total_modes = float(np.sum(sol.f_k**2))
        assert abs(total_sites - total_modes) < 1e-12 * total_modes

    def test_localization_closed_form(self):
        model = ModelParams.single_qubit(0.3, 0.3, n_sites=400)
        sol = solve_single_qubit(model)
        fixed = sol.__class__(f_k=sol.f_k, delta_r=0.3, e_gs=sol.e_gs,
                              iterations=1, residual=0.0)
        assert gs_localization_length(fixed, model) == pytest.approx(
            1 / np.arccosh(3.25))

    def test_larger_renormalized_splitting_shortens_cloud(self, solution_cache):
        model, _ = solution_cache(0.3, 0.3)
        lows = solve_single_qubit(ModelParams.single_qubit(0.1, 0.3, n_sites=400))
        highs = solve_single_qubit(ModelParams.single_qubit(1.0, 0.3, n_sites=400))
        assert (gs_localization_length(highs, model)
                < gs_localization_length(lows, model))

    def test_tail_rate_matches_arccosh(self):
        model = ModelParams.single_qubit(0.3, 0.3, n_sites=2000)
        sol = solve_single_qubit(model)
        fn = site_amplitudes(sol, model)
        center = model.positions[0]
        offsets = np.arange(0, 26)
        rate = fit_tail_rate(fn[center + offsets], offsets)
        kappa = 1.0 / gs_localization_length(sol, model)
        assert rate == pytest.approx(kappa, rel=0.01)
