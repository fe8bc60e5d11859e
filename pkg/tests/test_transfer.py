import numpy as np
import pytest

from wqed import (ModelParams, adiabaticity_check, default_schedule,
                  extract_tight_binding, find_bound_states_two, rabi_period,
                  simulate_protocol, solve_two_qubit, tb_transfer_fidelity)
from wqed.errors import ConfigError
from wqed.transfer import ProtocolSchedule, Segment, protocol_hamiltonian

# frozen from the first full run: (delta=0.3, g=0.3, x=5, N=128,
# ramp_factor=50, 400 steps/segment)
FROZEN_FIDELITY = 0.9996445864244238
FROZEN_TAU = 0.00023538545960619106


@pytest.fixture(scope="module")
def protocol_model():
    return ModelParams.two_qubit(0.3, 0.3, 5, n_sites=128)


@pytest.fixture(scope="module")
def schedule_and_tb(protocol_model):
    return default_schedule(protocol_model)


class TestTightBinding:
    def test_extraction_and_eigenvalues(self, pair_cache):
        model, sol = pair_cache(0.3, 0.3, 5)
        states = find_bound_states_two(sol, model)
        tb = extract_tight_binding(states)
        assert tb.tau > 0
        lo, hi = tb.eigenvalues
        assert lo == pytest.approx(states[0].energy, abs=1e-14)
        assert hi == pytest.approx(states[1].energy, abs=1e-14)

    def test_far_separation_hopping_vanishes(self, pair_cache):
        model, sol = pair_cache(0.3, 0.3, 20)
        tb = extract_tight_binding(find_bound_states_two(sol, model))
        assert abs(tb.tau) < 1e-6

    def test_missing_antisymmetric_state_rejected(self):
        model = ModelParams.two_qubit(0.3, 0.3, 2, lambda_hop=0.42,
                                      n_sites=500)
        sol = solve_two_qubit(model)
        states = find_bound_states_two(sol, model)
        with pytest.raises(ConfigError, match="two-level"):
            extract_tight_binding(states)

    def test_swap_time_transfers_fully_in_closed_form(self, schedule_and_tb):
        schedule, tb = schedule_and_tb
        assert tb_transfer_fidelity(schedule, tb) > 0.99


class TestScheduleValidation:
    def test_undeclared_jump_rejected(self):
        with pytest.raises(ConfigError, match="instantaneous"):
            ProtocolSchedule((
                Segment("a", 1.0, 0.0, 0.3, 0.0, 0.0),
                Segment("b", 1.0, 0.3, 0.3, 0.3, 0.3),
            ))

    def test_instantaneous_needs_zero_duration(self):
        with pytest.raises(ConfigError):
            Segment("jump", 1.0, 0.0, 0.3, 0.0, 0.0, "instantaneous")

    def test_negative_coupling_rejected(self):
        with pytest.raises(ConfigError):
            Segment("bad", 1.0, -0.1, 0.3, 0.0, 0.0)

    def test_smoothstep_endpoints(self):
        seg = Segment("ramp", 2.0, 0.0, 0.3, 0.0, 0.0, "smoothstep")
        assert seg.couplings_at(0.0) == (0.0, 0.0)
        assert seg.couplings_at(1.0) == (0.3, 0.0)
        mid = seg.couplings_at(0.5)
        assert mid[0] == pytest.approx(0.15)


class TestProtocolHamiltonian:
    def test_bare_limit(self, protocol_model):
        h = protocol_hamiltonian(protocol_model, 0.0, 0.0)
        grid = protocol_model.grid()
        expect = np.diag(np.concatenate([[0.3, 0.3], grid.omega]))
        assert np.max(np.abs(h - expect)) < 1e-15

    def test_single_coupling_block_structure(self, protocol_model):
        h = protocol_hamiltonian(protocol_model, 0.3, 0.0)
        assert np.max(np.abs(h[1, 2:])) == 0            # right qubit decoupled
        assert h[1, 1] == pytest.approx(0.3)            # and bare
        assert np.max(np.abs(h[0, 2:])) > 0
        assert h[0, 1] == 0

    def test_unequal_couplings_hermitian_with_exchange(self, protocol_model):
        h = protocol_hamiltonian(protocol_model, 0.3, 0.2)
        assert np.max(np.abs(h - h.conj().T)) < 1e-14
        assert h[0, 1] != 0

    def test_symmetrized_exchange_matches_shared_frame_scale(self,
                                                             protocol_model):
        # at equal couplings the symmetrized Ising constant must be close to
        # the full two-qubit variational one
        h_uneq = protocol_hamiltonian(protocol_model, 0.3, 0.3 - 1e-12)
        sol = solve_two_qubit(protocol_model)
        assert abs(-h_uneq[0, 1].real - sol.j_ising) < 0.05 * abs(sol.j_ising)


class TestSimulation:
    def test_no_coupling_no_transfer(self, protocol_model):
        schedule = ProtocolSchedule((
            Segment("idle", 50.0, 0.0, 0.0, 0.0, 0.0, "linear"),
        ))
        result = simulate_protocol(protocol_model, schedule,
                                   steps_per_segment=16)
        assert result.fidelity < 1e-12
        assert result.p_left[-1] == pytest.approx(1.0, abs=1e-12)

    def test_full_protocol_frozen_fidelity(self, protocol_model,
                                           schedule_and_tb):
        schedule, tb = schedule_and_tb
        assert tb.tau == pytest.approx(FROZEN_TAU, rel=1e-9)
        result = simulate_protocol(protocol_model, schedule,
                                   steps_per_segment=400)
        assert result.fidelity == pytest.approx(FROZEN_FIDELITY, abs=1e-6)
        assert result.fidelity > 0.9
        assert result.norm_drift < 1e-6

    def test_rabi_period_matches_tight_binding(self, protocol_model,
                                               schedule_and_tb):
        _, tb = schedule_and_tb
        period = rabi_period(protocol_model)
        assert period == pytest.approx(np.pi / tb.tau, rel=0.05)


class TestAdiabaticity:
    def test_report_structure(self, protocol_model, schedule_and_tb):
        schedule, _ = schedule_and_tb
        report = adiabaticity_check(schedule, protocol_model, samples=4)
        names = [row["segment"] for row in report]
        assert names == [s.name for s in schedule.segments]
        by_name = {row["segment"]: row for row in report}
        assert by_name["switch-on-right"]["diabatic"] is True
        assert not by_name["ramp-up-left"]["diabatic"]

    def test_default_ramps_pass_threshold(self, protocol_model,
                                          schedule_and_tb):
        schedule, _ = schedule_and_tb
        report = adiabaticity_check(schedule, protocol_model, threshold=0.1,
                                    samples=4)
        for row in report:
            if not row["diabatic"]:
                assert row["passes"], row

    def test_fast_ramp_is_flagged(self, protocol_model):
        schedule = ProtocolSchedule((
            Segment("blitz", 0.5, 0.0, 0.3, 0.0, 0.0, "linear"),
        ))
        report = adiabaticity_check(schedule, protocol_model, threshold=0.1,
                                    samples=4)
        assert not report[0]["passes"]
