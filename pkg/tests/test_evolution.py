"""Time-evolution tests: conservation, exact linear propagation, stepping.

Heavier end-to-end experiments (soliton transits, 1e4-step conservation)
live in the acceptance module; these tests cover the pieces at small scale.
"""

import dataclasses
import math

import numpy as np
import pytest

import gkdv.evolution as ev
import gkdv.traveling_wave as tw
from gkdv.errors import BandLimitError, BlowUpError, StabilityError
from gkdv.params import PhysicalParams
from gkdv.spectral import PeriodicGrid, SpectralField

PARAMS = PhysicalParams(h=1.0, g=9.81)


@pytest.fixture
def grid():
    return PeriodicGrid(L=40.0, N=256)


def cosine_field(grid, j, amp):
    return SpectralField.from_values(grid, amp * np.cos(grid.k[j] * (grid.x - grid.x0)))


class TestRhs:
    def test_zero_field(self, grid):
        f = SpectralField.zero(grid)
        assert np.max(np.abs(ev.rhs_gkdv(f, PARAMS).values)) == 0.0
        assert np.max(np.abs(ev.rhs_kdv(f, PARAMS).values)) == 0.0

    def test_constant_field(self, grid):
        f = SpectralField.from_values(grid, np.full(grid.N, 0.3))
        assert np.max(np.abs(ev.rhs_gkdv(f, PARAMS).values)) < 1e-14
        assert np.max(np.abs(ev.rhs_kdv(f, PARAMS).values)) < 1e-14

    def test_gkdv_linearization(self, grid):
        # eta = eps cos(kx): rhs -> (c0/h) sinh(kh) eps sin(kx) + O(eps^2),
        # cross-checked through the model dispersion
        j, eps = 6, 1e-8
        k = grid.k[j]
        f = cosine_field(grid, j, eps)
        out = ev.rhs_gkdv(f, PARAMS)
        omega = (PARAMS.c0 / PARAMS.h) * math.sinh(k * PARAMS.h)
        expected = omega * eps * np.sin(k * (grid.x - grid.x0))
        assert np.max(np.abs(out.values - expected)) < 1e-6 * omega * eps

    def test_kdv_linearization(self, grid):
        j, eps = 6, 1e-8
        k = grid.k[j]
        f = cosine_field(grid, j, eps)
        out = ev.rhs_kdv(f, PARAMS)
        omega = PARAMS.c0 * (k + PARAMS.h**2 * k**3 / 6.0)
        expected = omega * eps * np.sin(k * (grid.x - grid.x0))
        assert np.max(np.abs(out.values - expected)) < 1e-6 * omega * eps

    def test_rhs_difference_scales_with_h_squared(self, grid):
        # amplitude tied to depth (the model's smallness regime): the
        # relative rhs gap between the full and third-order equations
        # then scales as h^2
        shape = np.cos(3 * np.pi * (grid.x - grid.x0 + grid.L) / grid.L)
        hs = np.array([0.4, 0.2, 0.1])
        ratios = []
        for h in hs:
            p = PhysicalParams(h=float(h), g=9.81)
            eta = SpectralField.from_values(grid, 0.05 * h * shape)
            diff = ev.rhs_gkdv(eta, p) - ev.rhs_kdv(eta, p)
            ratios.append(np.linalg.norm(diff.values) / np.linalg.norm(ev.rhs_kdv(eta, p).values))
        slope = np.polyfit(np.log(hs), np.log(ratios), 1)[0]
        assert abs(slope - 2.0) < 0.2


class TestEvolutionState:
    def test_dealias_enforced_on_construction(self, grid):
        rng = np.random.default_rng(0)
        field = SpectralField.from_values(grid, 0.01 * rng.standard_normal(grid.N))
        state = ev.EvolutionState(field=field, t=0.0, params=PARAMS, dt=0.01)
        mask = ev.dealias_mask(grid)
        assert np.all(state.field.coeffs[~mask] == 0.0)

    def test_filter_default_per_equation(self, grid):
        f = SpectralField.zero(grid)
        assert ev.EvolutionState(field=f, t=0.0, params=PARAMS, dt=0.01, equation="gkdv").filter_on
        assert not ev.EvolutionState(field=f, t=0.0, params=PARAMS, dt=0.01, equation="kdv").filter_on

    def test_band_limit_guard(self):
        tight = PeriodicGrid(L=10.0, N=256)  # k_max = 25.6/h beyond 20
        with pytest.raises(BandLimitError):
            ev.EvolutionState(field=SpectralField.zero(tight), t=0.0, params=PARAMS, dt=0.01)

    def test_rejects_unknown_equation(self, grid):
        with pytest.raises(ValueError):
            ev.EvolutionState(field=SpectralField.zero(grid), t=0.0, params=PARAMS,
                              dt=0.01, equation="mkdv")


class TestStep:
    def test_zero_stays_zero(self, grid):
        state = ev.EvolutionState(field=SpectralField.zero(grid), t=0.0, params=PARAMS, dt=0.01)
        out = ev.step(state)
        assert np.max(np.abs(out.field.values)) == 0.0
        assert out.t == pytest.approx(0.01)

    def test_linear_only_single_mode_phase(self, grid):
        # integrating factor is exact for the linear part: per-mode phase
        # rotation exp(-i (c0/h) sinh(kh) t) to round-off
        j = 5
        state = ev.EvolutionState(
            field=cosine_field(grid, j, 1e-3), t=0.0, params=PARAMS, dt=0.02,
            linear_only=True, filter_on=False,
        )
        n = 50
        for _ in range(n):
            state = ev.step(state)
        omega = (PARAMS.c0 / PARAMS.h) * math.sinh(grid.k[j] * PARAMS.h)
        expected = cosine_field(grid, j, 1e-3).coeffs[j] * np.exp(-1j * omega * state.t)
        assert abs(state.field.coeffs[j] - expected) <= 1e-8 * abs(expected)

    def test_mean_exactly_conserved(self, grid):
        x = grid.x - grid.x0
        vals = 0.1 + 0.02 * np.cos(3 * np.pi * x / grid.L) + 0.01 * np.sin(5 * np.pi * x / grid.L)
        state = ev.EvolutionState(
            field=SpectralField.from_values(grid, vals), t=0.0, params=PARAMS, dt=0.005,
        )
        m0 = state.mass()
        for _ in range(20):
            state = ev.step(state)
        assert state.mass() == m0  # bit-exact: nonlinear term is a pure derivative

    def test_time_reversal(self, grid):
        x = grid.x - grid.x0
        vals = 0.05 * np.cos(2 * np.pi * x / grid.L) + 0.02 * np.sin(7 * np.pi * x / grid.L)
        state = ev.EvolutionState(
            field=SpectralField.from_values(grid, vals), t=0.0, params=PARAMS, dt=0.005,
            filter_on=False,
        )
        fwd = ev.step(state)
        back = ev.step(dataclasses.replace(fwd, dt=-0.005))
        ref = state.field.values
        assert np.max(np.abs(back.field.values - ref)) <= 1e-10 * np.max(np.abs(ref))

    def test_stability_guard_advective(self, grid):
        # a huge amplitude makes the advective estimate blow the budget
        state = ev.EvolutionState(
            field=cosine_field(grid, 3, 50.0), t=0.0, params=PARAMS, dt=0.5,
            equation="kdv",
        )
        with pytest.raises(StabilityError):
            ev.step(state)

    def test_resonance_guard_gkdv(self):
        # fine gkdv grid: dt must resolve the cutoff linear frequency
        grid = PeriodicGrid(L=80.0, N=512)
        state = ev.EvolutionState(
            field=SpectralField.zero(grid), t=0.0, params=PARAMS, dt=0.05,
            equation="gkdv",
        )
        with pytest.raises(StabilityError):
            ev.step(state)

    def test_blow_up_reported(self, grid):
        # seed with non-finite data sneaked in through from_coeffs
        coeffs = np.zeros(grid.N // 2 + 1, dtype=complex)
        coeffs[1] = np.inf
        bad = SpectralField(grid, np.zeros(grid.N), coeffs)
        state = ev.EvolutionState(field=bad, t=0.0, params=PARAMS, dt=0.01,
                                  linear_only=True, filter_on=False,
                                  dealias_fraction=1.0)
        with pytest.raises(BlowUpError):
            ev.step(state)


class TestEvolve:
    def test_records_and_final_time(self, grid):
        state = ev.EvolutionState(
            field=cosine_field(grid, 3, 0.01), t=0.0, params=PARAMS, dt=0.01,
        )
        traj = ev.evolve(state, T=0.5, record_every=10)
        assert traj.final_state.t == pytest.approx(0.5)
        assert len(traj.times) == 6  # t = 0 plus every 10th of 50 steps
        assert traj.mass_drift_rel <= 1e-14

    def test_observer_callbacks(self, grid):
        seen = []
        state = ev.EvolutionState(
            field=cosine_field(grid, 3, 0.01), t=0.0, params=PARAMS, dt=0.01,
        )
        ev.evolve(state, T=0.1, record_every=5, observers=[lambda s: seen.append(s.t)])
        assert seen[0] == 0.0
        assert seen[-1] == pytest.approx(0.1)

    def test_peak_tracking_through_wraparound(self):
        # a soliton crossing the periodic seam must unwrap monotonically
        grid = PeriodicGrid(L=80.0, N=256)
        sol = tw.build_solution(0.5, 1.0, 60, mode=tw.MODE_STEADY_DERIVED, shallow=True)
        prof = tw.reconstruct_profile(sol, grid.x - grid.x0 - 70.0)  # near the right edge
        state = ev.EvolutionState(
            field=SpectralField.from_values(grid, prof), t=0.0, params=PARAMS, dt=0.02,
            equation="kdv",
        )
        traj = ev.evolve(state, T=20.0, record_every=25)
        assert np.all(np.diff(traj.peak_x) > 0)  # rightward, no 2L jumps
        v_pred = PARAMS.c0 * (1.0 - 0.25 / 6.0)
        assert traj.measured_speed == pytest.approx(v_pred, rel=2e-3)

    def test_rejects_nonpositive_horizon(self, grid):
        state = ev.EvolutionState(field=SpectralField.zero(grid), t=0.0, params=PARAMS, dt=0.01)
        with pytest.raises(ValueError):
            ev.evolve(state, T=0.0)

    def test_energy_not_claimed_conserved_but_recorded(self, grid):
        state = ev.EvolutionState(
            field=cosine_field(grid, 4, 0.05), t=0.0, params=PARAMS, dt=0.01,
        )
        traj = ev.evolve(state, T=0.3, record_every=10)
        assert traj.energy.shape == traj.times.shape
        assert np.all(traj.energy > 0)
