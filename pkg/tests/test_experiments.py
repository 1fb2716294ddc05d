"""Sweeps, surfaces, and thresholds: structure, closed forms, determinism."""

import math
import os

import numpy as np
import pytest

from ctcsim.experiments import (
    WORKING_POINT_PHI,
    WORKING_POINT_THETA,
    decoherence_surface,
    discrimination_sweep,
    find_threshold,
    identification_sweep,
    nonlinearity_sweep,
    optimal_measurement_sweep,
    validate_records,
)


class TestNonlinearitySweep:
    def test_default_grid_covers_fourteen_states(self):
        recs = [r for r in nonlinearity_sweep() if r.n_iterations == 1]
        assert len(recs) == 14
        assert len({(r.phi, r.phase) for r in recs}) == 14

    def test_closed_form_curves(self):
        """Loop curve sin^2(phi)/2, baseline sin^2(phi/2), both to 1e-10."""
        for k in range(17):
            phi = k * math.pi / 16
            r = nonlinearity_sweep([phi], [0.0], iterations=[])[0]
            assert abs(r.L_ctc_sigma_z - 0.5 * math.sin(phi) ** 2) <= 1e-10
            assert abs(r.L_qm - math.sin(phi / 2) ** 2) <= 1e-10
            assert abs(r.D_ctc - 0.5 * math.sin(phi) ** 2) <= 1e-10
            assert abs(r.D_qm - math.sin(phi / 2)) <= 1e-10

    def test_advantage_region_boundary(self):
        quarter = nonlinearity_sweep([math.pi / 4], [0.0], iterations=[])[0]
        assert quarter.L_ctc_sigma_z == pytest.approx(0.25, abs=1e-12)
        assert quarter.L_qm == pytest.approx(math.sin(math.pi / 8) ** 2, abs=1e-12)
        assert quarter.L_ctc_sigma_z > quarter.L_qm
        assert quarter.D_ctc < quarter.D_qm  # the metric misses the effect
        boundary = nonlinearity_sweep([math.pi / 2], [0.0], iterations=[])[0]
        assert abs(boundary.L_ctc_sigma_z - boundary.L_qm) <= 1e-10

    def test_iterated_rows_bracket_the_baseline(self):
        recs = nonlinearity_sweep([math.pi / 4], [0.0], iterations=[2, 3])
        by_n = {r.n_iterations: r for r in recs}
        assert by_n[2].D_ctc == pytest.approx(0.375, abs=1e-10)
        assert by_n[3].D_ctc == pytest.approx(0.46875, abs=1e-10)
        assert by_n[2].D_ctc < by_n[2].D_qm < by_n[3].D_ctc

    def test_empty_grid_rejected(self):
        from ctcsim.qmath import ValidationError

        with pytest.raises(ValidationError):
            nonlinearity_sweep([], [0.0])


class TestDiscriminationSweep:
    def test_local_optimal_gate_is_perfect_everywhere(self):
        recs = discrimination_sweep("local", "optimal-gate", 32)
        assert len(recs) == 32
        for r in recs:
            if r.phi == 0.0:
                assert r.fixed_set_dimension > 1  # flagged, not skipped
                continue
            assert abs(r.L_ctc_sigma_z - 1.0) <= 1e-9
            assert r.fixed_point_residual <= 1e-10
            assert r.theta_xz == pytest.approx((r.phi - math.pi) / 2)

    def test_nonlocal_never_beats_coin_flip(self):
        for variant, n in (("optimal-gate", 16), ("fixed-state", 16), ("fixed-gate", 16)):
            for r in discrimination_sweep("nonlocal", variant, n):
                assert r.L_ctc_sigma_z <= 0.5 + 1e-9

    def test_fixed_state_cut_closed_form(self):
        """Local fixed-state cut: L = 1/(2 - sin(2 theta)), peaking at theta = pi/4."""
        recs = discrimination_sweep("local", "fixed-state", 16)
        for r in recs:
            expected = 1.0 / (2.0 - math.sin(2 * r.theta_xz))
            assert r.L_ctc_sigma_z == pytest.approx(expected, abs=1e-10)
            assert r.phi == WORKING_POINT_PHI
            assert r.L_qm == pytest.approx(0.75, abs=1e-12)

    def test_fixed_gate_cut_closed_form(self):
        """Local fixed-gate cut: output z is (cos+sin)/(2-cos+sin) of phi."""
        recs = discrimination_sweep("local", "fixed-gate", 16)
        for r in recs:
            s_z = (math.cos(r.phi) + math.sin(r.phi)) / (2 - math.cos(r.phi) + math.sin(r.phi))
            assert r.L_ctc_sigma_z == pytest.approx((1 - s_z) / 2, abs=1e-10)
            assert r.theta_xz == WORKING_POINT_THETA

    def test_record_invariants(self):
        recs = discrimination_sweep("local", "fixed-gate", 8)
        assert validate_records(recs) == []
        for r in recs:
            assert r.L_ctc_optimal >= r.L_ctc_sigma_z - 1e-12

    def test_grid_size_validated(self):
        from ctcsim.qmath import ValidationError

        with pytest.raises(ValidationError):
            discrimination_sweep("local", "optimal-gate", 1)
        with pytest.raises(ValidationError):
            discrimination_sweep("local", "sideways", 8)


class TestDecoherenceSurface:
    def test_corners(self):
        recs = decoherence_surface([0.0, 1.0], [0.0, 1.0])
        by_corner = {(r.p, r.epsilon): r for r in recs}
        assert by_corner[(0.0, 0.0)].L_ctc_sigma_z == pytest.approx(1.0, abs=1e-9)
        assert by_corner[(0.0, 1.0)].L_ctc_sigma_z == pytest.approx(0.5, abs=1e-9)
        assert by_corner[(1.0, 0.0)].L_ctc_sigma_z == pytest.approx(0.5, abs=1e-9)

    def test_closed_form_on_coarse_grid(self):
        """L = (1 + q^2 (1-e^2)/(2-q(1-e))^2)/2 with q = 1-p at the working point."""
        for p in (0.0, 0.25, 0.6):
            for e in (0.0, 0.3, 0.8):
                r = decoherence_surface([p], [e])[0]
                q, f = 1 - p, 1 - e
                expected = 0.5 * (1 + q * q * (1 - e * e) / (2 - q * f) ** 2)
                assert r.L_ctc_sigma_z == pytest.approx(expected, abs=1e-10)

    def test_monotone_along_axes(self):
        grid = np.linspace(0, 1, 11).tolist()
        vs_p = [r.L_ctc_sigma_z for r in decoherence_surface(grid, [0.0])]
        vs_e = [r.L_ctc_sigma_z for r in decoherence_surface([0.0], grid)]
        assert all(a >= b - 1e-12 for a, b in zip(vs_p, vs_p[1:]))
        assert all(a >= b - 1e-12 for a, b in zip(vs_e, vs_e[1:]))

    def test_grid_bounds_validated(self):
        from ctcsim.qmath import ValidationError

        with pytest.raises(ValidationError):
            decoherence_surface([0.0, 1.5], [0.0])


class TestThresholds:
    def test_depolarization_threshold(self):
        thr = find_threshold("p")
        assert thr.crossing == pytest.approx(math.sqrt(2) - 1, abs=1e-6)
        assert thr.achieved_tolerance <= 1e-9
        assert thr.bracket[0] < thr.crossing < thr.bracket[1]

    def test_gate_noise_threshold(self):
        thr = find_threshold("epsilon")
        assert thr.crossing == pytest.approx(1 / 3, abs=1e-6)

    def test_advantage_at_zero_noise(self):
        from ctcsim.experiments import _advantage_gap

        assert _advantage_gap("p", 0.0) == pytest.approx(0.25, abs=1e-9)

    def test_unknown_parameter_rejected(self):
        from ctcsim.qmath import ValidationError

        with pytest.raises(ValidationError):
            find_threshold("q")


class TestSupplementSweeps:
    def test_nonlocal_optimal_measure_plateau(self):
        for variant in ("optimal-gate", "fixed-state", "fixed-gate"):
            for r in optimal_measurement_sweep("nonlocal", variant, 12):
                assert abs(r.L_ctc_optimal - 0.5) <= 1e-9
                assert r.experiment_id == f"s1-{variant}-nonlocal"

    def test_identification_values_at_working_point(self):
        recs = identification_sweep("local", "optimal-gate", 8)
        peak = [r for r in recs if abs(r.phi - 3 * math.pi / 2) < 1e-9][0]
        assert peak.p_succ_ctc == pytest.approx(1.0, abs=1e-9)
        assert peak.p_succ_qm == pytest.approx(0.8535533905932737, abs=1e-12)

    def test_nonlocal_identification_never_beats_coin_flip(self):
        for r in identification_sweep("nonlocal", "fixed-gate", 12):
            assert r.p_succ_ctc <= 0.5 + 1e-9

    def test_identical_inputs_are_indistinguishable(self):
        recs = identification_sweep("local", "fixed-gate", 8)
        zero = [r for r in recs if r.phi == 0.0][0]
        assert zero.p_succ_ctc == pytest.approx(0.5, abs=1e-9)
        assert zero.p_succ_qm == pytest.approx(0.5, abs=1e-9)


class TestDeterminism:
    def test_repeated_runs_are_bit_identical(self):
        a = discrimination_sweep("local", "fixed-state", 8)
        b = discrimination_sweep("local", "fixed-state", 8)
        assert a == b

    def test_thread_pool_preserves_order_and_values(self):
        sequential = decoherence_surface([0.0, 0.5, 1.0], [0.0, 0.5, 1.0])
        os.environ["CTCSIM_THREADS"] = "4"
        try:
            threaded = decoherence_surface([0.0, 0.5, 1.0], [0.0, 0.5, 1.0])
        finally:
            del os.environ["CTCSIM_THREADS"]
        assert sequential == threaded
