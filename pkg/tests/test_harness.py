import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from biheat.errors import ParameterError
from biheat.harness import (
    CheckReport,
    assemble_constants,
    check_cy,
    check_growth,
    check_interp1,
    check_interp2,
    check_lm1,
    check_main3,
    check_theorem1_region,
    cy1_constant,
    cy2_constant,
    interp_constant,
    iterated_interp_constant,
    minimal_region_constant,
    random_band_limited,
    run_suite,
    uniqueness_experiment,
)
from biheat.quantities import make_cutoff
from biheat.spectral import ScalarField, make_grid, run_trajectory, sample_field


@pytest.fixture(scope="module")
def grid():
    return make_grid(1, 10.0, 512)


@pytest.fixture(scope="module")
def cutoff(grid):
    return make_cutoff(grid, 0.0, 2.0, 12.0)


@pytest.fixture(scope="module")
def zero_field(grid):
    return ScalarField(grid, np.zeros(512))


class TestConstants:
    def test_interp_constant_example(self):
        # 16 * (1 + 512 * 9^4) with c_gamma = 1
        assert interp_constant(1.0, 9.0, 1.0) == 53747728.0

    def test_lemma_delta_choices_recorded(self):
        t = assemble_constants(1.0, 12.0, 1, 1.0, 1.0, 1)
        assert t.delta1_first == 0.25
        assert t.delta1_second == 1.0 / 16.0
        assert t.delta2_first == pytest.approx(1.0 / (32.0 * 144.0))

    def test_all_positive_finite(self):
        t = assemble_constants(0.5, 13.0, 1, 10.33, 0.1, 2)
        for name in ("c_delta0", "c1", "c2", "c3", "c4", "c_hat"):
            v = getattr(t, name)
            assert math.isfinite(v) and v > 0

    def test_s_at_most_8_rejected(self):
        with pytest.raises(ParameterError, match="s > 8"):
            assemble_constants(1.0, 8.0, 1, 1.0, 1.0, 1)

    def test_s_at_most_4k_rejected(self):
        with pytest.raises(ParameterError, match="s > 4k"):
            assemble_constants(1.0, 11.0, 1, 1.0, 1.0, 3)

    def test_other_preconditions(self):
        with pytest.raises(ParameterError, match="eps"):
            assemble_constants(0.0, 12.0, 1, 1.0, 1.0, 1)
        with pytest.raises(ParameterError, match="delta0"):
            assemble_constants(1.0, 12.0, 1, 1.0, 0.0, 1)
        with pytest.raises(ParameterError, match="n"):
            assemble_constants(1.0, 12.0, 3, 1.0, 1.0, 1)

    def test_iterated_constant_base_case(self):
        assert iterated_interp_constant(0.3, 1, 9.0, 2.0) == 1.0

    def test_cy2_constant_single_layer_formula(self):
        s, c = 13.0, 2.0
        expected = 4.0 * (c**2 * s**2 + c**4 * s**2 * (s - 1.0) ** 2) + (
            16.0 * c**2 * s**2
        ) * (64.0 * c**2 * s**2 + c**2 * (s - 2.0) ** 2)
        assert cy2_constant(1, s, c) == expected

    def test_cy1_needs_s_above_8(self):
        with pytest.raises(ParameterError, match="s > 8"):
            cy1_constant(8.0, 1.0)

    @settings(max_examples=40, deadline=None)
    @given(
        d=st.floats(0.01, 10.0),
        factor=st.floats(1.1, 4.0),
        s=st.floats(8.5, 20.0),
        c=st.floats(1.0, 20.0),
    )
    def test_interp_constant_monotonicity(self, d, factor, s, c):
        base = interp_constant(d, s, c)
        assert interp_constant(d * factor, s, c) < base  # decreasing in delta0
        assert interp_constant(d, s * factor, c) > base  # increasing in s
        assert interp_constant(d, s, c * factor) > base  # increasing in c_gamma


class TestCheckReport:
    @settings(max_examples=50, deadline=None)
    @given(
        lhs=st.floats(-1e6, 1e6),
        rhs=st.floats(-1e6, 1e6),
        tol=st.floats(0.0, 1e3),
    )
    def test_pass_iff_margin_at_least_minus_tolerance(self, lhs, rhs, tol):
        r = CheckReport("x", lhs, rhs, tol)
        assert r.margin == rhs - lhs
        assert r.passed == (r.margin >= -tol)

    def test_as_dict_schema(self):
        d = CheckReport("x", 1.0, 2.0, 0.1, {"seed": 3, "k": 1}).as_dict()
        assert set(d) == {
            "name",
            "lhs",
            "rhs",
            "margin",
            "tolerance",
            "pass",
            "params",
            "seed",
        }
        assert d["seed"] == 3
        assert d["params"] == {"k": 1}


class TestRandomFields:
    def test_deterministic(self, grid):
        a = random_band_limited(grid, 11)
        b = random_band_limited(grid, 11)
        np.testing.assert_array_equal(a.values, b.values)

    def test_refined_grid_same_continuum_field(self, grid):
        coarse = random_band_limited(grid, 11, band_limit=32)
        fine = random_band_limited(make_grid(1, 10.0, 1024), 11, band_limit=32)
        np.testing.assert_allclose(coarse.values, fine.values[::2], atol=1e-12)

    def test_band_limit_validation(self, grid):
        with pytest.raises(ParameterError, match="band"):
            random_band_limited(grid, 0, band_limit=0)
        with pytest.raises(ParameterError, match="band"):
            random_band_limited(grid, 0, band_limit=256)


class TestEnergyIdentity:
    def test_zero_field_exact(self, zero_field, cutoff):
        r = check_lm1(zero_field, cutoff, 1)
        assert r.lhs == 0.0 and r.passed

    def test_constant_weight_reduces_to_dissipation(self, grid):
        u = random_band_limited(grid, 4)
        r = check_lm1(u, None, 1)
        assert r.context["right"] == 0.0
        assert r.lhs <= 1e-10

    def test_random_field_with_genuine_cutoff(self, grid, cutoff):
        for k in (0, 1, 2):
            r = check_lm1(random_band_limited(grid, 5), cutoff, k)
            assert r.lhs <= 1e-8, k

    def test_grid_mismatch(self, cutoff):
        u = sample_field(make_grid(1, 10.0, 256), np.sin)
        with pytest.raises(ParameterError, match="grid"):
            check_lm1(u, cutoff, 1)


class TestInterpolation:
    def test_zero_field_margin_zero(self, zero_field, cutoff):
        r = check_interp1(zero_field, 1, 12.0, 0.5, cutoff)
        assert r.lhs == 0.0 and r.rhs == 0.0 and r.passed

    def test_constant_field_trivial(self, grid, cutoff):
        u = ScalarField(grid, np.full(512, 3.7))
        # all derivatives vanish, so the left side is exactly zero; for k = 1
        # the right side keeps the (nonzero) zeroth-order weighted energy
        r = check_interp1(u, 1, 12.0, 0.5, cutoff)
        assert r.lhs == 0.0 and r.passed
        r2 = check_interp1(u, 2, 12.0, 0.5, cutoff)
        assert r2.lhs == 0.0 and r2.rhs == 0.0 and r2.passed

    def test_random_fields_pass(self, grid, cutoff):
        for seed in range(5):
            u = random_band_limited(grid, seed)
            for k in (1, 2):
                assert check_interp1(u, k, 12.0, 0.1, cutoff).passed

    def test_preconditions(self, zero_field, cutoff):
        with pytest.raises(ParameterError, match="s > 8"):
            check_interp1(zero_field, 1, 8.0, 0.5, cutoff)
        with pytest.raises(ParameterError, match="k"):
            check_interp1(zero_field, 0, 12.0, 0.5, cutoff)

    def test_interp2_base_case_margin_is_delta_term(self, grid, cutoff):
        from biheat.quantities import weighted_energy

        u = random_band_limited(grid, 9)
        delta = 0.5
        r = check_interp2(u, 1, 12.0, delta, cutoff)
        expected = delta * cutoff.rho**4 * weighted_energy(u, 2, cutoff, exponent=12.0)
        assert r.margin == pytest.approx(expected, rel=1e-12)

    def test_interp2_random_pass(self, grid, cutoff):
        for seed in range(5):
            assert check_interp2(
                random_band_limited(grid, seed), 2, 12.0, 0.5, cutoff
            ).passed

    def test_interp2_preconditions(self, zero_field, cutoff):
        with pytest.raises(ParameterError, match="s > 4k"):
            check_interp2(zero_field, 3, 12.0, 0.5, cutoff)


class TestDifferentialInequalities:
    def test_zero_data_margins_zero(self, zero_field, cutoff):
        for rep in check_cy(zero_field, cutoff, 1, 12.0, "CY1", (0.0, 0.2)):
            assert rep.lhs == 0.0 and rep.rhs == 0.0 and rep.passed

    def test_constant_data_trivial(self, grid, cutoff):
        u = ScalarField(grid, np.full(512, 2.0))
        for rep in check_cy(u, cutoff, 1, 12.0, "CY2", (0.0,)):
            assert rep.lhs == 0.0 and rep.rhs == 0.0 and rep.passed

    def test_random_trajectories_pass(self, grid):
        co = make_cutoff(grid, 0.0, 2.0, 13.0)
        for seed in range(3):
            u0 = random_band_limited(grid, seed)
            for variant, k in (("CY1", 1), ("CY1", 2), ("CY2", 1)):
                for rep in check_cy(u0, co, k, 13.0, variant, (0.0, 0.1, 0.5)):
                    assert rep.passed, (variant, k, rep.context)

    def test_preconditions(self, zero_field, cutoff):
        with pytest.raises(ParameterError, match="variant"):
            check_cy(zero_field, cutoff, 1, 12.0, "CY3", (0.0,))
        with pytest.raises(ParameterError, match="s > 8"):
            check_cy(zero_field, cutoff, 1, 8.0, "CY1", (0.0,))
        with pytest.raises(ParameterError, match="s > 4k"):
            check_cy(zero_field, cutoff, 3, 12.0, "CY2", (0.0,))


class TestGrowth:
    def test_zero_trajectory(self, zero_field):
        traj = run_trajectory(zero_field, [0.1, 1.0])
        assert check_growth(traj, 0.0).passed

    def test_sine_closed_form_bound(self):
        g = make_grid(1, math.pi, 256)
        u = sample_field(g, np.sin)
        traj = run_trajectory(u, [0.1, 0.3, 0.5, 1.0])
        r = check_growth(traj, 1.0 / (2.0 * math.e), tolerance=1e-12)
        assert r.passed
        # the bound is attained at t = 1/2 up to rounding
        assert r.lhs == pytest.approx(1.0 / (2.0 * math.e), rel=1e-12)

    def test_empty_trajectory_rejected(self, zero_field):
        from biheat.spectral import FlowTrajectory

        with pytest.raises(ParameterError, match="trajectory"):
            check_growth(FlowTrajectory(zero_field, np.array([]), []), 1.0)


class _ZeroSolution:
    def u(self, xs, t):
        return np.zeros_like(np.atleast_1d(xs))

    def lap_u(self, xs, t):
        return np.zeros_like(np.atleast_1d(xs))


class TestRegionChecks:
    def test_zero_solution_any_n(self):
        tg = np.geomspace(0.01, 1.0, 10)
        xg = np.linspace(-1.0, 1.0, 51)
        for N in (0.5, 1.0, 10.0):
            assert check_theorem1_region(_ZeroSolution(), N, tg, xg).passed

    def test_minimal_constant_floor_for_zero_solution(self):
        tg = np.geomspace(0.01, 1.0, 10)
        xg = np.linspace(-1.0, 1.0, 51)
        assert minimal_region_constant(_ZeroSolution(), tg, xg) == pytest.approx(
            1e-6
        )

    def test_main3_zero_solution(self):
        tg = np.geomspace(0.01, 1.0, 10)
        xg = np.linspace(-1.0, 1.0, 51)
        r = check_main3(_ZeroSolution(), 0.0, 1.0, (tg, xg))
        assert r.rhs == 1.0 and r.passed

    def test_preconditions(self):
        tg, xg = [0.1], [0.0]
        with pytest.raises(ParameterError, match="N"):
            check_theorem1_region(_ZeroSolution(), 0.0, tg, xg)
        with pytest.raises(ParameterError, match="k1"):
            check_main3(_ZeroSolution(), -1.0, 1.0, (tg, xg))


class TestUniqueness:
    def test_identical_data_agree(self, grid):
        u0 = random_band_limited(grid, 21)
        r = uniqueness_experiment(u0, [0.1, 0.2, 0.5, 1.0])
        assert r.passed
        assert r.lhs <= 1e-13 * max(1.0, float(np.max(np.abs(u0.values))))

    def test_times_validation(self, zero_field):
        with pytest.raises(ParameterError, match="times"):
            uniqueness_experiment(zero_field, [0.2, 0.1])
        with pytest.raises(ParameterError, match="times"):
            uniqueness_experiment(zero_field, [])


class TestSuites:
    def test_unknown_suite_rejected(self):
        with pytest.raises(ParameterError, match="suite"):
            run_suite("bogus")

    def test_growth_suite_passes(self):
        reports = run_suite("growth", 7)
        assert reports and all(r.passed for r in reports)

    def test_suite_order_deterministic(self):
        a = [r.as_dict() for r in run_suite("uniqueness", 7)]
        b = [r.as_dict() for r in run_suite("uniqueness", 7)]
        assert a == b
