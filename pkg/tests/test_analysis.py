import numpy as np
import pytest

from critent import analysis, tfim
from critent.analysis import (
    FitResult,
    SweepRecord,
    central_derivative,
    derivative_at,
    log_poly_fit,
    power_law_fit,
    records_to_csv,
    records_to_json,
    sweep,
)


class TestCentralDerivative:
    def test_exact_for_quadratics(self):
        xs = np.array([0.9, 1.0, 1.1])
        interior, deriv = central_derivative(xs, xs**2)
        assert interior.tolist() == [1.0]
        assert deriv[0] == pytest.approx(2.0, abs=1e-13)

    def test_constant_gives_zeros(self):
        xs = np.linspace(0, 1, 9)
        _, deriv = central_derivative(xs, np.ones_like(xs))
        assert np.max(np.abs(deriv)) == 0.0

    def test_rejects_nonuniform_grid(self):
        with pytest.raises(ValueError):
            central_derivative(np.array([0.0, 0.1, 0.3]), np.zeros(3))

    def test_rejects_short_input(self):
        with pytest.raises(ValueError):
            central_derivative(np.array([0.0, 1.0]), np.zeros(2))

    def test_step_halving_consistency(self):
        # just off the critical coupling, where the curvature stays bounded
        def mi_of_coupling(lam):
            return tfim.correlation_mi(
                tfim.TfimParams(coupling=lam, temperature=0.0, sites=100, separation=1)
            )

        d1 = derivative_at(mi_of_coupling, 0.95, 1e-3)
        d2 = derivative_at(mi_of_coupling, 0.95, 5e-4)
        assert abs(d1 - d2) < 1e-4


class TestPowerLawFit:
    def test_exact_power_law(self):
        xs = np.linspace(1.0, 5.0, 10)
        fit = power_law_fit(xs, 3.0 * xs**2)
        assert fit.coefficients[0] == pytest.approx(2.0, abs=1e-12)
        assert fit.amplitude == pytest.approx(3.0, rel=1e-12)
        assert fit.residual_norm < 1e-12

    def test_synthetic_critical_decay(self):
        ns = np.arange(10, 101, 10, dtype=float)
        fit = power_law_fit(ns, 0.645 * ns**-0.25)
        assert fit.coefficients[0] == pytest.approx(-0.25, abs=1e-10)
        assert fit.amplitude == pytest.approx(0.645, abs=1e-10)

    def test_rejects_bad_input(self):
        with pytest.raises(ValueError):
            power_law_fit([1, 2, 3], [1, 2, 3])  # too few
        with pytest.raises(ValueError):
            power_law_fit([1, 2, 3, -4], [1, 2, 3, 4])


class TestLogPolyFit:
    def test_log_linear(self):
        xs = np.geomspace(2, 200, 12)
        fit = log_poly_fit(xs, 2.0 + 5.0 * np.log(xs), degree=1)
        assert fit.kind == "log_linear"
        assert fit.coefficients == pytest.approx((2.0, 5.0), abs=1e-10)
        assert fit.residual_norm < 1e-12

    def test_log_cubic(self):
        xs = np.geomspace(2, 200, 12)
        fit = log_poly_fit(xs, 1.0 + 0.3 * np.log(xs) ** 3, degree=3)
        assert fit.kind == "log_cubic"
        assert fit.coefficients[1] == pytest.approx(0.3, abs=1e-10)

    def test_full_design_flag(self):
        xs = np.geomspace(2, 200, 12)
        ys = 1.0 + 0.5 * np.log(xs) + 0.3 * np.log(xs) ** 3
        restricted = log_poly_fit(xs, ys, degree=3)
        full = log_poly_fit(xs, ys, degree=3, full=True)
        assert full.residual_norm < restricted.residual_norm
        assert full.coefficients[1] == pytest.approx(0.3, abs=1e-9)

    def test_point_count_guard(self):
        with pytest.raises(ValueError):
            log_poly_fit([1, 2, 3, 4], [1, 2, 3, 4], degree=3)
        with pytest.raises(ValueError):
            log_poly_fit([1, 2], [1, 2], degree=1)


class TestFitResultRoundTrip:
    def test_dict_round_trip(self):
        xs = np.linspace(1, 10, 8)
        fit = power_law_fit(xs, 2.0 * xs**-0.5)
        again = FitResult.from_dict(fit.to_dict())
        assert again == fit

    def test_synthesize_and_refit(self):
        xs = np.geomspace(1, 100, 10)
        for fit in (
            power_law_fit(xs, 1.7 * xs**-1.25),
            log_poly_fit(xs, 0.4 + 2.2 * np.log(xs), degree=1),
            log_poly_fit(xs, 0.4 + 0.05 * np.log(xs) ** 3, degree=3),
        ):
            ys = fit.predict(xs)
            if fit.kind == "power_law":
                refit = power_law_fit(xs, ys)
                assert refit.amplitude == pytest.approx(fit.amplitude, abs=1e-8)
            else:
                refit = log_poly_fit(xs, ys, degree=1 if fit.kind == "log_linear" else 3)
            assert np.allclose(refit.coefficients, fit.coefficients, atol=1e-8)


class TestSweep:
    def test_dimer_sweep_monotone(self):
        records = sweep("dimer", axes={"T": np.linspace(0.1, 10, 100)})
        assert len(records) == 100
        mis = [r.mi for r in records]
        assert all(a > b for a, b in zip(mis, mis[1:]))

    def test_record_identity_enforced(self):
        with pytest.raises(AssertionError):
            SweepRecord(model="dimer", T=1.0, s_i=1.0, s_j=1.0, s_ij=1.0, mi=0.5)

    def test_ising_sweep_shape_markers(self):
        records = sweep(
            "ising2d",
            axes={"T": [1.8, 2.3, 3.0], "N": [2, 30]},
        )
        by_point = {(r.T, r.N): r.mi for r in records}
        assert by_point[(1.8, 30)] > 0.3        # ordered plateau
        assert by_point[(3.0, 30)] < 1e-6       # hot collapse
        assert by_point[(2.3, 30)] < by_point[(2.3, 2)]  # critical decay in N

    def test_tfim_sweep_shape_markers(self):
        records = sweep(
            "tfim",
            axes={"lam": [0.2, 2.0], "r": [2, 20]},
            fixed={"N": 200, "T": 0.0},
        )
        by_point = {(r.lam, r.r): r.mi for r in records}
        assert by_point[(0.2, 20)] < 1e-8
        assert by_point[(2.0, 20)] > 0.4

    def test_error_rows_do_not_abort(self):
        records = sweep(
            "tfim",
            axes={"lam": [0.5], "r": [1, 7]},  # r = 7 exceeds half ring
            fixed={"N": 12, "T": 0.0},
        )
        assert len(records) == 2
        assert records[0].mi is not None
        assert records[1].mi is None
        assert records[1].tag.startswith("error:")

    def test_unknown_model_and_axis(self):
        with pytest.raises(ValueError):
            sweep("xy", axes={"T": [1.0]})
        with pytest.raises(ValueError):
            sweep("dimer", axes={"beta": [1.0]})

    def test_concurrent_equals_serial(self):
        axes = {"T": np.linspace(0.5, 5.0, 8)}
        serial = records_to_csv(sweep("dimer", axes=axes, workers=1))
        threaded = records_to_csv(sweep("dimer", axes=axes, workers=4))
        assert serial == threaded


class TestSerialization:
    def test_csv_layout(self):
        records = sweep("dimer", axes={"T": [1.0, 2.0]})
        text = records_to_csv(records)
        lines = text.strip().split("\n")
        assert lines[0].startswith("# T in units of the Heisenberg coupling")
        assert lines[1] == analysis.CSV_HEADER
        assert len(lines) == 4
        first = lines[2].split(",")
        assert first[0] == "dimer"
        assert first[2] == ""  # lambda not applicable
        # 12 significant digits
        assert len(first[8].replace(".", "").replace("-", "").lstrip("0")) <= 12

    def test_json_payload(self):
        records = sweep(
            "tfim", axes={"lam": [1.0], "r": [1]}, fixed={"N": 8, "T": 0.0}
        )
        payload = records_to_json(records)
        row = payload["records"][0]
        assert row["model"] == "tfim"
        assert row["lambda"] == 1.0
        assert row["N"] == 8
        assert row["tag"] == "even"


class TestScalingDrivers:
    def test_nn_scaling_small(self):
        result = analysis.tfim_nn_scaling(sites_list=(64, 128, 256, 512))
        assert result["fit"].coefficients[1] > 0
        assert result["relative_residual"] < 0.05

    def test_far_peak_location(self):
        lam, val = analysis.tfim_peak_far_derivative(32)
        assert 0.95 < lam < 1.1
        assert val > 0
