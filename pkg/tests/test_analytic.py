import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from slitfactor.analytic import (
    Model,
    SpikeSeries,
    delta_amplitude,
    delta_spike_series,
    factored_amplitude,
    periodic_kernel,
    phase_factor_f,
    phase_factor_f_reduced,
    sigma_brute,
)

from .oracles import point_slit_intensity_brute

odd = st.integers(0, 49).map(lambda k: 2 * k + 1)


class TestPeriodicKernel:
    def test_limit_at_integer(self):
        assert periodic_kernel(3, 0.0) == 3.0

    def test_half_integer(self):
        assert periodic_kernel(3, 0.5) == pytest.approx(-1.0, abs=1e-15)

    def test_period_one(self):
        assert periodic_kernel(5, 0.37) == pytest.approx(periodic_kernel(5, 1.37), rel=1e-12)

    @given(odd, st.floats(-20, 20))
    def test_period_one_property(self, r, v):
        assert periodic_kernel(r, v + 1) == pytest.approx(periodic_kernel(r, v), rel=1e-6, abs=1e-6)

    @given(odd, st.integers(-50, 50))
    def test_value_r_at_integers(self, r, k):
        assert periodic_kernel(r, float(k)) == r

    def test_vectorized(self):
        v = np.array([0.0, 0.5, 1.0])
        np.testing.assert_allclose(periodic_kernel(3, v), [3, -1, 3], atol=1e-14)


class TestPhaseFactor:
    def test_equal_indices(self):
        assert phase_factor_f(4, 7, 2, 2) == 1

    def test_recursion_example(self):
        assert phase_factor_f(2, 5, 1 + 5, -1) == pytest.approx(phase_factor_f(2, 5, 1, -1), abs=1e-12)

    def test_hand_value(self):
        assert phase_factor_f(0, 3, -1, 0) == pytest.approx(cmath.exp(-2j * math.pi / 3), abs=1e-15)

    @given(st.integers(-30, 30), odd, st.integers(-30, 30), st.integers(-30, 30))
    def test_recursion_property(self, l, n, p, q):
        assert phase_factor_f_reduced(l, n, p + n, q) == pytest.approx(phase_factor_f_reduced(l, n, p, q), abs=1e-11)

    @given(st.integers(-30, 30), odd, st.integers(-30, 30), st.integers(-30, 30))
    def test_two_forms_agree(self, l, n, p, q):
        assert abs(phase_factor_f(l, n, p, q) - phase_factor_f_reduced(l, n, p, q)) <= 1e-12

    def test_unit_modulus(self):
        assert abs(phase_factor_f(3, 11, 4, -2)) == pytest.approx(1.0, abs=1e-15)


class TestSigmaBrute:
    def test_single_term(self):
        assert sigma_brute(5, 1) == 1

    def test_nine_term_sum(self):
        # explicit double sum written out by hand, p, q in {-1, 0, 1}
        manual = sum(
            cmath.exp(1j * math.pi / 3 * ((0.5 - q) ** 2 - (0.5 - p) ** 2)) for p in (-1, 0, 1) for q in (-1, 0, 1)
        )
        assert manual == pytest.approx(3, abs=1e-12)
        assert sigma_brute(0, 3) == pytest.approx(3, abs=1e-12)

    def test_l7_n13(self):
        s = sigma_brute(7, 13)
        assert abs(s.real - 13) < 1e-10
        assert abs(s.imag) < 1e-12

    @settings(max_examples=60)
    @given(st.integers(-200, 200), odd)
    def test_theorem_property(self, l, n):
        assert abs(sigma_brute(l, n) - n) < 1e-10

    def test_vectorized_over_l(self):
        ls = np.arange(-9, 10)
        np.testing.assert_allclose(sigma_brute(ls, 9), 9, atol=1e-11)

    def test_even_n_rejected(self):
        with pytest.raises(ValueError):
            sigma_brute(0, 4)


class TestDeltaAmplitude:
    def test_single_slit_unit_modulus(self):
        assert abs(delta_amplitude(1, 1, 0.731)) == pytest.approx(1.0, abs=1e-15)

    @pytest.mark.parametrize("n, expected", [(11, 1859), (13, 1573)])
    def test_spike_heights(self, n, expected):
        chi = np.arange(-5, 6) + 0.5
        np.testing.assert_allclose(np.abs(delta_amplitude(143, n, chi)) ** 2, expected, rtol=1e-9)

    @pytest.mark.parametrize("N, n", [(143, 11), (105, 15), (55, 5), (9, 3), (7, 7)])
    def test_factored_form_matches_full_sum(self, N, n):
        chi = np.linspace(-4.3, 4.3, 173)
        np.testing.assert_allclose(factored_amplitude(N, n, chi), delta_amplitude(N, n, chi), atol=1e-9)

    def test_factored_form_needs_divisor(self):
        with pytest.raises(ValueError):
            factored_amplitude(143, 17, 0.5)

    @pytest.mark.parametrize("N, n", [(4, 3), (5, 2)])
    def test_parity(self, N, n):
        with pytest.raises(ValueError):
            delta_amplitude(N, n, 0.0)


class TestDeltaSpikeSeries:
    def test_divisor_heights_143_11(self):
        s = delta_spike_series(143, 11)
        assert s.model is Model.DELTA
        assert len(s.values) == 71
        np.testing.assert_allclose(s.values, 1859, rtol=1e-9)

    def test_non_divisor_unequal(self):
        v = delta_spike_series(143, 17).values
        assert v.max() / v.min() > 1.01

    def test_three_slits(self):
        np.testing.assert_allclose(delta_spike_series(3, 3).values, [3.0], rtol=1e-12)

    @pytest.mark.parametrize("N, n", [(15, 7), (21, 3), (27, 5), (9, 9), (35, 1)])
    def test_against_brute_loop(self, N, n):
        got = delta_spike_series(N, n).values
        want = [point_slit_intensity_brute(N, n, l + 0.5) for l in range(1, (N - 1) // 2 + 1)]
        np.testing.assert_allclose(got, want, rtol=1e-10, atol=1e-10)

    @pytest.mark.parametrize("N", [15, 45, 105, 143, 225])
    def test_height_law_for_every_divisor(self, N):
        for n in (d for d in range(1, N + 1, 2) if N % d == 0):
            v = delta_spike_series(N, n).values
            assert v.max() / v.min() - 1 <= 1e-9
            np.testing.assert_allclose(v * n, N * N, rtol=1e-9)

    def test_series_is_read_only(self):
        s = delta_spike_series(9, 3)
        with pytest.raises(ValueError):
            s.values[0] = 1.0

    def test_series_validation(self):
        with pytest.raises(ValueError):
            SpikeSeries(n=3, N=9, model="delta", values=[1.0, 2.0])
        with pytest.raises(ValueError):
            SpikeSeries(n=3, N=5, model="delta", values=[1.0, -2.0])
