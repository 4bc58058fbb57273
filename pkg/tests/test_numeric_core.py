import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from wdvvdual import (
    ClusteredRootsWarning,
    ContourError,
    ContourSpec,
    DiffSpec,
    cauchy_derivative,
    contour_integral,
    mixed_partial_3,
    polynomial_roots,
)
from wdvvdual.prepotentials import PrepotentialModel

from fdstencils import fd_third, fd_mixed_third


class TestContourIntegral:
    def test_simple_pole(self):
        spec = ContourSpec(center=0.0, radius=0.5)
        assert abs(contour_integral(lambda v: 1.0 / v, spec) - 1.0) < 1e-13

    def test_holomorphic_integrand(self):
        spec = ContourSpec(center=0.3 + 0.2j, radius=1.1)
        assert abs(contour_integral(lambda v: v ** 2, spec)) < 1e-13

    def test_double_pole_no_residue(self):
        spec = ContourSpec(center=0.0, radius=0.7)
        assert abs(contour_integral(lambda v: 1.0 / v ** 2, spec)) < 1e-13

    def test_singularity_on_contour(self):
        spec = ContourSpec(center=0.0, radius=1.0, samples=16)
        pole = 1.0  # first node sits at center + radius

        def f(v):
            return 1.0 / (v - pole)

        with pytest.raises(ContourError):
            contour_integral(f, spec)

    def test_spec_validation(self):
        with pytest.raises(ValueError):
            ContourSpec(center=0.0, radius=-1.0)
        with pytest.raises(ValueError):
            ContourSpec(center=0.0, radius=1.0, samples=15)

    @settings(max_examples=25, deadline=None)
    @given(st.lists(st.complex_numbers(max_magnitude=3.0, allow_nan=False,
                                       allow_infinity=False),
                    min_size=1, max_size=6),
           st.floats(min_value=0.2, max_value=2.0))
    def test_polynomial_integrates_to_zero(self, coeffs, radius):
        spec = ContourSpec(center=0.1 - 0.2j, radius=radius)

        def poly(v):
            return sum(c * v ** k for k, c in enumerate(coeffs))

        assert abs(contour_integral(poly, spec)) < 1e-12


class TestCauchyDerivative:
    def test_exp_third(self):
        spec = DiffSpec(radius=0.5, samples=32)
        assert abs(cauchy_derivative(np.exp, 0.0, 3, spec) - 1.0) < 1e-12

    def test_cubic_third(self):
        spec = DiffSpec(radius=0.5, samples=32)
        assert abs(cauchy_derivative(lambda v: v ** 3, 0.0, 3, spec) - 6.0) \
            < 1e-12

    def test_low_degree_vanishes(self):
        spec = DiffSpec(radius=0.5, samples=32)
        assert abs(cauchy_derivative(lambda v: v ** 2, 0.0, 3, spec)) < 1e-12

    @pytest.mark.parametrize("f", [np.exp, np.sin])
    def test_error_halves_when_samples_double(self, f):
        # order-5 derivative at radius 3: truncation error dominates at 16
        # samples and collapses at 32, far better than halving
        exact5 = {np.exp: 1.0, np.sin: math.cos(0.0)}[f]
        errs = []
        for n in (16, 32):
            spec = DiffSpec(radius=3.0, samples=n)
            errs.append(abs(cauchy_derivative(f, 0.0, 5, spec) - exact5))
        assert errs[0] > 1e-12
        assert errs[1] < 0.5 * errs[0]


class TestMixedPartial3:
    def test_product_of_coordinates(self):
        def F(coords):
            return coords[0] * coords[1] * coords[2]

        val = mixed_partial_3(F, [0.2, -0.1, 0.4], (0, 1, 2))
        assert abs(val - 1.0) < 1e-10

    def test_cube_repeated_index(self):
        def F(coords):
            return coords[0] ** 3

        val = mixed_partial_3(F, [0.3, 0.1], (0, 0, 0))
        assert abs(val - 6.0) < 1e-9

    def test_permutation_bit_identical(self):
        def F(coords):
            return coords[0] ** 2 * coords[1] + coords[2] ** 3 * coords[0]

        pt = [0.4, -0.2, 0.7]
        vals = {mixed_partial_3(F, pt, idx)
                for idx in [(0, 1, 2), (2, 1, 0), (1, 0, 2), (2, 0, 1)]}
        assert len(vals) == 1

    def test_rational_prepotential_vs_finite_differences(self):
        model = PrepotentialModel("rational", 3)
        pt = [0.9, 0.35, -0.5]

        def F(vec):
            return model.value(vec)

        cauchy = mixed_partial_3(model.evaluator(pt), pt, (0, 1, 2))
        fd = fd_mixed_third(F, pt, (0, 1, 2), 0.02)
        assert abs(cauchy - fd) < 1e-7

    def test_stencil_sanity(self):
        # the FD oracle itself must be 4th order: exact on degree <= 4
        assert abs(fd_third(lambda x: x ** 4, 0.3, 0.1) - 24 * 0.3) < 1e-10


class TestPolynomialRoots:
    def test_quadratic(self):
        roots = polynomial_roots([-1.0, 0.0, 1.0])  # v^2 - 1
        assert sorted(np.round(roots.real, 8)) == [-1.0, 1.0]
        assert np.max(np.abs(roots.imag)) < 1e-10

    def test_triple_root_flagged_clustered(self):
        with pytest.warns(ClusteredRootsWarning):
            roots = polynomial_roots([0.0, 0.0, 0.0, 1.0])  # v^3
        assert np.max(np.abs(roots)) < 1e-6

    def test_critical_points_by_back_substitution(self):
        # lambda = (v-1)(v-eps)(v+1+eps), eps = 0.3; roots of lambda'
        eps = 0.3
        poly = np.polynomial.polynomial
        lam = poly.polyfromroots([1.0, eps, -1.0 - eps])
        dlam = poly.polyder(lam)
        roots = polynomial_roots(dlam, 1e-13)
        for r in roots:
            assert abs(poly.polyval(r, dlam)) < 1e-10

    def test_nonconvergence_raises(self):
        from wdvvdual.errors import RootFindingError
        with pytest.raises(RootFindingError):
            polynomial_roots([1.0, 2.0, 3.0], 1e-13, max_iterations=1)

    @settings(max_examples=25, deadline=None)
    @given(st.lists(st.complex_numbers(max_magnitude=2.0, allow_nan=False,
                                       allow_infinity=False),
                    min_size=2, max_size=6))
    def test_roots_reproduce_monic_coefficients(self, coeffs):
        coeffs = list(coeffs) + [1.0]  # monic
        import warnings
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ClusteredRootsWarning)
            roots = polynomial_roots(coeffs, 1e-13)
        rebuilt = np.polynomial.polynomial.polyfromroots(roots)
        scale = max(1.0, float(np.max(np.abs(coeffs))))
        assert np.max(np.abs(rebuilt - np.asarray(coeffs))) / scale < 1e-8
