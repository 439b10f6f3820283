"""Test the exact constructions for small frames."""

from unittest.mock import patch

import numpy as np
import pytest
from sympy import Rational

from phase_injectivity.certifiers import (
    M2N3KernelCertifier,
    M2N4DeterminantCertifier,
    M3N7PencilCertifier,
    M3N8DeterminantCertifier,
    SearchOptions,
    alternating_search,
    certify_frame,
    cubic_discriminant,
    det_test_m2n4,
    det_test_m3n8,
    hermitian_determinant,
    kernel_cert_m2n3,
    pencil_coefficients,
    pencil_cubic_m3n7,
    real_polynomial_roots,
    solve_m3n8,
    verify_certificate,
)
from phase_injectivity.config import CERTIFIER_CONFIG
from phase_injectivity.constraints import constraint_matrix
from phase_injectivity.core import Frame, HermitianCoords, intensity_measurements, random_frame
from phase_injectivity.exceptions import UnsupportedShapeError


def _scale_columns(frame: Frame, factors) -> Frame:
    factors = np.array([Rational(f) for f in factors], dtype=object)
    return Frame(frame.u * factors, frame.v * factors, mode="rational")


@pytest.fixture
def injective_m2n4():
    """Columns (1, 0), (0, 1), (1, 1), (1, i)."""
    return Frame([[1, 0, 1, 1], [0, 1, 1, 0]], [[0, 0, 0, 0], [0, 0, 0, 1]], mode="rational")


@pytest.fixture
def example_m2n3():
    """Columns (1, 0), (0, 1), (1, 1)."""
    return Frame([[1, 0, 1], [0, 1, 1]], [[0, 0, 0], [0, 0, 0]], mode="rational")


@pytest.fixture
def balanced_m3n8():
    """Eight vectors (1, p, c) with |p| = 1, so diag(1, -1, 0) lies in L."""
    phases = [
        (1, 0), (0, 1), ("3/5", "4/5"), ("-3/5", "4/5"),
        ("5/13", "-12/13"), ("8/17", "15/17"), ("-7/25", "24/25"), ("20/29", "21/29"),
    ]
    third = [(1, 2), (2, -1), (-1, 1), (3, 1), (1, -3), (2, 2), (-2, 1), (0, 3)]
    u = [[1] * 8, [p[0] for p in phases], [c[0] for c in third]]
    v = [[0] * 8, [p[1] for p in phases], [c[1] for c in third]]
    return Frame(u, v, mode="rational")


class TestDetM2N4:
    """Tests for the (2, 4) determinant test."""

    def test_example_determinant(self, injective_m2n4):
        """Test the determinant 4 example."""
        verdict = det_test_m2n4(injective_m2n4)
        assert verdict.tag == "Injective"
        assert verdict.details["determinant"] == 4

    def test_repeated_column_is_noninjective(self):
        """Test phi_3 = phi_4 gives determinant 0 and a verified certificate."""
        frame = Frame([[1, 0, 1, 1], [0, 1, 1, 1]], np.zeros((2, 4)), mode="rational")
        verdict = det_test_m2n4(frame)
        assert verdict.tag == "NonInjective"
        assert verdict.details["determinant"] == 0
        assert verify_certificate(frame, verdict.certificate.q).passed
        assert verdict.witness.measurement_gap(frame) < 1e-12

    @pytest.mark.parametrize("lam", [2, 3])
    def test_column_degree_two(self, injective_m2n4, lam):
        """Test scaling phi_4 by lambda multiplies the determinant by lambda^2."""
        scaled = _scale_columns(injective_m2n4, [1, 1, 1, lam])
        assert det_test_m2n4(scaled).details["determinant"] == 4 * lam**2

    def test_total_degree_eight(self):
        """Test global scaling by 2 multiplies the determinant by 2^8."""
        frame = random_frame(2, 4, seed=5, mode="rational")
        base = det_test_m2n4(frame).details["determinant"]
        doubled = det_test_m2n4(_scale_columns(frame, [2] * 4)).details["determinant"]
        assert doubled == base * 2**8

    def test_float_frames(self):
        """Test float mode on a generic and a singular frame."""
        assert det_test_m2n4(random_frame(2, 4, seed=1)).tag == "Injective"
        singular = Frame([[1, 0, 1, 1], [0, 1, 1, 1]], np.zeros((2, 4)))
        assert det_test_m2n4(singular).tag == "NonInjective"

    def test_wrong_shape(self, example_m2n3):
        """Test other shapes are rejected."""
        with pytest.raises(UnsupportedShapeError):
            det_test_m2n4(example_m2n3)


class TestM3N8:
    """Tests for the (3, 8) alternating minors and determinant."""

    def test_alternating_minors_are_in_kernel(self):
        """Test J D = 0 exactly."""
        frame = random_frame(3, 8, seed=2, mode="rational")
        d, q = solve_m3n8(frame)
        assert list(constraint_matrix(frame).entries.dot(d)) == [0] * 8
        assert not q.is_zero()
        assert q.mode == "rational"

    def test_float_alternating_minors(self):
        """Test J D = 0 up to rounding in float mode."""
        frame = random_frame(3, 8, seed=2)
        d, _ = solve_m3n8(frame)
        jac = constraint_matrix(frame).entries
        assert np.max(np.abs(jac @ d)) <= 1e-8 * np.linalg.norm(d) * np.max(np.abs(jac))

    def test_column_scaling(self):
        """Test scaling one column by lambda scales D by lambda^2 and det by lambda^6."""
        frame = random_frame(3, 8, seed=4, mode="rational")
        scaled = _scale_columns(frame, [3, 1, 1, 1, 1, 1, 1, 1])
        d, _ = solve_m3n8(frame)
        d_scaled, _ = solve_m3n8(scaled)
        assert list(d_scaled) == [9 * value for value in d]
        assert det_test_m3n8(scaled).details["determinant"] == 3**6 * det_test_m3n8(frame).details["determinant"]

    def test_generic_rational_frame_is_injective(self):
        """Test a random rational frame."""
        verdict = det_test_m3n8(random_frame(3, 8, seed=0, mode="rational"))
        assert verdict.tag == "Injective"
        assert verdict.details["determinant"] != 0

    def test_total_degree_48(self):
        """Test global scaling by 2 multiplies the determinant by 2^48."""
        frame = random_frame(3, 8, seed=7, mode="rational")
        base = det_test_m3n8(frame).details["determinant"]
        doubled = det_test_m3n8(_scale_columns(frame, [2] * 8)).details["determinant"]
        assert doubled == base * 2**48

    def test_rank_deficient_jacobian(self):
        """Test a repeated column gives D = 0 and an Indeterminate verdict."""
        frame = random_frame(3, 7, seed=3, mode="rational")
        u = np.hstack([frame.u, frame.u[:, :1]])
        v = np.hstack([frame.v, frame.v[:, :1]])
        repeated = Frame(u, v, mode="rational")
        d, _ = solve_m3n8(repeated)
        assert all(value == 0 for value in d)
        verdict = det_test_m3n8(repeated)
        assert verdict.tag == "Indeterminate"
        assert verdict.reason == "Jacobian rank deficient"

    def test_singular_kernel_matrix(self, balanced_m3n8):
        """Test a frame with diag(1, -1, 0) in L is certified non-injective."""
        verdict = det_test_m3n8(balanced_m3n8)
        assert verdict.tag == "NonInjective"
        assert verdict.details["determinant"] == 0
        assert verdict.certificate.q.to_list() == ["1/1", "0/1", "0/1", "-1/1", "0/1", "0/1", "0/1", "0/1", "0/1"]

    def test_hermitian_determinant(self):
        """Test exact and float determinants of diag(1, 2, 3)."""
        coords = [1, 0, 0, 2, 0, 3, 0, 0, 0]
        assert hermitian_determinant(HermitianCoords(3, coords, "rational")) == 6
        assert hermitian_determinant(HermitianCoords(3, coords)) == pytest.approx(6.0)


class TestKernelM2N3:
    """Tests for the (2, 3) kernel certificate."""

    def test_example_certificate(self, example_m2n3):
        """Test Q = [[0, i], [-i, 0]] and its witness measurements."""
        verdict = kernel_cert_m2n3(example_m2n3)
        assert verdict.certificate.q.to_list() == ["0/1", "0/1", "0/1", "1/1"]
        witness = verdict.witness
        assert np.allclose(intensity_measurements(example_m2n3, witness.x), [0.5, 0.5, 1.0])
        assert np.allclose(intensity_measurements(example_m2n3, witness.y), [0.5, 0.5, 1.0])

    @pytest.mark.parametrize("seed", range(10))
    def test_random_frames_are_noninjective(self, seed):
        """Test every (2, 3) frame is non-injective with a separated witness."""
        frame = random_frame(2, 3, seed=seed)
        verdict = kernel_cert_m2n3(frame)
        assert verdict.tag == "NonInjective"
        assert verdict.witness.to_dict()["phase_distance"] > 0.01

    def test_wrong_shape(self, injective_m2n4):
        """Test other shapes are rejected."""
        with pytest.raises(UnsupportedShapeError):
            kernel_cert_m2n3(injective_m2n4)


class TestCubic:
    """Tests for the cubic helpers."""

    def test_three_real_roots(self):
        """Test (t - 1)(t - 2)(t - 3)."""
        coeffs = np.array([-6.0, 11.0, -6.0, 1.0])
        assert cubic_discriminant(coeffs) == pytest.approx(4.0)
        assert np.allclose(real_polynomial_roots(coeffs), [1.0, 2.0, 3.0])

    def test_one_real_root(self):
        """Test t^3 - 2."""
        coeffs = np.array([-2.0, 0.0, 0.0, 1.0])
        assert cubic_discriminant(coeffs) < 0
        assert np.allclose(real_polynomial_roots(coeffs), [2 ** (1 / 3)])

    def test_degenerate_leading_coefficient(self):
        """Test a cubic that is really linear, and the zero polynomial."""
        assert np.allclose(real_polynomial_roots([-2.0, 1.0, 0.0, 0.0]), [2.0])
        assert real_polynomial_roots([0.0, 0.0, 0.0, 0.0]) == []

    def test_pencil_coefficients(self):
        """Test det(diag(1, 2, 3) + t I)."""
        coeffs, max_imag = pencil_coefficients(np.diag([1.0, 2.0, 3.0]), np.eye(3))
        assert np.allclose(coeffs, [6, 11, 6, 1])
        assert max_imag < 1e-12


class TestPencilM3N7:
    """Tests for the (3, 7) pencil construction."""

    @pytest.mark.parametrize("seed", range(10))
    def test_random_frames_are_noninjective(self, seed):
        """Test certificates from the real root of the pencil cubic."""
        frame = random_frame(3, 7, seed=seed)
        verdict = pencil_cubic_m3n7(frame)
        assert verdict.tag == "NonInjective"
        assert "fallback" not in verdict.details
        assert verdict.details["max_imag_coefficient"] <= 1e-12
        diagnostics = verify_certificate(frame, verdict.certificate.q, tol=1e-9)
        assert diagnostics.passed
        assert diagnostics.rank_residual <= 1e-8 * diagnostics.frobenius_norm

    def test_rational_frame(self):
        """Test rational frames go through the same float pencil."""
        assert pencil_cubic_m3n7(random_frame(3, 7, seed=1, mode="rational")).tag == "NonInjective"

    def test_wrong_shape(self):
        """Test other shapes are rejected."""
        with pytest.raises(UnsupportedShapeError):
            pencil_cubic_m3n7(random_frame(3, 8, seed=0))


class TestExactCertifiers:
    """Tests for the certifier classes."""

    @pytest.mark.parametrize(
        "cls, shape",
        [
            (M2N4DeterminantCertifier, (2, 4)),
            (M3N8DeterminantCertifier, (3, 8)),
            (M2N3KernelCertifier, (2, 3)),
            (M3N7PencilCertifier, (3, 7)),
        ],
    )
    def test_supports_only_its_shape(self, cls, shape):
        """Test shape support and rejection."""
        certifier = cls()
        assert certifier.supports(*shape)
        assert not certifier.supports(4, 11)
        with pytest.raises(UnsupportedShapeError):
            certifier.certify(random_frame(4, 11, seed=0))

    def test_pencil_certifier_accepts_search_options(self):
        """Test options are forwarded to the search fallback."""
        verdict = M3N7PencilCertifier(restarts=3, seed=1).certify(random_frame(3, 7, seed=2))
        assert verdict.tag == "NonInjective"

    def test_determinant_tolerance_from_config(self):
        """Test the (2, 4) certifier reads det_rel_tol from CERTIFIER_CONFIG."""
        frame = random_frame(2, 4, seed=1)
        assert M2N4DeterminantCertifier().certify(frame).tag == "Injective"
        with patch.dict(CERTIFIER_CONFIG["det_m2n4"], {"det_rel_tol": 1.0}):
            verdict = M2N4DeterminantCertifier().certify(frame)
        assert verdict.tag == "Indeterminate"

    def test_refine_tolerance_from_config(self):
        """Test the pencil certifier passes refine_tol to the cubic construction."""
        target = "phase_injectivity.certifiers.exact_small.pencil_cubic_m3n7"
        with patch.dict(CERTIFIER_CONFIG["pencil_m3n7"], {"refine_tol": 1e-9}):
            with patch(target, wraps=pencil_cubic_m3n7) as spy:
                M3N7PencilCertifier().certify(random_frame(3, 7, seed=0))
        assert spy.call_args.args[2] == 1e-9

    def test_shape_from_config(self):
        """Test supported shapes come from CERTIFIER_CONFIG."""
        certifier = M2N3KernelCertifier()
        assert certifier.setting("shape") == (2, 3)
        with patch.dict(CERTIFIER_CONFIG["kernel_m2n3"], {"shape": (2, 5)}):
            assert certifier.supports(2, 5)
            assert not certifier.supports(2, 3)


class TestDeterminantAgreesWithSearch:
    """Cross-checks of the determinant tests against the rank-2 search."""

    @pytest.mark.parametrize("m, n", [(2, 4), (3, 8)])
    @pytest.mark.parametrize("seed", range(4))
    def test_generic_frames(self, m, n, seed):
        """Test a nonzero determinant and a search that finds nothing."""
        frame = random_frame(m, n, seed=seed, mode="rational")
        exact = certify_frame(frame, method="exact")
        search = alternating_search(frame, SearchOptions(seed=seed, restarts=5))
        assert exact.tag == "Injective"
        assert search.tag != "NonInjective"

    def test_singular_m2n4(self):
        """Test both find a certificate when a column repeats."""
        frame = Frame([[1, 0, 1, 1], [0, 1, 1, 1]], [[0, 0, 0, 1], [0, 0, 0, 1]], mode="rational")
        assert det_test_m2n4(frame).tag == "NonInjective"
        search = alternating_search(frame, SearchOptions(seed=0))
        assert search.tag == "NonInjective"
        assert verify_certificate(frame, search.certificate.q).passed

    def test_singular_m3n8(self, balanced_m3n8):
        """Test both find a certificate when diag(1, -1, 0) lies in L."""
        assert det_test_m3n8(balanced_m3n8).tag == "NonInjective"
        search = alternating_search(balanced_m3n8, SearchOptions(seed=0, restarts=20))
        assert search.tag == "NonInjective"
        assert verify_certificate(balanced_m3n8, search.certificate.q).passed
