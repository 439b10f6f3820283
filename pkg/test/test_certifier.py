"""Test the FrameCertifier facade and method dispatch."""

import pytest

from phase_injectivity.certifiers import (
    CERTIFIER_REGISTRY,
    BaseCertifier,
    FrameCertifier,
    SearchCertifier,
    certify_frame,
    resolve_method,
)
from phase_injectivity.config import CERTIFIER_METHODS
from phase_injectivity.core import Frame, Injective, random_frame
from phase_injectivity.exceptions import UnsupportedShapeError


class AlwaysInjective(BaseCertifier):
    """Custom certifier used to test extension."""

    method = "always_injective"

    def supports(self, m: int, n: int) -> bool:
        return True

    def certify(self, frame: Frame):
        return Injective("custom", {"options": sorted(self.kwargs)})


class TestResolveMethod:
    """Tests for resolve_method."""

    @pytest.mark.parametrize(
        "shape, expected",
        [((2, 4), "det_m2n4"), ((3, 8), "det_m3n8"), ((2, 3), "kernel_m2n3"), ((3, 7), "pencil_m3n7"), ((4, 11), "search")],
    )
    def test_auto(self, shape, expected):
        """Test automatic dispatch by shape."""
        assert resolve_method(*shape, "auto") == expected

    def test_exact_requires_supported_shape(self):
        """Test 'exact' on a shape without a construction."""
        assert resolve_method(3, 8, "exact") == "det_m3n8"
        with pytest.raises(UnsupportedShapeError, match="No exact test"):
            resolve_method(4, 11, "exact")

    def test_explicit_and_unknown(self):
        """Test registry keys pass through and unknown names fail."""
        assert resolve_method(2, 4, "search") == "search"
        with pytest.raises(ValueError, match="Unsupported certifier method"):
            resolve_method(2, 4, "magic")


class TestFrameCertifier:
    """Tests for FrameCertifier."""

    def test_registry_matches_config(self):
        """Test every configured method has a registered certifier."""
        assert set(CERTIFIER_REGISTRY) == set(CERTIFIER_METHODS)

    def test_auto_method(self):
        """Test the exact construction is chosen for (2, 4)."""
        certifier = FrameCertifier(random_frame(2, 4, seed=0))
        assert certifier.method == "det_m2n4"

    def test_search_options_forwarded(self):
        """Test keyword options reach the search."""
        certifier = FrameCertifier(random_frame(3, 6, seed=0), method="search", restarts=4, seed=2)
        assert isinstance(certifier.certifier_impl, SearchCertifier)
        assert certifier.certifier_impl.options.restarts == 4
        assert certifier.certifier_impl.options.seed == 2

    def test_search_options_ignored_by_exact_tests(self):
        """Test exact certifiers accept the common keyword options."""
        verdict = certify_frame(random_frame(2, 4, seed=0, mode="rational"), seed=5, restarts=3)
        assert verdict.tag == "Injective"

    def test_explicit_method_shape_mismatch(self):
        """Test an exact certifier on the wrong shape."""
        with pytest.raises(UnsupportedShapeError):
            FrameCertifier(random_frame(3, 7, seed=0), method="det_m2n4")

    def test_custom_certifier_class(self):
        """Test custom certifiers take precedence over method."""
        verdict = certify_frame(random_frame(4, 11, seed=0), certifier_class=AlwaysInjective, flag=True)
        assert verdict.tag == "Injective"
        assert verdict.details == {"options": ["flag"]}

    def test_custom_class_must_inherit(self):
        """Test non-BaseCertifier classes are rejected."""
        with pytest.raises(TypeError, match="BaseCertifier"):
            FrameCertifier(random_frame(2, 4, seed=0), certifier_class=dict)

    def test_certify_frame(self):
        """Test the convenience function on a (2, 3) frame."""
        assert certify_frame(random_frame(2, 3, seed=1)).tag == "NonInjective"
