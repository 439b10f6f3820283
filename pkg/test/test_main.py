"""Test main module and package imports."""

import pytest

import phase_injectivity
from phase_injectivity import FrameCertifier, certify_frame, load_frame
from phase_injectivity.main import build_parser, main


def test_package_imports():
    """Test that main package exports are available."""
    assert FrameCertifier is not None
    assert certify_frame is not None
    assert load_frame is not None


def test_all_exports_resolve():
    """Test every name in __all__ is defined."""
    for name in phase_injectivity.__all__:
        assert hasattr(phase_injectivity, name)


def test_version_attribute():
    """Test that package has version attribute."""
    assert isinstance(phase_injectivity.__version__, str)


def test_parser_subcommands():
    """Test the parser knows every subcommand."""
    parser = build_parser()
    for command in ("certify", "witness", "exact-test", "kernel", "fcp", "degree", "parity-table",
                    "hmw-bound", "montecarlo", "explore-conjecture", "invariance", "gen"):
        args = parser.parse_args([command, "--m", "2"])
        assert args.command == command


def test_main_exits_with_code(monkeypatch):
    """Test the console entry point exits with the run() code."""
    monkeypatch.setattr("sys.argv", ["phase-injectivity", "hmw-bound", "--m", "3"])
    with pytest.raises(SystemExit) as exc:
        main()
    assert exc.value.code == 0
