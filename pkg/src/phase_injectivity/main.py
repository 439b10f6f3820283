"""Command-line interface: ``phase-injectivity <subcommand> [options]``.

JSON (or CSV) payloads go to stdout or ``--out``; diagnostics go to stderr.
Exit codes: 0 success, 1 failed self-check, 2 usage error, 3 bad frame file.
"""

import argparse
import csv
import io
import json
import logging
import os
import sys
import time
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .certifiers import (
    CERTIFIER_REGISTRY,
    certify_frame,
    resolve_method,
    verify_certificate,
    witness_from_certificate,
)
from .combinatorics import degree_report, hmw_bound, parity_table
from .config import (
    CERTIFICATE_TOL,
    EXIT_BAD_FRAME,
    EXIT_FAILURE,
    EXIT_OK,
    EXIT_USAGE,
    LOG_LEVEL_ENV_VAR,
    SEARCH_DEFAULTS,
)
from .constraints import constraint_matrix, kernel_basis
from .core import Frame, HermitianCoords, NonInjective, intensity_measurements, random_frame, verdict_to_dict
from .exceptions import CertificateError, FrameFormatError, UnsupportedShapeError
from .frame_io import dumps_frame, load_frame, save_frame
from .harness import explore_conjecture, invariance_suite, montecarlo
from .realframes import finite_complement_property

logger = logging.getLogger(__name__)


class UsageError(Exception):
    """Invalid combination of command-line options."""


def _configure_logging(verbose: bool) -> None:
    level = logging.DEBUG if verbose else os.environ.get(LOG_LEVEL_ENV_VAR, "WARNING").upper()
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
        force=True,
    )


def _resolve_seed(args: argparse.Namespace) -> int:
    """The given seed, or a fresh one that is reported in the output for replay."""
    if args.seed is None:
        args.seed = int(np.random.SeedSequence().entropy % (2**31))
        logger.info(f"No seed given, using {args.seed}")
    return args.seed


def _search_seed(args: argparse.Namespace, frame: Frame, method: str) -> int:
    """Seed for certifiers that may search; exact-only runs stay seed-free and reproducible."""
    if resolve_method(frame.m, frame.n, method) in ("search", "pencil_m3n7"):
        return _resolve_seed(args)
    return args.seed if args.seed is not None else 0


def _read_frame(args: argparse.Namespace) -> Frame:
    """Frame from ``--frame``, or a random one from ``--m``/``--n``/``--seed``."""
    if args.frame is not None:
        try:
            frame = load_frame(args.frame)
        except FrameFormatError:
            raise
        except ValueError as e:
            raise FrameFormatError(str(e)) from e
    elif args.m is not None and args.n is not None:
        mode = "rational" if args.exact else "gaussian"
        frame = random_frame(args.m, args.n, seed=_resolve_seed(args), mode=mode, real=args.real)
    else:
        raise UsageError("Provide --frame FILE or both --m and --n")
    return frame.to_rational() if args.exact else frame


def _frame_info(frame: Frame, args: argparse.Namespace) -> dict:
    info = {"m": frame.m, "n": frame.n, "mode": frame.mode, "spanning": frame.spanning}
    if args.frame is not None:
        info["frame_file"] = str(args.frame)
    if args.seed is not None:
        info["seed"] = args.seed
    return info


def _emit(text: str, out: Optional[Path]) -> None:
    if out is not None:
        Path(out).write_text(text, encoding="utf-8")
        logger.info(f"Wrote {out}")
    else:
        sys.stdout.write(text)


def _emit_json(payload: dict, args: argparse.Namespace) -> None:
    _emit(json.dumps(payload, sort_keys=True, indent=2) + "\n", args.out)


def _search_options(args: argparse.Namespace) -> dict:
    options = {"tol": args.tol, "restarts": args.restarts}
    return {k: v for k, v in options.items() if v is not None}


def _verification_tol(args: argparse.Namespace) -> float:
    """Re-verification tolerance: never stricter than the one certificates were accepted with."""
    return max(CERTIFICATE_TOL, args.tol) if args.tol is not None else CERTIFICATE_TOL


def _verdict_payload(frame: Frame, verdict, tol: float = CERTIFICATE_TOL) -> dict:
    payload = verdict_to_dict(verdict, frame)
    if isinstance(verdict, NonInjective):
        diagnostics = verify_certificate(frame, verdict.certificate.q, tol)
        if not diagnostics.passed:
            raise CertificateError(f"Certificate failed re-verification: {diagnostics.reason}")
        payload["verification"] = diagnostics.to_dict()
    return payload


def cmd_certify(args: argparse.Namespace) -> int:
    frame = _read_frame(args)
    started = time.perf_counter()
    options = _search_options(args)
    if args.mode == "complex":
        verdict = certify_frame(frame, method="search", mode="complex", seed=_resolve_seed(args), **options)
        payload = verdict.to_dict()
    else:
        verdict = certify_frame(frame, method=args.method, seed=_search_seed(args, frame, args.method), **options)
        payload = _verdict_payload(frame, verdict, _verification_tol(args))
    payload["frame"] = _frame_info(frame, args)
    if args.timing:
        payload["wall_clock_seconds"] = time.perf_counter() - started
    _emit_json(payload, args)
    return EXIT_OK


def cmd_exact_test(args: argparse.Namespace) -> int:
    frame = _read_frame(args)
    verdict = certify_frame(frame, method="exact", seed=_search_seed(args, frame, "exact"), **_search_options(args))
    payload = _verdict_payload(frame, verdict, _verification_tol(args))
    payload["frame"] = _frame_info(frame, args)
    _emit_json(payload, args)
    return EXIT_OK


def _load_certificate(path: Path, m: int) -> HermitianCoords:
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        raise UsageError(f"Cannot read certificate file {path}: {e}") from e
    if "certificate" in payload:
        payload = payload["certificate"]
    coords = payload.get("coords")
    if not isinstance(coords, list):
        raise UsageError(f"Certificate file {path} has no 'coords' list")
    mode = "rational" if any(isinstance(c, str) for c in coords) else "float"
    try:
        return HermitianCoords(m, coords, mode)
    except ValueError as e:
        raise UsageError(f"Invalid certificate coordinates: {e}") from e


def cmd_witness(args: argparse.Namespace) -> int:
    frame = _read_frame(args)
    payload = {}
    if args.certificate is not None:
        q = _load_certificate(args.certificate, frame.m)
        diagnostics = verify_certificate(frame, q, _verification_tol(args))
        payload["verification"] = diagnostics.to_dict()
        if not diagnostics.passed:
            payload["witness"] = None
            payload["frame"] = _frame_info(frame, args)
            _emit_json(payload, args)
            return EXIT_FAILURE
        witness = witness_from_certificate(q)
    else:
        verdict = certify_frame(frame, seed=_search_seed(args, frame, "auto"), **_search_options(args))
        payload["verdict"] = verdict.tag
        if not isinstance(verdict, NonInjective):
            payload["witness"] = None
            payload["frame"] = _frame_info(frame, args)
            _emit_json(payload, args)
            return EXIT_OK
        witness = verdict.witness

    measurements_x = intensity_measurements(frame, witness.x)
    measurements_y = intensity_measurements(frame, witness.y)
    payload["frame"] = _frame_info(frame, args)
    payload["witness"] = witness.to_dict(frame)
    payload["max_measurement_gap"] = float(np.max(np.abs(measurements_x - measurements_y)))
    _emit_json(payload, args)
    return EXIT_OK


def cmd_kernel(args: argparse.Namespace) -> int:
    frame = _read_frame(args)
    basis = kernel_basis(constraint_matrix(frame), frame.mode)
    payload = {
        "frame": _frame_info(frame, args),
        "dimension": basis.dim,
        "mode": basis.mode,
        "basis": basis.to_list(),
    }
    _emit_json(payload, args)
    return EXIT_OK


def cmd_fcp(args: argparse.Namespace) -> int:
    frame = _read_frame(args)
    try:
        result = finite_complement_property(frame)
    except ValueError as e:
        raise FrameFormatError(str(e)) from e
    _emit_json({"frame": _frame_info(frame, args), **result.to_dict()}, args)
    return EXIT_OK


def _require_m(args: argparse.Namespace) -> int:
    if args.m is None:
        raise UsageError("--m is required")
    return args.m


def cmd_degree(args: argparse.Namespace) -> int:
    _emit_json(degree_report(_require_m(args)).to_dict(), args)
    return EXIT_OK


def cmd_parity_table(args: argparse.Namespace) -> int:
    rows = [report.table_row() for report in parity_table(args.m_min, args.m_max)]
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=list(rows[0].keys()), lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    _emit(buffer.getvalue(), args.out or args.csv)
    return EXIT_OK


def cmd_hmw_bound(args: argparse.Namespace) -> int:
    m = _require_m(args)
    _emit_json({"m": m, "hmw_bound": hmw_bound(m), "4m-5": 4 * m - 5, "4m-4": 4 * m - 4}, args)
    return EXIT_OK


def _emit_report(report, args: argparse.Namespace) -> int:
    payload = report.to_dict(include_timing=args.timing)
    _emit_json(payload, args)
    if args.csv is not None:
        Path(args.csv).write_text(report.to_csv(), encoding="utf-8")
        logger.info(f"Wrote {args.csv}")
    return EXIT_OK


def _require_shape(args: argparse.Namespace) -> tuple[int, int]:
    if args.m is None or args.n is None:
        raise UsageError("--m and --n are required")
    return args.m, args.n


def cmd_montecarlo(args: argparse.Namespace) -> int:
    m, n = _require_shape(args)
    report = montecarlo(
        m, n, args.trials, _resolve_seed(args), method=args.method, n_jobs=args.jobs,
        progress=args.progress, **_search_options(args),
    )
    return _emit_report(report, args)


def cmd_explore(args: argparse.Namespace) -> int:
    m = _require_m(args)
    report = explore_conjecture(
        m, args.n, args.trials, _resolve_seed(args), n_jobs=args.jobs, progress=args.progress,
        **_search_options(args),
    )
    return _emit_report(report, args)


def cmd_invariance(args: argparse.Namespace) -> int:
    m, n = _require_shape(args)
    report = invariance_suite(
        m, n, args.trials, _resolve_seed(args), transforms=args.transforms, method=args.method,
        n_jobs=args.jobs, progress=args.progress, **_search_options(args),
    )
    return _emit_report(report, args)


def cmd_gen(args: argparse.Namespace) -> int:
    m, n = _require_shape(args)
    mode = "rational" if args.exact or args.sampling == "rational" else "gaussian"
    frame = random_frame(m, n, seed=_resolve_seed(args), mode=mode, real=args.real)
    metadata = {"seed": args.seed, "sampling": mode, "real": args.real}
    if args.out is not None:
        save_frame(frame, args.out, metadata=metadata)
    else:
        sys.stdout.write(dumps_frame(frame, metadata=metadata))
    sys.stderr.write(f"seed {args.seed}\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--frame", type=Path, help="Frame file (.json or .csv)")
    common.add_argument("--m", type=int, help="Dimension")
    common.add_argument("--n", type=int, help="Number of frame vectors")
    common.add_argument("--seed", type=int, help="RNG seed (generated and reported if absent)")
    common.add_argument("--tol", type=float, help=f"Search residual threshold (default {SEARCH_DEFAULTS['tol']:g})")
    common.add_argument("--restarts", type=int, help=f"Search restarts (default {SEARCH_DEFAULTS['restarts']})")
    common.add_argument("--exact", action="store_true", help="Convert the frame to exact rationals")
    common.add_argument("--real", action="store_true", help="Sample real frames (V = 0)")
    common.add_argument("--out", type=Path, help="Write the payload to this file instead of stdout")
    common.add_argument("--csv", type=Path, help="Also write a CSV summary to this file")
    common.add_argument("--timing", action="store_true", help="Include wall-clock time in reports")
    common.add_argument("--verbose", "-v", action="store_true", help="Debug logging on stderr")

    parser = argparse.ArgumentParser(
        prog="phase-injectivity",
        description="Certify injectivity of phase retrieval intensity measurements for complex frames.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, handler, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(handler=handler)
        return p

    methods = ["auto", "exact", *CERTIFIER_REGISTRY.keys()]
    p = add("certify", cmd_certify, "Certify a frame (exact construction or search)")
    p.add_argument("--method", choices=methods, default="auto")
    p.add_argument("--mode", choices=["hermitian", "complex"], default="hermitian")

    p = add("witness", cmd_witness, "Extract colliding vectors from a certificate")
    p.add_argument("--certificate", type=Path, help="Certificate JSON with a 'coords' list")

    add("exact-test", cmd_exact_test, "Exact test for (m, n) in (2,4), (3,8), (2,3), (3,7)")
    add("kernel", cmd_kernel, "Basis of the Hermitian kernel L")
    add("fcp", cmd_fcp, "Finite complement property of a real frame")
    add("degree", cmd_degree, "Degree and parity data of the rank-2 variety")

    p = add("parity-table", cmd_parity_table, "CSV table of degree parity data")
    p.add_argument("--m-min", type=int, default=2)
    p.add_argument("--m-max", type=int, default=64)

    add("hmw-bound", cmd_hmw_bound, "Embedding-theoretic non-injectivity bound")

    for name, handler, help_text in (
        ("montecarlo", cmd_montecarlo, "Verdict counts over random frames"),
        ("explore-conjecture", cmd_explore, "Search for rank-2 kernel elements at n = 4m - 5"),
        ("invariance", cmd_invariance, "Verdict invariance under frame transformations"),
    ):
        p = add(name, handler, help_text)
        p.add_argument("--trials", type=int, default=100)
        p.add_argument("--jobs", type=int, default=1, help="Parallel workers")
        p.add_argument("--progress", action="store_true", help="Progress bar on stderr")
        if name != "explore-conjecture":
            p.add_argument("--method", choices=["auto", "exact", "search"], default="auto")
        if name == "invariance":
            p.add_argument("--transforms", type=int, default=5)

    p = add("gen", cmd_gen, "Write a random frame file")
    p.add_argument("--sampling", choices=["gaussian", "rational"], default="gaussian")

    return parser


def run(argv: Sequence[str]) -> int:
    """
    Run the CLI and return its exit code.

    Args:
        argv: Arguments without the program name

    Returns:
        Exit code
    """
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE

    _configure_logging(args.verbose)
    try:
        return args.handler(args)
    except (UsageError, UnsupportedShapeError) as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_USAGE
    except (FrameFormatError, FileNotFoundError) as e:
        logger.error(f"Bad frame: {e}")
        sys.stderr.write(f"error: {e}\n")
        return EXIT_BAD_FRAME
    except CertificateError as e:
        logger.error(f"Self-check failed: {e}")
        sys.stderr.write(f"error: {e}\n")
        return EXIT_FAILURE


def main():
    """Console script entry point."""
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
