"""
Monte Carlo experiments over random frames.

Trial i uses seed ``seed + i`` for its frame and its search schedule, and
trials are collected in index order, so serial and parallel runs produce
identical reports. Wall-clock time is recorded but only emitted on request.
"""

import csv
import io
import json
import logging
import sys
import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np
from joblib import Parallel, delayed
from sympy import Basic
from tqdm import tqdm

from .certifiers import certify_frame, resolve_method
from .config import (
    CERTIFIER_CONFIG,
    EXACT_SHAPES,
    EXPLORATION_DISCLAIMER,
    VERDICT_TAGS,
    HarnessMethod,
)
from .core import (
    NonInjective,
    NotFound,
    phase_columns,
    random_frame,
    random_invertible,
    rational_unit_phase,
    transform_frame,
)
from .utils import format_rational

logger = logging.getLogger(__name__)

SEARCH_OPTION_KEYS = ("tol", "restarts", "max_iters", "polish")
BUDGET_EXHAUSTED_LABEL = "search budget exhausted"


def _finite_or_none(value) -> Optional[float]:
    if value is None:
        return None
    value = float(value)
    return value if np.isfinite(value) else None


@dataclass
class TrialRecord:
    """Outcome of one trial."""

    index: int
    seed: int
    verdict: str
    method: str
    determinant: Optional[str | float] = None
    linear_residual: Optional[float] = None
    rank_residual: Optional[float] = None
    reason: Optional[str] = None
    extra: Dict[str, object] = field(default_factory=dict)

    def to_dict(self) -> dict:
        payload = {
            "index": self.index,
            "seed": self.seed,
            "verdict": self.verdict,
            "method": self.method,
            "determinant": self.determinant,
            "linear_residual": self.linear_residual,
            "rank_residual": self.rank_residual,
            "reason": self.reason,
        }
        payload.update(self.extra)
        return payload


@dataclass
class ExperimentReport:
    """Aggregated counts, residual statistics and per-trial records of an experiment."""

    experiment: str
    m: int
    n: int
    trials: int
    seed: int
    method: str
    counts: Dict[str, int]
    residuals: Dict[str, Dict[str, Optional[float]]]
    records: List[TrialRecord]
    wall_clock: float = 0.0
    summary: Dict[str, object] = field(default_factory=dict)

    def to_dict(self, include_timing: bool = False) -> dict:
        payload = {
            "experiment": self.experiment,
            "m": self.m,
            "n": self.n,
            "trials": self.trials,
            "seed": self.seed,
            "method": self.method,
            "counts": dict(self.counts),
            "residuals": self.residuals,
            "records": [record.to_dict() for record in self.records],
            **self.summary,
        }
        if include_timing:
            payload["wall_clock_seconds"] = self.wall_clock
        return payload

    def to_json(self, include_timing: bool = False) -> str:
        return json.dumps(self.to_dict(include_timing), sort_keys=True, indent=2) + "\n"

    def to_csv(self) -> str:
        """Per-trial CSV summary."""
        columns = ["index", "seed", "verdict", "method", "determinant", "linear_residual", "rank_residual", "reason"]
        buffer = io.StringIO()
        writer = csv.DictWriter(buffer, fieldnames=columns, extrasaction="ignore", lineterminator="\n")
        writer.writeheader()
        for record in self.records:
            writer.writerow({k: ("" if v is None else v) for k, v in record.to_dict().items()})
        return buffer.getvalue()


def _residual_stats(values: List[Optional[float]]) -> Dict[str, Optional[float]]:
    finite = [v for v in values if v is not None]
    if not finite:
        return {"min": None, "median": None, "max": None}
    return {"min": float(np.min(finite)), "median": float(np.median(finite)), "max": float(np.max(finite))}


def _record_from_verdict(index: int, seed: int, method: str, verdict) -> TrialRecord:
    determinant = verdict.details.get("determinant")
    if isinstance(determinant, Basic):
        determinant = format_rational(determinant)
    elif determinant is not None:
        determinant = float(determinant)

    record = TrialRecord(index, seed, verdict.tag, method, determinant=determinant)
    if isinstance(verdict, NonInjective):
        record.linear_residual = _finite_or_none(verdict.certificate.linear_residual)
        record.rank_residual = _finite_or_none(verdict.certificate.rank_residual)
    elif isinstance(verdict, NotFound):
        record.linear_residual = _finite_or_none(verdict.budget.best_linear_residual)
        record.rank_residual = _finite_or_none(verdict.budget.best_rank_residual)
        record.reason = verdict.budget.reason
    else:
        record.reason = verdict.reason
    return record


def _frame_sampling(method: str) -> str:
    return "rational" if CERTIFIER_CONFIG[method].get("prefers_rational") else "gaussian"


def _search_kwargs(method: str, seed: int, search_options: Dict[str, object]) -> Dict[str, object]:
    if method not in ("search", "pencil_m3n7"):
        return {}
    return {"seed": seed, **search_options}


def _montecarlo_trial(m: int, n: int, index: int, seed: int, method: str, search_options: dict) -> TrialRecord:
    frame = random_frame(m, n, seed=seed, mode=_frame_sampling(method))
    verdict = certify_frame(frame, method=method, **_search_kwargs(method, seed, search_options))
    return _record_from_verdict(index, seed, method, verdict)


def _run_trials(func, args_list: List[tuple], n_jobs: int, progress: bool, desc: str) -> list:
    iterator = tqdm(args_list, desc=desc, disable=not progress, file=sys.stderr)
    if n_jobs == 1:
        return [func(*args) for args in iterator]
    return Parallel(n_jobs=n_jobs)(delayed(func)(*args) for args in iterator)


def _aggregate(experiment: str, m: int, n: int, trials: int, seed: int, method: str,
               records: List[TrialRecord], started: float, summary: dict) -> ExperimentReport:
    counts = {tag: 0 for tag in VERDICT_TAGS}
    for record in records:
        counts[record.verdict] = counts.get(record.verdict, 0) + 1
    residuals = {
        "linear": _residual_stats([r.linear_residual for r in records]),
        "rank": _residual_stats([r.rank_residual for r in records]),
    }
    report = ExperimentReport(
        experiment=experiment,
        m=m,
        n=n,
        trials=trials,
        seed=seed,
        method=method,
        counts=counts,
        residuals=residuals,
        records=records,
        wall_clock=time.perf_counter() - started,
        summary=summary,
    )
    logger.info(f"{experiment} (m={m}, n={n}, trials={trials}): {counts}")
    return report


def _check_trials(trials: int) -> None:
    if trials < 1:
        raise ValueError(f"trials must be at least 1, got {trials}")


def montecarlo(
    m: int,
    n: int,
    trials: int,
    seed: int,
    method: HarnessMethod = "auto",
    n_jobs: int = 1,
    progress: bool = False,
    **search_options,
) -> ExperimentReport:
    """
    Certify ``trials`` random frames and count verdicts.

    Exact certifiers sample rational frames when they prefer exact
    arithmetic; the search samples Gaussian frames.

    Args:
        m: Dimension
        n: Number of frame vectors
        trials: Number of random frames
        seed: Base seed; trial i uses ``seed + i``
        method: 'exact', 'search' or 'auto'
        n_jobs: joblib worker count
        progress: Show a progress bar on stderr
        **search_options: tol, restarts, max_iters, polish for the search

    Returns:
        ExperimentReport

    Raises:
        UnsupportedShapeError: If 'exact' is requested for an unsupported shape
    """
    _check_trials(trials)
    resolved = resolve_method(m, n, method)
    options = {k: v for k, v in search_options.items() if k in SEARCH_OPTION_KEYS and v is not None}
    logger.info(f"Monte Carlo m={m}, n={n}, trials={trials}, method={resolved}")

    started = time.perf_counter()
    args_list = [(m, n, i, seed + i, resolved, options) for i in range(trials)]
    records = _run_trials(_montecarlo_trial, args_list, n_jobs, progress, "montecarlo")
    return _aggregate("montecarlo", m, n, trials, seed, resolved, records, started, {})


def _explore_trial(m: int, n: int, index: int, seed: int, search_options: dict) -> TrialRecord:
    frame = random_frame(m, n, seed=seed, mode="gaussian")
    verdict = certify_frame(frame, method="search", seed=seed, **search_options)
    record = _record_from_verdict(index, seed, "search", verdict)
    if isinstance(verdict, NotFound):
        record.extra["label"] = BUDGET_EXHAUSTED_LABEL
    if (m, n) in EXACT_SHAPES:
        oracle = certify_frame(frame, method=EXACT_SHAPES[(m, n)], **_search_kwargs(EXACT_SHAPES[(m, n)], seed, search_options))
        record.extra["exact_verdict"] = oracle.tag
        record.extra["agrees_with_exact"] = _agree(verdict.tag, oracle.tag)
    return record


def _agree(search_tag: str, exact_tag: str) -> bool:
    """Search and exact results agree when both or neither report NonInjective."""
    return (search_tag == "NonInjective") == (exact_tag == "NonInjective")


def explore_conjecture(
    m: int,
    n: Optional[int] = None,
    trials: int = 100,
    seed: int = 0,
    n_jobs: int = 1,
    progress: bool = False,
    **search_options,
) -> ExperimentReport:
    """
    Search for rank-2 matrices in L for random frames with ``n = 4m - 5``.

    NotFound entries only mean the search budget was exhausted; the report
    carries a disclaimer to that effect. Shapes with an exact construction
    are cross-checked against it.

    Returns:
        ExperimentReport with ``found_rate`` in its summary
    """
    _check_trials(trials)
    n = 4 * m - 5 if n is None else n
    if m < 4:
        logger.warning(f"m={m} is below the first open case m=4; results can be checked exactly")
    options = {k: v for k, v in search_options.items() if k in SEARCH_OPTION_KEYS and v is not None}

    started = time.perf_counter()
    args_list = [(m, n, i, seed + i, options) for i in range(trials)]
    records = _run_trials(_explore_trial, args_list, n_jobs, progress, "explore-conjecture")

    found = sum(1 for r in records if r.verdict == "NonInjective")
    summary = {"found_rate": found / trials, "disclaimer": EXPLORATION_DISCLAIMER}
    if (m, n) in EXACT_SHAPES:
        agreeing = sum(1 for r in records if r.extra.get("agrees_with_exact"))
        summary["oracle_agreement_rate"] = agreeing / trials
    return _aggregate("explore-conjecture", m, n, trials, seed, "search", records, started, summary)


def _transformed_frame(frame, rng: np.random.Generator):
    a_re, a_im = random_invertible(frame.m, rng, frame.mode)
    moved = transform_frame(frame, a_re, a_im)
    if frame.mode == "rational":
        phases = [rational_unit_phase(rng) for _ in range(frame.n)]
        re_parts, im_parts = [p[0] for p in phases], [p[1] for p in phases]
    else:
        angles = rng.uniform(0.0, 2 * np.pi, size=frame.n)
        re_parts, im_parts = np.cos(angles), np.sin(angles)
    return phase_columns(moved, re_parts, im_parts)


def _invariance_trial(m: int, n: int, index: int, seed: int, method: str, transforms: int,
                      search_options: dict) -> TrialRecord:
    frame = random_frame(m, n, seed=seed, mode=_frame_sampling(method))
    kwargs = _search_kwargs(method, seed, search_options)
    base = certify_frame(frame, method=method, **kwargs)
    record = _record_from_verdict(index, seed, method, base)

    tags = []
    for t in range(transforms):
        rng = np.random.default_rng([seed, t])
        tags.append(certify_frame(_transformed_frame(frame, rng), method=method, **kwargs).tag)
    record.extra["transformed_verdicts"] = tags
    record.extra["mismatches"] = sum(1 for tag in tags if tag != base.tag)
    return record


def invariance_suite(
    m: int,
    n: int,
    trials: int,
    seed: int,
    transforms: int = 5,
    method: HarnessMethod = "auto",
    n_jobs: int = 1,
    progress: bool = False,
    **search_options,
) -> ExperimentReport:
    """
    Check that verdict tags survive ``Phi -> A Phi`` and unit-modulus column phases.

    Rational frames are transformed exactly (Pythagorean unit phases and
    rational A), float frames with random angles and Gaussian A.

    Returns:
        ExperimentReport whose summary has ``mismatches`` and ``passed``
    """
    _check_trials(trials)
    resolved = resolve_method(m, n, method)
    options = {k: v for k, v in search_options.items() if k in SEARCH_OPTION_KEYS and v is not None}

    started = time.perf_counter()
    args_list = [(m, n, i, seed + i, resolved, transforms, options) for i in range(trials)]
    records = _run_trials(_invariance_trial, args_list, n_jobs, progress, "invariance")

    mismatches = sum(r.extra["mismatches"] for r in records)
    summary = {"transforms": transforms, "mismatches": mismatches, "passed": mismatches == 0}
    if mismatches:
        logger.warning(f"Invariance suite found {mismatches} tag mismatches")
    return _aggregate("invariance", m, n, trials, seed, resolved, records, started, summary)
