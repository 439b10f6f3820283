"""Configuration, thresholds and method mappings for frame certification."""

from typing import Dict, List, Literal, Tuple

# Scalar representation of frame entries
ScalarMode = Literal["float", "rational"]

# Sampling distribution for random frames
FrameSampling = Literal["gaussian", "rational"]

# Search target: real Hermitian certificates or complex rank-2 points
SearchMode = Literal["hermitian", "complex"]

# Dispatch policy of the Monte Carlo harness
HarnessMethod = Literal["exact", "search", "auto"]

# Frame file extensions mapped to their format names
FRAME_FILE_EXTENSIONS: Dict[str, str] = {
    ".json": "json",
    ".csv": "csv",
}

# Frame file extensions that have a reader
SUPPORTED_EXTENSIONS: List[str] = list(FRAME_FILE_EXTENSIONS.keys())

# Default encoding for frame files
DEFAULT_ENCODING: str = "utf-8"

# Numerical tolerances
HERMITIAN_TOL: float = 1e-12
RANK_REL_TOL: float = 1e-9
KERNEL_REL_TOL: float = 1e-9
DET_REL_TOL: float = 1e-9
MEASUREMENT_MATCH_TOL: float = 1e-8
WITNESS_SEPARATION_RATIO: float = 0.1
CUBIC_REFINE_TOL: float = 1e-14
CERTIFICATE_TOL: float = 1e-8

# Random frame sampling
MAX_RESAMPLE_ATTEMPTS: int = 10
RATIONAL_NUMERATOR_BOUND: int = 9
RATIONAL_DENOMINATOR_BOUND: int = 9

# Exhaustive subset enumeration guard for the finite complement property
MAX_FCP_VECTORS: int = 24

# Alternating projection defaults
SEARCH_DEFAULTS: Dict[str, float | int | bool] = {
    "tol": 1e-10,
    "max_iters": 2000,
    "restarts": 50,
    "stagnation_tol": 1e-13,
    "polish": True,
}

# Exact certifiers by frame shape (m, n)
EXACT_SHAPES: Dict[Tuple[int, int], str] = {
    (2, 4): "det_m2n4",
    (3, 8): "det_m3n8",
    (2, 3): "kernel_m2n3",
    (3, 7): "pencil_m3n7",
}

# Certifier methods
CERTIFIER_METHODS: List[str] = [
    "det_m2n4",
    "det_m3n8",
    "kernel_m2n3",
    "pencil_m3n7",
    "search",
]
DEFAULT_CERTIFIER_METHOD = "auto"

# Method-specific configurations
CERTIFIER_CONFIG: Dict[str, Dict] = {
    "det_m2n4": {
        "shape": (2, 4),
        "prefers_rational": True,
        "det_rel_tol": DET_REL_TOL,
    },
    "det_m3n8": {
        "shape": (3, 8),
        "prefers_rational": True,
        "det_rel_tol": DET_REL_TOL,
    },
    "kernel_m2n3": {
        "shape": (2, 3),
        "prefers_rational": True,
    },
    "pencil_m3n7": {
        "shape": (3, 7),
        "prefers_rational": False,
        "refine_tol": CUBIC_REFINE_TOL,
    },
    "search": {
        "shape": None,
        "mode": "hermitian",
        **SEARCH_DEFAULTS,
    },
}

# Verdict tags
VERDICT_TAGS: List[str] = ["Injective", "NonInjective", "Indeterminate", "NotFound"]

# Wording used wherever a budgeted search comes back empty
NOT_FOUND_REASON = "no certificate found within budget"
EMPTY_KERNEL_REASON = "L_Φ = 0"
EXPLORATION_DISCLAIMER = (
    "Search failures cannot tell a counterexample to the rank-2 conjecture "
    "apart from a weakness of the alternating projection search; "
    "NotFound entries mean only that the search budget was exhausted."
)

# CLI exit codes
EXIT_OK: int = 0
EXIT_FAILURE: int = 1
EXIT_USAGE: int = 2
EXIT_BAD_FRAME: int = 3

# Environment variable for the CLI default log level
LOG_LEVEL_ENV_VAR = "PHASE_INJECTIVITY_LOG_LEVEL"
