import logging
import os

BASE_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))

LOG_DIR = os.path.join(BASE_DIR, "logs")
LOG_LEVEL = logging.getLevelName(os.environ.get("BLOWUPLAB_LOG_LEVEL", "WARNING"))
PROFILING = False

SEED_ENV_VAR = "BLOWUPLAB_SEED"
DEFAULT_SEED = 0
SCHEMA_VERSION = 1

# relative separation required between nodes, scaled by max(1, max|x_i|)
DELTA_SEP = 1e-9
# identity tolerance
TAU_ID = 1e-10
# equality tolerance, relative to the magnitude of the summed exponents
TAU_EQ = 1e-12
# direct gap is trusted when it exceeds this many ulps of its term scale
GAP_RESOLUTION_ULPS = 1024

# highest derivative order handled by the quadrature route
N_MAX = 12
# |x| below which ln(1+x)/x switches to its alternating series
SERIES_RADIUS = 1e-4
SERIES_DEGREE = 8

QUAD_ABS_TOL = 1e-12
QUAD_REL_TOL = 1e-12
QUAD_MAX_PANELS = 2000

# escape threshold is Y_ESCAPE_FACTOR * max(1, k_n, |y0|)
Y_ESCAPE_FACTOR = 1e9
# runs moving out to infinity also escape once the remaining time
# prod k_i / (n |y|^n) drops below ESCAPE_TAIL_FRACTION * elapsed time
ESCAPE_TAIL_FRACTION = 1e-6
INTEGRATOR_RTOL = 1e-10
INTEGRATOR_ATOL = 1e-12
# per-step bound |dy| <= GROWTH_CAP * |y| outside [0, k_n]
GROWTH_CAP = 0.1
INTEGRATOR_MAX_STEPS = 200000

MAX_REJECTIONS = 1000
# samples per parallel chunk, fixed so that reports do not depend on workers
CHUNK_SIZE = 2000
# half-width of the box random extended-domain probes are drawn from
EXTENDED_RADIUS = 2.0

# __sphinx_doc_begin__
DEFAULT_CONFIG = {
    # weights / check commands take their points from the command line only
    "weights": {"x": None},
    "check": {"x": None, "r": None},
    # blow-up report for a single Cauchy problem
    "blowup": {"k": None, "y0": None},
    "simulate": {
        "k": None,
        "y0": None,
        # forward or backward in time
        "direction": "forward",
        "horizon": 10.0,
        "rtol": INTEGRATOR_RTOL,
        "atol": INTEGRATOR_ATOL,
    },
    "verify": {
        # inclusive range of dimensions, "lo..hi" on the command line
        "n_range": (1, 6),
        # samples per dimension (gen, crossroute, repetition) or cases (blowup)
        "samples": 10000,
        "seed": DEFAULT_SEED,
        "x_max": 10.0,
        # add one zero-coordinate copy of every valid sample
        "include_equality_cases": False,
        # probe the mixed-sign region, exploratory only
        "include_extended_domain": False,
        # bound on sum(r_i) for the repetition suite
        "max_total_r": 10,
        # number of ray workers, <= 1 runs in-process
        "workers": 1,
    },
}
# __sphinx_doc_end__
