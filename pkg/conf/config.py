class BaseConfiguration(object):
    DEBUG = False
    LOG_LEVEL = "info"
    # Empty means stderr.
    LOG_FILE = ""

    # Eigenvalues of Gram matrices below CLAMP_TOL * max(1, |largest|) are
    # treated as zero; more negative ones are hard errors.
    CLAMP_TOL = 1e-12

    # The expurgated exponent is searched over s in [1, S_CAP]. Rates whose
    # optimal s lies beyond it are reported as the zero-rate limit.
    S_CAP = 200.0

    # Stopping rules of the derivative root search (bisection).
    ROOT_TOL = 1e-10
    ROOT_XTOL = 1e-12
    GOLDEN_TOL = 1e-10

    # Prior optimization: lattice scan of the simplex followed by
    # downhill-simplex refinement from the REFINE_TOP best lattice points.
    GRID_STEP_SMALL = 0.01  # alphabets of size <= 3
    GRID_STEP_LARGE = 0.04  # alphabets of size 4..6
    REFINE_ITERATIONS = 500
    REFINE_TOP = 5
    REFINE_XTOL = 1e-10
    MAX_ALPHABET = 6

    # Caps of the decoding oracle. Decoding costs O(M^3) per codebook.
    MAX_CODEWORDS = 512
    MAX_SAMPLES = 1000000

    # Empirical means are compared with bounds plus STAT_MARGIN standard
    # errors.
    STAT_MARGIN = 3.0

    THREADS = 1

    # Write Prometheus metrics of verification runs to this textfile.
    METRICS_FILE = ""


class DevConfiguration(BaseConfiguration):
    DEBUG = True
    LOG_LEVEL = "debug"


class TestConfiguration(BaseConfiguration):
    LOG_LEVEL = "debug"
    DEBUG = True
    THREADS = 2


class ProdConfiguration(BaseConfiguration):
    LOG_LEVEL = "warning"
