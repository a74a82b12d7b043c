APP_NAME = "dgdflow"
APP_VERSION = "0.1.0"

TOL_SPECTRAL = 1e-9
TOL_CRIT = 1e-6
TOL_DEGENERATE = 1e-8
TOL_NEWTON = 1e-10
TOL_LIMIT_GRADIENT = 1e-4

VALIDITY_BOX_RADIUS = 10.0
DEFAULT_HETEROGENEITY_SCALE = 0.1
# zero-sum tilts are drawn on this dyadic grid so their sum is exact
TILT_QUANTUM = 2.0**-20

R_CAPTURE = 0.1
TOL_CONSENSUS = 1e-2
BURN_IN_FRACTION = 0.1

DELTA_SADDLE = 0.05
TOL_S = 1e-6
PICARD_TOL = 1e-10
PICARD_MAX_ITERATIONS = 100
TAIL_CUTOFF = 1e-12

DEDUPLICATION_RADIUS = 1e-5
NEWTON_MAX_ITERATIONS = 200
