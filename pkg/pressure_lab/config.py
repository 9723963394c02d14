from dotenv import load_dotenv
import os

load_dotenv()

THREADS = int(os.getenv("PRESSURE_LAB_THREADS", "1"))
LOG_LEVEL = os.getenv("PRESSURE_LAB_LOG_LEVEL", "INFO")
COCYCLE_HORIZON = int(os.getenv("PRESSURE_LAB_COCYCLE_HORIZON", "10000"))

# Tolerances on the conservative structure of the maps
DET_TOLERANCE = 1e-12
INVERSE_TOLERANCE = 1e-10

# Tangent cocycle products
OVERFLOW_GUARD = 1e300
RENORMALIZE_THRESHOLD = 1e100

# Periodic orbit search
NEWTON_TOLERANCE = 1e-12
NEWTON_MAX_ITER = 50
NEWTON_DAMPED_RETRIES = 4
RESIDUAL_TOLERANCE = 1e-10
MINIMAL_PERIOD_TOLERANCE = 1e-8
DEDUP_DISTANCE = 1e-6
DEFAULT_GRID_DENSITY = 64
MAX_SEEDS = 250_000

# Saddle / elliptic / parabolic band
CLASSIFICATION_BAND = 1e-6
CONSERVATIVE_EXPONENT_TOLERANCE = 1e-8

# Bowen estimator
BOWEN_CELL_BUDGET = 8
BOWEN_COVER_CAP = 20_000
BOWEN_SPACING_FACTOR = 0.75

# Grassmann search
GRASSMANN_ANGLES = 256
GRASSMANN_BASEPOINTS = 64
GRASSMANN_REFINE_STEPS = 20
GRASSMANN_REFINE_CANDIDATES = 8
GRASSMANN_RANDOM_FRAMES = 512

# SFT oracle
SFT_EIGEN_TOLERANCE = 1e-12

# Domination
DOMINATION_RATIO = 0.5
MIN_DOMINATION_HORIZON = 64
EIGENVECTOR_ANGLE_TOLERANCE = 1e-8

# Phase transition
CANDIDATE_TOLERANCE = 1e-6
VARIATION_GRID = 64

# Cross validation
CROSS_VALIDATION_TOLERANCE = 0.05

# CSV dialect
CSV_SIGNIFICANT_DIGITS = 17

# Caps enforced on experiment budgets
BUDGET_CAPS = {
    "max_period": 12,
    "grid_density": 512,
    "n_max": 10_000,
    "sample_budget": 4096,
    "horizon": 10_000,
    "t_points": 10_000,
}
