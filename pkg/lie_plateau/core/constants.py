"""
Constants for LiePlateau
All the tolerances and numeric defaults live here so nothing gets tuned inline
"""

# ============================================
# Tolerance Ledger
# ============================================
# representation < linear algebra < physics, one ledger for the whole package
REPRESENTATION_TOL = 1e-12  # hermiticity, unitarity, dropped coefficients
LINALG_TOL = 1e-10  # orthonormality, independence during closure
PHYSICS_TOL = 1e-8  # commutation checks on states, purity identities

CLOSURE_RESIDUAL_TOL = 1e-9  # bracket-closure and cross-ideal residuals
MEMBERSHIP_REL_TOL = 1e-9  # ||H - H_g|| < tol * ||H||
# states only expose Pauli expectations, so their membership test works on squared norms
STATE_MEMBERSHIP_REL_TOL_SQ = 1e-12
PRUNE_TOL = 1e-14  # coefficients below this are dropped from sparse vectors
NULL_SPACE_RCOND = 1e-9  # relative singular value cutoff for null spaces

# ============================================
# Pauli Constants
# ============================================
MAX_PAULI_QUBITS = 64  # one machine word per mask
MAX_DENSE_PAULI_QUBITS = 12  # to_matrix() refuses above this
PAULI_LETTERS = "IXYZ"

# ============================================
# DLA Constants
# ============================================
EIGEN_CLUSTER_REL_GAP = 1e-6
COMMUTANT_MAX_DIM = 36  # dense commutant solve has dim^2 unknowns
DECOMPOSE_MAX_DIM = 1024
PEELING_PROBES = 3  # random elements summed into the peeling operator
PEELING_MAX_REDRAWS = 5
DECOMPOSE_METHODS = ("auto", "commutant", "peeling")

# ============================================
# Variance / Diagnosis Constants
# ============================================
BP_SLOPE_THRESHOLD = -0.5  # log2(Var) per qubit
BP_R2_THRESHOLD = 0.98
MIN_FAMILY_SIZES = 4

CAUSE_EXPRESSIVENESS = "expressiveness"
CAUSE_STATE = "state"
CAUSE_OBSERVABLE = "observable"
CAUSE_MIXED = "mixed"

VERDICT_BP = "BP"
VERDICT_NO_BP = "no-BP"
VERDICT_INCONCLUSIVE = "inconclusive"

# spin oracle quadrature sizes
SPIN_ORACLE_AZIMUTH_POINTS = 32
SPIN_ORACLE_POLAR_POINTS = 48

# ============================================
# Simulation Constants
# ============================================
MAX_STATEVECTOR_QUBITS = 20
DEFAULT_NUM_SAMPLES = 5000
MIN_NUM_SAMPLES = 100
DEFAULT_LAYER_FACTOR = 5  # L0 = 5 * n
MAX_LAYERS = 512
DEFAULT_REL_TOL = 0.05
STDERR_BATCHES = 20
DEFAULT_MC_CHUNK_SIZE = 256
VARIANCE_FLOOR = 1e-12  # relative convergence check falls back to absolute below this

PARAMETER_DISTRIBUTIONS = ("uniform", "normal")

# Setup 2/3 preparation defaults
DEFAULT_PREP_DRAWS = 8
LOCAL_ROTATION_SCALE = 0.25  # std of a, b, c in exp(-i(aX + bY + cZ))

# ============================================
# Moment Operator Constants
# ============================================
DENSE_MOMENT_MAX_QUBITS = 14
MATRIX_FREE_MAX_QUBITS = 26
DENSE_EIGEN_MAX_QUBITS = 10  # "auto" switches to arnoldi above this
DEFAULT_LAMBDA_TOL = 1e-8
POWER_ITERATION_RESTARTS = 3
POWER_ITERATION_MAX_ITER = 20000
ARNOLDI_NCV = 24
LAMBDA_METHODS = ("auto", "dense", "power", "arnoldi")
DEPTH_ROUNDING_SLACK = 1e-12

# ============================================
# CLI Constants
# ============================================
EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_TRUNCATED = 2
EXIT_OUTSIDE_THEORY = 3
EXIT_NON_CONVERGENCE = 4

DEFAULT_SEED = 1234
DEFAULT_N_RANGE = (3, 9)
REPRODUCE_MIN_N = 3
REPRODUCE_MAX_N = 12

CSV_COLUMNS_REPRODUCE = [
    "setup", "n", "dim_g", "purity_rho", "purity_O",
    "var_exact", "var_mc", "stderr", "z",
]
CSV_COLUMNS_MONTECARLO = [
    "n", "setup", "L", "samples", "var_hat", "stderr", "var_exact", "z_score",
]
CSV_COLUMNS_DEPTH = ["n", "lambda_max", "epsilon", "L"]
CSV_COLUMNS_DLA = ["n", "dim_g", "center_dim", "ideal_dims", "truncated", "method"]
CSV_COLUMNS_PURITY = ["n", "dim_g", "purity_rho", "purity_O"]
CSV_COLUMNS_VARIANCE = ["n", "dim_g", "purity_rho", "purity_O", "mean", "var_exact", "status"]

# ============================================
# Logging Constants
# ============================================
LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
LOG_DATE_FORMAT = "%Y-%m-%d %H:%M:%S"

# ============================================
# Metrics Constants
# ============================================
METRICS_NAMESPACE = "lieplateau"
METRICS_SUBSYSTEM_DLA = "dla"
METRICS_SUBSYSTEM_SIMULATE = "simulate"
METRICS_SUBSYSTEM_MOMENTS = "moments"
METRICS_SUBSYSTEM_CLI = "cli"

# Histogram buckets for compute time (in seconds)
DURATION_BUCKETS = [0.001, 0.01, 0.1, 0.5, 1.0, 5.0, 15.0, 60.0, 300.0]

# ============================================
# Error Messages
# ============================================
ERROR_EMPTY_PAULI = "Pauli string must not be empty"
ERROR_INVALID_PAULI_CHAR = "Invalid character {char!r} in Pauli string {text!r}"
ERROR_PAULI_LENGTH = "Pauli string {text!r} has {got} qubits, expected {expected}"
ERROR_TOO_MANY_QUBITS = f"At most {MAX_PAULI_QUBITS} qubits are supported"
ERROR_MISMATCHED_N = "Operands act on {a} and {b} qubits"
ERROR_NOT_HERMITIAN = "Operator is not Hermitian"
ERROR_TRUNCATED = "DLA closure hit dim_cap={cap}; exact predictions are unavailable"
ERROR_OUTSIDE_THEORY = "Neither rho nor O lies in i*g; the exact variance formula does not apply"
ERROR_PROBABILITY_RANGE = "Depolarizing probability must lie in [0, 1], got {p}"
ERROR_STATEVECTOR_TOO_LARGE = "Dense statevectors are limited to {limit} qubits, got n={n}"
