"""
Teledistill Constants

Centralized tolerances and resource guards to avoid magic numbers scattered throughout the codebase.
Import from here instead of hardcoding values.
"""

# =============================================================================
# RESOURCE GUARDS
# =============================================================================

ENUMERATION_LIMIT = 2 ** 24       # Max d^{2n} for coset / full-space enumeration
DENSE_MATRIX_LIMIT = 729          # Max d^n for dense operators on one register
TELEPORT_DENSE_LIMIT = 1024       # Max d^{3n} for density-matrix teleportation
DISTILL_DENSE_LIMIT = 512         # Max K*d^{3n} before distill switches to pure-state mode
PURE_STATE_LIMIT = 2 ** 16        # Max K*d^{3n} for pure-state accumulation
GRID_POINT_LIMIT = 25_000_000     # Max simplex points for the exponent grid oracle


# =============================================================================
# NUMERICAL TOLERANCES
# =============================================================================

HERMITIAN_TOL = 1e-10             # ||rho - rho^dagger|| for density matrices
TRACE_TOL = 1e-10                 # |Tr rho - 1|
PSD_TOL = 1e-9                    # Smallest eigenvalue allowed below zero
KRAUS_TOL = 1e-10                 # ||sum M^dagger M - I||
PROB_TOL = 1e-12                  # Probability normalization
STATIONARY_TOL = 1e-8             # ||qP - q|| accepted by markov_bound
PROJECTOR_TOL = 1e-9              # Code projector idempotence / trace
KL_TOL = 1e-9                     # Knill-Laflamme matrix check
FIDELITY_GAP_TOL = 1e-8           # Protocol fidelity vs code fidelity
LEMMA1_TOL = 1e-9                 # Full teleportation vs closed-form channel
TWIRL_TOL = 1e-10                 # Explicit twirl vs Bell-diagonal projection
CHOI_TOL = 1e-10                  # choi_state(teleport_channel(sigma)) vs twirl(sigma)
EXPONENT_TOL = 1e-6               # Exponent optimizer tolerance
TIE_TOL = 1e-15                   # Coset representative tie detection


# =============================================================================
# BATTERY DEFAULTS
# =============================================================================

DEFAULT_SEED = 7
RANDOM_STATES_PER_BATTERY = 20
RANDOM_STATES_N2 = 10
DEFAULT_MAX_WORKERS = 4
EXPONENT_SCAN_POINTS = 201        # Coarse scan of the tilted family before refinement
SAMPLED_RUNS = 100                # Single protocol runs drawn by distill --noise


# =============================================================================
# EXIT CODES
# =============================================================================

EXIT_OK = 0
EXIT_UNKNOWN = 1
EXIT_CONFIG = 2
EXIT_GUARD = 3
EXIT_TOLERANCE = 4


# =============================================================================
# REPORTS
# =============================================================================

CSV_COLUMNS = [
    "scenario",
    "d",
    "n",
    "K",
    "rate",
    "fidelity_way1",
    "fidelity_way2",
    "gap",
    "bound_corollary1",
    "bound_hashing_or_markov",
]

REPORT_FORMATS = ("csv", "json")
LOG_DIR_DEFAULT = "logs"
