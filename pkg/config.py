"""
Channel Kappa Configuration.
"""

import os

# === TOLERANCES ===
# Relative singular-value cutoff for every rank / null-space decision
RANK_EPS = float(os.environ.get('RANK_EPS', 1e-10))

# Eigenvalue comparison (peripheral cutoff is |lambda| >= 1 - EIG_EPS)
EIG_EPS = float(os.environ.get('EIG_EPS', 1e-8))

# Identity-check residual (TP/unital flags, subspace equality, automorphism checks)
RESIDUAL_EPS = float(os.environ.get('RESIDUAL_EPS', 1e-9))

# A singular value within this factor of the cutoff (either side) is a borderline rank
GAP_WARNING_FACTOR = 10

# Eigenvalues in (1 - BORDERLINE_EIG_FACTOR * EIG_EPS, 1 - EIG_EPS) are borderline peripheral
BORDERLINE_EIG_FACTOR = 100

# Spectral values closer than DEGENERACY_FACTOR * EIG_EPS are treated as one cluster
DEGENERACY_FACTOR = 100

# === LIMITS ===
MAX_DIM = 32             # d <= 32
MAX_SUPEROP_DIM = 1024   # d^2 x d^2 superoperators

MAX_CHAIN_LENGTH = None  # None = d^2 (the chain always stabilizes before that)
GENERATED_ALGEBRA_MAX_ITER = None  # None = d^2 closure iterations

# Complement decay (adaptive power iteration)
DECAY_CAP = 2000
DECAY_TARGET = 1e-6

# Wedderburn random-element retries
WEDDERBURN_RETRIES = 8

# === RANDOMNESS ===
DEFAULT_SEED = 1234

# === CONCURRENCY ===
USE_THREADING = True  # Analyze several input files in worker threads
MAX_THREADS = None    # Maximum worker threads (None = auto-detect CPU cores)

# === OUTPUT ===
DEFAULT_FORMAT = 'json'  # 'json' or 'table'
JSON_INDENT = 2

# Spectrum plot
PLOT_DPI = 120
PLOT_SIZE = (6, 6)  # inches

# === DEBUG ===
DEBUG = False
SHOW_WARNINGS = True  # Print collected numerical warnings in table output
