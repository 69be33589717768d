"""
Configuration for the Fermionic Entanglement Toolkit
Numerical tolerances, resource guards, scan defaults and logging setup
"""

import logging
import os
from typing import Dict

from dotenv import load_dotenv

load_dotenv()

_config_logger = logging.getLogger(__name__)


def _env_float(name: str, default: float) -> float:
    raw = os.getenv(name)
    if raw is None or raw == '':
        return default
    try:
        return float(raw)
    except ValueError:
        _config_logger.warning(f"Ignoring non-numeric {name}={raw!r}, using {default}")
        return default


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw == '':
        return default
    try:
        return int(raw)
    except ValueError:
        _config_logger.warning(f"Ignoring non-integer {name}={raw!r}, using {default}")
        return default


# Numerical tolerances (absolute, max-norm unless noted)
TOLERANCES: Dict[str, float] = {
    'hermitian': _env_float('FERMION_TOL_HERMITIAN', 1e-9),
    'trace': _env_float('FERMION_TOL_TRACE', 1e-9),
    'clamp': _env_float('FERMION_TOL_CLAMP', 1e-10),       # eigenvalue clamp window [-clamp, 0]
    'orthonormal': _env_float('FERMION_TOL_ORTHONORMAL', 1e-9),
    'support': _env_float('FERMION_TOL_SUPPORT', 1e-9),    # P_anti rho P_anti == rho
    'verdict': _env_float('FERMION_TOL_VERDICT', 1e-9),    # inconclusive band around 0
    'cg_snap': _env_float('FERMION_TOL_CG_SNAP', 1e-14),
    'jacobi_offdiag': _env_float('FERMION_TOL_JACOBI', 1e-12),  # Frobenius norm
    'bisection': _env_float('FERMION_TOL_BISECTION', 1e-9),
    'purity': _env_float('FERMION_TOL_PURITY', 1e-9),
}

# Eigensolver selection: 'lapack' (numpy.linalg.eigh) or 'jacobi'
EIGENSOLVER = os.getenv('FERMION_EIGENSOLVER', 'lapack').lower()
JACOBI_MAX_SWEEPS = _env_int('FERMION_JACOBI_MAX_SWEEPS', 100)

# Resource guards
MAX_VECTOR_DIMENSION = 10 ** 6                                   # n**N for state vectors and spectral scans
MAX_DENSITY_DIMENSION = _env_int('FERMION_MAX_DENSITY_DIM', 4096)  # dense n**N x n**N, about 256 MB complex
MAX_FACTORIAL_N = 20

# Threshold scanning and q-sweep defaults
SCAN_DEFAULTS = {
    'grid_step': 1e-3,
    'q_start': 1.0,
    'q_stop': 50.0,
    'q_count': 99,
    'include_inf': True,
    'workers': _env_int('FERMION_WORKERS', 4),
    'theta_points': 50,
}

# Entropic orders evaluated by a full indicator report unless overridden
DEFAULT_Q_GRID = (1.0, 1.5, 2.0, 5.0, 20.0, float('inf'))

# Self-test defaults
SELFTEST_DEFAULTS = {
    'seed': 42,
    'count': 1000,
    'n': 4,
    'max_terms': 10,
    'closed_form_points': 21,
    'violation_tol': 1e-9,
}

# CSV export
CSV_FLOAT_FORMAT = '%.9f'
CSV_INFINITY = 'inf'
CSV_MISSING = 'none'

# Output locations
DATA_PATHS = {
    'log_file': os.getenv('FERMION_LOG_FILE', 'logs/fermion_entanglement.log'),
}

LOG_LEVEL = os.getenv('FERMION_LOG_LEVEL', 'INFO').upper()

# Logging Configuration
LOGGING_CONFIG = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'standard': {
            'format': '%(asctime)s [%(levelname)s] %(name)s: %(message)s'
        },
    },
    'handlers': {
        'default': {
            'level': LOG_LEVEL,
            'formatter': 'standard',
            'class': 'logging.StreamHandler',
            'stream': 'ext://sys.stderr',
        },
        'file': {
            'level': 'DEBUG',
            'formatter': 'standard',
            'class': 'logging.FileHandler',
            'filename': DATA_PATHS['log_file'],
            'mode': 'a',
            'delay': True,
        },
    },
    'loggers': {
        '': {
            'handlers': ['default', 'file'],
            'level': 'DEBUG',
            'propagate': False
        }
    }
}
