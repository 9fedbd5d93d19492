"""Numerical tolerances shared by every module."""

NORM = 1e-12
HERMITIAN = 1e-10
TRACE = 1e-12
PSD = 1e-10
EIG_RESIDUAL = 1e-9
IMAG = 1e-10

# coefficient vectors shorter than this are treated as flat directions
FLAT_DIRECTION = 1e-14

# information / Bell comparisons on boundaries (phi = pi/4)
BOUNDARY = 1e-12

# dual-path agreement between numerical and closed-form Bell values
DUAL_PATH_EXACT = 2e-3
DUAL_PATH_CONJECTURED = 5e-3
