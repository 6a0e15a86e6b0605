"""
defaults.py

Central constants module for the harmonic package.

Provides:
- numeric guards (overflow cap, scaled-solve switch, conformal tolerance)
- bound thresholds (sqrt 7, e)
- scan defaults for the quadratic-form and Psi sweeps
- CSV column orders for every tabular artifact
"""


# META / GLOBAL GUARDS
import math

# largest admissible N * log R before R**N overflows float64
overflow_cap = 650.0

# above this n * log R the Dirichlet 2x2 is solved in scaled unknowns
scaled_solve_switch = 30.0

# relative tolerance used by is_conformal when none is given
conformal_tol = 1e-12

# slack used by the initial-condition checker
initial_condition_slack = 1e-12


# BOUND THRESHOLDS
# the quadratic-form certificate holds for rho >= sqrt(7)
sqrt7 = math.sqrt(7.0)

# thin-annulus argument needs rho <= e
thin_annulus_limit = math.e


# QUADRATURE DEFAULTS
# trapezoid is exact on trigonometric polynomials of degree < M
exactness_margin = 8

# Gauss-Legendre nodes for the alpha-integrals of the four-part split
split_alpha_nodes = 96

# boundary homeomorphism sampling
monotone_check_points = 4096
boundary_fft_points = 1024
chain_quad_points = 512

# imaginary step (relative to rho) for the divergence form of L
complex_step = 1e-20

# w_z recovered from lift samples vs i sqrt(phi), relative to max |w_z| (default grid)
lift_derivative_tol = 1e-6


# SCAN DEFAULTS
qform_n_min = -40
qform_n_max = 40
qform_rho_max = 25.0
qform_rho_step = 1e-2

psi_resolution = 1000

# random boundary homeomorphisms: sum |n||zeta_n| <= budget keeps xi' > 0.1
zeta_budget = 0.9
zeta_order = 4


# CSV COLUMN ORDERS
means_columns = [
    "rho", "U", "U_dot", "U_ddot", "mean_radius", "L1", "L3", "energy",
    "nitsche_floor", "margin",
]
scan_columns = ["n", "rho", "A", "B", "C", "discriminant"]
identity_columns = [
    "R_eval", "lhs", "rhs", "residual",
    "term1", "term2", "term3", "term4", "int1", "int2",
]
surface_columns = ["rho", "theta", "u", "v", "w", "residual"]
chain_columns = ["sample", "boundary_abs_det", "disk_energy", "twice_area", "area"]
verify_columns = ["check", "value", "threshold", "passed"]


# VERIFY SUITE
# seeded random inputs per randomized check
verify_samples = 50
