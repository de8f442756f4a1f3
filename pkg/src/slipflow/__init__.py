"""Flow rate of Robin-boundary Poisson flow in elliptic and rectangular
channels: truncated Fourier solvers, variational lower bounds, asymptotic
expansions, and an independent finite-difference oracle."""

from .bounds import (BoundKind, FlowEstimate, Method, QuadraticLB, km93_lower,
                     q0_ellipse, q1_ellipse, q_large_beta, q_near_circular,
                     q_small_beta, quad_varl_lb, r1_inequality_check, r_bound,
                     ra_bound, sigma_approx, upper_bounds)
from .fdoracle import FdConfig, FdResult, fd_solve_ellipse, fd_solve_rect
from .fourier import (CoeffKind, FourierCoeffs, PolyFamily, PolySeq, coeffs,
                      cross_checks, g_pointwise, ghat_pointwise, poly_eval,
                      poly_family, poly_identities)
from .geometry import (EllipseGeom, MomentSet, RectGeom, boundary_moment,
                       ellipse_from_aspect, moment_set, perimeter)
from .pinf import PinfSolution, solve_pinf
from .rectangle import q0_rect, quad_lb_rect, r_bound_rect, sigma_rect, uinf_rect
from .robin import (RobinSolution, area_quadrature_q, eval_u, eval_u_xy,
                    flow_rate, solve)
from .specfun import (DomainError, elliptic_e, elliptic_k, elliptic_ke,
                      toroidal_q)

__version__ = "0.1.0"
