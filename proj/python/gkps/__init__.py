"""Prescribed Gauss-Kronecker curvature on products of unit spheres.

Thin wrappers over the C++ core: forward curvature evaluation of the sphere
embedding, admissible boundary-function construction, and the continuity /
damped-Newton solver for the Dirichlet problem.
"""

import json as _json

from ._core import (  # noqa: F401
    __version__,
    clifford_reference,
    curvature_k,
    embed_point,
    extrinsic_oracle,
    f_eval,
    f_operator,
    f_r_eval,
    mu_matrix,
    r0_threshold,
    second_fundamental,
    tau,
)
from ._core import abf_json as _abf_json
from ._core import solve_json as _solve_json


def find_abf(m, n, theta_max, k_kind="constant", k_value=1.0, E=-1.0, scale_f=1.0,
             headroom=0.0, nr=129):
    """Construct and certify a boundary function for the given curvature data.

    Returns a dict with the parameters (E, scale_f, A) and the certificate
    (r0, sup_psi, margin_pd, margin_sub, valid).
    """
    return _json.loads(_abf_json(m, n, theta_max, k_kind, k_value, E, scale_f,
                                 headroom, nr))


def solve(config):
    """Run the full continuity solve for a config dict; returns the report dict.

    The config layout matches the CLI JSON schema (dims, cap, K, boundary,
    grid, solver, outputs).  The nodal solution is returned under "u".
    """
    return _json.loads(_solve_json(_json.dumps(config)))
