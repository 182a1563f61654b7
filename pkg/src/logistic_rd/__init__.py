"""Exact separable solutions of logistic reaction-diffusion equations.

The density obeys theta_t = div(D(theta) grad theta) + R(theta) with a
Fisher, Huxley or FHN source R. For each source a compatible nonlinear
diffusivity D is constructed so that the Kirchhoff variable
u = int_0^theta D factorises as u = exp(A t) Phi(r), with Phi solving the
Helmholtz equation.
"""

from .diffusivity import (
    DiffusivityProfile,
    closed_form_iterate,
    constant_profile,
    invert_kirchhoff,
    kirchhoff_u,
    laplace_branch_D,
    picard_iterate,
    solve_profile,
    tabulated_profile,
)
from .errors import LogisticRDError
from .genetics import GenotypeFitness, containment_feasibility, map_fitness
from .model import (
    Kind,
    ReactionModel,
    SymmetryParams,
    classify_admissibility,
    consistency_constants,
    reaction_eval,
)
from .solution import ExactSolution, assemble, critical_radius, profile_table, theta_at
from .spatial import RadialMode, first_bessel_zero, phi, robin_radius
from .verify import BoundaryCondition, compare, fd_simulate, pde_residual, relation_residual

__version__ = "0.1.0"

__all__ = [
    "BoundaryCondition",
    "DiffusivityProfile",
    "ExactSolution",
    "GenotypeFitness",
    "Kind",
    "LogisticRDError",
    "RadialMode",
    "ReactionModel",
    "SymmetryParams",
    "assemble",
    "classify_admissibility",
    "closed_form_iterate",
    "compare",
    "consistency_constants",
    "constant_profile",
    "containment_feasibility",
    "critical_radius",
    "fd_simulate",
    "first_bessel_zero",
    "invert_kirchhoff",
    "kirchhoff_u",
    "laplace_branch_D",
    "map_fitness",
    "pde_residual",
    "phi",
    "picard_iterate",
    "profile_table",
    "reaction_eval",
    "relation_residual",
    "robin_radius",
    "solve_profile",
    "tabulated_profile",
    "theta_at",
]
