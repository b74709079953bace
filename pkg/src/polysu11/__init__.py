"""Polynomially deformed su(1,1) algebras: representations, coherent states,
resolution of unity, and the conditionally solvable SUSY radial oscillator."""

from __future__ import annotations

__version__ = "0.1.0"

from .algebra import (  # noqa: E402
    AlgebraError,
    AlgebraSpec,
    DomainError,
    NonPositiveFactorError,
    StructureSequence,
    deformation_factor,
    deformation_roots,
    eval_structure_function,
    log_generalized_factorial,
    structure_factor,
)
from .oscillator import (  # noqa: E402
    OscillatorParams,
    cubic_algebra_spec,
    grid_spectrum,
    ladder_coefficients,
    partner_potentials,
    spectrum,
    validity,
)
from .rep import build_rep, commutator_defect, structure_defects  # noqa: E402
from .special import meijer_g, MeijerSpec, pfq  # noqa: E402
from .states import (  # noqa: E402
    CoherentStateVector,
    Family,
    build_state,
    inner_product,
    lowering_eigendefect,
    normalization_closed_form,
    normalization_series,
    radius_of_convergence,
)
from .unity import moment_quadrature, moment_target, unity_defect, weight_density, weight_spec  # noqa: E402
