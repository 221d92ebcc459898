"""Polarization squeezing of two-mode photon states.

Exact sparse Fock-space engine, Stokes-operator moments, squeezing criteria,
closed-form expressions for polarized number states and their parametric
amplification, and a numeric amplifier that checks those expressions.
"""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    ConsistencyError, CutoffExhausted, CutoffTooSmall, DegenerateState, DomainError,
)
from .fock import (  # noqa: E402
    OperatorPolynomial, OperatorWord, TwoModeFockState, apply_word, basis_state,
    expectation, inner, make_state, truncate, vacuum,
)
from .polarization import (  # noqa: E402
    JonesVector, PoincareVector, PolarizationAngles, coherent_state, jones_from_angles,
    orthogonal_jones, poincare_from_angles, polarized_number_state, rotate_basis,
)
from .stokes import (  # noqa: E402
    StokesMoments, component_moments, measure_protocol, perp_bound, stokes_means,
    stokes_second_moments,
)
from .criteria import (  # noqa: E402
    chirkin, full_report, general_factor, heersink, luis, stringency_chain,
)
from .amplifier import CutoffPolicy, bogoliubov_moment_check, evolve  # noqa: E402
