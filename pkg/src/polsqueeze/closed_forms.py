"""Closed-form moment and squeezing-factor expressions, evaluated as printed.

Nothing here touches the Fock-space engine. Where a printed expression is
internally inconsistent, a corrected variant sits next to it and the choice
between them is always an explicit argument; the numeric oracle in
:mod:`polsqueeze.amplifier` decides which one is right.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .criteria import ALIGN_TOL
from .errors import DomainError
from .polarization import PoincareVector, PolarizationAngles


@dataclass(frozen=True)
class AmplifierParams:
    """Interaction strength ``gt`` (gain times time) of the parametric amplifier."""

    gt: float

    def __post_init__(self):
        if not math.isfinite(self.gt) or self.gt < 0.0:
            raise DomainError(f"gt must be finite and non-negative, got {self.gt!r}")

    @property
    def c(self) -> float:
        return math.cosh(self.gt)

    @property
    def s(self) -> float:
        return math.sinh(self.gt)

    @property
    def c2_plus_s2(self) -> float:
        return math.cosh(2.0 * self.gt)

    @property
    def c2s2(self) -> float:
        return math.sinh(2.0 * self.gt) ** 2 / 4.0


@dataclass(frozen=True)
class ClosedFormMoments:
    means: tuple[float, float, float]
    variances: tuple[float, float, float]
    source: str


@dataclass(frozen=True)
class NumberStateClosedForm(ClosedFormMoments):
    """Moments of a polarized number state.

    ``second_printed`` holds the squares exactly as printed; it lists
    ``<S_0^2> = N(N-1)`` and ``<S_3^2> = N(N-1) m3^2``. ``second_corrected``
    holds ``N^2`` and ``N(N-1) m3^2 + N``, the values that close the
    ``S_1^2 + S_2^2 + S_3^2 = S_0 (S_0 + 2)`` identity. ``variances`` use
    the corrected squares; ``variances_printed`` the printed ones.
    """

    mean0: float = 0.0
    second_printed: dict | None = None
    second_corrected: dict | None = None
    anticommutators: dict | None = None
    variances_printed: tuple[float, float, float] | None = None


def _m(angles: PolarizationAngles) -> tuple[float, float, float]:
    st = math.sin(angles.theta)
    return math.cos(angles.theta), st * math.cos(angles.phi), st * math.sin(angles.phi)


def number_state_moments_cf(n: int, angles: PolarizationAngles) -> NumberStateClosedForm:
    if n < 0:
        raise DomainError("photon number must be non-negative")
    m1, m2, m3 = _m(angles)
    pair = n * (n - 1)
    means = (n * m1, n * m2, n * m3)
    printed = {
        "S0": float(pair),
        "S1": pair * m1**2 + n,
        "S2": pair * m2**2 + n,
        "S3": pair * m3**2,
    }
    corrected = dict(printed, S0=float(n * n), S3=pair * m3**2 + n)
    anti = {"12": 2 * pair * m1 * m2, "13": 2 * pair * m1 * m3, "23": 2 * pair * m2 * m3}
    var_c = tuple(corrected[f"S{j}"] - means[j - 1] ** 2 for j in (1, 2, 3))
    var_p = tuple(printed[f"S{j}"] - means[j - 1] ** 2 for j in (1, 2, 3))
    return NumberStateClosedForm(means, var_c, "number_state", float(n), printed, corrected, anti, var_p)


@dataclass(frozen=True)
class DirectionClosedForm:
    mean: float
    variance: float
    bound: float
    factor: float
    undefined: bool


def number_state_direction_cf(n: int, direction: PoincareVector, m: PoincareVector) -> DirectionClosedForm:
    """Mean, variance, perpendicular bound and squeezing factor along ``direction``."""
    nm = direction.dot(m)
    mean = n * nm
    one_minus = max(0.0, 1.0 - nm**2)
    variance = n * one_minus
    bound = n * math.sqrt(one_minus)
    undefined = n == 0 or 1.0 - abs(nm) <= ALIGN_TOL
    factor = math.nan if undefined else math.sqrt(one_minus)
    return DirectionClosedForm(mean, variance, 0.0 if undefined else bound, factor, undefined)


def amp_means_cf(n: int, angles: PolarizationAngles, params: AmplifierParams) -> tuple[float, float, float]:
    m1, m2, m3 = _m(angles)
    g = params.c2_plus_s2
    return n * m1, n * g * m2, n * g * m3


def _amp_variances(n, angles, params, power) -> tuple[float, float, float]:
    m1, m2, m3 = _m(angles)
    cs = params.c2s2
    g = params.c2_plus_s2**power
    v1 = n * (1.0 - m1**2)
    v2 = n * g * (1.0 - m2**2) + 2 * cs * (n * n * (1 - m3**2) + n * (1 + m3**2) + 2)
    v3 = n * g * (1.0 - m3**2) + 2 * cs * (n * n * (1 - m2**2) + n * (1 + m2**2) + 2)
    return v1, v2, v3


def amp_variances_cf(n: int, angles: PolarizationAngles, params: AmplifierParams) -> tuple[float, float, float]:
    """Amplified-state variances as printed, with ``(c^2 + s^2)`` on the first term."""
    return _amp_variances(n, angles, params, 1)


def amp_variances_corrected_cf(n: int, angles: PolarizationAngles,
                               params: AmplifierParams) -> tuple[float, float, float]:
    """Same with ``(c^2 + s^2)^2`` on the first term, the exponent carried by the
    plane-polarized reduction and its minimum."""
    return _amp_variances(n, angles, params, 2)


def amp_factor_s1_cf(angles: PolarizationAngles, params: AmplifierParams) -> float:
    """``sin(theta) / cosh(2 gt)``; ``nan`` when ``sin(theta) = 0``."""
    st = math.sin(angles.theta)
    if st < 1e-15:
        return math.nan
    return st / params.c2_plus_s2


class S2Variant(enum.Enum):
    #: general-angle S_2 factor exactly as printed, exponent 1 on (c^2 + s^2)
    PRINTED31 = "printed31"
    #: general-angle form carrying the exponent 2 of the plane-polarized reduction
    PRINTED32 = "printed32"


def amp_factor_s2_cf(n: int, angles: PolarizationAngles, params: AmplifierParams,
                     variant: S2Variant) -> float:
    """Squeezing factor of ``S_2`` after amplification.

    At ``sin(phi) = 0`` the ``PRINTED32`` variant equals
    :func:`amp_factor_s2_plane_cf`. Returns ``inf`` for a vanishing
    denominator.
    """
    if not isinstance(variant, S2Variant):
        raise DomainError(f"variant must be an S2Variant, got {variant!r}")
    m1, m2, m3 = _m(angles)
    g = params.c2_plus_s2
    power = 1 if variant is S2Variant.PRINTED31 else 2
    num = n * g**power * (1 - m2**2) + 2 * params.c2s2 * (n * n + n + 2 - (n * n - n) * m3**2)
    den = math.sqrt((n * m1) ** 2 + (n * g * m3) ** 2)
    if den < 1e-12 * max(n, 1):
        return math.nan if num == 0.0 else math.inf
    return num / den


def amp_factor_s2_plane_cf(n: int, theta: float, params: AmplifierParams) -> float:
    """Plane-polarized (``sin(phi) = 0``) S_2 factor as printed:
    ``(c^2+s^2)^2 |cos(theta)| + 2 c^2 s^2 (N^2+N+2)/N |sec(theta)|``."""
    if n <= 0:
        raise DomainError("formula needs N >= 1")
    ct = abs(math.cos(theta))
    if ct < 1e-12:
        return math.inf
    return params.c2_plus_s2**2 * ct + 2 * params.c2s2 * (n * n + n + 2) / n / ct


@dataclass(frozen=True)
class S2Minimum:
    """Minimum of the plane-polarized S_2 factor over ``theta``.

    ``theta_star`` solves the printed stationarity condition
    ``cos(theta) = tanh(2gt) sqrt((N^2+N+2)/N)``; ``theta_star_consistent``
    is the true minimizer of the plane-polarized expression, which carries an
    extra ``1/sqrt(2)``. ``boundary`` flags a printed condition with
    ``cos(theta) > 1``, in which case the minimum sits at ``theta = 0`` and
    ``min_factor`` is the expression evaluated there.
    """

    min_factor: float
    theta_star: float
    theta_star_consistent: float
    boundary: bool
    boundary_consistent: bool


def amp_s2_min_cf(n: int, params: AmplifierParams) -> S2Minimum:
    if n <= 0:
        raise DomainError("formula needs N >= 1")
    k = (n * n + n + 2) / n
    t2 = math.tanh(2.0 * params.gt)
    cos_printed = t2 * math.sqrt(k)
    cos_consistent = t2 * math.sqrt(k / 2.0)
    boundary = cos_printed > 1.0
    boundary_c = cos_consistent > 1.0
    if boundary:
        value = amp_factor_s2_plane_cf(n, 0.0, params)
    else:
        value = 2.0 * math.sqrt(k / 8.0) * math.sinh(4.0 * params.gt)
    theta_star = 0.0 if boundary else math.acos(cos_printed)
    theta_c = 0.0 if boundary_c else math.acos(cos_consistent)
    return S2Minimum(value, theta_star, theta_c, boundary, boundary_c)


def amp_factor_s2_circular_cf(n: int, params: AmplifierParams) -> float:
    """Circular-polarization S_2 factor as printed:
    ``cosh(2gt) + (2N+2)/N sinh^2(2gt)/cosh(2gt)``."""
    if n <= 0:
        raise DomainError("formula has N in the denominator; need N >= 1")
    ch = params.c2_plus_s2
    return ch + (2 * n + 2) / n * math.sinh(2.0 * params.gt) ** 2 / ch
