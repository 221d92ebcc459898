"""Polarization-squeezing criteria and the squeezing factor.

Four criteria are implemented: the coherent-state benchmark (Chirkin),
the cyclic uncertainty form (Heersink), the single-perpendicular form
(Luis) and the general form maximized over perpendicular directions.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .fock import TwoModeFockState
from .polarization import AXES, PoincareVector
from .stokes import StokesMoments, _unit, stokes_second_moments

SQUEEZE_EPS = 1e-12
ORTHO_TOL = 1e-9
#: Directions with ``1 - |cos(n, <S>)|`` below this count as parallel to ``<S>``.
ALIGN_TOL = 1e-8


class Criterion(enum.Enum):
    CHIRKIN = "Chirkin"
    HEERSINK = "Heersink"
    LUIS = "Luis"
    GENERAL = "General"


@dataclass(frozen=True)
class CriterionVerdict:
    """``satisfied`` iff ``lhs < rhs`` (and ``rhs < upper`` when given), strictly."""

    criterion: Criterion
    inputs: dict
    lhs: float
    rhs: float
    satisfied: bool
    upper: float | None = None


def _verdict(criterion, inputs, lhs, rhs, upper=None) -> CriterionVerdict:
    ok = lhs < rhs - SQUEEZE_EPS
    if upper is not None:
        ok = ok and rhs < upper - SQUEEZE_EPS
    return CriterionVerdict(criterion, inputs, float(lhs), float(rhs), bool(ok),
                            None if upper is None else float(upper))


@dataclass(frozen=True)
class SqueezingFactor:
    """Squeezing factor ``V_n / bound`` along ``direction``.

    ``factor`` is ``inf`` when the bound vanishes but the variance does not,
    and ``nan`` (with ``undefined`` set) when both vanish.
    """

    direction: PoincareVector
    variance: float
    bound: float
    factor: float
    degree: float
    squeezed: bool
    undefined: bool = False

    @property
    def is_infinite(self) -> bool:
        return math.isinf(self.factor)


def _moments(state_or_moments) -> StokesMoments:
    if isinstance(state_or_moments, StokesMoments):
        return state_or_moments
    return stokes_second_moments(state_or_moments)


def _as_vector(n) -> PoincareVector:
    if isinstance(n, PoincareVector):
        return n
    return PoincareVector.from_vector(n)


def factor_from_moments(moments: StokesMoments, n) -> SqueezingFactor:
    v = _unit(n)
    mean_vec = moments.mean
    s_norm = float(np.linalg.norm(mean_vec))
    mean_n = float(v @ mean_vec)
    variance = float(v @ moments.second @ v) - mean_n**2
    bound = float(np.linalg.norm(mean_vec - mean_n * v))
    if s_norm == 0.0 or 1.0 - abs(mean_n) / s_norm <= ALIGN_TOL:
        bound = 0.0
    direction = _as_vector(n)
    if bound > 0.0:
        factor = variance / bound
        return SqueezingFactor(direction, variance, bound, factor, 1.0 - factor,
                               factor < 1.0 - SQUEEZE_EPS)
    # a perfectly polarized state tilted by the alignment window has V ~ 2 ALIGN_TOL <S_0>
    if variance <= 4.0 * ALIGN_TOL * max(moments.mean0, 1.0):
        return SqueezingFactor(direction, variance, 0.0, math.nan, math.nan, False, True)
    return SqueezingFactor(direction, variance, 0.0, math.inf, -math.inf, False)


def general_factor(state: TwoModeFockState | StokesMoments, n) -> SqueezingFactor:
    """Squeezing factor of ``S_n`` against the maximal perpendicular mean."""
    _unit(n)
    return factor_from_moments(_moments(state), n)


def general(state, n) -> CriterionVerdict:
    f = general_factor(state, n)
    return _verdict(Criterion.GENERAL, {"n": _as_vector(n)}, f.variance, f.bound)


def chirkin(state, j: int) -> CriterionVerdict:
    """``V_j < <S_0>``: variance below that of an equally intense coherent state."""
    if j not in (1, 2, 3):
        raise DomainError("Stokes index must be 1, 2 or 3")
    m = _moments(state)
    return _verdict(Criterion.CHIRKIN, {"j": j}, m.variances[j - 1], m.mean0)


def chirkin_direction(state, n) -> CriterionVerdict:
    m = _moments(state)
    _, var = m.component(n)
    return _verdict(Criterion.CHIRKIN, {"n": _as_vector(n)}, var, m.mean0)


def heersink(state, j: int) -> tuple[CriterionVerdict, CriterionVerdict]:
    """``V_j < |<S_l>| < V_k`` for both assignments of ``(k, l)``."""
    if j not in (1, 2, 3):
        raise DomainError("Stokes index must be 1, 2 or 3")
    m = _moments(state)
    var = m.variances
    a, b = j % 3 + 1, (j + 1) % 3 + 1
    out = []
    for k, l in ((a, b), (b, a)):
        out.append(_verdict(Criterion.HEERSINK, {"j": j, "k": k, "l": l},
                            var[j - 1], abs(m.mean[l - 1]), var[k - 1]))
    return tuple(out)


def _check_pair(n, n_perp):
    v, w = _unit(n), _unit(n_perp)
    if abs(float(v @ w)) > ORTHO_TOL:
        raise DomainError(f"directions are not orthogonal (n . n_perp = {float(v @ w)!r})")
    return v, w


def luis(state, n, n_perp) -> CriterionVerdict:
    """``V_n < |<S_nperp>|`` for one chosen perpendicular direction."""
    v, w = _check_pair(n, n_perp)
    m = _moments(state)
    _, var = m.component(v)
    return _verdict(Criterion.LUIS, {"n": _as_vector(n), "n_perp": _as_vector(n_perp)},
                    var, abs(float(w @ m.mean)))


def maximizing_perp(moments: StokesMoments, n) -> np.ndarray | None:
    """Unit vector perpendicular to ``n`` along which ``|<S>|`` projects most, if any."""
    v = _unit(n)
    p = moments.mean - float(v @ moments.mean) * v
    norm = float(np.linalg.norm(p))
    s_norm = float(np.linalg.norm(moments.mean))
    if s_norm == 0.0 or norm <= math.sqrt(2.0 * ALIGN_TOL) * s_norm:
        return None
    return p / norm


def any_perp(n) -> np.ndarray:
    v = _unit(n)
    trial = np.eye(3)[int(np.argmin(np.abs(v)))]
    p = trial - float(v @ trial) * v
    return p / np.linalg.norm(p)


@dataclass(frozen=True)
class StringencyChain:
    """Bounds ``<S_nperp>^2/<S_0> <= |<S_nperp>| <= <S_0>`` in increasing strictness."""

    entries: list[tuple[str, float]]
    ordered: bool | None
    degenerate: bool


def stringency_chain(state, n, n_perp) -> StringencyChain:
    _, w = _check_pair(n, n_perp)
    m = _moments(state)
    perp = abs(float(w @ m.mean))
    s0 = m.mean0
    if s0 <= 0.0:
        entries = [("perp_sq_over_s0", math.nan), ("abs_perp", perp), ("s0", s0)]
        return StringencyChain(entries, None, True)
    entries = [("perp_sq_over_s0", perp**2 / s0), ("abs_perp", perp), ("s0", s0)]
    ordered = None
    if perp <= s0 + SQUEEZE_EPS:
        vals = [e[1] for e in entries]
        ordered = all(a <= b + SQUEEZE_EPS for a, b in zip(vals, vals[1:]))
    return StringencyChain(entries, ordered, False)


@dataclass(frozen=True)
class DirectionRow:
    factor: SqueezingFactor
    chirkin: CriterionVerdict
    heersink: CriterionVerdict
    luis: CriterionVerdict
    general: CriterionVerdict


@dataclass(frozen=True)
class SqueezingReport:
    moments: StokesMoments
    rows: list[DirectionRow]
    axis_chirkin: dict[int, CriterionVerdict]
    axis_heersink: dict[int, tuple[CriterionVerdict, CriterionVerdict]]
    is_vacuum: bool
    n_squeezed: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "n_squeezed", sum(r.factor.squeezed for r in self.rows))

    @property
    def n_directions(self) -> int:
        return len(self.rows)

    @property
    def squeezed_fraction(self) -> float:
        return self.n_squeezed / self.n_directions if self.rows else 0.0


def direction_row(moments: StokesMoments, n) -> DirectionRow:
    f = factor_from_moments(moments, n)
    nvec = _unit(n)
    p = maximizing_perp(moments, n)
    perp = any_perp(n) if p is None else p
    third = np.cross(nvec, perp)
    _, v_third = moments.component(third)
    perp_mean = abs(float(perp @ moments.mean))
    inputs = {"n": f.direction, "n_perp": PoincareVector.from_vector(perp)}
    return DirectionRow(
        factor=f,
        chirkin=chirkin_direction(moments, n),
        heersink=_verdict(Criterion.HEERSINK, dict(inputs, k=PoincareVector.from_vector(third)),
                          f.variance, perp_mean, v_third),
        luis=_verdict(Criterion.LUIS, inputs, f.variance, perp_mean),
        general=_verdict(Criterion.GENERAL, {"n": f.direction}, f.variance, f.bound),
    )


def full_report(state: TwoModeFockState | StokesMoments, directions) -> SqueezingReport:
    m = _moments(state)
    rows = [direction_row(m, n) for n in directions]
    is_vacuum = m.mean0 == 0.0 and m.mean0_sq == 0.0
    return SqueezingReport(
        moments=m,
        rows=rows,
        axis_chirkin={j: chirkin(m, j) for j in (1, 2, 3)},
        axis_heersink={j: heersink(m, j) for j in (1, 2, 3)},
        is_vacuum=is_vacuum,
    )


__all__ = [
    "ALIGN_TOL", "AXES", "Criterion", "CriterionVerdict", "DirectionRow", "SqueezingFactor",
    "SqueezingReport", "StringencyChain", "chirkin", "chirkin_direction", "factor_from_moments",
    "full_report", "general", "general_factor", "heersink", "luis", "maximizing_perp",
    "stringency_chain",
]
