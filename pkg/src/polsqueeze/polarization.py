"""Polarization parameterizations and polarization-basis changes.

A pure polarization mode is a Jones vector ``eps = (eps_x, eps_y)``; with
the phase convention used here ``eps_x = cos(theta/2)`` is real and
non-negative and ``eps_y = exp(i phi) sin(theta/2)``. Its image on the
Poincare sphere is ``m = (cos theta, sin theta cos phi, sin theta sin phi)``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy import stats

from .errors import CutoffTooSmall, DomainError
from .fock import TwoModeFockState, make_state, truncate

_UNIT_TOL = 1e-12
TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class PolarizationAngles:
    """Angles ``theta in [0, pi]`` and ``phi in [0, 2 pi)``.

    Out-of-range input is mapped onto the same point of the sphere and the
    adjustment is described in ``note`` (``None`` when nothing changed).
    """

    theta: float
    phi: float = 0.0
    note: str | None = field(default=None, init=False, compare=False)

    def __post_init__(self):
        theta, phi = float(self.theta), float(self.phi)
        if not (math.isfinite(theta) and math.isfinite(phi)):
            raise DomainError("angles must be finite")
        notes = []
        t = theta % TWO_PI
        p = phi
        if t > math.pi:
            t = TWO_PI - t
            p = p + math.pi
        if t != theta:
            notes.append(f"theta {theta!r} reduced to {t!r}")
        p_red = p % TWO_PI
        if p_red != phi:
            notes.append(f"phi {phi!r} reduced to {p_red!r}")
        object.__setattr__(self, "theta", t)
        object.__setattr__(self, "phi", p_red)
        if notes:
            object.__setattr__(self, "note", "; ".join(notes))


@dataclass(frozen=True)
class JonesVector:
    eps_x: complex
    eps_y: complex

    def __post_init__(self):
        object.__setattr__(self, "eps_x", complex(self.eps_x))
        object.__setattr__(self, "eps_y", complex(self.eps_y))
        n = abs(self.eps_x) ** 2 + abs(self.eps_y) ** 2
        if abs(n - 1.0) > _UNIT_TOL:
            raise DomainError(f"Jones vector not normalized (|eps|^2 = {n!r})")

    def as_array(self) -> np.ndarray:
        return np.array([self.eps_x, self.eps_y])

    def overlap(self, other: "JonesVector") -> complex:
        """``<self|other>`` in the (x, y) basis."""
        return self.eps_x.conjugate() * other.eps_x + self.eps_y.conjugate() * other.eps_y


@dataclass(frozen=True)
class PoincareVector:
    m1: float
    m2: float
    m3: float

    def __post_init__(self):
        n = self.m1**2 + self.m2**2 + self.m3**2
        if abs(n - 1.0) > _UNIT_TOL:
            raise DomainError(f"Poincare vector not unit length (|m|^2 = {n!r})")

    @classmethod
    def from_vector(cls, v) -> "PoincareVector":
        """Normalize an arbitrary nonzero 3-vector."""
        v = np.asarray(v, dtype=float)
        n = float(np.linalg.norm(v))
        if v.shape != (3,) or n == 0.0:
            raise DomainError("need a nonzero 3-vector")
        m1, m2, m3 = (v / n).tolist()
        return cls(m1, m2, m3)

    def as_array(self) -> np.ndarray:
        return np.array([self.m1, self.m2, self.m3])

    def dot(self, other: "PoincareVector") -> float:
        return self.m1 * other.m1 + self.m2 * other.m2 + self.m3 * other.m3

    def __neg__(self):
        return PoincareVector(-self.m1, -self.m2, -self.m3)


E1 = PoincareVector(1.0, 0.0, 0.0)
E2 = PoincareVector(0.0, 1.0, 0.0)
E3 = PoincareVector(0.0, 0.0, 1.0)
AXES = (E1, E2, E3)


def jones_from_angles(angles: PolarizationAngles) -> JonesVector:
    half = angles.theta / 2.0
    return JonesVector(math.cos(half), cmath.exp(1j * angles.phi) * math.sin(half))


def poincare_from_angles(angles: PolarizationAngles) -> PoincareVector:
    st = math.sin(angles.theta)
    return PoincareVector(math.cos(angles.theta), st * math.cos(angles.phi), st * math.sin(angles.phi))


def poincare_from_jones(j: JonesVector) -> PoincareVector:
    cross = 2.0 * j.eps_x.conjugate() * j.eps_y
    return PoincareVector.from_vector([abs(j.eps_x) ** 2 - abs(j.eps_y) ** 2, cross.real, cross.imag])


def angles_from_poincare(m: PoincareVector) -> PolarizationAngles:
    """Inverse of :func:`poincare_from_angles`; ``phi`` is 0 at the poles."""
    theta = math.acos(max(-1.0, min(1.0, m.m1)))
    if math.hypot(m.m2, m.m3) < 1e-15:
        return PolarizationAngles(theta, 0.0)
    return PolarizationAngles(theta, math.atan2(m.m3, m.m2) % TWO_PI)


def orthogonal_jones(j: JonesVector) -> JonesVector:
    """The orthogonal mode, phased so that angle-form input gives
    ``(-sin(theta/2), exp(i phi) cos(theta/2))``."""
    if abs(j.eps_y) == 0.0:
        rel = 1.0
    else:
        rel = cmath.exp(1j * (cmath.phase(j.eps_y) - cmath.phase(j.eps_x)))
    return JonesVector(-rel * j.eps_y.conjugate(), rel * j.eps_x.conjugate())


def polarized_number_state(n_photons: int, j: JonesVector) -> TwoModeFockState:
    """All ``n_photons`` photons in mode ``j``, vacuum in the orthogonal mode."""
    if n_photons < 0:
        raise DomainError("photon number must be non-negative")
    n = n_photons
    entries = [
        ((k, n - k), math.sqrt(math.comb(n, k)) * j.eps_x**k * j.eps_y ** (n - k))
        for k in range(n + 1)
    ]
    return make_state(entries)


def coherent_state(alpha: complex, beta: complex, tail_tol: float = 1e-16,
                   max_cutoff: int = 1000) -> TwoModeFockState:
    """Product coherent state ``|alpha, beta>`` truncated in total photon number."""
    intensity = abs(alpha) ** 2 + abs(beta) ** 2
    if intensity > 400.0:
        raise DomainError(f"|alpha|^2 + |beta|^2 = {intensity:.6g} exceeds the guard of 400")
    # total photon number is Poisson(intensity)
    cutoff = 0
    while intensity > 0 and stats.poisson.sf(cutoff, intensity) >= tail_tol:
        cutoff += 1
        if cutoff > max_cutoff:
            raise CutoffTooSmall(f"tail {tail_tol:g} needs more than {max_cutoff} photons")
    amp_x = _poisson_amplitudes(complex(alpha), cutoff)
    amp_y = _poisson_amplitudes(complex(beta), cutoff)
    entries = {}
    for nx in range(cutoff + 1):
        for ny in range(cutoff + 1 - nx):
            entries[(nx, ny)] = amp_x[nx] * amp_y[ny]
    state, _ = truncate(TwoModeFockState(entries, cutoff), cutoff, tail_tol)
    return state


def _poisson_amplitudes(z: complex, nmax: int) -> list[complex]:
    out = [cmath.exp(-abs(z) ** 2 / 2.0)]
    for n in range(1, nmax + 1):
        out.append(out[-1] * z / math.sqrt(n))
    return out


def basis_change_matrix(angles0: PolarizationAngles) -> np.ndarray:
    """Unitary ``U`` with ``(a_eps0, a_eps0perp) = U (a_x, a_y)``."""
    e = jones_from_angles(angles0)
    p = orthogonal_jones(e)
    return np.array([[e.eps_x.conjugate(), e.eps_y.conjugate()],
                     [p.eps_x.conjugate(), p.eps_y.conjugate()]])


def apply_mode_unitary(state: TwoModeFockState, u) -> TwoModeFockState:
    """Express ``state`` in the mode basis ``b = U a``.

    Works sector by sector in total photon number, so the map is exact.
    """
    u = np.asarray(u, dtype=complex)
    if u.shape != (2, 2) or not np.allclose(u.conj().T @ u, np.eye(2), atol=1e-12):
        raise DomainError("mode map must be a 2x2 unitary")
    # a^dag_x = U[0,0] b^dag_1 + U[1,0] b^dag_2, a^dag_y = U[0,1] b^dag_1 + U[1,1] b^dag_2
    ax1, ax2, ay1, ay2 = u[0, 0], u[1, 0], u[0, 1], u[1, 1]
    sectors: dict[int, dict[int, complex]] = {}
    for (nx, ny), amp in state:
        sectors.setdefault(nx + ny, {})[nx] = amp
    out: dict[tuple[int, int], complex] = {}
    for n, coeffs in sectors.items():
        vec = np.zeros(n + 1, dtype=complex)
        for k, amp in coeffs.items():
            px = _binomial_poly(ax1, ax2, k)
            py = _binomial_poly(ay1, ay2, n - k)
            # index p of the product counts powers of b^dag_1
            prod = np.convolve(px, py)
            vec += amp * prod * _fact_ratio_sqrt(n, k)
        for p in range(n + 1):
            out[(p, n - p)] = vec[p]
    return TwoModeFockState(out, state.cutoff)


def _binomial_poly(c1: complex, c2: complex, k: int) -> np.ndarray:
    """Coefficients of ``(c1 u + c2 v)^k`` indexed by the power of ``u``."""
    return np.array([math.comb(k, i) * c1**i * c2 ** (k - i) for i in range(k + 1)], dtype=complex)


def _fact_ratio_sqrt(n: int, k: int) -> np.ndarray:
    """``sqrt(p! (n-p)! / (k! (n-k)!))`` for ``p = 0..n``."""
    den = math.factorial(k) * math.factorial(n - k)
    return np.array([math.sqrt(Fraction(math.factorial(p) * math.factorial(n - p), den))
                     for p in range(n + 1)])


def rotate_basis(state: TwoModeFockState, angles0: PolarizationAngles) -> TwoModeFockState:
    """Rewrite ``state`` in the ``(eps0, eps0_perp)`` polarization basis.

    In the returned state ``N_x - N_y`` measures ``n(angles0) . S`` of the
    original state. Physically: phase shift ``phi0`` on the y mode, then
    rotate the plane of polarization by ``theta0 / 2``.
    """
    return apply_mode_unitary(state, basis_change_matrix(angles0))
