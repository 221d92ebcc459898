"""Stokes operators, their moments, and the rotated-basis measurement protocol."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConsistencyError, DomainError
from .fock import (
    AX, AXD, AY, AYD,
    OperatorPolynomial,
    TwoModeFockState,
    apply_poly,
    inner,
)
from .polarization import PoincareVector, PolarizationAngles, poincare_from_angles, rotate_basis

IMAG_TOL = 1e-10
UNIT_TOL = 1e-9

_P = OperatorPolynomial.of
S0 = _P(AXD, AX) + _P(AYD, AY)
S1 = _P(AXD, AX) - _P(AYD, AY)
S2 = _P(AXD, AY) + _P(AYD, AX)
S3 = _P(AXD, AY, coeff=-1j) + _P(AYD, AX, coeff=1j)
STOKES = (S0, S1, S2, S3)


def stokes_operator(j: int) -> OperatorPolynomial:
    return STOKES[j]


def _real(z: complex, what: str) -> float:
    if abs(z.imag) > IMAG_TOL * max(1.0, abs(z.real)):
        raise ConsistencyError(f"{what} has imaginary residue {z.imag!r}")
    return z.real


@dataclass(frozen=True)
class StokesMoments:
    """First and symmetrized second moments of ``S_0 .. S_3``.

    ``second[j-1, k-1]`` holds ``<{S_j, S_k}> / 2`` for ``j, k`` in 1..3.
    """

    mean0: float
    mean: np.ndarray
    second: np.ndarray
    mean0_sq: float

    @property
    def means(self) -> tuple[float, float, float, float]:
        return (self.mean0, *self.mean.tolist())

    @property
    def variances(self) -> np.ndarray:
        return np.diag(self.second) - self.mean**2

    @property
    def anticommutators(self) -> dict[str, float]:
        s = self.second
        return {"12": 2 * s[0, 1], "13": 2 * s[0, 2], "23": 2 * s[1, 2]}

    def sum_rule_residual(self) -> float:
        """``sum_j <S_j^2> - (<S_0^2> + 2 <S_0>)``; zero for every state."""
        return float(np.trace(self.second) - self.mean0_sq - 2.0 * self.mean0)

    def component(self, n) -> tuple[float, float]:
        n = _unit(n)
        mean = float(n @ self.mean)
        return mean, float(n @ self.second @ n) - mean**2


def _unit(n) -> np.ndarray:
    v = n.as_array() if isinstance(n, PoincareVector) else np.asarray(n, dtype=float)
    if v.shape != (3,) or abs(np.linalg.norm(v) - 1.0) > UNIT_TOL:
        raise DomainError(f"direction {v!r} is not a unit 3-vector")
    return v


def stokes_means(state: TwoModeFockState) -> tuple[float, float, float, float]:
    return tuple(_real(inner(state, apply_poly(state, s)), f"<S_{j}>") for j, s in enumerate(STOKES))


def stokes_second_moments(state: TwoModeFockState) -> StokesMoments:
    images = [apply_poly(state, s) for s in STOKES]
    means = [_real(inner(state, v), f"<S_{j}>") for j, v in enumerate(images)]
    # S_j hermitian: <S_j S_k> = <S_j psi | S_k psi>
    second = np.empty((3, 3))
    for j in range(3):
        for k in range(j, 3):
            z = inner(images[j + 1], images[k + 1])
            if j == k:
                second[j, j] = _real(z, f"<S_{j + 1}^2>")
            else:
                second[j, k] = second[k, j] = z.real
    mean0_sq = _real(inner(images[0], images[0]), "<S_0^2>")
    return StokesMoments(means[0], np.array(means[1:]), second, mean0_sq)


def component_moments(state: TwoModeFockState, n) -> tuple[float, float]:
    """Mean and variance of ``S_n = n . S``."""
    _unit(n)
    return stokes_second_moments(state).component(n)


def perp_bound_from_moments(moments: StokesMoments, n) -> float:
    """Largest ``|<S_nperp>|`` over directions perpendicular to ``n``.

    Evaluated as the length of the part of ``<S>`` orthogonal to ``n``,
    which equals ``sqrt(|<S>|^2 - <S_n>^2)`` without the cancellation.
    """
    v = _unit(n)
    s = moments.mean
    return float(np.linalg.norm(s - (v @ s) * v))


def perp_bound(state: TwoModeFockState, n) -> float:
    _unit(n)
    return perp_bound_from_moments(stokes_second_moments(state), n)


@dataclass(frozen=True)
class ProtocolResult:
    distribution: dict[int, float]
    mean: float
    variance: float
    direction: PoincareVector


def measure_protocol(state: TwoModeFockState, angles0: PolarizationAngles) -> ProtocolResult:
    """Outcome statistics of ``N_x - N_y`` after changing to the ``angles0`` basis.

    The result is the distribution of ``n . S`` with ``n = n(angles0)``.
    """
    rotated = rotate_basis(state, angles0)
    dist: dict[int, float] = {}
    for (nx, ny), amp in rotated:
        dist[nx - ny] = dist.get(nx - ny, 0.0) + abs(amp) ** 2
    dist = dict(sorted(dist.items()))
    outcomes = np.array(list(dist), dtype=float)
    probs = np.array(list(dist.values()))
    mean = float(probs @ outcomes)
    variance = float(probs @ outcomes**2) - mean**2
    return ProtocolResult(dist, mean, variance, poincare_from_angles(angles0))


def so3_from_mode_unitary(u) -> np.ndarray:
    """Rotation ``R`` with ``S'_j = sum_k R[j, k] S_k`` for modes ``b = U a``."""
    u = np.asarray(u, dtype=complex)
    # S_1, S_2, S_3 = a^dag sigma a with sigma = Z, X, Y
    sig = [np.array([[1, 0], [0, -1]]), np.array([[0, 1], [1, 0]]), np.array([[0, -1j], [1j, 0]])]
    r = np.empty((3, 3))
    for j in range(3):
        for k in range(3):
            r[j, k] = 0.5 * np.trace(sig[k] @ u.conj().T @ sig[j] @ u).real
    return r


def uncertainty_products(moments: StokesMoments) -> list[tuple[tuple[int, int, int], float, float]]:
    """``(j, k, l), V_j V_k, <S_l>^2`` for the cyclic triples."""
    v = moments.variances
    out = []
    for j, k, l in ((1, 2, 3), (2, 3, 1), (3, 1, 2)):
        out.append(((j, k, l), float(v[j - 1] * v[k - 1]), float(moments.mean[l - 1] ** 2)))
    return out


def mean_direction(moments: StokesMoments) -> np.ndarray | None:
    """Unit vector along ``<S>``, or ``None`` if ``<S> = 0``."""
    n = float(np.linalg.norm(moments.mean))
    return None if n == 0.0 else moments.mean / n


__all__ = [
    "S0", "S1", "S2", "S3", "STOKES", "StokesMoments", "ProtocolResult",
    "stokes_operator", "stokes_means", "stokes_second_moments", "component_moments",
    "perp_bound", "perp_bound_from_moments", "measure_protocol", "so3_from_mode_unitary",
    "uncertainty_products", "mean_direction",
]
