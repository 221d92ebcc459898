"""Non-degenerate parametric amplification in a truncated Fock space.

The generator ``H = g (e^{i chi} a_x^dag a_y^dag + e^{-i chi} a_x a_y)``
conserves ``n_x - n_y``, so each difference sector is a tridiagonal block
that is exponentiated exactly. The state evolves as ``exp(-i gt H/g)``,
which gives the Heisenberg-picture transform

    a_x(t) = cosh(gt) a_x - i e^{i chi} sinh(gt) a_y^dag
    a_y(t) = cosh(gt) a_y - i e^{i chi} sinh(gt) a_x^dag

with ``chi = 0`` as the default convention.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import CutoffExhausted, DomainError
from .fock import AX, AXD, AY, AYD, OperatorPolynomial, TwoModeFockState, expectation_poly
from .stokes import StokesMoments, stokes_second_moments

GT_MAX = 2.0


@dataclass(frozen=True)
class CutoffPolicy:
    """Start ``headroom`` photons above the input and double the headroom
    until both convergence gates close."""

    headroom: int = 8
    max_cutoff: int = 4096
    tail_tol: float = 1e-12
    moment_rtol: float = 1e-9


@dataclass(frozen=True)
class EvolutionResult:
    state: TwoModeFockState
    gt: float
    cutoff_used: int
    tail_norm: float
    convergence_residual: float
    moments: StokesMoments = field(repr=False)


def _block_layout(d: int, cutoff: int) -> tuple[int, int, int]:
    dx, dy = max(d, 0), max(-d, 0)
    return dx, dy, (cutoff - abs(d)) // 2 + 1


@lru_cache(maxsize=512)
def _block_eigensystem(dx: int, dy: int, size: int) -> tuple[np.ndarray, np.ndarray]:
    k = np.arange(1, size)
    off = np.sqrt((k + dx) * (k + dy).astype(float))
    w, v = eigh_tridiagonal(np.zeros(size), off)
    w.setflags(write=False)
    v.setflags(write=False)
    return w, v


def _evolve_block(vec: np.ndarray, dx: int, dy: int, gt: float, chi: float) -> np.ndarray:
    size = vec.size
    if size == 1:
        return vec.copy()
    w, v = _block_eigensystem(dx, dy, size)
    # the pump phase is a diagonal gauge e^{i k chi} on the real block
    gauge = np.exp(1j * chi * np.arange(size))
    psi = gauge.conj() * vec
    psi = v @ (np.exp(-1j * gt * w) * (v.T @ psi))
    return gauge * psi


def _evolve_at(initial: TwoModeFockState, gt: float, cutoff: int, chi: float) -> TwoModeFockState:
    blocks: dict[int, dict[int, complex]] = {}
    for (nx, ny), amp in initial:
        blocks.setdefault(nx - ny, {})[min(nx, ny)] = amp
    out = {}
    for d in sorted(blocks):
        dx, dy, size = _block_layout(d, cutoff)
        vec = np.zeros(size, dtype=complex)
        for k, amp in blocks[d].items():
            vec[k] = amp
        vec = _evolve_block(vec, dx, dy, gt, chi)
        for k in range(size):
            out[(k + dx, k + dy)] = complex(vec[k])
    return TwoModeFockState(out, cutoff)


def _monitored(m: StokesMoments) -> np.ndarray:
    return np.concatenate([[m.mean0, m.mean0_sq], m.mean, m.second.ravel()])


def _weight_above(state: TwoModeFockState, level: int) -> float:
    return math.fsum(abs(a) ** 2 for (nx, ny), a in state if nx + ny > level)


def evolve(initial: TwoModeFockState, gt: float, policy: CutoffPolicy | None = None,
           pump_phase: float = 0.0) -> EvolutionResult:
    """Evolve ``initial`` for interaction strength ``gt`` under the amplifier.

    The result passes two gates against the run with half the headroom:
    the probability above the smaller cutoff is below ``tail_tol`` and every
    monitored Stokes moment moved by less than ``moment_rtol`` (relative,
    floored at 1).
    """
    policy = policy or CutoffPolicy()
    if not math.isfinite(gt) or gt < 0.0 or gt > GT_MAX:
        raise DomainError(f"gt must lie in [0, {GT_MAX}], got {gt!r}")
    if initial.is_zero:
        raise DomainError("cannot evolve the zero vector")
    base = max(initial.total_photon_numbers())
    if gt == 0.0:
        return EvolutionResult(initial, 0.0, initial.cutoff, 0.0, 0.0, stokes_second_moments(initial))

    headroom = policy.headroom
    prev_state = _evolve_at(initial, gt, base + headroom, pump_phase)
    prev = _monitored(stokes_second_moments(prev_state))
    while True:
        headroom *= 2
        cutoff = base + headroom
        if cutoff > policy.max_cutoff:
            raise CutoffExhausted(
                f"gt={gt!r}: cutoff would exceed {policy.max_cutoff} before convergence")
        state = _evolve_at(initial, gt, cutoff, pump_phase)
        moments = stokes_second_moments(state)
        cur = _monitored(moments)
        residual = float(np.max(np.abs(cur - prev) / np.maximum(1.0, np.abs(cur))))
        tail = _weight_above(state, base + headroom // 2)
        if tail < policy.tail_tol and residual < policy.moment_rtol:
            return EvolutionResult(state, gt, cutoff, tail, residual, moments)
        prev = cur


def heisenberg_modes(gt: float, pump_phase: float = 0.0):
    """``(a_x(t), a_y(t))`` as operator polynomials in the initial ladder operators."""
    c, s = math.cosh(gt), math.sinh(gt)
    ph = -1j * cmath.exp(1j * pump_phase) * s
    P = OperatorPolynomial.of
    ax_t = P(AX, coeff=c) + P(AYD, coeff=ph)
    ay_t = P(AY, coeff=c) + P(AXD, coeff=ph)
    return ax_t, ay_t


def heisenberg_stokes(gt: float, pump_phase: float = 0.0) -> tuple[OperatorPolynomial, ...]:
    ax, ay = heisenberg_modes(gt, pump_phase)
    axd, ayd = ax.dagger(), ay.dagger()
    s0 = axd * ax + ayd * ay
    s1 = axd * ax - ayd * ay
    s2 = axd * ay + ayd * ax
    s3 = (-1j) * (axd * ay) + 1j * (ayd * ax)
    return s0, s1, s2, s3


@dataclass(frozen=True)
class DiscrepancyRow:
    quantity: str
    numeric: float
    heisenberg: float
    abs_diff: float


@dataclass(frozen=True)
class BogoliubovCheck:
    """Numeric evolution against the Heisenberg transform, plus the change in
    each quantity when the pump phase is rotated by ``pi/2``."""

    rows: list[DiscrepancyRow]
    phase_rows: list[DiscrepancyRow]

    @property
    def max_diff(self) -> float:
        return max(r.abs_diff for r in self.rows)

    @property
    def max_phase_diff(self) -> float:
        return max(r.abs_diff for r in self.phase_rows)


def _summary(m: StokesMoments) -> dict[str, float]:
    out = {f"S{j}": v for j, v in enumerate(m.means)}
    out.update({f"V{j}": float(v) for j, v in enumerate(m.variances, start=1)})
    return out


def bogoliubov_moment_check(initial: TwoModeFockState, gt: float,
                            policy: CutoffPolicy | None = None) -> BogoliubovCheck:
    if len(initial.total_photon_numbers()) != 1:
        raise DomainError("initial state must have a fixed total photon number")
    numeric = _summary(evolve(initial, gt, policy).moments)
    rotated = _summary(evolve(initial, gt, policy, pump_phase=math.pi / 2).moments)

    heis = {}
    for j, op in enumerate(heisenberg_stokes(gt)):
        mean = expectation_poly(initial, op).real
        heis[f"S{j}"] = mean
        if j:
            heis[f"V{j}"] = expectation_poly(initial, op * op).real - mean**2

    rows = [DiscrepancyRow(q, numeric[q], heis[q], abs(numeric[q] - heis[q])) for q in numeric]
    phase_rows = [DiscrepancyRow(q, numeric[q], rotated[q], abs(numeric[q] - rotated[q]))
                  for q in numeric]
    return BogoliubovCheck(rows, phase_rows)
