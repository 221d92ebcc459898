"""Sparse two-mode bosonic Fock space.

States are stored as a mapping ``(n_x, n_y) -> amplitude``. Operators are
built from ladder operators on the two modes and act on states exactly; no
truncation happens unless :func:`truncate` is called.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from types import MappingProxyType
from typing import Iterable, Mapping

import numpy as np

from .errors import CutoffTooSmall, DegenerateState, DomainError

#: Amplitudes with modulus below this are dropped after arithmetic.
PRUNE_THRESHOLD = 1e-16

Ket = tuple[int, int]


class Mode(enum.Enum):
    X = 0
    Y = 1


class Kind(enum.Enum):
    CREATE = "+"
    ANNIHILATE = "-"


@dataclass(frozen=True)
class Ladder:
    mode: Mode
    kind: Kind

    def dagger(self) -> "Ladder":
        other = Kind.ANNIHILATE if self.kind is Kind.CREATE else Kind.CREATE
        return Ladder(self.mode, other)

    def __str__(self):
        name = "adag" if self.kind is Kind.CREATE else "a"
        return f"{name}_{self.mode.name.lower()}"


AX = Ladder(Mode.X, Kind.ANNIHILATE)
AY = Ladder(Mode.Y, Kind.ANNIHILATE)
AXD = Ladder(Mode.X, Kind.CREATE)
AYD = Ladder(Mode.Y, Kind.CREATE)


class TwoModeFockState:
    """Immutable sparse state vector over kets ``(n_x, n_y)``.

    ``cutoff`` is the largest total photon number the state is allowed to
    occupy. Use :func:`make_state` to build a normalized state from user
    data; the constructor itself does not normalize (operator images are
    generally unnormalized).
    """

    __slots__ = ("_amps", "_cutoff")

    def __init__(self, amplitudes: Mapping[Ket, complex], cutoff: int | None = None):
        amps = {}
        for (nx, ny), amp in amplitudes.items():
            if nx < 0 or ny < 0:
                raise DomainError(f"negative occupation in ket {(nx, ny)}")
            amp = complex(amp)
            if abs(amp) >= PRUNE_THRESHOLD:
                amps[(int(nx), int(ny))] = amp
        top = max((nx + ny for nx, ny in amps), default=0)
        if cutoff is None:
            cutoff = top
        elif top > cutoff:
            raise DomainError(f"ket with {top} photons exceeds cutoff {cutoff}")
        self._amps = MappingProxyType(amps)
        self._cutoff = int(cutoff)

    @property
    def amplitudes(self) -> Mapping[Ket, complex]:
        return self._amps

    @property
    def cutoff(self) -> int:
        return self._cutoff

    @property
    def is_zero(self) -> bool:
        """True for the zero vector, e.g. after annihilating the vacuum."""
        return not self._amps

    def __len__(self):
        return len(self._amps)

    def __getitem__(self, ket: Ket) -> complex:
        return self._amps.get(ket, 0j)

    def __iter__(self):
        return iter(self._amps.items())

    def norm_sq(self) -> float:
        return math.fsum(abs(a) ** 2 for a in self._amps.values())

    def norm(self) -> float:
        return math.sqrt(self.norm_sq())

    def normalized(self) -> "TwoModeFockState":
        n = self.norm()
        if n == 0.0:
            raise DegenerateState("cannot normalize the zero vector")
        return TwoModeFockState({k: a / n for k, a in self._amps.items()}, self._cutoff)

    def total_photon_numbers(self) -> set[int]:
        return {nx + ny for nx, ny in self._amps}

    def __mul__(self, scalar) -> "TwoModeFockState":
        scalar = complex(scalar)
        return TwoModeFockState({k: scalar * a for k, a in self._amps.items()}, self._cutoff)

    __rmul__ = __mul__

    def __add__(self, other: "TwoModeFockState") -> "TwoModeFockState":
        amps = dict(self._amps)
        for k, a in other._amps.items():
            amps[k] = amps.get(k, 0j) + a
        return TwoModeFockState(amps, max(self._cutoff, other._cutoff))

    def __sub__(self, other: "TwoModeFockState") -> "TwoModeFockState":
        return self + (-1.0) * other

    def __repr__(self):
        body = ", ".join(f"{k}: {a:.6g}" for k, a in sorted(self._amps.items()))
        return f"TwoModeFockState({{{body}}}, cutoff={self._cutoff})"


def make_state(entries: Iterable[tuple[Ket, complex]]) -> TwoModeFockState:
    """Normalized superposition of the given ``((n_x, n_y), amplitude)`` pairs.

    Repeated kets are summed. The cutoff is the largest total photon number
    among the entries.
    """
    amps: dict[Ket, complex] = {}
    top = None
    for (nx, ny), amp in entries:
        if nx < 0 or ny < 0:
            raise DomainError(f"negative occupation in ket {(nx, ny)}")
        amps[(nx, ny)] = amps.get((nx, ny), 0j) + complex(amp)
        top = nx + ny if top is None else max(top, nx + ny)
    if top is None:
        raise DegenerateState("no entries given")
    if all(a == 0 for a in amps.values()):
        raise DegenerateState("all amplitudes are zero")
    return TwoModeFockState(amps, top).normalized()


def basis_state(nx: int, ny: int) -> TwoModeFockState:
    return make_state([((nx, ny), 1.0)])


def vacuum() -> TwoModeFockState:
    return basis_state(0, 0)


@dataclass(frozen=True)
class OperatorWord:
    """Product of ladder operators, written left to right, applied right to left."""

    factors: tuple[Ladder, ...] = ()

    def __init__(self, *factors: Ladder):
        object.__setattr__(self, "factors", tuple(factors))

    @property
    def creation_count(self) -> int:
        return sum(f.kind is Kind.CREATE for f in self.factors)

    def dagger(self) -> "OperatorWord":
        return OperatorWord(*(f.dagger() for f in reversed(self.factors)))

    def __matmul__(self, other: "OperatorWord") -> "OperatorWord":
        return OperatorWord(*self.factors, *other.factors)

    def __str__(self):
        return " ".join(map(str, self.factors)) or "1"


class OperatorPolynomial:
    """Complex linear combination of operator words."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[OperatorWord, complex] | None = None):
        self.terms = {w: complex(c) for w, c in (terms or {}).items() if c != 0}

    @classmethod
    def of(cls, *factors: Ladder, coeff: complex = 1.0) -> "OperatorPolynomial":
        return cls({OperatorWord(*factors): coeff})

    @classmethod
    def identity(cls) -> "OperatorPolynomial":
        return cls({OperatorWord(): 1.0})

    def __add__(self, other: "OperatorPolynomial") -> "OperatorPolynomial":
        terms = dict(self.terms)
        for w, c in other.terms.items():
            terms[w] = terms.get(w, 0j) + c
        return OperatorPolynomial(terms)

    def __sub__(self, other: "OperatorPolynomial") -> "OperatorPolynomial":
        return self + (-1.0) * other

    def __neg__(self):
        return (-1.0) * self

    def __rmul__(self, scalar) -> "OperatorPolynomial":
        return OperatorPolynomial({w: scalar * c for w, c in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, OperatorPolynomial):
            return self.__rmul__(other)
        terms: dict[OperatorWord, complex] = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 @ w2
                terms[w] = terms.get(w, 0j) + c1 * c2
        return OperatorPolynomial(terms)

    def dagger(self) -> "OperatorPolynomial":
        return OperatorPolynomial({w.dagger(): c.conjugate() for w, c in self.terms.items()})

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        return " + ".join(f"({c:.4g}) {w}" for w, c in self.terms.items()) or "0"


def _apply_ladder(amps: dict[Ket, complex], op: Ladder) -> dict[Ket, complex]:
    out: dict[Ket, complex] = {}
    x = op.mode is Mode.X
    if op.kind is Kind.ANNIHILATE:
        for (nx, ny), a in amps.items():
            n = nx if x else ny
            if n == 0:
                continue
            key = (nx - 1, ny) if x else (nx, ny - 1)
            out[key] = out.get(key, 0j) + math.sqrt(n) * a
    else:
        for (nx, ny), a in amps.items():
            n = nx if x else ny
            key = (nx + 1, ny) if x else (nx, ny + 1)
            out[key] = out.get(key, 0j) + math.sqrt(n + 1) * a
    return out


def _apply_word_amps(amps: Mapping[Ket, complex], word: OperatorWord) -> dict[Ket, complex]:
    out = dict(amps)
    for op in reversed(word.factors):
        if not out:
            break
        out = _apply_ladder(out, op)
    return out


def apply_word(state: TwoModeFockState, word: OperatorWord) -> TwoModeFockState:
    """Exact action of ``word`` on ``state``; the result is not normalized.

    The cutoff grows by the number of creation operators in the word.
    """
    amps = _apply_word_amps(state.amplitudes, word)
    return TwoModeFockState(amps, state.cutoff + word.creation_count)


def apply_poly(state: TwoModeFockState, poly: OperatorPolynomial) -> TwoModeFockState:
    out: dict[Ket, complex] = {}
    grow = 0
    for word, coeff in poly.terms.items():
        grow = max(grow, word.creation_count)
        for k, a in _apply_word_amps(state.amplitudes, word).items():
            out[k] = out.get(k, 0j) + coeff * a
    return TwoModeFockState(out, state.cutoff + grow)


def inner(a: TwoModeFockState, b: TwoModeFockState) -> complex:
    """``<a|b>``, conjugate-linear in ``a``."""
    if len(a) > len(b):
        return sum((a[k].conjugate() * v for k, v in b), 0j)
    return sum((v.conjugate() * b[k] for k, v in a), 0j)


def expectation(state: TwoModeFockState, word: OperatorWord) -> complex:
    return inner(state, apply_word(state, word))


def expectation_poly(state: TwoModeFockState, poly: OperatorPolynomial) -> complex:
    return inner(state, apply_poly(state, poly))


def truncate(state: TwoModeFockState, cutoff: int, tail_tol: float) -> tuple[TwoModeFockState, float]:
    """Drop kets with more than ``cutoff`` photons and renormalize.

    Returns the truncated state and the dropped probability (relative to the
    input norm). Raises :class:`CutoffTooSmall` if that exceeds ``tail_tol``.
    """
    if cutoff < 0:
        raise DomainError("cutoff must be non-negative")
    total = state.norm_sq()
    if total == 0.0:
        raise DegenerateState("cannot truncate the zero vector")
    kept = {k: a for k, a in state if k[0] + k[1] <= cutoff}
    dropped = math.fsum(abs(a) ** 2 for k, a in state if k[0] + k[1] > cutoff)
    tail = dropped / total
    if tail > tail_tol:
        raise CutoffTooSmall(f"cutoff {cutoff} drops probability {tail:.3g} > {tail_tol:.3g}", tail)
    if not kept:
        raise DegenerateState("nothing left below the cutoff")
    return TwoModeFockState(kept, cutoff).normalized(), tail


def random_state(rng: np.random.Generator, cutoff: int) -> TwoModeFockState:
    """Gaussian-random normalized state over every ket with at most ``cutoff`` photons."""
    kets = [(nx, n - nx) for n in range(cutoff + 1) for nx in range(n + 1)]
    re = rng.standard_normal(len(kets))
    im = rng.standard_normal(len(kets))
    return make_state(zip(kets, re + 1j * im))
