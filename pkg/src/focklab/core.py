"""Truncated-Fock-space state vectors and ladder-operator primitives.

Everything in this module works directly on complex amplitude vectors
over |0>..|D-1>. It is deliberately free of any closed-form state
knowledge: the engineered-state factories and series engines elsewhere
in the package are all validated against these O(D) operator routines.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import (
    AnnihilatedStateError,
    DimensionError,
    TruncationOverflowError,
)

_NORM_TOL = 1e-12
_ANNIHILATION_TOL = 1e-12


@dataclass(frozen=True)
class TruncationPolicy:
    """Controls how infinite Fock expansions are cut off.

    max_dim is a hard cap on the basis size; tail_tolerance is the largest
    probability mass that may be discarded by the cut.
    """

    max_dim: int = 512
    tail_tolerance: float = 1e-12

    def __post_init__(self):
        if self.max_dim < 1:
            raise ValueError("max_dim must be >= 1")
        if not 0.0 < self.tail_tolerance < 1.0:
            raise ValueError("tail_tolerance must lie in (0, 1)")


DEFAULT_POLICY = TruncationPolicy()


@dataclass(frozen=True)
class StateVector:
    """A pure bosonic state as complex amplitudes over |0>..|dim-1>.

    Instances are immutable; every operation returns a new value, so states
    are safe to share across threads and parameter sweeps.  tail_mass is an
    upper bound on the probability discarded when the state was truncated.
    """

    amplitudes: np.ndarray = field(repr=False)
    dim: int
    tail_mass: float = 0.0

    def __post_init__(self):
        # Copy so the read-only flag never leaks onto a caller's array.
        amps = np.array(self.amplitudes, dtype=np.complex128, copy=True)
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)
        if self.dim != len(amps) or self.dim < 1:
            raise DimensionError(f"dim {self.dim} does not match amplitude vector")
        if not 0.0 <= self.tail_mass < 1.0:
            raise ValueError("tail_mass must lie in [0, 1)")

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def mean_photon_number(self) -> float:
        p = self.probabilities()
        return float(np.dot(np.arange(self.dim), p))

    def overlap(self, other: "StateVector") -> complex:
        """<self|other> on the common truncated support."""
        d = min(self.dim, other.dim)
        return complex(np.vdot(self.amplitudes[:d], other.amplitudes[:d]))


def state_from_amplitudes(
    amps: np.ndarray, tail_mass: float = 0.0, fix_global_phase: bool = False
) -> StateVector:
    """Normalize a raw amplitude vector into a StateVector.

    By default the global phase is preserved (phase analysis depends on it);
    with fix_global_phase the first nonzero amplitude is rotated to the
    positive real axis.
    """
    amps = np.asarray(amps, dtype=np.complex128)
    nrm = np.linalg.norm(amps)
    if nrm < _ANNIHILATION_TOL:
        raise AnnihilatedStateError("amplitude vector has (numerically) zero norm")
    amps = amps / nrm
    if fix_global_phase:
        idx = np.flatnonzero(np.abs(amps) > 1e-14)
        if idx.size:
            amps = amps * np.exp(-1j * np.angle(amps[idx[0]]))
    return StateVector(amps, len(amps), tail_mass)


def make_fock(n: int, dim: int) -> StateVector:
    """The number state |n> in a basis of size dim."""
    if n < 0:
        raise DimensionError("photon number must be non-negative")
    if n >= dim:
        raise DimensionError(f"Fock index {n} does not fit in dim {dim}")
    amps = np.zeros(dim, dtype=np.complex128)
    amps[n] = 1.0
    return StateVector(amps, dim, 0.0)


def raise_amplitudes(amps: np.ndarray, k: int = 1) -> np.ndarray:
    """Raw action of the k-fold creation operator, growing the vector by k."""
    out = np.asarray(amps, dtype=np.complex128)
    for _ in range(k):
        n = np.arange(1, len(out) + 1, dtype=np.float64)
        grown = np.zeros(len(out) + 1, dtype=np.complex128)
        grown[1:] = np.sqrt(n) * out
        out = grown
    return out


def lower_amplitudes(amps: np.ndarray, k: int = 1) -> np.ndarray:
    """Raw action of the k-fold annihilation operator (vector shrinks by k)."""
    out = np.asarray(amps, dtype=np.complex128)
    for _ in range(k):
        if len(out) <= 1:
            return np.zeros(0, dtype=np.complex128)
        n = np.arange(1, len(out), dtype=np.float64)
        out = np.sqrt(n) * out[1:]
    return out


def apply_create(
    s: StateVector, k: int = 1, policy: TruncationPolicy = DEFAULT_POLICY
) -> tuple[StateVector, float]:
    """Apply the creation operator k times and renormalize.

    Returns the new state and the pre-normalization norm sqrt(<a^k a†^k>).
    The basis auto-extends to hold the raised amplitudes; if that would
    exceed policy.max_dim and the clipped mass matters, the call fails.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    if k == 0:
        return s, 1.0
    raw = raise_amplitudes(s.amplitudes, k)
    if len(raw) > policy.max_dim:
        clipped = float(np.sum(np.abs(raw[policy.max_dim:]) ** 2))
        total = float(np.sum(np.abs(raw) ** 2))
        if clipped > policy.tail_tolerance * total:
            raise TruncationOverflowError(
                f"raising past max_dim={policy.max_dim} would clip mass {clipped:.3e}"
            )
        raw = raw[: policy.max_dim]
    nrm = float(np.linalg.norm(raw))
    return state_from_amplitudes(raw, s.tail_mass), nrm


def apply_annihilate(s: StateVector, k: int = 1) -> tuple[StateVector, float]:
    """Apply the annihilation operator k times and renormalize.

    Returns the new state and the pre-normalization norm sqrt(<a†^k a^k>).
    Annihilating the whole state (e.g. a|0>) raises AnnihilatedStateError.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    if k == 0:
        return s, 1.0
    raw = lower_amplitudes(s.amplitudes, k)
    nrm = float(np.linalg.norm(raw)) if len(raw) else 0.0
    if nrm < _ANNIHILATION_TOL:
        raise AnnihilatedStateError(f"a^{k} maps this state to zero")
    return state_from_amplitudes(raw, s.tail_mass), nrm


def photon_number_distribution(s: StateVector) -> np.ndarray:
    """p_n = |c_n|^2; the vector sums to one within 1e-12."""
    p = s.probabilities()
    total = float(p.sum())
    if abs(total - 1.0) > 1e-9:
        raise ValueError(f"state is not normalized (sum p = {total!r})")
    return p


def number_moment(s: StateVector, power: int = 1) -> float:
    """<N^power> from the photon-number distribution."""
    p = s.probabilities()
    n = np.arange(s.dim, dtype=np.float64)
    return float(np.dot(n**power, p))


def log_factorial(n: int) -> float:
    """log(n!) via lgamma; log(0!) = 0. Negative arguments are the caller's bug."""
    return math.lgamma(n + 1)
