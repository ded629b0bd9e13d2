"""Level scheme, dipole moments, geometry and drive of two J=1/2 <-> J=1/2 atoms.

Units: all rates and frequencies are in units of the pi-transition decay
constant (gamma_pi = 1), all lengths in units of the pi-transition wavelength
(lambda_pi = 1), hbar = 1.  Dipole moments are in units of the reduced dipole
matrix element.

Each atom has four states, indexed 1..4 in the public API:

    |1>, |2>  excited (m = -1/2, +1/2)
    |3>, |4>  ground

and four transitions

    1: |1> <-> |3>  (pi)
    2: |2> <-> |4>  (pi)
    3: |2> <-> |3>  (sigma-)
    4: |1> <-> |4>  (sigma+)

The two-atom product space is ordered with the atom-1 index varying slowest,
|a>_1 |b>_2 -> 4(a-1) + (b-1) in zero-based array indices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

GAMMA_PI = 1.0
LAMBDA_PI = 1.0
K0 = 2.0 * np.pi / LAMBDA_PI

N_LEVELS = 4
N_ATOMS = 2
DIM = N_LEVELS**N_ATOMS  # 16

TRANSITIONS = (1, 2, 3, 4)
PI_TRANSITIONS = (1, 2)
SIGMA_TRANSITIONS = (3, 4)
ATOMS = (1, 2)

# transition -> (upper level, lower level)
TRANSITION_LEVELS = {1: (1, 3), 2: (2, 4), 3: (2, 3), 4: (1, 4)}

# gamma_sigma = 2 gamma_pi since |d_sigma|^2 = 2 |d_pi|^2 at equal frequency
DECAY_RATES = {1: GAMMA_PI, 2: GAMMA_PI, 3: 2.0 * GAMMA_PI, 4: 2.0 * GAMMA_PI}

E_X = np.array([1.0, 0.0, 0.0])
E_Y = np.array([0.0, 1.0, 0.0])
E_Z = np.array([0.0, 0.0, 1.0])
E_MINUS = (E_X - 1j * E_Y) / np.sqrt(2.0)


def _check_transition(i):
    if i not in TRANSITIONS:
        raise ValueError(f"transition index must be one of 1..4, got {i!r}")


def _check_atom(mu):
    if mu not in ATOMS:
        raise ValueError(f"atom index must be 1 or 2, got {mu!r}")


def is_pi(i: int) -> bool:
    return i in PI_TRANSITIONS


@lru_cache(maxsize=None)
def _dipole(i):
    if i == 1:
        d = -E_Z / np.sqrt(3.0) + 0j
    elif i == 2:
        d = E_Z / np.sqrt(3.0) + 0j
    elif i == 3:
        d = np.sqrt(2.0 / 3.0) * E_MINUS
    else:
        d = np.conj(np.sqrt(2.0 / 3.0) * E_MINUS)
    d.setflags(write=False)
    return d


def dipole_moment(i: int) -> np.ndarray:
    """Complex Cartesian dipole vector of transition ``i`` (read-only)."""
    _check_transition(i)
    return _dipole(i)


@dataclass(frozen=True)
class Geometry:
    """Atom 1 at the origin, atom 2 at ``r12`` along direction (theta, phi)."""

    r12: float = 0.04
    theta: float = np.pi / 2
    phi: float = np.pi / 4

    def __post_init__(self):
        if not np.isfinite(self.r12) or self.r12 <= 0:
            raise ValueError(f"r12 must be positive and finite, got {self.r12!r}")

    @property
    def unit_vector(self) -> np.ndarray:
        st = np.sin(self.theta)
        u = np.array([st * np.cos(self.phi), st * np.sin(self.phi), np.cos(self.theta)])
        # cos(pi/2) etc. are ~1e-16, which the 1/r^3 near field would amplify
        u[np.abs(u) < 4 * np.finfo(float).eps] = 0.0
        return u

    @property
    def separation(self) -> np.ndarray:
        """r_2 - r_1."""
        return self.r12 * self.unit_vector

    def position(self, mu: int) -> np.ndarray:
        _check_atom(mu)
        return np.zeros(3) if mu == 1 else self.separation


@dataclass(frozen=True)
class DriveField:
    """Monochromatic drive.

    ``rabi`` is the real, nonnegative pi Rabi frequency at the origin and
    ``detuning`` is omega_L - omega_0, both in gamma_pi.  The beam propagates
    along y with z polarization, so only the pi transitions are driven.
    """

    rabi: float = 10.0
    detuning: float = 0.0
    direction: tuple = (0.0, 1.0, 0.0)
    polarization: tuple = (0.0, 0.0, 1.0)
    wavenumber: float = field(default=K0)

    def __post_init__(self):
        if not np.isfinite(self.rabi) or self.rabi < 0:
            raise ValueError(f"rabi must be finite and >= 0, got {self.rabi!r}")
        if not np.isfinite(self.detuning):
            raise ValueError(f"detuning must be finite, got {self.detuning!r}")
        k = np.asarray(self.direction, dtype=float)
        e = np.asarray(self.polarization, dtype=complex)
        if abs(np.linalg.norm(k) - 1) > 1e-12 or abs(np.linalg.norm(e) - 1) > 1e-12:
            raise ValueError("direction and polarization must be unit vectors")
        if abs(np.dot(k, e)) > 1e-12:
            raise ValueError("polarization must be transverse to the propagation")

    @property
    def wavevector(self) -> np.ndarray:
        return self.wavenumber * np.asarray(self.direction, dtype=float)


def rabi_frequency(i: int, mu: int, geometry: Geometry, drive: DriveField) -> complex:
    """Position-dependent Rabi frequency of transition ``i`` in atom ``mu``.

    Normalized so that transition 1 carries ``drive.rabi`` at the origin;
    Omega_1(r) = -Omega_2(r) = Omega exp(i k_L . r).
    """
    _check_transition(i)
    _check_atom(mu)
    eps = np.asarray(drive.polarization, dtype=complex)
    coupling = np.dot(dipole_moment(i), eps) / np.dot(dipole_moment(1), E_Z)
    phase = np.exp(1j * np.dot(drive.wavevector, geometry.position(mu)))
    return complex(drive.rabi * coupling * phase)


@lru_cache(maxsize=None)
def _raising(i, mu):
    up, low = TRANSITION_LEVELS[i]
    single = np.zeros((N_LEVELS, N_LEVELS), dtype=complex)
    single[up - 1, low - 1] = 1.0
    eye = np.eye(N_LEVELS)
    op = np.kron(single, eye) if mu == 1 else np.kron(eye, single)
    op.setflags(write=False)
    return op


def transition_operator(i: int, mu: int) -> np.ndarray:
    """Raising operator S_i^{+mu} on the 16-dim product space (read-only).

    The lowering operator is its conjugate transpose.
    """
    _check_transition(i)
    _check_atom(mu)
    return _raising(i, mu)


def lowering_operator(i: int, mu: int) -> np.ndarray:
    return transition_operator(i, mu).conj().T


def single_atom_operator(i: int) -> np.ndarray:
    """4x4 raising operator |upper><lower| of transition ``i``."""
    _check_transition(i)
    up, low = TRANSITION_LEVELS[i]
    op = np.zeros((N_LEVELS, N_LEVELS), dtype=complex)
    op[up - 1, low - 1] = 1.0
    return op
