"""Vacuum-mediated coupling constants between the eight transition dipoles.

Two kinds of couplings enter the master equation:

* single-particle couplings (same atom, different transitions), fixed by
  the decay rates and the overlap of the two dipole moments;
* two-particle dipole-dipole couplings (different atoms), given by the
  imaginary (incoherent, ``gamma``) and real (coherent, ``omega``) parts of
  the free-space dipole tensor projected onto the two dipoles.

Interatomic couplings are partitioned into five groups by the polarization
character of the two transitions:

    G1  pi-sigma pairs
    G2  two different sigma transitions
    G3  two different pi transitions
    G4  equal sigma transitions
    G5  equal pi transitions

Every group (and the single-particle couplings) can be scaled or switched off
through a ``GroupMask``; this is only an analysis device, the physical system
is the all-on mask.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .atomic import (
    ATOMS,
    DECAY_RATES,
    K0,
    TRANSITIONS,
    Geometry,
    dipole_moment,
    is_pi,
)

# D^2 k0^3 / (4 pi eps0 hbar) in gamma_pi units, fixed by Gamma_11^{mu mu} = 1
# (small-argument limit Im chi -> (2/3) N delta_pq with |d_1|^2 = 1/3)
COUPLING_NORM = 4.5

GROUPS = ("G1", "G2", "G3", "G4", "G5")
DIAGONAL = "diagonal"
SPVC = "spvc"

# representative (i, j) of each group
GROUP_REPRESENTATIVES = {"G1": (1, 3), "G2": (3, 4), "G3": (1, 2), "G4": (3, 3), "G5": (1, 1)}


def chi_tensor(r, k: float = K0) -> np.ndarray:
    """Normalized free-space dipole tensor for separation vector ``r``.

    chi_pq = N [delta_pq (1/eta + i/eta^2 - 1/eta^3)
                - r_p r_q / r^2 (1/eta + 3i/eta^2 - 3/eta^3)] exp(i eta),
    with eta = k |r| and N = COUPLING_NORM.
    """
    r = np.asarray(r, dtype=float)
    dist = np.linalg.norm(r)
    if not dist > 0:
        raise ValueError("chi tensor is singular at zero separation")
    eta = k * dist
    rr = np.outer(r, r) / dist**2
    iso = 1 / eta + 1j / eta**2 - 1 / eta**3
    aniso = 1 / eta + 3j / eta**2 - 3 / eta**3
    return COUPLING_NORM * (np.eye(3) * iso - rr * aniso) * np.exp(1j * eta)


def tpvc_constants(i: int, j: int, r, k: float = K0) -> tuple[complex, complex]:
    """Interatomic (gamma_ij, omega_ij) between transition i of one atom and j of the other."""
    chi = chi_tensor(r, k)
    di, dj = dipole_moment(i), dipole_moment(j).conj()
    gamma = di @ chi.imag @ dj
    omega = di @ chi.real @ dj
    return complex(gamma), complex(omega)


def spvc_constant(i: int, j: int) -> complex:
    """Intraatomic cross-decay constant Gamma_ij^{mu mu}."""
    di, dj = dipole_moment(i), dipole_moment(j)
    overlap = np.dot(di, dj.conj()) / (np.linalg.norm(di) * np.linalg.norm(dj))
    return complex(np.sqrt(DECAY_RATES[i] * DECAY_RATES[j]) * overlap)


def classify_group(i: int, j: int, mu: int, nu: int) -> str:
    if i not in TRANSITIONS or j not in TRANSITIONS:
        raise ValueError(f"invalid transition pair ({i}, {j})")
    if mu not in ATOMS or nu not in ATOMS:
        raise ValueError(f"invalid atom pair ({mu}, {nu})")
    if mu == nu:
        return DIAGONAL if i == j else SPVC
    if is_pi(i) != is_pi(j):
        return "G1"
    if is_pi(i):
        return "G5" if i == j else "G3"
    return "G4" if i == j else "G2"


@dataclass(frozen=True)
class GroupMask:
    """Per-group scale factors p1..p5 and the single-particle switch.

    ``spvc_eom`` controls the intraatomic cross-decay constants entering the
    equations of motion; diagonal decay rates are never masked.
    """

    scales: tuple = (1.0, 1.0, 1.0, 1.0, 1.0)
    spvc_eom: bool = True

    def __post_init__(self):
        scales = tuple(float(p) for p in self.scales)
        if len(scales) != len(GROUPS):
            raise ValueError(f"need {len(GROUPS)} group scales, got {len(scales)}")
        for a, p in enumerate(scales, start=1):
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"group scale p{a} must lie in [0, 1], got {p}")
        object.__setattr__(self, "scales", scales)

    @classmethod
    def only(cls, *groups, spvc_eom: bool = True) -> "GroupMask":
        """Mask with the named groups (e.g. ``"G2"``) on and all others off."""
        for g in groups:
            if g not in GROUPS:
                raise ValueError(f"unknown group {g!r}")
        return cls(tuple(1.0 if g in groups else 0.0 for g in GROUPS), spvc_eom)

    def scale(self, label: str) -> float:
        if label == DIAGONAL:
            return 1.0
        if label == SPVC:
            return 1.0 if self.spvc_eom else 0.0
        return self.scales[GROUPS.index(label)]

    def replace(self, **changes) -> "GroupMask":
        scales = list(self.scales)
        for key in list(changes):
            if key.startswith("p") and key[1:].isdigit():
                scales[int(key[1:]) - 1] = changes.pop(key)
        spvc = changes.pop("spvc_eom", self.spvc_eom)
        if changes:
            raise TypeError(f"unexpected fields {sorted(changes)}")
        return GroupMask(tuple(scales), spvc)


@dataclass(frozen=True, eq=False)
class CouplingTable:
    """All coupling constants, indexed ``[i-1, j-1, mu-1, nu-1]``.

    ``gamma`` holds Gamma_ij^{mu nu}, ``omega`` holds Omega_ij^{mu nu}; both
    are complex and in gamma_pi units.  ``labels`` has the group label of
    each entry.
    """

    gamma: np.ndarray
    omega: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        for arr in (self.gamma, self.omega, self.labels):
            arr.setflags(write=False)

    def gamma_of(self, i, j, mu, nu) -> complex:
        return complex(self.gamma[i - 1, j - 1, mu - 1, nu - 1])

    def omega_of(self, i, j, mu, nu) -> complex:
        return complex(self.omega[i - 1, j - 1, mu - 1, nu - 1])

    def representative(self, group: str) -> tuple[complex, complex]:
        """(Gamma_a, Omega_a) of group ``group`` for the pair (mu, nu) = (1, 2)."""
        i, j = GROUP_REPRESENTATIVES[group]
        return self.gamma_of(i, j, 1, 2), self.omega_of(i, j, 1, 2)

    def conjugate_symmetry_error(self) -> float:
        """max |C_ji^{nu mu} - conj(C_ij^{mu nu})| over both constant arrays."""
        err = 0.0
        for arr in (self.gamma, self.omega):
            swapped = arr.transpose(1, 0, 3, 2)
            err = max(err, float(np.max(np.abs(swapped - arr.conj()))))
        return err

    def rate_matrix(self) -> np.ndarray:
        """8x8 matrix of Gamma over the flattened (i, mu) index, atom-major."""
        return self.gamma.transpose(2, 0, 3, 1).reshape(8, 8)

    def shift_matrix(self) -> np.ndarray:
        """8x8 matrix of Omega over the flattened (i, mu) index, atom-major."""
        return self.omega.transpose(2, 0, 3, 1).reshape(8, 8)


def _raw_entry(i, j, mu, nu, geometry, k):
    if mu == nu:
        if i == j:
            return complex(DECAY_RATES[i]), 0j
        return spvc_constant(i, j), 0j
    r = geometry.position(mu) - geometry.position(nu)
    return tpvc_constants(i, j, r, k)


def build_coupling_table(
    geometry: Geometry, mask: GroupMask | None = None, k: float = K0
) -> CouplingTable:
    mask = GroupMask() if mask is None else mask
    shape = (4, 4, 2, 2)
    gamma = np.zeros(shape, dtype=complex)
    omega = np.zeros(shape, dtype=complex)
    labels = np.empty(shape, dtype=object)
    for i in TRANSITIONS:
        for j in TRANSITIONS:
            for mu in ATOMS:
                for nu in ATOMS:
                    idx = (i - 1, j - 1, mu - 1, nu - 1)
                    label = classify_group(i, j, mu, nu)
                    g, w = _raw_entry(i, j, mu, nu, geometry, k)
                    p = mask.scale(label)
                    gamma[idx] = p * g
                    omega[idx] = p * w
                    labels[idx] = label
    return CouplingTable(gamma, omega, labels)
