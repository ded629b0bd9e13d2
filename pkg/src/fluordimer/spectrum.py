"""Incoherent resonance fluorescence spectrum of the pi light.

Two-time fluctuation correlations are transformed with the quantum regression
theorem:

    T_ij^{mu nu}(w) = exp(i k0 R.(r_mu - r_nu))
                      * tr[S_i^{+mu} (i w - M)^{-1} (S_j^{-nu} rho - <S_j^{-nu}> rho)],

where rho is the stationary state.  The source is trace free, so replacing
M by M - |rho><tr| leaves the solution unchanged while removing the null
eigenvalue; the shifted resolvent is then regular at every real frequency.

The spectrum is S(w) = (1/pi) Re sum (-1)^{i+j} T_ij^{mu nu}(w), which splits
into four partial sums

    P1: mu == nu, i == j      P2: mu != nu, i == j
    P3: mu == nu, i != j      P4: mu != nu, i != j

with S = P1 + P2 - P3 - P4.  Masked or partially summed spectra are an
analysis tool only and need not be positive.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from .atomic import ATOMS, K0, PI_TRANSITIONS, DriveField, Geometry, transition_operator
from .coupling import GroupMask, build_coupling_table
from .liouvillian import (
    build_liouvillian,
    expectation,
    steady_state,
    unvectorize,
    vectorize,
)

TERMS = ("P1", "P2", "P3", "P4")
DEFAULT_DETECTOR = (1 / np.sqrt(2), 1 / np.sqrt(2), 0.0)

# flattened (i, mu) pairs used for both observables and sources
_PAIRS = tuple((i, mu) for mu in ATOMS for i in PI_TRANSITIONS)


@dataclass(frozen=True)
class SpectrumTermFlags:
    include: tuple = (True, True, True, True)
    detector: tuple = DEFAULT_DETECTOR

    def __post_init__(self):
        include = tuple(bool(x) for x in self.include)
        if len(include) != 4:
            raise ValueError("need four include flags (P1..P4)")
        object.__setattr__(self, "include", include)
        det = np.asarray(self.detector, dtype=float)
        if abs(np.linalg.norm(det) - 1) > 1e-12:
            raise ValueError("detector direction must be a unit vector")

    @classmethod
    def without(cls, *terms) -> "SpectrumTermFlags":
        for t in terms:
            if t not in TERMS:
                raise ValueError(f"unknown spectrum term {t!r}")
        return cls(tuple(t not in terms for t in TERMS))


def term_of(i: int, j: int, mu: int, nu: int) -> str:
    if i == j:
        return "P1" if mu == nu else "P2"
    return "P3" if mu == nu else "P4"


def geometric_phase(mu: int, nu: int, geometry: Geometry, detector=DEFAULT_DETECTOR) -> complex:
    if mu == nu:
        return 1.0 + 0j
    dr = geometry.position(mu) - geometry.position(nu)
    return complex(np.exp(1j * K0 * np.dot(np.asarray(detector, dtype=float), dr)))


def fluctuation_source(j: int, nu: int, rho_ss: np.ndarray) -> np.ndarray:
    """vec(S_j^{-nu} rho - <S_j^{-nu}> rho)."""
    rho = unvectorize(rho_ss)
    s_minus = transition_operator(j, nu).conj().T
    src = s_minus @ rho - expectation(s_minus, rho) * rho
    return vectorize(src)


def _observable_row(i, mu):
    # tr(S X) = vec(S^T) . vec(X)
    return vectorize(transition_operator(i, mu).T)


def _shifted_generator(m, rho_ss):
    dim = int(round(np.sqrt(m.shape[0])))
    return m - np.outer(rho_ss, vectorize(np.eye(dim)))


def correlation_transform(
    i: int,
    j: int,
    mu: int,
    nu: int,
    omega: float,
    rho_ss: np.ndarray,
    m: np.ndarray,
    geometry: Geometry,
    flags: SpectrumTermFlags | None = None,
) -> complex:
    """Single T_ij^{mu nu}(omega) by a direct dense solve."""
    if i not in PI_TRANSITIONS or j not in PI_TRANSITIONS:
        raise ValueError("only the pi transitions (1, 2) enter the pi spectrum")
    flags = SpectrumTermFlags() if flags is None else flags
    source = fluctuation_source(j, nu, rho_ss)
    if not np.any(source):
        return 0j
    a = 1j * omega * np.eye(m.shape[0]) - _shifted_generator(m, rho_ss)
    x = sla.solve(a, source)
    value = _observable_row(i, mu) @ x
    return complex(geometric_phase(mu, nu, geometry, flags.detector) * value)


class CorrelationSolver:
    """All sixteen pi-pi correlation transforms on a frequency grid.

    The shifted generator is brought to complex Schur form once, after which
    every frequency costs a single triangular solve.
    """

    def __init__(self, m, rho_ss, geometry, detector=DEFAULT_DETECTOR):
        t, z = sla.schur(_shifted_generator(m, rho_ss), output="complex")
        sources = np.column_stack([fluctuation_source(j, nu, rho_ss) for j, nu in _PAIRS])
        observables = np.vstack([_observable_row(i, mu) for i, mu in _PAIRS])
        self._t = t
        self._zy = z.conj().T @ sources
        self._az = observables @ z
        self.phases = np.array(
            [[geometric_phase(mu, nu, geometry, detector) for _, nu in _PAIRS] for _, mu in _PAIRS]
        )

    def transforms(self, omega: float) -> np.ndarray:
        """4x4 array of T, rows (i, mu) and columns (j, nu) in ``_PAIRS`` order."""
        a = self._t - 1j * omega * np.eye(self._t.shape[0])
        x = sla.solve_triangular(a, -self._zy, lower=False, check_finite=False)
        return self.phases * (self._az @ x)


def _term_masks():
    masks = {t: np.zeros((4, 4)) for t in TERMS}
    signs = np.zeros((4, 4))
    for r, (i, mu) in enumerate(_PAIRS):
        for c, (j, nu) in enumerate(_PAIRS):
            masks[term_of(i, j, mu, nu)][r, c] = 1.0
            signs[r, c] = (-1) ** (i + j)
    return masks, signs


_TERM_MASKS, _SIGNS = _term_masks()


def signed_sum(transforms: np.ndarray) -> complex:
    """sum (-1)^{i+j} T_ij^{mu nu} of a ``CorrelationSolver.transforms`` block."""
    return complex(np.sum(_SIGNS * transforms))


@dataclass(frozen=True, eq=False)
class SpectrumTrace:
    omega: np.ndarray
    terms: dict
    flags: SpectrumTermFlags = field(default_factory=SpectrumTermFlags)
    metadata: dict = field(default_factory=dict)

    @property
    def total(self) -> np.ndarray:
        out = np.zeros_like(self.omega, dtype=float)
        for name, keep in zip(TERMS, self.flags.include):
            if keep:
                out = out + (self.terms[name] if name in ("P1", "P2") else -self.terms[name])
        return out

    @property
    def intra(self) -> np.ndarray:
        return self.terms["P1"] - self.terms["P3"]

    @property
    def inter(self) -> np.ndarray:
        return self.terms["P1"] + self.terms["P2"] - self.terms["P4"]


def _undriven(drive):
    return drive.rabi == 0


def _prepare(drive, geometry, mask):
    table = build_coupling_table(geometry, mask)
    m = build_liouvillian(drive, geometry, table)
    return m, steady_state(m)


def spectrum_terms(omega_grid, m, rho_ss, geometry, detector=DEFAULT_DETECTOR) -> dict:
    """P1..P4 on ``omega_grid`` for a prepared generator and steady state."""
    omega_grid = np.asarray(omega_grid, dtype=float)
    solver = CorrelationSolver(m, rho_ss, geometry, detector)
    terms = {t: np.empty(omega_grid.shape) for t in TERMS}
    for k, w in enumerate(omega_grid):
        tw = solver.transforms(w)
        for name in TERMS:
            terms[name][k] = np.sum(_TERM_MASKS[name] * tw).real / np.pi
    return terms


def incoherent_pi_spectrum(
    omega_grid,
    drive: DriveField,
    geometry: Geometry,
    mask: GroupMask | None = None,
    flags: SpectrumTermFlags | None = None,
) -> SpectrumTrace:
    mask = GroupMask() if mask is None else mask
    flags = SpectrumTermFlags() if flags is None else flags
    omega_grid = np.asarray(omega_grid, dtype=float)
    if not np.all(np.isfinite(omega_grid)):
        raise ValueError("frequency grid must be finite")
    meta = {"drive": drive, "geometry": geometry, "mask": mask}
    if _undriven(drive):
        # every stationary state lies in the ground manifold, S^- rho = 0
        terms = {t: np.zeros(omega_grid.shape) for t in TERMS}
        return SpectrumTrace(omega_grid, terms, flags, meta)
    m, rho_ss = _prepare(drive, geometry, mask)
    terms = spectrum_terms(omega_grid, m, rho_ss, geometry, flags.detector)
    return SpectrumTrace(omega_grid, terms, flags, meta)


def decompose_spectrum(omega_grid, drive, geometry, mask=None, detector=DEFAULT_DETECTOR) -> dict:
    """P1..P4 plus the named combinations ``intra`` (P1-P3), ``inter`` (P1+P2-P4) and ``total``."""
    trace = incoherent_pi_spectrum(omega_grid, drive, geometry, mask, SpectrumTermFlags(detector=detector))
    out = dict(trace.terms)
    out["intra"] = trace.intra
    out["inter"] = trace.inter
    out["total"] = trace.total
    return out


def coherent_intensity(
    drive: DriveField,
    geometry: Geometry,
    mask: GroupMask | None = None,
    detector=DEFAULT_DETECTOR,
) -> float:
    """|sum_{mu, i in pi} (-1)^i <S_i^{-mu}> exp(-i k0 R.r_mu)|^2."""
    if _undriven(drive):
        return 0.0
    _, rho_ss = _prepare(drive, geometry, mask)
    det = np.asarray(detector, dtype=float)
    amp = 0j
    for mu in ATOMS:
        phase = np.exp(-1j * K0 * np.dot(det, geometry.position(mu)))
        for i in PI_TRANSITIONS:
            s_minus = transition_operator(i, mu).conj().T
            amp += (-1) ** i * expectation(s_minus, rho_ss) * phase
    return float(abs(amp) ** 2)
