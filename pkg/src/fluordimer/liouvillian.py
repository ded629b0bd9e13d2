"""Master-equation generator of the driven, dipole-dipole coupled atom pair.

Density matrices are vectorized by column stacking, so that

    vec(A rho B) = (B^T kron A) vec(rho),

i.e. left multiplication by A is ``kron(I, A)`` and right multiplication by B
is ``kron(B.T, I)``.  The generator ``M`` is a dense 256x256 complex matrix
with d vec(rho)/dt = M vec(rho).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .atomic import (
    ATOMS,
    DIM,
    N_LEVELS,
    PI_TRANSITIONS,
    TRANSITIONS,
    DriveField,
    Geometry,
    rabi_frequency,
    transition_operator,
)
from .coupling import CouplingTable, build_coupling_table

_EYE = np.eye(DIM)


class DegenerateSteadyStateError(np.linalg.LinAlgError):
    """The generator has more than one stationary state."""


def vectorize(rho: np.ndarray) -> np.ndarray:
    return np.asarray(rho).reshape(-1, order="F")


def unvectorize(vec: np.ndarray) -> np.ndarray:
    n = int(round(np.sqrt(vec.size)))
    return np.asarray(vec).reshape((n, n), order="F")


def left(a: np.ndarray) -> np.ndarray:
    return np.kron(np.eye(a.shape[0]), a)


def right(b: np.ndarray) -> np.ndarray:
    return np.kron(b.T, np.eye(b.shape[0]))


def _lowering_ops():
    # flattened (mu, i) order, atom-major, matching CouplingTable.rate_matrix
    return [transition_operator(i, mu).conj().T for mu in ATOMS for i in TRANSITIONS]


def build_hamiltonian(drive: DriveField, geometry: Geometry) -> np.ndarray:
    """Interaction-picture Hamiltonian (16x16).

    H = -sum_mu [ Delta (|1><1| + |2><2|)_mu
                  + sum_i (Omega_i(r_mu) S_i^{+mu} + h.c.) ]
    """
    h = np.zeros((DIM, DIM), dtype=complex)
    for mu in ATOMS:
        for i in TRANSITIONS:
            s_plus = transition_operator(i, mu)
            if i in PI_TRANSITIONS:
                h -= drive.detuning * (s_plus @ s_plus.conj().T)
            rabi = rabi_frequency(i, mu, geometry, drive)
            if rabi != 0:
                term = rabi * s_plus
                h -= term + term.conj().T
    return h


def dipole_hamiltonian(table: CouplingTable) -> np.ndarray:
    """-sum_{mu != nu} sum_ij Omega_ij^{mu nu} S_i^{+mu} S_j^{-nu}."""
    ops = _lowering_ops()
    shifts = table.shift_matrix()
    h = np.zeros((DIM, DIM), dtype=complex)
    for a, la in enumerate(ops):
        for b, lb in enumerate(ops):
            w = shifts[a, b]
            if w != 0 and a // 4 != b // 4:
                h -= w * (la.conj().T @ lb)
    return h


def build_liouvillian(
    drive: DriveField, geometry: Geometry, table: CouplingTable | None = None
) -> np.ndarray:
    """Generator M of d rho/dt = -i[H + H_dd, rho] + L_gamma rho.

    The incoherent part is
        -sum Gamma_ij^{mu nu} (A rho + rho A - 2 S_j^{-nu} rho S_i^{+mu}),
    with A = S_i^{+mu} S_j^{-nu}, summed over all atoms and transitions.
    """
    table = build_coupling_table(geometry) if table is None else table
    asym = table.conjugate_symmetry_error()
    if asym > 1e-10:
        raise ValueError(
            f"coupling table is not conjugate symmetric (error {asym:.3g}); "
            "the generator would not preserve Hermiticity"
        )
    ops = _lowering_ops()
    rates = table.rate_matrix()

    h = build_hamiltonian(drive, geometry) + dipole_hamiltonian(table)
    anti = np.zeros((DIM, DIM), dtype=complex)
    jumps = np.zeros((DIM * DIM, DIM * DIM), dtype=complex)
    for a, la in enumerate(ops):
        for b, lb in enumerate(ops):
            g = rates[a, b]
            if g == 0:
                continue
            anti += g * (la.conj().T @ lb)
            # S_j^{-nu} rho S_i^{+mu}: left by lb, right by la^dagger
            jumps += 2 * g * np.kron(la.conj(), lb)

    # (-iH - K) rho + rho (iH - K) + jumps
    return left(-1j * h - anti) + right(1j * h - anti) + jumps


def steady_state(m: np.ndarray, degeneracy_tol: float | None = None) -> np.ndarray:
    """Trace-one stationary state of ``m`` as a 256-vector.

    One of the (linearly dependent) population equations is replaced by the
    trace constraint and the resulting system is solved directly.

    Raises
    ------
    DegenerateSteadyStateError
        If the kernel of ``m`` is more than one-dimensional, e.g. for an
        undriven system where the whole ground manifold is stationary.
        The default threshold is the numerical rank cutoff n * eps relative
        to the largest singular value; weakly driven subradiant pairs relax
        slowly enough to approach it without being exactly degenerate.
    """
    n = m.shape[0]
    dim = int(round(np.sqrt(n)))
    if degeneracy_tol is None:
        degeneracy_tol = n * np.finfo(float).eps
    sv = sla.svdvals(m)
    if sv[-2] <= degeneracy_tol * sv[0]:
        raise DegenerateSteadyStateError(
            f"generator kernel is degenerate (second smallest singular value "
            f"{sv[-2]:.3g}); the stationary state is not unique"
        )
    trace_row = vectorize(np.eye(dim))
    a = np.array(m, dtype=complex)
    a[0, :] = trace_row
    rhs = np.zeros(n, dtype=complex)
    rhs[0] = 1.0
    vec = sla.solve(a, rhs)
    rho = unvectorize(vec)
    rho = 0.5 * (rho + rho.conj().T)
    rho /= np.trace(rho).real
    return vectorize(rho)


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Eigenvalues xi_j = chi_j + i upsilon_j, sorted by (imag, real)."""

    values: np.ndarray
    vectors: np.ndarray | None = None

    @property
    def decay(self) -> np.ndarray:
        return self.values.real

    @property
    def shift(self) -> np.ndarray:
        return self.values.imag


def eigenvalues(m: np.ndarray, vectors: bool = False) -> SpectralDecomposition:
    if vectors:
        vals, vecs = sla.eig(m)
    else:
        vals, vecs = sla.eigvals(m), None
    order = np.lexsort((vals.real, vals.imag))
    vals = vals[order]
    if vecs is not None:
        vecs = vecs[:, order]
    return SpectralDecomposition(vals, vecs)


def time_evolve(rho0: np.ndarray, t: float, m: np.ndarray) -> np.ndarray:
    """exp(M t) rho0 by scaling and squaring.  Accepts a vector or a matrix."""
    if t < 0:
        raise ValueError("time must be nonnegative")
    rho0 = np.asarray(rho0)
    as_matrix = rho0.ndim == 2 and rho0.shape[0] == rho0.shape[1] != m.shape[0]
    vec = vectorize(rho0) if as_matrix else rho0
    out = sla.expm(m * t) @ vec
    return unvectorize(out) if as_matrix else out


def partial_trace(rho: np.ndarray, atom: int) -> np.ndarray:
    """Reduced 4x4 state of ``atom`` (the other atom is traced out).

    ``rho`` may be the 256-vector or the 16x16 matrix.
    """
    if atom not in ATOMS:
        raise ValueError(f"atom index must be 1 or 2, got {atom!r}")
    rho = np.asarray(rho)
    if rho.ndim == 1:
        rho = unvectorize(rho)
    t = rho.reshape(N_LEVELS, N_LEVELS, N_LEVELS, N_LEVELS)
    if atom == 1:
        return np.einsum("ajbj->ab", t)
    return np.einsum("jajb->ab", t)


def expectation(op: np.ndarray, rho: np.ndarray) -> complex:
    rho = np.asarray(rho)
    if rho.ndim == 1:
        rho = unvectorize(rho)
    return complex(np.trace(op @ rho))
