import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fluordimer.atomic import (
    ATOMS,
    TRANSITIONS,
    DriveField,
    Geometry,
    rabi_frequency,
    transition_operator,
)
from fluordimer.coupling import CouplingTable, GroupMask, build_coupling_table
from fluordimer.liouvillian import (
    DegenerateSteadyStateError,
    build_hamiltonian,
    build_liouvillian,
    eigenvalues,
    left,
    partial_trace,
    right,
    steady_state,
    time_evolve,
    unvectorize,
    vectorize,
)

from conftest import random_density, random_hermitian
from oracles import (
    generator_from_rhs,
    multiset_distance,
    null_state,
    single_atom_generator,
    trace_norm,
    two_atom_rhs,
)

OPS = {(i, mu): transition_operator(i, mu) for i in TRANSITIONS for mu in ATOMS}
TRACE_ROW = vectorize(np.eye(16))

params = st.tuples(
    st.floats(0.5, 15),  # rabi
    st.floats(-15, 15),  # detuning
    st.floats(0.05, 3),  # r12
    st.floats(0, np.pi),
    st.floats(0, 2 * np.pi),
)


def generator(rabi, detuning, r12, theta=np.pi / 2, phi=np.pi / 4, mask=None):
    g = Geometry(r12, theta, phi)
    f = DriveField(rabi, detuning)
    return build_liouvillian(f, g, build_coupling_table(g, mask))


class TestVectorization:
    def test_column_stacking(self, rng):
        a, b, rho = (random_hermitian(rng, 4) + 1j * random_hermitian(rng, 4) for _ in range(3))
        assert np.allclose(vectorize(a @ rho @ b), np.kron(b.T, a) @ vectorize(rho))
        assert np.allclose(left(a) @ vectorize(rho), vectorize(a @ rho))
        assert np.allclose(right(b) @ vectorize(rho), vectorize(rho @ b))
        assert np.array_equal(unvectorize(vectorize(rho)), rho)
        assert vectorize(rho)[1] == rho[1, 0]


class TestHamiltonian:
    def test_undriven_resonant_is_zero(self, reference_geometry):
        assert not np.any(build_hamiltonian(DriveField(0.0, 0.0), reference_geometry))

    @given(p=params)
    def test_hermitian(self, p):
        rabi, det, r, th, ph = p
        h = build_hamiltonian(DriveField(rabi, det), Geometry(r, th, ph))
        assert np.allclose(h, h.conj().T, atol=1e-14)

    def test_detuning_only(self, reference_geometry):
        h = build_hamiltonian(DriveField(0.0, 3.0), reference_geometry)
        excited = np.array([1, 1, 0, 0])
        n_exc = np.add.outer(excited, excited).reshape(-1)
        assert np.allclose(h, np.diag(-3.0 * n_exc))

    def test_drive_terms(self, reference_geometry):
        f = DriveField(4.0, 0.0)
        h = build_hamiltonian(f, reference_geometry)
        expected = np.zeros((16, 16), dtype=complex)
        for i, mu in itertools.product((1, 2), ATOMS):
            term = rabi_frequency(i, mu, reference_geometry, f) * OPS[(i, mu)]
            expected -= term + term.conj().T
        assert np.allclose(h, expected)


class TestGenerator:
    @pytest.mark.parametrize(
        "mask",
        [GroupMask(), GroupMask((0.2, 1, 0.5, 0.3, 0.9), spvc_eom=False), GroupMask.only("G2")],
    )
    @pytest.mark.parametrize("geom", [Geometry(0.04), Geometry(0.13, 0.7, 2.1), Geometry(1.7, 2.5, 0.3)])
    def test_matches_matrix_form_oracle(self, mask, geom):
        f = DriveField(6.0, -2.5)
        table = build_coupling_table(geom, mask)
        h = build_hamiltonian(f, geom)
        oracle = generator_from_rhs(two_atom_rhs(h, table, OPS), 16)
        assert np.allclose(build_liouvillian(f, geom, table), oracle, atol=1e-12, rtol=1e-13)

    @given(p=params)
    def test_trace_preservation(self, p):
        m = generator(*p)
        assert np.abs(TRACE_ROW @ m).max() <= 1e-12

    def test_hermiticity_preservation(self, rng):
        m = generator(7.0, 2.0, 0.07, 1.0, 0.5)
        for _ in range(5):
            h = random_hermitian(rng)
            d = unvectorize(m @ vectorize(h))
            assert np.allclose(d, d.conj().T, atol=1e-10)
            e = time_evolve(h, 0.7, m)
            assert np.allclose(e, e.conj().T, atol=1e-10)

    def test_rejects_asymmetric_table(self, reference_geometry):
        table = build_coupling_table(reference_geometry)
        gamma = table.gamma.copy()
        gamma[2, 3, 0, 1] *= 1j
        bad = CouplingTable(gamma, table.omega.copy(), table.labels.copy())
        with pytest.raises(ValueError, match="conjugate symmetric"):
            build_liouvillian(DriveField(), reference_geometry, bad)


class TestSteadyState:
    @given(p=params)
    def test_physical(self, p):
        rho = unvectorize(steady_state(generator(*p)))
        assert np.trace(rho) == pytest.approx(1.0, abs=1e-12)
        assert np.allclose(rho, rho.conj().T, atol=1e-14)
        assert np.linalg.eigvalsh(rho).min() >= -1e-10

    def test_is_kernel(self):
        m = generator(10, -3, 0.06)
        assert np.abs(m @ steady_state(m)).max() < 1e-10

    def test_undriven_is_degenerate(self, reference_geometry):
        m = build_liouvillian(DriveField(0.0, 0.0), reference_geometry)
        with pytest.raises(DegenerateSteadyStateError, match="degenerate"):
            steady_state(m)

    def test_undriven_relaxes_to_ground_manifold(self, far_geometry, rng):
        # the kernel is degenerate, but any evolved state loses all excitation;
        # at short range subradiant states make this arbitrarily slow
        m = build_liouvillian(DriveField(0.0, 0.0), far_geometry)
        rho = unvectorize(time_evolve(vectorize(random_density(rng)), 60.0, m))
        red = partial_trace(rho, 1)
        assert abs(red[0, 0]) + abs(red[1, 1]) < 1e-8

    def test_product_of_single_atom_states_far_apart(self, far_geometry, drive):
        rho = unvectorize(steady_state(build_liouvillian(drive, far_geometry)))
        phases = [np.exp(1j * np.dot(drive.wavevector, far_geometry.position(mu))) for mu in ATOMS]
        singles = [null_state(single_atom_generator(drive.rabi, drive.detuning, p)) for p in phases]
        assert trace_norm(rho - np.kron(*singles)) < 1e-3

    def test_matches_long_time_propagation(self, rng):
        m = generator(5.0, 2.0, 0.4, 1.2, 0.3)
        rho0 = vectorize(random_density(rng))
        assert np.abs(time_evolve(rho0, 50.0, m) - steady_state(m)).max() < 1e-8


class TestEigenvalues:
    @given(p=params)
    def test_sanity(self, p):
        vals = eigenvalues(generator(*p)).values
        assert np.abs(vals).min() < 1e-10
        assert vals.real.max() <= 1e-10
        assert multiset_distance(vals, vals.conj()) < 1e-9

    def test_sorted_by_shift(self):
        dec = eigenvalues(generator(10, 0, 0.05))
        assert np.all(np.diff(dec.shift) >= 0)

    def test_vectors(self):
        m = generator(3, 1, 0.3)
        dec = eigenvalues(m, vectors=True)
        assert np.allclose(m @ dec.vectors, dec.vectors * dec.values, atol=1e-9)

    @pytest.mark.parametrize("spvc", [True, False])
    def test_uncoupled_undriven_is_minkowski_sum(self, reference_geometry, spvc):
        mask = GroupMask((0, 0, 0, 0, 0), spvc_eom=spvc)
        m = build_liouvillian(DriveField(0.0, 0.0), reference_geometry, build_coupling_table(reference_geometry, mask))
        single = np.linalg.eigvals(single_atom_generator(0.0, 0.0, spvc=spvc))
        pair = np.add.outer(single, single).reshape(-1)
        assert multiset_distance(eigenvalues(m).values, pair) < 1e-9

    def test_uncoupled_undriven_decay_families(self):
        # optical coherences decay at gamma_pi + gamma_sigma, excited-state
        # populations and coherences at twice that
        single = np.linalg.eigvals(single_atom_generator(0.0, 0.0))
        expected = [0.0] * 4 + [-3.0] * 8 + [-6.0] * 4
        assert multiset_distance(single, expected) < 1e-12

    def test_large_distance_mollow_clusters(self, far_geometry, drive):
        # two independent dressed atoms: shifts at sums of 0 and +-2 Omega
        vals = eigenvalues(build_liouvillian(drive, far_geometry)).values
        centers = np.array([0, 2, -2, 4, -4]) * drive.rabi
        dist = np.min(np.abs(vals.imag[:, None] - centers), axis=1)
        assert dist.max() < 3.0


class TestTimeEvolution:
    def test_zero_time(self, rng):
        m = generator(4, 1, 0.2)
        rho0 = vectorize(random_density(rng))
        assert np.allclose(time_evolve(rho0, 0.0, m), rho0)

    def test_trace_conserved(self, rng):
        m = generator(4, 1, 0.2)
        rho0 = vectorize(random_density(rng))
        assert abs(TRACE_ROW @ time_evolve(rho0, 10.0, m) - 1) < 1e-10

    @pytest.mark.parametrize("t", [0.1, 1.0, 10.0])
    def test_positivity(self, rng, t):
        for p in [(10, 0, 0.04), (6, -14, 0.09, 0.4, 1.0), (2, 3, 1.5)]:
            m = generator(*p)
            rho = time_evolve(random_density(rng), t, m)
            assert np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)).min() >= -1e-8

    def test_negative_time(self):
        with pytest.raises(ValueError):
            time_evolve(np.zeros(256), -1.0, np.zeros((256, 256)))


class TestPartialTrace:
    def test_product_recovery(self, rng):
        a, b = random_density(rng, 4), random_density(rng, 4)
        rho = np.kron(a, b)
        assert np.allclose(partial_trace(rho, 1), a)
        assert np.allclose(partial_trace(vectorize(rho), 2), b)

    @given(p=params)
    def test_trace_one(self, p):
        rho = steady_state(generator(*p))
        for mu in ATOMS:
            assert np.trace(partial_trace(rho, mu)) == pytest.approx(1.0, abs=1e-12)

    def test_intraatomic_couplings_inert_without_partner(self, far_geometry):
        # single-atom physics: cross decay between the pi transitions has no
        # effect on the stationary state once interatomic couplings are off
        f = DriveField(6.0, -14.0)
        pops = []
        for spvc in (True, False):
            table = build_coupling_table(far_geometry, GroupMask((0, 0, 0, 0, 0), spvc_eom=spvc))
            pops.append(partial_trace(steady_state(build_liouvillian(f, far_geometry, table)), 1))
        assert trace_norm(pops[0] - pops[1]) < 1e-12

    def test_bad_atom(self):
        with pytest.raises(ValueError):
            partial_trace(np.eye(16) / 16, 3)
