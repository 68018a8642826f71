import itertools

import numpy as np
import pytest

from qgpe.dla import (
    PauliString,
    ansatz_generators,
    cnot_conjugate,
    lie_closure,
    pauli_commutator,
    sample_cost_variance,
    subdomain_dla_ratio,
)
from qgpe.exceptions import ConfigurationError, DimensionError
from qgpe.grid import default_problem

I2 = np.eye(2)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]])
Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = {"I": I2, "X": X, "Y": Y, "Z": Z}


def dense(label):
    """Dense matrix of a Pauli label; qubit 0 = first character = LSB."""
    mats = [PAULI[ch] for ch in label]
    out = mats[0]
    for m in mats[1:]:
        out = np.kron(m, out)   # higher qubits occupy higher index bits
    return out


def two_qubit_labels():
    return ["".join(p) for p in itertools.product("IXYZ", repeat=2) if "".join(p) != "II"]


class TestPauliString:
    def test_label_round_trip(self):
        for label in two_qubit_labels():
            assert PauliString.from_label(label).label() == label

    def test_identity_rejected(self):
        with pytest.raises(ConfigurationError):
            PauliString.from_label("II")

    def test_mask_bounds(self):
        with pytest.raises(DimensionError):
            PauliString(n=2, x=4, z=0)


class TestCommutator:
    def test_same_string_commutes(self):
        x = PauliString.from_label("X")
        assert pauli_commutator(x, x) is None

    def test_xy_gives_z(self):
        x = PauliString.from_label("X")
        y = PauliString.from_label("Y")
        assert pauli_commutator(x, y).label() == "Z"

    def test_disjoint_supports_commute(self):
        p = PauliString.from_label("XI")
        q = PauliString.from_label("IZ")
        assert pauli_commutator(p, q) is None

    def test_length_mismatch(self):
        with pytest.raises(DimensionError):
            pauli_commutator(PauliString.from_label("X"), PauliString.from_label("XX"))

    def test_against_dense_matrices_all_pairs(self):
        # all 225 ordered pairs of nonidentity 2-qubit strings
        for a in two_qubit_labels():
            for b in two_qubit_labels():
                p, q = PauliString.from_label(a), PauliString.from_label(b)
                comm = dense(a) @ dense(b) - dense(b) @ dense(a)
                result = pauli_commutator(p, q)
                if result is None:
                    assert np.allclose(comm, 0)
                else:
                    # [P,Q] = 2 P Q for anticommuting strings; the spanned
                    # basis element is the product string
                    prod = dense(a) @ dense(b)
                    target = dense(result.label())
                    phase = prod[np.nonzero(target)][0] / target[np.nonzero(target)][0]
                    assert np.allclose(comm, 2 * prod)
                    assert np.allclose(prod, phase * target)
                    assert abs(abs(phase) - 1) < 1e-12


def cnot_matrix(control, target, n=2):
    dim = 1 << n
    M = np.zeros((dim, dim), dtype=complex)
    for j in range(dim):
        jj = j ^ (1 << target) if (j >> control) & 1 else j
        M[jj, j] = 1.0
    return M


class TestCnotConjugate:
    def test_x_control_spreads(self):
        p = PauliString.from_label("XI")
        assert cnot_conjugate(p, 0, 1).label() == "XX"

    def test_z_target_spreads(self):
        p = PauliString.from_label("IZ")
        assert cnot_conjugate(p, 0, 1).label() == "ZZ"

    def test_z_control_unchanged(self):
        p = PauliString.from_label("ZI")
        assert cnot_conjugate(p, 0, 1).label() == "ZI"

    def test_involution(self):
        for label in two_qubit_labels():
            p = PauliString.from_label(label)
            assert cnot_conjugate(cnot_conjugate(p, 0, 1), 0, 1) == p

    def test_against_dense_conjugation(self):
        # all 15 nonidentity strings, both CNOT orientations
        for control, target in [(0, 1), (1, 0)]:
            C = cnot_matrix(control, target)
            for label in two_qubit_labels():
                p = PauliString.from_label(label)
                conj = C @ dense(label) @ C.conj().T
                result = cnot_conjugate(p, control, target)
                target_mat = dense(result.label())
                nz = np.nonzero(target_mat)
                phase = conj[nz][0] / target_mat[nz][0]
                assert np.allclose(conj, phase * target_mat)
                assert abs(abs(phase) - 1) < 1e-12

    def test_index_validation(self):
        p = PauliString.from_label("XI")
        with pytest.raises(DimensionError):
            cnot_conjugate(p, 1, 1)
        with pytest.raises(DimensionError):
            cnot_conjugate(p, 0, 2)


class TestGenerators:
    def test_n2_contains_locals(self):
        gens = ansatz_generators(2)
        labels = {g.label() for g in gens}
        assert {"XI", "ZI", "IX", "IZ"} <= labels
        assert len(gens) <= 8

    def test_all_nonidentity(self):
        for g in ansatz_generators(4):
            assert g.x | g.z != 0

    def test_ring_conjugation_matches_dense(self):
        # conjugate X on qubit 0 through CNOT(0->1) then CNOT(1->0)
        U = cnot_matrix(1, 0) @ cnot_matrix(0, 1)
        conj = U @ dense("XI") @ U.conj().T
        p = PauliString.from_label("XI")
        p = cnot_conjugate(p, 0, 1)
        p = cnot_conjugate(p, 1, 0)
        target = dense(p.label())
        nz = np.nonzero(target)
        phase = conj[nz][0] / target[nz][0]
        assert np.allclose(conj, phase * target)

    def test_small_n_rejected(self):
        with pytest.raises(ConfigurationError):
            ansatz_generators(1)


class TestLieClosure:
    @pytest.mark.parametrize("n,expected", [(2, 15), (3, 63), (4, 255)])
    def test_full_controllability(self, n, expected):
        report = lie_closure(ansatz_generators(n))
        assert report.closure_dimension == expected == 4**n - 1

    def test_single_generator_abelian(self):
        report = lie_closure([PauliString.from_label("XII")])
        assert report.closure_dimension == 1
        assert report.closed_after_rounds == 0

    def test_empty_rejected(self):
        with pytest.raises(ConfigurationError):
            lie_closure([])

    def test_ratio_values(self):
        assert subdomain_dla_ratio(3) == pytest.approx(63 / 15)
        assert subdomain_dla_ratio(4) == pytest.approx(255 / 63)

    def test_ratio_decreases_toward_four(self):
        r3, r4, r5 = subdomain_dla_ratio(3), subdomain_dla_ratio(4), subdomain_dla_ratio(5)
        assert r3 > r4 > r5 > 4.0


class TestVarianceSampler:
    def test_deterministic(self):
        prob = default_problem(4, 1.0)
        a = sample_cost_variance(4, 6, 20, seed=5, prob=prob)
        b = sample_cost_variance(4, 6, 20, seed=5, prob=prob)
        assert a == b

    def test_seed_changes_draws(self):
        prob = default_problem(4, 1.0)
        a = sample_cost_variance(4, 6, 20, seed=5, prob=prob)
        b = sample_cost_variance(4, 6, 20, seed=6, prob=prob)
        assert a != b

    def test_min_samples(self):
        prob = default_problem(4, 1.0)
        with pytest.raises(ConfigurationError):
            sample_cost_variance(4, 6, 1, seed=0, prob=prob)

    def test_constant_objective_zero_variance(self, monkeypatch):
        # force both samples onto the same parameter vector
        import qgpe.dla as dla_mod

        class FixedRng:
            def uniform(self, lo, hi, size):
                return np.ones(size)

        monkeypatch.setattr(dla_mod.np.random, "default_rng", lambda seed: FixedRng())
        prob = default_problem(3, 1.0)
        _, var = sample_cost_variance(3, 2, 2, seed=0, prob=prob)
        assert var == 0.0
