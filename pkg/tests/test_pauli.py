"""Tests for Pauli strings, commutativity, grouping, and basis rotations."""
import numpy as np
import pytest

from shotvqe.gates import H, I2, SDG, X, Y, Z, ops_to_unitary
from shotvqe.pauli import (
    Clique,
    PauliString,
    WeightedPauli,
    basis_rotation,
    group_into_cliques,
    parse,
    pauli_eigenvalue,
    qubitwise_commute,
    render,
)

_MATS = {"I": I2, "X": X, "Y": Y, "Z": Z}


def kron_label(label):
    out = np.array([[1.0 + 0j]])
    for ch in label:
        out = np.kron(out, _MATS[ch])
    return out


def wp(label, coeff=1.0):
    return WeightedPauli(PauliString(label), coeff)


class TestPauliString:
    def test_round_trip(self):
        for label in ("ZZII", "IXYZ", "I", "YY"):
            assert parse(render(PauliString(label))) == PauliString(label)

    def test_factor_indexing(self):
        p = PauliString("ZXIY")  # qubit 3 leftmost
        assert p.factor(0) == "Y"
        assert p.factor(1) == "I"
        assert p.factor(2) == "X"
        assert p.factor(3) == "Z"

    def test_rejects_bad_labels(self):
        with pytest.raises(ValueError):
            PauliString("ZQ")
        with pytest.raises(ValueError):
            PauliString("")

    def test_z_pattern(self):
        assert PauliString("XYZI").z_pattern() == PauliString("ZZZI")


class TestPauliEigenvalue:
    @pytest.mark.parametrize("label,outcome,expected", [
        ("ZZ", "01", -1),   # one Z position measures 1
        ("IZ", "10", +1),   # the Z position (qubit 0) measures 0
        ("ZZ", "11", +1),   # even parity
        ("ZIII", "1000", -1),
        ("IIII", "1111", +1),
    ])
    def test_examples(self, label, outcome, expected):
        assert pauli_eigenvalue(PauliString(label), outcome) == expected

    def test_rejects_unrotated_strings(self):
        with pytest.raises(ValueError):
            pauli_eigenvalue(PauliString("XZ"), "00")
        with pytest.raises(ValueError):
            pauli_eigenvalue(PauliString("ZY"), "00")

    def test_rejects_length_mismatch(self):
        with pytest.raises(ValueError):
            pauli_eigenvalue(PauliString("ZZ"), "001")

    def test_parity_additivity(self):
        rng = np.random.default_rng(5)
        for _ in range(200):
            k = int(rng.integers(1, 6))
            a = "".join(rng.choice(["I", "Z"], size=k))
            b = "".join(rng.choice(["I", "Z"], size=k))
            bits = "".join(rng.choice(["0", "1"], size=k))
            prod = "".join("Z" if (ca == "Z") != (cb == "Z") else "I"
                           for ca, cb in zip(a, b))
            lhs = (pauli_eigenvalue(PauliString(a), bits)
                   * pauli_eigenvalue(PauliString(b), bits))
            assert lhs == pauli_eigenvalue(PauliString(prod), bits)


class TestQubitwiseCommute:
    @pytest.mark.parametrize("a,b,expected", [
        ("ZI", "ZZ", True),
        ("XX", "ZZ", False),  # globally commuting but not qubit-wise
        ("II", "YX", True),
        ("XZXI", "XZXZ", True),
        ("XY", "YX", False),
    ])
    def test_examples(self, a, b, expected):
        assert qubitwise_commute(PauliString(a), PauliString(b)) is expected

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            qubitwise_commute(PauliString("Z"), PauliString("ZZ"))

    def test_symmetric_and_reflexive(self):
        rng = np.random.default_rng(11)
        strings = ["".join(rng.choice(list("IXYZ"), size=4)) for _ in range(40)]
        for a in strings:
            assert qubitwise_commute(PauliString(a), PauliString(a))
            for b in strings:
                assert (qubitwise_commute(PauliString(a), PauliString(b))
                        == qubitwise_commute(PauliString(b), PauliString(a)))


# flattened clique listing for the 4-qubit molecule, grouped-order input
LIH_LISTING = [
    "IIIZ", "IIZZ", "IIZI", "IZIZ", "IZZI", "IZII", "ZZII", "ZIZI", "ZIIZ", "ZIII",
    "IYIY", "IYZY", "ZYZY",
    "IXIX", "IXZX", "ZXZX",
    "YIYI", "YZYZ", "YZYI",
    "XIXI", "XZXZ", "XZXI",
    "XXYY", "YYXX", "YXXY", "XYYX",
]


class TestGrouping:
    def test_h2_terms_make_three_cliques(self):
        terms = [wp("IZ", 0.1615), wp("ZI", -0.0166), wp("ZZ", 0.4148),
                 wp("YY", 0.1226), wp("XX", 0.1226)]
        cliques = group_into_cliques(terms)
        assert [len(c.members) for c in cliques] == [3, 1, 1]
        assert cliques[0].measured_basis == PauliString("ZZ")
        assert cliques[1].measured_basis == PauliString("YY")
        assert cliques[2].measured_basis == PauliString("XX")

    def test_lih_listing_order_reproduces_nine_cliques(self):
        cliques = group_into_cliques([wp(lab) for lab in LIH_LISTING])
        sizes = [len(c.members) for c in cliques]
        assert sizes == [10, 3, 3, 3, 3, 1, 1, 1, 1]
        assert {m.string.label for m in cliques[0].members} == set(LIH_LISTING[:10])
        assert {m.string.label for m in cliques[1].members} == {"IYIY", "IYZY", "ZYZY"}

    def test_single_term(self):
        cliques = group_into_cliques([wp("XY")])
        assert len(cliques) == 1 and len(cliques[0].members) == 1

    def test_partition_property(self):
        rng = np.random.default_rng(23)
        for _ in range(30):
            labels = ["".join(rng.choice(list("IXYZ"), size=3)) for _ in range(12)]
            labels = [lab for lab in labels if set(lab) != {"I"}]
            terms = [wp(lab, float(rng.normal())) for lab in labels]
            cliques = group_into_cliques(terms)
            regrouped = [m for c in cliques for m in c.members]
            assert sorted(id(t) for t in regrouped) == sorted(id(t) for t in terms)
            for c in cliques:
                for a in c.members:
                    for b in c.members:
                        assert qubitwise_commute(a.string, b.string)


class TestCliqueInvariants:
    def test_measured_basis(self):
        clique = Clique((wp("IYIY"), wp("IYZY"), wp("ZYZY")))
        assert clique.measured_basis == PauliString("ZYZY")

    def test_rejects_non_commuting_members(self):
        with pytest.raises(ValueError):
            Clique((wp("XX"), wp("ZZ")))

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            Clique(())


class TestBasisRotation:
    def test_yy_clique(self):
        ops = basis_rotation(Clique((wp("YY"),)))
        assert [(op.kind, op.qubits[0]) for op in ops] == [
            ("sdg", 1), ("h", 1), ("sdg", 0), ("h", 0)]

    def test_z_clique_is_empty(self):
        clique = Clique((wp("ZZ"), wp("IZ")))
        assert basis_rotation(clique) == []

    def test_xxyy_clique(self):
        ops = basis_rotation(Clique((wp("XXYY"),)))
        assert [(op.kind, op.qubits[0]) for op in ops] == [
            ("h", 3), ("h", 2), ("sdg", 1), ("h", 1), ("sdg", 0), ("h", 0)]

    def test_rotation_maps_members_to_z_patterns(self):
        # U P U^dag must equal the member's Z-pattern for every built-in clique
        from shotvqe.hamiltonian import builtin

        for name in ("h2", "lih"):
            h = builtin(name)
            for clique in h.cliques:
                u = ops_to_unitary(basis_rotation(clique), h.qubits)
                for member in clique.members:
                    lhs = u @ kron_label(member.string.label) @ u.conj().T
                    rhs = kron_label(member.string.z_pattern().label)
                    assert np.max(np.abs(lhs - rhs)) < 1e-12


# measurement-transformation table: per-qubit unitaries (I, H, or H Sdg)
# conjugate the Z-pattern back into the original term
ROTATION_TABLE = [
    ("IZ", "II"), ("ZI", "II"), ("ZZ", "II"),
    ("YY", "YY"), ("XX", "XX"),
    ("IYIY", "IYIY"), ("IXIX", "IXIX"),
    ("YIYI", "YIYI"), ("XIXI", "XIXI"),
    ("XXYY", "XXYY"), ("YYXX", "YYXX"), ("YXXY", "YXXY"), ("XYYX", "XYYX"),
]


class TestRotationTable:
    @pytest.mark.parametrize("term,basis", ROTATION_TABLE)
    def test_matrix_identity(self, term, basis):
        per_qubit = {"I": I2, "Z": I2, "X": H, "Y": H @ SDG}
        u = np.array([[1.0 + 0j]])
        for ch in basis:
            u = np.kron(u, per_qubit[ch])
        z_pattern = kron_label(PauliString(term).z_pattern().label)
        reconstructed = u.conj().T @ z_pattern @ u
        assert np.max(np.abs(reconstructed - kron_label(term))) < 1e-12
