"""
Unit tests for Pauli string algebra and Hermitian operators
"""
import numpy as np
import pytest
from hypothesis import given, settings as hypothesis_settings, strategies as st

from lie_plateau.core.exceptions import (
    DimensionMismatchError,
    NonHermitianError,
    PauliParseError,
)
from lie_plateau.core.pauli import (
    HermitianOp,
    PauliString,
    commutator,
    hs_inner,
    jordan_wigner_string,
    multiply,
    parse_pauli,
    pauli_action,
    single_qubit_generators,
    tfim_generators,
)


@st.composite
def pauli_pairs(draw, max_n=8):
    n = draw(st.integers(min_value=1, max_value=max_n))
    top = (1 << n) - 1

    def one():
        return PauliString(
            n,
            draw(st.integers(min_value=0, max_value=top)),
            draw(st.integers(min_value=0, max_value=top)),
            draw(st.integers(min_value=0, max_value=3)),
        )

    return one(), one()


class TestParsePauli:
    """Tests for the Pauli string grammar"""

    def test_letters_and_positions(self):
        """Test that qubit 0 is the leftmost letter"""
        p = parse_pauli("XYZI")
        assert p.n == 4
        assert p.letters == "XYZI"
        assert p.letter(0) == "X"
        assert p.letter(2) == "Z"

    def test_sign_and_phase_tokens(self):
        """Test that -, i and -i prefixes set the phase"""
        assert parse_pauli("-XZ").phase == 2
        assert parse_pauli("iXZ").phase == 1
        assert parse_pauli("-iXZ").phase == 3

    def test_uppercase_i_is_identity(self):
        """Test that a leading uppercase I is a qubit, not a phase"""
        p = parse_pauli("IXZ")
        assert p.n == 3
        assert p.phase == 0

    def test_lowercase_letters(self):
        """Test that letters are case-insensitive"""
        assert parse_pauli("xyz") == parse_pauli("XYZ")

    def test_invalid_character(self):
        """Test that unknown letters raise PauliParseError"""
        with pytest.raises(PauliParseError):
            parse_pauli("XQZ")

    def test_empty_string(self):
        """Test that an empty string is rejected"""
        with pytest.raises(PauliParseError):
            parse_pauli("")

    def test_length_mismatch(self):
        """Test that an explicit n is enforced"""
        with pytest.raises(PauliParseError):
            parse_pauli("XYZ", n=2)

    def test_str_round_trip(self):
        """Test that str() gives back parseable text"""
        for text in ("XYZ", "-IZX", "iYY", "-iZ"):
            assert str(parse_pauli(text)) == text


class TestPauliAlgebra:
    """Tests for products and commutators against dense matrices"""

    def test_single_qubit_products(self):
        """Test that XY = iZ and YX = -iZ"""
        x, y, z = parse_pauli("X"), parse_pauli("Y"), parse_pauli("Z")
        assert multiply(x, y) == PauliString(1, z.x_bits, z.z_bits, 1)
        assert multiply(y, x) == PauliString(1, z.x_bits, z.z_bits, 3)

    @hypothesis_settings(max_examples=300, deadline=None)
    @given(pauli_pairs())
    def test_product_matches_matrices(self, pair):
        """Test that the symplectic product equals the dense product"""
        p, q = pair
        np.testing.assert_allclose(multiply(p, q).to_matrix(), p.to_matrix() @ q.to_matrix(), atol=1e-12)

    @hypothesis_settings(max_examples=300, deadline=None)
    @given(pauli_pairs())
    def test_commutator_matches_matrices(self, pair):
        """Test that [P, Q] is None exactly when the matrices commute, and correct otherwise"""
        p, q = pair
        pm, qm = p.to_matrix(), q.to_matrix()
        expected = pm @ qm - qm @ pm
        result = commutator(p, q)
        if result is None:
            assert np.allclose(expected, 0)
            assert p.commutes_with(q)
        else:
            coeff, r = result
            np.testing.assert_allclose(coeff * r.to_matrix(), expected, atol=1e-12)
            assert not p.commutes_with(q)

    @hypothesis_settings(max_examples=100, deadline=None)
    @given(pauli_pairs(max_n=6), st.integers(min_value=0, max_value=2 ** 31))
    def test_pauli_action_matches_matrix(self, pair, seed):
        """Test that the gather form applies the phaseless string"""
        p, _ = pair
        rng = np.random.default_rng(seed)
        psi = rng.standard_normal(1 << p.n) + 1j * rng.standard_normal(1 << p.n)
        perm, phase = pauli_action(p.n, p.x_bits, p.z_bits)
        np.testing.assert_allclose(phase * psi[perm], p.phaseless().to_matrix() @ psi, atol=1e-10)

    def test_mismatched_sizes(self):
        """Test that strings on different qubit counts cannot be multiplied"""
        with pytest.raises(DimensionMismatchError):
            multiply(parse_pauli("XX"), parse_pauli("X"))

    def test_weight_and_flags(self):
        """Test weight, identity and diagonal flags"""
        p = parse_pauli("XIZY")
        assert p.weight == 3
        assert not p.is_identity
        assert parse_pauli("ZIZ").is_diagonal
        assert PauliString.identity(3).is_identity


class TestHermitianOp:
    """Tests for real Pauli expansions"""

    def test_non_hermitian_term_rejected(self):
        """Test that i*X is not a valid Hermitian term"""
        with pytest.raises(NonHermitianError):
            HermitianOp.from_terms([(1.0, "iX")])

    def test_traces_and_norms(self):
        """Test trace, Tr[H^2] and the trace norm of a single string"""
        op = HermitianOp.from_terms([(2.0, "II"), (0.5, "XZ")])
        assert op.trace() == pytest.approx(8.0)
        assert op.hs_norm_sq() == pytest.approx(4 * (4.0 + 0.25))
        assert HermitianOp.from_pauli("ZII").trace_norm() == pytest.approx(8.0)

    def test_dense_round_trip(self):
        """Test that dense and term forms agree on Pauli traces"""
        op = HermitianOp.from_terms([(0.3, "XY"), (-1.2, "ZZ"), (0.7, "IX")])
        dense = HermitianOp.from_dense(op.to_dense())
        for coeff, pauli in op.terms:
            assert dense.pauli_trace(pauli.x_bits, pauli.z_bits) == pytest.approx(4 * coeff)
        assert hs_inner(op, op) == pytest.approx(op.hs_norm_sq())

    def test_arithmetic(self):
        """Test that +, - and scalar * act on coefficients"""
        a = HermitianOp.from_pauli("XX")
        b = HermitianOp.from_pauli("ZI", 2.0)
        combined = 3 * a - b
        assert combined.coefficients() == {
            parse_pauli("XX").key: 3.0,
            parse_pauli("ZI").key: -2.0,
        }
        assert (a - a).coefficients() == {}

    def test_sign_folded_into_coefficient(self):
        """Test that -Z becomes coefficient -1 on Z"""
        op = HermitianOp.from_pauli("-Z")
        assert op.coefficients() == {parse_pauli("Z").key: -1.0}

    def test_dict_round_trip(self):
        """Test to_dict / from_dict"""
        op = HermitianOp.from_terms([(0.25, "XYZ"), (1.5, "ZZI")])
        assert HermitianOp.from_dict(op.to_dict()).allclose(op)


class TestFamilies:
    """Tests for the named generator sets"""

    def test_tfim_generators(self):
        """Test couplings first, then fields"""
        assert [str(g) for g in tfim_generators(3)] == ["XXI", "IXX", "ZII", "IZI", "IIZ"]

    def test_single_qubit_generators(self):
        """Test X and Y on every qubit"""
        assert [str(g) for g in single_qubit_generators(2)] == ["XI", "YI", "IX", "IY"]

    def test_jordan_wigner_string(self):
        """Test the Z tail between the end letters"""
        assert str(jordan_wigner_string(4, 0, 3)) == "XZZY"
        assert str(jordan_wigner_string(4, 1, 2, "Y", "X")) == "IYXI"


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
