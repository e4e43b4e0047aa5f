"""
Unit tests for Lie closure, decomposition, Cartan subalgebras and manifests
"""
import json

import numpy as np

import pytest

from lie_plateau.core.dla import (
    augment_with_coherent_errors,
    bracket,
    cartan_subalgebra,
    decompose,
    from_manifest,
    lie_closure,
    load_manifest,
    reconstruction_residual,
    save_manifest,
    spans_equal,
    to_manifest,
    vector_from_pauli,
    verify_decomposition,
)
from lie_plateau.core.exceptions import (
    ConfigError,
    InvalidParameterError,
    NonHermitianError,
    TruncatedDlaError,
)
from lie_plateau.core.pauli import (
    HermitianOp,
    hardware_efficient_generators,
    parse_pauli,
    single_qubit_generators,
    tfim_generators,
)


class TestLieClosure:
    """Tests for the closure worklist"""

    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_tfim_dimension(self, n):
        """Test that the Ising chain closes to so(2n)"""
        basis = lie_closure(tfim_generators(n))
        assert basis.dim == n * (2 * n - 1)
        assert not basis.truncated

    def test_single_qubit_dimension(self):
        """Test that local X, Y generators close to su(2) on every qubit"""
        assert lie_closure(single_qubit_generators(4)).dim == 12

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_hardware_efficient_dimension(self, n):
        """Test that local X, Y plus Z Z entanglers are controllable, dim = 4^n - 1"""
        assert lie_closure(hardware_efficient_generators(n)).dim == 4 ** n - 1

    def test_basis_is_orthonormal_and_closed(self):
        """Test that brackets of basis elements stay in the span"""
        basis = lie_closure(tfim_generators(3))
        gram = basis.gram_matrix()
        assert np.abs(gram - np.eye(basis.dim)).max() < 1e-9
        for a in basis.vectors:
            for b in basis.vectors:
                image = bracket(a, b, basis.n)
                if image:
                    assert basis.projection_residual(image) < 1e-8

    def test_generators_recorded(self):
        """Test that every generator is in the basis"""
        basis = lie_closure(tfim_generators(3))
        assert len(basis.generator_indices) == 5
        for pauli in tfim_generators(3):
            assert basis.contains(vector_from_pauli(pauli), 1e-9)

    def test_string_generators(self):
        """Test that Pauli text is accepted directly"""
        assert lie_closure(["XX", "ZI", "IZ"]).dim == 6

    def test_general_hermitian_generators(self):
        """Test closure of summed operators through Gram-Schmidt"""
        fields = HermitianOp.from_terms([(1.0, "ZI"), (1.0, "IZ")])
        xx = HermitianOp.from_terms([(1.0, "XX")])
        # span{ZI+IZ, XX, XY+YX, YY}
        basis = lie_closure([fields, xx])
        assert basis.dim == 4
        assert not basis.truncated

    def test_duplicate_generators(self):
        """Test that repeated generators do not inflate the basis"""
        assert lie_closure(["XX", "XX", "-XX", "ZI", "IZ"]).dim == 6

    def test_non_hermitian_generator(self):
        """Test that i*X is rejected"""
        with pytest.raises(NonHermitianError):
            lie_closure(["iX"])

    def test_truncation(self):
        """Test that the cap stops the closure and flags it"""
        basis = lie_closure(tfim_generators(3), dim_cap=8)
        assert basis.truncated
        assert basis.dim <= 8

    def test_cap_below_generator_count(self):
        """Test that a cap smaller than the generator set is invalid"""
        with pytest.raises(InvalidParameterError):
            lie_closure(tfim_generators(3), dim_cap=2)

    def test_coherent_errors_enlarge_algebra(self):
        """Test that a Y error on one qubit breaks so(4) up to su(4)"""
        basis = augment_with_coherent_errors(tfim_generators(2), [parse_pauli("YI")])
        assert basis.base_dim == 6
        assert basis.dim == 15

    def test_no_coherent_errors(self):
        """Test that an empty error list returns the plain closure"""
        basis = augment_with_coherent_errors(tfim_generators(2), [])
        assert basis.dim == 6
        assert basis.base_dim is None


class TestDecomposition:
    """Tests for the center / simple-ideal split"""

    def test_tfim_is_simple(self, tfim3_decomposition):
        """Test that so(6) is one simple ideal with no center"""
        assert tfim3_decomposition.dims == [15]
        assert tfim3_decomposition.center.dim == 0
        assert tfim3_decomposition.is_simple

    def test_so4_splits(self, tfim2_decomposition):
        """Test that so(4) splits into two su(2) ideals"""
        assert tfim2_decomposition.dims == [3, 3]
        assert tfim2_decomposition.center.dim == 0
        assert not tfim2_decomposition.is_simple

    def test_local_su2(self, local_su2_decomposition):
        """Test one su(2) ideal per qubit"""
        assert local_su2_decomposition.dims == [3, 3, 3]

    def test_full_algebra_shortcut(self, su4_decomposition):
        """Test that su(4) is recognized without the commutant search"""
        assert su4_decomposition.method == "full-algebra"
        assert su4_decomposition.dims == [15]
        assert su4_decomposition.center.dim == 0

    def test_abelian_algebra_is_all_center(self):
        """Test that commuting generators give only a center"""
        decomposition = decompose(lie_closure(["ZI", "IZ", "ZZ"]), seed=0)
        assert decomposition.center.dim == 3
        assert decomposition.ideals == []

    def test_center_with_ideals(self):
        """Test that u(1) + su(2) keeps the center apart"""
        decomposition = decompose(lie_closure(["XI", "YI", "IZ"]), seed=0)
        assert decomposition.center.dim == 1
        assert decomposition.dims == [3]

    @pytest.mark.parametrize("method", ["commutant", "peeling"])
    def test_methods_agree(self, method):
        """Test that both splitting methods find the same ideals"""
        basis = lie_closure(tfim_generators(2))
        decomposition = decompose(basis, method=method, seed=1)
        assert decomposition.dims == [3, 3]

    def test_unknown_method(self):
        """Test that an unknown method name is rejected"""
        with pytest.raises(InvalidParameterError):
            decompose(lie_closure(tfim_generators(2)), method="magic")

    def test_truncated_basis_rejected(self):
        """Test that decomposition refuses a truncated closure"""
        basis = lie_closure(tfim_generators(3), dim_cap=8)
        with pytest.raises(TruncatedDlaError):
            decompose(basis)

    @pytest.mark.parametrize(
        "fixture_name",
        ["tfim2_decomposition", "tfim3_decomposition", "local_su2_decomposition", "su4_decomposition"],
    )
    def test_structural_residuals(self, fixture_name, request):
        """Test closure, orthogonality of ideals and reconstruction"""
        decomposition = request.getfixturevalue(fixture_name)
        report = verify_decomposition(decomposition)
        assert report["dim_mismatch"] == 0
        assert report["closure"] < 1e-8
        assert report["cross_ideal"] < 1e-8
        assert report["center_commutation"] < 1e-8
        assert report["orthonormality"] < 1e-8
        assert reconstruction_residual(decomposition) < 1e-8

    def test_spans_equal(self):
        """Test that generator order does not change the span"""
        a = lie_closure(tfim_generators(3))
        b = lie_closure(list(reversed(tfim_generators(3))))
        assert spans_equal(a, b)
        assert not spans_equal(a, lie_closure(single_qubit_generators(3)))


class TestCartan:
    """Tests for maximal abelian subalgebras"""

    def test_tfim_rank(self, tfim3_decomposition):
        """Test that so(6) has rank 3"""
        assert cartan_subalgebra(tfim3_decomposition.ideals[0], seed=0).rank == 3

    def test_su2_rank(self, local_su2_decomposition):
        """Test that su(2) has rank 1"""
        assert cartan_subalgebra(local_su2_decomposition.ideals[0], seed=0).rank == 1

    def test_so4_rank(self, tfim2_decomposition):
        """Test that so(4) has rank 2"""
        assert cartan_subalgebra(tfim2_decomposition.full, seed=0).rank == 2

    def test_elements_commute(self, tfim3_decomposition):
        """Test that Cartan elements pairwise commute"""
        cartan = cartan_subalgebra(tfim3_decomposition.ideals[0], seed=0)
        vectors = cartan.elements.vectors
        for a in vectors:
            for b in vectors:
                image = bracket(a, b, 3)
                assert sum(v * v for v in image.values()) < 1e-16

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_rotated_basis_grows_to_full_rank(self, tfim3_decomposition, seed):
        """Test that a randomly rotated so(6) basis still reaches rank 3 with orthonormal elements"""
        full = tfim3_decomposition.full
        rotation, _ = np.linalg.qr(np.random.default_rng(seed).standard_normal((full.dim, full.dim)))
        rotated = full.sub_basis(rotation, "rotated")
        cartan = cartan_subalgebra(rotated, seed=seed)
        assert cartan.rank == 3
        np.testing.assert_allclose(cartan.elements.gram_matrix(), np.eye(3), atol=1e-9)
        vectors = cartan.elements.vectors
        for a in vectors:
            for b in vectors:
                image = bracket(a, b, 3)
                assert sum(v * v for v in image.values()) < 1e-16

    def test_truncated_rejected(self):
        """Test that a truncated component is refused"""
        with pytest.raises(TruncatedDlaError):
            cartan_subalgebra(lie_closure(tfim_generators(3), dim_cap=8))


class TestManifest:
    """Tests for DLA manifests on disk"""

    def test_dict_round_trip(self, tfim2_decomposition):
        """Test that center, ideals and generators survive to_manifest / from_manifest"""
        manifest = to_manifest(tfim2_decomposition.full, tfim2_decomposition)
        basis, decomposition = from_manifest(json.loads(json.dumps(manifest)))
        assert basis.dim == 6
        assert decomposition.dims == [3, 3]
        assert spans_equal(basis, tfim2_decomposition.full)
        assert spans_equal(decomposition.ideals[0], tfim2_decomposition.ideals[0])

    def test_closure_only(self):
        """Test a manifest without decomposition"""
        basis = lie_closure(tfim_generators(2))
        loaded, decomposition = from_manifest(to_manifest(basis))
        assert decomposition is None
        assert loaded.dim == basis.dim

    def test_save_load(self, tfim3_decomposition, temp_dir):
        """Test writing and reading a manifest file"""
        path = save_manifest(f"{temp_dir}/dla.json", tfim3_decomposition.full, tfim3_decomposition)
        basis, decomposition = load_manifest(path)
        assert basis.dim == 15
        assert decomposition.dims == [15]

    def test_wrong_format(self):
        """Test that a foreign JSON document is refused"""
        with pytest.raises(ConfigError):
            from_manifest({"format": "something-else"})

    def test_missing_field(self, tfim2_decomposition):
        """Test that a manifest without a basis is refused"""
        manifest = to_manifest(tfim2_decomposition.full)
        del manifest["basis"]
        with pytest.raises(ConfigError):
            from_manifest(manifest)

    def test_unreadable_file(self, temp_dir):
        """Test that broken JSON raises ConfigError"""
        path = f"{temp_dir}/broken.json"
        with open(path, "w") as f:
            f.write("{not json")
        with pytest.raises(ConfigError):
            load_manifest(path)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
