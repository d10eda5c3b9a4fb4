import numpy as np
import pytest
from hypothesis import given, strategies as st

from centerlab.centered import centered_report, is_binormal, max_centered_order
from centerlab.generators import (FAMILIES, OperatorSpec, block_shift_family,
                                  dense_random, direct_sum, identity, jordan,
                                  psd_random, quasinormal, unitary_random,
                                  weighted_shift)
from centerlab.kernel import dagger, fro

from conftest import seeds


class TestWeightedShift:
    def test_examples(self):
        np.testing.assert_array_equal(weighted_shift([1]), [[0, 0], [1, 0]])
        assert not np.any(weighted_shift([0, 0, 0]))

    def test_action_on_basis(self):
        t = weighted_shift([1, 2, 3])
        e = np.eye(4)
        for i, w in enumerate([1, 2, 3]):
            np.testing.assert_array_equal(t @ e[:, i], w * e[:, i + 1])
        assert not np.any(t @ e[:, 3])

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            weighted_shift([1, -1])

    def test_four_centered(self):
        rep = centered_report(weighted_shift([1, 2, 3]), 4)
        assert rep.max_order_definitional == rep.max_order_commutator == 4


class TestBlockShift:
    @pytest.mark.parametrize("n, size", [(1, 8), (3, 12)])
    def test_shape_and_order(self, n, size):
        t = block_shift_family(n)
        assert t.shape == (size, size)
        assert max_centered_order(t, n + 3)[0] == n + 1

    def test_binormal(self):
        assert is_binormal(block_shift_family(1)).holds

    def test_commuting_blocks_rejected(self):
        with pytest.raises(ValueError, match="commute"):
            block_shift_family(1, b=np.eye(2))

    def test_indefinite_block_rejected(self):
        with pytest.raises(ValueError, match="positive definite"):
            block_shift_family(1, a=np.diag([1.0, -1.0]))

    def test_custom_blocks(self):
        a = np.array([[3, 1], [1, 2]], dtype=complex)
        b = np.diag([1.0, 4.0])
        t = block_shift_family(2, a, b)
        assert max_centered_order(t, 5)[0] == 3

    def test_rejects_bad_n(self):
        with pytest.raises(ValueError):
            block_shift_family(0)


class TestRandomFamilies:
    @given(seeds, st.integers(1, 10))
    def test_unitary(self, seed, d):
        w = unitary_random(d, seed)
        assert fro(dagger(w) @ w - np.eye(d)) < 1e-12

    @given(seeds, st.integers(1, 10))
    def test_psd_spectrum(self, seed, d):
        lam = np.linalg.eigvalsh(psd_random(d, seed, (0.5, 2.0)))
        assert lam.min() >= 0.5 - 1e-12 and lam.max() <= 2.0 + 1e-12

    @given(seeds, st.integers(1, 8), st.integers(0, 3))
    def test_quasinormal_is_normal(self, seed, d, z):
        t = quasinormal(d, seed, n_zero=min(z, d))
        assert fro(dagger(t) @ t - t @ dagger(t)) < 1e-12
        assert np.linalg.matrix_rank(t, tol=1e-10) == d - min(z, d)

    def test_quasinormal_six(self):
        assert max_centered_order(quasinormal(6, 42), 6)[0] == 6

    @given(seeds, st.integers(2, 12), st.data())
    def test_dense_rank(self, seed, d, data):
        k = data.draw(st.integers(0, d - 1))
        assert np.linalg.matrix_rank(dense_random(d, seed, k), tol=1e-9) == d - k

    def test_byte_determinism(self):
        for fn in (unitary_random, psd_random, quasinormal, dense_random):
            assert fn(5, 123).tobytes() == fn(5, 123).tobytes()
            assert fn(5, 123).tobytes() != fn(5, 124).tobytes()


class TestMisc:
    def test_jordan(self, jordan2):
        np.testing.assert_array_equal(jordan(2, 1), jordan2)
        assert is_binormal(jordan(2, 1)).fails

    def test_identity(self):
        np.testing.assert_array_equal(identity(3), np.eye(3))
        with pytest.raises(ValueError):
            identity(0)

    def test_direct_sum_order(self):
        t = direct_sum(np.eye(2), weighted_shift([1, 2]))
        assert t.shape == (5, 5)
        assert max_centered_order(t, 4)[0] >= 3

    def test_direct_sum_takes_minimum(self):
        t = direct_sum(block_shift_family(1), block_shift_family(2))
        assert max_centered_order(t, 5)[0] == 2


class TestOperatorSpec:
    def test_unknown_family(self):
        with pytest.raises(ValueError):
            OperatorSpec("nope")

    @pytest.mark.parametrize("spec", [
        OperatorSpec("identity", {"d": 3}),
        OperatorSpec("unitary_random", {"d": 3}, seed=5),
        OperatorSpec("psd_random", {"d": 3, "eig_range": [1, 2]}, seed=5),
        OperatorSpec("quasinormal", {"d": 3, "n_zero": 1}, seed=5),
        OperatorSpec("weighted_shift", {"weights": [1, 2]}),
        OperatorSpec("block_shift", {"n": 1, "a": [[[2, 0], [1, 0]], [[1, 0], [1, 0]]],
                                     "b": [[[1, 0], [0, 0]], [[0, 0], [2, 0]]]}),
        OperatorSpec("jordan", {"d": 3, "eigenvalue": [0.5, 0.5]}),
        OperatorSpec("direct_sum", {"parts": [{"family": "identity", "params": {"d": 1}},
                                              {"family": "jordan", "params": {"d": 2}}]}),
        OperatorSpec("dense_random", {"d": 4, "rank_deficit": 1}, seed=5),
    ])
    def test_json_roundtrip_is_bitwise(self, spec):
        back = OperatorSpec.from_json(spec.to_json())
        assert back == spec
        assert back.build().tobytes() == spec.build().tobytes()

    def test_covers_every_family(self):
        assert set(FAMILIES) == {"identity", "unitary_random", "psd_random", "quasinormal",
                                 "weighted_shift", "block_shift", "jordan", "direct_sum",
                                 "dense_random"}

    def test_name(self):
        assert OperatorSpec("identity", {"d": 2}).name == "identity(d=2)"
        assert "seed=3" in OperatorSpec("dense_random", {"d": 2}, seed=3).name
