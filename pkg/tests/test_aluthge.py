import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, strategies as st

from centerlab.aluthge import (COLLAPSE_FLOOR, DEFAULT_GRID, AluthgeParams,
                               aluthge_modulus_closed_forms, aluthge_transform,
                               check_lemma_4_1, check_lemma_4_4,
                               check_u_tilde_power, iterated_aluthge, u_tilde,
                               u_tilde_chain)
from centerlab.centered import is_binormal
from centerlab.generators import (block_shift_family, dense_random, psd_random,
                                  unitary_random, weighted_shift)
from centerlab.kernel import Value, fro, psd_power
from centerlab.polar import polar_decompose

from conftest import grid_values, random_matrices

SMALL_GRID = [(0.5, 0.5), (0.3, 2.0), (1.0, 1.0)]


class TestParams:
    @pytest.mark.parametrize("a, b", [(0, 1), (1, -1), (-0.5, 0.5)])
    def test_rejects_nonpositive(self, a, b):
        with pytest.raises(ValueError):
            AluthgeParams(a, b)

    def test_default_grid(self):
        assert len(DEFAULT_GRID) == 16
        assert (0.3, 2.0) in DEFAULT_GRID and (2.0, 0.3) in DEFAULT_GRID


class TestTransform:
    @pytest.mark.parametrize("p", SMALL_GRID)
    def test_positive_case(self, p):
        t = psd_random(5, 3)
        np.testing.assert_allclose(aluthge_transform(t, p), psd_power(t, sum(p)), atol=1e-12)

    @pytest.mark.parametrize("p", SMALL_GRID)
    def test_unitary_fixed(self, p):
        w = unitary_random(4, 2)
        np.testing.assert_allclose(aluthge_transform(w, p), w, atol=1e-12)

    def test_nilpotent_vanishes(self, nilpotent2):
        assert fro(aluthge_transform(nilpotent2, (1, 1))) < 1e-15

    @given(random_matrices(allow_deficient=False))
    def test_classical_against_independent_code(self, t):
        u, p = scipy.linalg.polar(t)
        root = scipy.linalg.sqrtm(p)
        ref = root @ u @ root
        assert fro(aluthge_transform(t) - ref) <= 1e-8 * (1 + fro(t)) * np.linalg.cond(t)

    @given(random_matrices(), grid_values, grid_values, st.floats(0.1, 10))
    def test_homogeneous(self, t, a, b, c):
        lhs = aluthge_transform(c * t, (a, b))
        rhs = c ** (a + b) * aluthge_transform(t, (a, b))
        assert fro(lhs - rhs) <= 1e-9 * (1 + fro(rhs))


class TestUTilde:
    def test_unitary(self):
        w = unitary_random(5, 4)
        np.testing.assert_allclose(u_tilde(w), w, atol=1e-13)

    def test_nilpotent(self):
        assert not np.any(u_tilde([[0, 1], [0, 0]]))

    def test_block_down_shift(self):
        u = np.kron(np.eye(3, k=-1), np.eye(2))
        np.testing.assert_array_equal(u_tilde(u), u.T @ u @ u)
        assert check_u_tilde_power(u, 6).holds

    def test_power_identity_examples(self):
        assert check_u_tilde_power(np.eye(3), 6).holds
        assert check_u_tilde_power(np.array([[0, 1], [0, 0]]), 2).holds

    @given(random_matrices(dim_max=32), st.integers(1, 6))
    def test_power_identity_on_polar_factors(self, t, n):
        assert check_u_tilde_power(polar_decompose(t).u, n).holds

    def test_non_partial_isometry_is_informational(self):
        v = check_u_tilde_power(2 * np.eye(2), 2)
        assert not v.decisive and "informational" in v.note

    def test_chain_recursion(self):
        u = polar_decompose(dense_random(6, 3)).u
        chain = u_tilde_chain(u, 3)
        assert len(chain) == 4
        np.testing.assert_array_equal(chain[0], u)
        np.testing.assert_allclose(chain[2], u_tilde(u_tilde(u)))


class TestClosedForms:
    @pytest.mark.parametrize("p", SMALL_GRID)
    def test_positive_case(self, p):
        t = psd_random(4, 8)
        cf = aluthge_modulus_closed_forms(t, p)
        for m in (cf.direct, cf.formula_m, cf.formula_mstar):
            np.testing.assert_allclose(m, psd_power(t, sum(p)), atol=1e-11)

    @pytest.mark.parametrize("p", DEFAULT_GRID)
    def test_binormal_block_shift(self, p):
        cf = aluthge_modulus_closed_forms(block_shift_family(1), p)
        assert cf.required and cf.verdict.holds

    def test_jordan_only_recorded(self, jordan2):
        cf = aluthge_modulus_closed_forms(jordan2, (0.5, 0.5))
        assert not cf.required and cf.binormal.fails
        assert cf.verdict.value in tuple(Value)


class TestIteratedAluthge:
    def test_identity_fixed_point(self):
        chain = iterated_aluthge(np.eye(3), (2, 2), 4)
        assert len(chain.steps) == 5 and chain.reliable
        for s in chain.steps:
            np.testing.assert_allclose(chain.true_step(s.k), np.eye(3), atol=1e-12)

    def test_unitary_fixed_point(self):
        w = unitary_random(4, 6)
        chain = iterated_aluthge(w, (0.3, 1.0), 3)
        for k in range(4):
            np.testing.assert_allclose(chain.true_step(k), w, atol=1e-11)

    def test_closed_forms_along_block_shift_chain(self):
        chain = iterated_aluthge(block_shift_family(2), (0.5, 0.5), 2)
        checked = 0
        for s in chain.steps:
            if is_binormal(s.t).holds and not s.collapsed:
                assert aluthge_modulus_closed_forms(s.t, (0.5, 0.5), pf=s.polar).verdict.holds
                checked += 1
        assert checked >= 2

    @given(random_matrices(dim_max=8), grid_values, grid_values)
    def test_normalization_is_transparent(self, t, a, b):
        plain = iterated_aluthge(t, (a, b), 2, normalize=False)
        scaled = iterated_aluthge(t, (a, b), 2)
        for k in range(3):
            ref = plain.steps[k].t
            assert fro(scaled.true_step(k) - ref) <= 1e-8 * (1 + fro(ref))

    def test_steps_follow_definition(self):
        t = dense_random(5, 9)
        chain = iterated_aluthge(t, (0.5, 1.0), 3)
        for k in range(3):
            nxt = aluthge_transform(chain.steps[k].t, (0.5, 1.0))
            scale = np.linalg.norm(chain.steps[k].t, 2) ** 1.5
            np.testing.assert_allclose(chain.steps[k + 1].t * scale, nxt, atol=1e-12)

    def test_nilpotent_collapses(self):
        chain = iterated_aluthge(weighted_shift([1, 2, 3]), (1, 1), 5)
        assert chain.collapsed_at is not None
        assert all(s.collapsed for s in chain.steps[chain.collapsed_at:])
        assert chain.reliable
        assert COLLAPSE_FLOOR == 1e-13

    def test_deep_chain_flags_ill_conditioning(self):
        chain = iterated_aluthge(psd_random(5, 2, (0.5, 2.0)), (2, 2), 4)
        assert not chain.reliable
        assert any("condition number" in s.note or "rank" in s.note for s in chain.steps)

    def test_rejects_negative_depth(self):
        with pytest.raises(ValueError):
            iterated_aluthge(np.eye(2), (1, 1), -1)

    def test_json_shape(self):
        out = iterated_aluthge(block_shift_family(1), (0.5, 0.5), 2).to_json()
        assert [s["k"] for s in out["steps"]] == [0, 1, 2]
        assert out["steps"][0]["binormal"]["verdict"] == "holds"
        assert "u_tilde_polar" in out["steps"][1]


class TestTransformModulusSplit:
    def test_identity(self):
        assert check_lemma_4_1(np.eye(3), 2).verdict.holds

    def test_block_shift(self):
        c = check_lemma_4_1(block_shift_family(1), 1, (1, 1))
        assert c.applicable and len(c.per_k) == 3 and c.verdict.holds

    def test_weighted_shift(self):
        assert check_lemma_4_1(weighted_shift([2, 1]), 1).verdict.holds

    @pytest.mark.parametrize("p", DEFAULT_GRID)
    def test_grid_on_block_shift(self, p):
        assert check_lemma_4_1(block_shift_family(2), 2, p).verdict.holds


class TestUTildeConjugation:
    @pytest.mark.parametrize("p", DEFAULT_GRID)
    def test_block_shift(self, p):
        c = check_lemma_4_4(block_shift_family(2), 2, p)
        assert c.applicable and c.verdict.holds

    def test_skipped_without_hypothesis(self, jordan2):
        assert check_lemma_4_4(jordan2, 1).verdict.value is Value.SKIPPED
