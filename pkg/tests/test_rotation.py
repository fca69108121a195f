import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.linalg import expm

from oscswap.core import derive_mixing, unitarity_defect
from oscswap.rotation import (
    RotationBackend,
    u_minus_s_block,
    u_minus_s_element,
    us_block,
    us_element,
    verify_recursions,
)
from conftest import mixing_for_detuning

INV_SQRT2 = 0.7071067811865476

X_GRID = (0.0, 0.5, -0.5, 1.0, -1.0, 5.0, -5.0)


def beam_splitter_generator(n_total):
    """Anti-symmetric hop generator restricted to one block (oracle only)."""
    k = np.zeros((n_total + 1, n_total + 1))
    for l in range(n_total + 1):
        n1, n2 = n_total - l, l
        if n2 >= 1:
            k[l - 1, l] += math.sqrt((n1 + 1) * n2)
        if n1 >= 1:
            k[l + 1, l] -= math.sqrt(n1 * (n2 + 1))
    return k


class TestSingleElements:
    def test_empty_block_is_identity(self, detuned):
        mix = derive_mixing(detuned)
        assert us_element(mix, 0, 0, 0, 0) == 1.0

    def test_one_quantum_block(self, detuned):
        mix = derive_mixing(detuned)
        c, s = mix.c, mix.s
        assert us_element(mix, 1, 0, 1, 0) == pytest.approx(c, rel=1e-14)
        assert us_element(mix, 1, 0, 0, 1) == pytest.approx(s, rel=1e-14)
        assert us_element(mix, 0, 1, 1, 0) == pytest.approx(-s, rel=1e-14)
        assert us_element(mix, 0, 1, 0, 1) == pytest.approx(c, rel=1e-14)

    def test_selection_rule(self, detuned):
        mix = derive_mixing(detuned)
        assert us_element(mix, 1, 0, 2, 0) == 0
        assert us_element(mix, 3, 2, 2, 2) == 0

    def test_negative_index_rejected(self, detuned):
        with pytest.raises(ValueError):
            us_element(derive_mixing(detuned), -1, 1, 0, 0)

    @pytest.mark.parametrize("x", X_GRID)
    @pytest.mark.parametrize("n", [1, 3, 8, 17, 25, 30])
    def test_special_rows_closed_form(self, x, n):
        # first-row and first-column elements have one-term sums with known
        # binomial closed forms; checked in relative terms
        mix = mixing_for_detuning(x)
        for l in range(n + 1):
            scale = math.sqrt(math.comb(n, l))
            top = scale * mix.c ** (n - l) * mix.s**l
            bottom = scale * (-1.0) ** (n - l) * mix.c**l * mix.s ** (n - l)
            assert us_element(mix, n, 0, n - l, l).real == pytest.approx(top, rel=1e-12)
            assert us_element(mix, 0, n, n - l, l).real == pytest.approx(bottom, rel=1e-12)


class TestInverseElements:
    def test_identity_element(self, detuned):
        assert u_minus_s_element(derive_mixing(detuned), 0, 0, 0, 0) == 1.0

    def test_sign_rule_on_one_quantum_block(self, detuned):
        mix = derive_mixing(detuned)
        assert u_minus_s_element(mix, 0, 1, 1, 0) == pytest.approx(mix.s, rel=1e-14)
        assert u_minus_s_element(mix, 1, 0, 0, 1) == pytest.approx(-mix.s, rel=1e-14)

    @pytest.mark.parametrize("x", (0.0, 1.0, -5.0))
    @pytest.mark.parametrize("n", [1, 4, 9, 20])
    def test_inverse_is_transpose_and_actual_inverse(self, x, n):
        mix = mixing_for_detuning(x)
        forward = us_block(mix, n).entries
        inverse = u_minus_s_block(mix, n).entries
        np.testing.assert_allclose(inverse, forward.T, atol=1e-12)
        np.testing.assert_allclose(inverse @ forward, np.eye(n + 1), atol=1e-10)


class TestBlocks:
    def test_trivial_block(self, resonant):
        block = us_block(derive_mixing(resonant), 0)
        np.testing.assert_array_equal(block.entries, [[1.0]])

    def test_one_quantum_block_at_resonance(self, resonant):
        block = us_block(derive_mixing(resonant), 1)
        expected = [[INV_SQRT2, INV_SQRT2], [-INV_SQRT2, INV_SQRT2]]
        np.testing.assert_allclose(block.entries.real, expected, atol=1e-15)

    @pytest.mark.parametrize("x", X_GRID)
    def test_unitarity_up_to_30(self, x):
        mix = mixing_for_detuning(x)
        for n in (1, 2, 5, 12, 21, 30):
            assert unitarity_defect(us_block(mix, n).entries) < 1e-10

    def test_backends_agree_at_unit_detuning_block_twenty(self):
        mix = mixing_for_detuning(1.0)
        closed = us_block(mix, 20, backend=RotationBackend.CLOSED_FORM).entries
        recursed = us_block(mix, 20, backend=RotationBackend.RECURSION).entries
        assert np.max(np.abs(closed - recursed)) < 1e-10

    @pytest.mark.parametrize("x", (0.0, -1.0, 5.0))
    @pytest.mark.parametrize("n", [3, 11, 25, 30])
    def test_backends_agree(self, x, n):
        mix = mixing_for_detuning(x)
        closed = us_block(mix, n, backend=RotationBackend.CLOSED_FORM).entries
        recursed = us_block(mix, n, backend=RotationBackend.RECURSION).entries
        assert np.max(np.abs(closed - recursed)) < 1e-10

    @settings(max_examples=25)
    @given(
        x=st.floats(-8.0, 8.0),
        n=st.integers(min_value=0, max_value=12),
    )
    def test_matches_generator_exponential(self, x, n):
        # independent oracle: exponentiate the hop generator directly
        mix = mixing_for_detuning(x)
        theta = math.atan2(mix.s, mix.c)
        brute = expm(theta * beam_splitter_generator(n))
        np.testing.assert_allclose(us_block(mix, n).entries.real, brute, atol=1e-10)

    def test_strong_detuning_limit_is_identity(self):
        mix = mixing_for_detuning(1e6)
        for n in (1, 3, 5):
            entries = us_block(mix, n).entries.real
            off_diagonal = entries - np.diag(np.diag(entries))
            assert np.max(np.abs(off_diagonal)) < 1e-5
            np.testing.assert_allclose(np.diag(entries), 1.0, atol=1e-5)

    def test_rejects_negative_block(self, resonant):
        with pytest.raises(ValueError):
            us_block(derive_mixing(resonant), -1)


class TestRecursionResiduals:
    def test_small_block_any_mix(self, detuned):
        assert verify_recursions(derive_mixing(detuned), 1) < 1e-12

    def test_resonance_block_ten(self):
        assert verify_recursions(mixing_for_detuning(0.0), 10) < 1e-11

    def test_strong_detuning_block_ten(self):
        assert verify_recursions(mixing_for_detuning(5.0), 10) < 1e-10

    def test_requires_positive_block(self, resonant):
        with pytest.raises(ValueError):
            verify_recursions(derive_mixing(resonant), 0)
