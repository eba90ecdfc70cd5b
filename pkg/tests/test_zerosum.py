"""Zero-sum spaces, the centring map, symmetrization, and the exact law.

The symmetrization oracle for the 2-block case is worked out by hand in
`test_two_block_average_by_hand` and frozen; everything larger leans on the
structural identities that `extract_r` re-verifies entry by entry.
"""

import itertools
from fractions import Fraction as F
from random import Random

import pytest

from projconst.linalg import Mat, Subspace, block_permutation, inf_op_norm, subspace_contains
from projconst.minproj import LPBudget, projection_constant
from projconst.zerosum import (
    SYMMETRIZE_MAX_COPIES,
    DecompositionIntegrityError,
    NotAProjectionError,
    NotSymmetrizedError,
    ZeroSumSpace,
    amplification_factor,
    centring_projection,
    centring_witness,
    coordinate_sum_kernel,
    coordinatewise_lift,
    extract_r,
    random_projection_onto,
    sigma_subspace,
    symmetrize,
    verify_multiplication_law,
)

SCALAR_LINE = Subspace.from_rows([[1]])


def test_amplification_factor():
    assert amplification_factor(2) == F(1)
    assert amplification_factor(3) == F(4, 3)
    assert amplification_factor(4) == F(3, 2)
    assert amplification_factor(100) == F(99, 50)
    with pytest.raises(ValueError):
        amplification_factor(1)


class TestSigmaSubspace:
    def test_dimensions(self):
        base = Subspace.from_rows([[1, 0, 1], [0, 1, 0]])
        zs = sigma_subspace(base, 4)
        assert zs.space.dim == 3 * base.dim
        assert zs.ambient_dim == 12
        assert zs.mu == F(3, 2)

    def test_rows_are_zero_sum_tuples_of_base_vectors(self):
        base = Subspace.from_rows([[1, 2]])
        zs = sigma_subspace(base, 3)
        for i in range(zs.space.dim):
            row = zs.space.basis.row(i)
            blocks = [row[0:2], row[2:4], row[4:6]]
            for c in range(2):
                assert sum(b[c] for b in blocks) == 0
            for b in blocks:
                if any(b):
                    assert subspace_contains(base, b)

    def test_membership_examples(self):
        zs = sigma_subspace(SCALAR_LINE, 3)
        assert subspace_contains(zs.space, [1, -1, 0])
        assert subspace_contains(zs.space, [2, -1, -1])
        assert not subspace_contains(zs.space, [1, 1, 1])

    def test_validation(self):
        with pytest.raises(ValueError):
            sigma_subspace(SCALAR_LINE, 1)
        good = sigma_subspace(SCALAR_LINE, 2)
        with pytest.raises(ValueError):
            # ambient basis rows must block-sum to zero
            ZeroSumSpace(SCALAR_LINE, 2, Subspace.from_rows([[1, 1]]), F(1))
        assert good.mu == F(1)


def test_coordinate_sum_kernel():
    space = coordinate_sum_kernel(4)
    assert space.ambient_dim == 4
    assert space.dim == 3
    assert subspace_contains(space, [1, -1, 0, 0])
    assert not subspace_contains(space, [1, 0, 0, 0])
    with pytest.raises(ValueError):
        coordinate_sum_kernel(1)


class TestCentring:
    def test_two_block_matrix(self):
        assert centring_projection(1, 2) == Mat.from_rows(
            [["1/2", "-1/2"], ["-1/2", "1/2"]])

    def test_norm_and_idempotence(self):
        for d, n in [(1, 2), (1, 5), (2, 3), (3, 4)]:
            s = centring_projection(d, n)
            assert s.is_idempotent()
            assert inf_op_norm(s).value == amplification_factor(n)

    def test_range_is_the_zero_sum_space(self):
        s = centring_projection(2, 3)
        zs = sigma_subspace(Subspace.from_rows([[1, 0], [0, 1]]), 3)
        for j in range(6):
            assert subspace_contains(zs.space, s.col(j))

    def test_fixes_zero_sum_vectors(self):
        s = centring_projection(1, 3)
        assert s.apply([1, -1, 0]) == (F(1), F(-1), F(0))
        assert s.apply([1, 1, 1]) == (F(0), F(0), F(0))

    def test_witness(self):
        x, image = centring_witness(1, 3)
        assert x == (F(1), F(-1), F(-1))
        assert image == (F(4, 3), F(-2, 3), F(-2, 3))
        assert centring_projection(1, 3).apply(x) == image
        assert max(abs(v) for v in image) == amplification_factor(3)

    def test_witness_attains_for_larger_blocks(self):
        for d, n in [(2, 2), (2, 4), (1, 6)]:
            x, image = centring_witness(d, n)
            assert centring_projection(d, n).apply(x) == image
            assert max(abs(v) for v in image) == amplification_factor(n)

    def test_validation(self):
        with pytest.raises(ValueError):
            centring_projection(0, 2)
        with pytest.raises(ValueError):
            centring_projection(1, 1)
        with pytest.raises(ValueError):
            centring_witness(1, 1)


def test_coordinatewise_lift():
    q = Mat.from_rows([[1, 2], [0, 1]])
    lifted = coordinatewise_lift(q, 2)
    assert lifted.rows == 4
    assert lifted.apply([1, 0, 0, 1]) == (F(1), F(0), F(2), F(1))
    assert coordinatewise_lift(Mat.from_rows([[2]]), 3).apply([1, 1, 1]) == (F(2), F(2), F(2))
    with pytest.raises(ValueError):
        coordinatewise_lift(Mat.from_rows([[1, 2]]), 2)
    with pytest.raises(ValueError):
        coordinatewise_lift(q, 0)


class TestSymmetrize:
    def test_two_block_average_by_hand(self):
        # P x = (x_1, -x_1) projects onto the zero-sum line of ell_inf^2.
        # Its swap conjugate sends x to (-x_2, x_2), so the two-term average
        # is exactly the centring map.
        p = Mat.from_rows([[1, 0], [-1, 0]])
        assert symmetrize(p, 1, 2) == centring_projection(1, 2)

    def test_already_symmetric_is_fixed(self):
        s = centring_projection(2, 3)
        assert symmetrize(s, 2, 3) == s

    def test_result_commutes_with_all_block_permutations(self):
        rng = Random(3)
        zs = sigma_subspace(SCALAR_LINE, 3)
        p = random_projection_onto(zs, rng)
        avg = symmetrize(p, 1, 3)
        for sigma in itertools.permutations(range(3)):
            u = block_permutation(3, 1, sigma)
            assert u @ avg == avg @ u

    def test_never_increases_the_norm(self):
        rng = Random(5)
        zs = sigma_subspace(SCALAR_LINE, 3)
        for _ in range(10):
            p = random_projection_onto(zs, rng)
            assert inf_op_norm(symmetrize(p, 1, 3)).value <= inf_op_norm(p).value

    def test_rejects_non_projection(self):
        with pytest.raises(NotAProjectionError):
            symmetrize(Mat.from_rows([[2, 0], [0, 0]]), 1, 2)

    def test_rejects_wrong_range(self):
        # idempotent, but the range {(t, 0)} is not inside the zero-sum set
        with pytest.raises(NotAProjectionError):
            symmetrize(Mat.from_rows([[1, -1], [0, 0]]), 1, 2)

    def test_rejects_oversized_enumeration(self):
        n = SYMMETRIZE_MAX_COPIES + 1
        with pytest.raises(ValueError):
            symmetrize(centring_projection(1, n), 1, n)

    def test_rejects_shape_mismatch(self):
        with pytest.raises(ValueError):
            symmetrize(Mat.identity(3), 1, 2)


FULL_PLANE = Subspace.from_rows([[1, 0], [0, 1]])


class TestExtractR:
    def test_centring_map_collapses_to_identity(self):
        dec = extract_r(centring_projection(2, 3), FULL_PLANE, 3)
        assert dec.r == Mat.identity(2)
        assert dec.a == Mat.identity(2).scale(F(2, 3))
        assert dec.b == Mat.identity(2).scale(F(-1, 3))

    def test_random_symmetrized_projection_decomposes(self):
        rng = Random(17)
        zs = sigma_subspace(SCALAR_LINE, 4)
        lam = projection_constant(SCALAR_LINE).value
        for _ in range(5):
            q = random_projection_onto(zs, rng)
            q_avg = symmetrize(q, 1, 4)
            dec = extract_r(q_avg, SCALAR_LINE, 4)
            # the full exact chain behind the multiplication law
            norm_q = inf_op_norm(q).value
            norm_avg = inf_op_norm(q_avg).value
            norm_r = inf_op_norm(dec.r).value
            assert norm_q >= norm_avg
            assert norm_avg == amplification_factor(4) * norm_r
            assert norm_r >= lam

    def test_rejects_asymmetric_matrix(self):
        with pytest.raises(NotSymmetrizedError):
            extract_r(Mat.from_rows([[1, 0], [-1, 0]]), SCALAR_LINE, 2)

    def test_rejects_wrong_shape(self):
        with pytest.raises(ValueError):
            extract_r(Mat.identity(3), SCALAR_LINE, 2)

    def test_rejects_block_map_outside_base(self):
        # symmetric under block swaps but the collapsed block map is the
        # identity of the plane, which does not land in the base line
        bad_base = Subspace.from_rows([[1, 0]], ambient_dim=2)
        with pytest.raises(DecompositionIntegrityError):
            extract_r(centring_projection(2, 2), bad_base, 2)


class TestMultiplicationLaw:
    def test_scalar_line(self):
        report = verify_multiplication_law(SCALAR_LINE, 3)
        assert report.status == "ok"
        assert report.base_lambda == F(1)
        assert report.sigma_lambda == F(4, 3)
        assert report.product == F(4, 3)
        assert report.equal is True

    def test_two_copies_of_a_hyperplane(self):
        report = verify_multiplication_law(coordinate_sum_kernel(3), 2)
        assert report.equal is True
        assert report.sigma_lambda == F(4, 3)
        assert report.ambient_dim == 6

    def test_budget_truncation(self):
        tight = LPBudget(max_ambient=2, max_dim=2)
        report = verify_multiplication_law(coordinate_sum_kernel(3), 2, tight)
        assert report.status == "inconclusive"
        assert report.base_lambda is None
        assert report.equal is None
        assert report.product is None

    def test_budget_truncation_on_the_big_side(self):
        tight = LPBudget(max_ambient=3, max_dim=2)
        report = verify_multiplication_law(coordinate_sum_kernel(3), 2, tight)
        assert report.status == "inconclusive"
        assert report.base_lambda == F(4, 3)
        assert report.sigma_lambda is None

    def test_json_document(self):
        doc = verify_multiplication_law(SCALAR_LINE, 2).to_json_dict()
        assert doc == {
            "base_lambda": "1",
            "mu_N": "1",
            "sigma_lambda": "1",
            "product": "1",
            "equal": True,
            "N": 2,
            "ambient_dim": 2,
            "status": "ok",
        }
