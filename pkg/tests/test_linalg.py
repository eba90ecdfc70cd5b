import itertools
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from projconst.linalg import (
    Mat,
    RankDeficientError,
    Subspace,
    as_rat,
    block_permutation,
    flatten_blocks,
    format_rational,
    inf_op_norm,
    invert_square,
    kernel_basis,
    parse_rational,
    rank_of_rows,
    rat_arith,
    solve_linear_system,
    split_blocks,
    subspace_contains,
)

rationals = st.fractions(max_denominator=12, min_value=-9, max_value=9)


def brute_force_norm(m: Mat) -> F:
    # independent oracle: enumerate every +-1 input, take the largest image entry
    best = F(0)
    for signs in itertools.product((1, -1), repeat=m.cols):
        image = m.apply(signs)
        best = max(best, max(abs(x) for x in image))
    return best


class TestRationals:
    def test_parse_fraction_forms(self):
        assert parse_rational("3") == F(3)
        assert parse_rational("-7/2") == F(-7, 2)
        assert parse_rational("4/6") == F(2, 3)
        assert parse_rational(" 2/-4 ") == F(-1, 2)

    @pytest.mark.parametrize("bad", ["", "1.5", "x", "1/0", "1/2/3", "2e3"])
    def test_parse_rejects(self, bad):
        with pytest.raises(ValueError):
            parse_rational(bad)

    @given(num=st.integers(-10**6, 10**6), den=st.integers(1, 10**4))
    def test_parse_format_round_trip(self, num, den):
        value = F(num, den)
        assert parse_rational(format_rational(value)) == value

    def test_format_is_reduced(self):
        assert format_rational(F(4, 6)) == "2/3"
        assert format_rational(F(-8, 4)) == "-2"

    def test_as_rat(self):
        assert as_rat(3) == F(3)
        assert as_rat("1/2") == F(1, 2)
        assert as_rat(F(5, 7)) == F(5, 7)
        with pytest.raises(TypeError):
            as_rat(0.5)

    def test_rat_arith(self):
        assert rat_arith("1/2", "1/3", "add") == F(5, 6)
        assert rat_arith(2, "1/3", "sub") == F(5, 3)
        assert rat_arith("2/3", "3/4", "mul") == F(1, 2)
        assert rat_arith(1, 3, "div") == F(1, 3)
        with pytest.raises(ValueError):
            rat_arith(1, 2, "pow")
        with pytest.raises(ZeroDivisionError):
            rat_arith(1, 0, "div")


class TestMat:
    def test_shape_checks(self):
        with pytest.raises(ValueError):
            Mat.from_rows([[1, 2], [3]])
        with pytest.raises(ValueError):
            Mat(2, 2, (F(1),) * 3)
        with pytest.raises(ValueError):
            Mat.from_rows([])

    def test_accessors(self):
        m = Mat.from_rows([[1, 2, 3], [4, 5, 6]])
        assert m.at(1, 2) == F(6)
        assert m.row(0) == (F(1), F(2), F(3))
        assert m.col(1) == (F(2), F(5))
        assert m.transpose().row(2) == (F(3), F(6))
        assert m.transpose().transpose() == m

    def test_arithmetic(self):
        a = Mat.from_rows([[1, 2], [3, 4]])
        assert a.add(a.scale(-1)) == Mat.zeros(2, 2)
        assert a @ Mat.identity(2) == a
        assert Mat.identity(2) @ a == a
        assert a.apply([1, "1/2"]) == (F(2), F(5))
        with pytest.raises(ValueError):
            a.apply([1, 2, 3])
        with pytest.raises(ValueError):
            a @ Mat.identity(3)

    def test_idempotent(self):
        assert Mat.identity(3).is_idempotent()
        assert Mat.from_rows([["1/2", "-1/2"], ["-1/2", "1/2"]]).is_idempotent()
        assert not Mat.from_rows([[2, 0], [0, 0]]).is_idempotent()
        assert not Mat.from_rows([[1, 2, 3]]).is_idempotent()


class TestInfOpNorm:
    def test_frozen_example(self):
        m = Mat.from_rows([[1, -1], [2, 3]])
        norm = inf_op_norm(m)
        assert norm.value == F(5)
        assert norm.row_index == 1
        assert norm.witness == (1, 1)
        assert brute_force_norm(m) == F(5)

    def test_zero_entries_count_as_plus(self):
        norm = inf_op_norm(Mat.from_rows([[0, -2]]))
        assert norm.witness == (1, -1)

    @given(st.lists(st.lists(rationals, min_size=1, max_size=4),
                    min_size=1, max_size=4).filter(
                        lambda rows: len({len(r) for r in rows}) == 1))
    @settings(max_examples=60, deadline=None)
    def test_matches_sign_enumeration(self, rows):
        m = Mat.from_rows(rows)
        norm = inf_op_norm(m)
        assert norm.value == brute_force_norm(m)
        image = m.apply(norm.witness)
        assert max(abs(x) for x in image) == norm.value


class TestBlockPermutation:
    def test_moves_blocks(self):
        u = block_permutation(3, 2, [1, 2, 0])
        x = flatten_blocks([[1, 2], [3, 4], [5, 6]])
        # block 0 -> position 1, block 1 -> position 2, block 2 -> position 0
        assert u.apply(x) == flatten_blocks([[5, 6], [1, 2], [3, 4]])

    def test_homomorphism_s3(self):
        d = 2
        for sigma in itertools.permutations(range(3)):
            for tau in itertools.permutations(range(3)):
                composed = [sigma[tau[j]] for j in range(3)]
                assert (block_permutation(3, d, sigma) @ block_permutation(3, d, tau)
                        == block_permutation(3, d, composed))

    def test_inverse_is_transpose(self):
        sigma = [2, 0, 3, 1]
        u = block_permutation(4, 3, sigma)
        assert u @ u.transpose() == Mat.identity(12)
        inverse = [0] * 4
        for j, t in enumerate(sigma):
            inverse[t] = j
        assert u.transpose() == block_permutation(4, 3, inverse)

    def test_norm_one(self):
        assert inf_op_norm(block_permutation(3, 2, [2, 0, 1])).value == F(1)

    def test_rejects_non_permutation(self):
        with pytest.raises(ValueError):
            block_permutation(3, 1, [0, 0, 1])


def test_flatten_split_round_trip():
    blocks = [[F(1), F(2)], [F(-3), F(1, 2)]]
    flat = flatten_blocks(blocks)
    assert split_blocks(flat, 2) == [tuple(b) for b in blocks]
    with pytest.raises(ValueError):
        split_blocks([1, 2, 3], 2)
    with pytest.raises(ValueError):
        flatten_blocks([[1, 2], [3]])
    with pytest.raises(ValueError):
        flatten_blocks([])


class TestSubspace:
    def test_rank_enforced(self):
        with pytest.raises(RankDeficientError):
            Subspace.from_rows([[1, 1], [2, 2]])
        with pytest.raises(ValueError):
            Subspace.from_rows([[1, 0]], ambient_dim=3)

    def test_dim(self):
        s = Subspace.from_rows([[1, 0, 1], [0, 1, 0]])
        assert s.dim == 2
        assert s.ambient_dim == 3

    def test_membership(self):
        s = Subspace.from_rows([[1, 1, 0], [0, 0, 1]])
        assert subspace_contains(s, [2, 2, -5])
        assert not subspace_contains(s, [1, 0, 0])
        with pytest.raises(ValueError):
            subspace_contains(s, [1, 0])


class TestElimination:
    def test_rank(self):
        assert rank_of_rows([[F(1), F(2)], [F(2), F(4)]]) == 1
        assert rank_of_rows([[F(0), F(1)], [F(1), F(0)]]) == 2
        assert rank_of_rows([]) == 0

    def test_solve(self):
        rows = [[F(1), F(1)], [F(1), F(-1)]]
        x = solve_linear_system(rows, [F(3), F(1)])
        assert x == [F(2), F(1)]
        assert solve_linear_system([[F(1), F(1)], [F(2), F(2)]], [F(1), F(3)]) is None
        with pytest.raises(ValueError):
            solve_linear_system(rows, [F(1)])

    def test_kernel(self):
        rows = [[F(1), F(1), F(1)]]
        basis = kernel_basis(rows)
        assert len(basis) == 2
        for vec in basis:
            assert sum(vec) == 0

    def test_kernel_trivial(self):
        assert kernel_basis([[F(1), F(0)], [F(0), F(1)]]) == []

    @given(st.lists(st.lists(rationals, min_size=3, max_size=3),
                    min_size=1, max_size=3))
    @settings(max_examples=40, deadline=None)
    def test_kernel_annihilates(self, rows):
        rows = [[F(x) for x in r] for r in rows]
        for vec in kernel_basis(rows):
            for row in rows:
                assert sum(a * b for a, b in zip(row, vec)) == 0

    def test_invert(self):
        m = Mat.from_rows([[2, 1], [1, 1]])
        assert m @ invert_square(m) == Mat.identity(2)
        assert invert_square(m) @ m == Mat.identity(2)
        with pytest.raises(RankDeficientError):
            invert_square(Mat.from_rows([[1, 2], [2, 4]]))
        with pytest.raises(ValueError):
            invert_square(Mat.from_rows([[1, 2]]))
