"""Zero-sum amplification of projection constants.

For a subspace E of ell_inf^d and N >= 2, the zero-sum space collects the
N-tuples of E-vectors whose blocks sum to zero, sitting inside ell_inf^{dN}.
Three exact facts drive everything here:

* the centring map, which subtracts the blockwise mean, projects onto the
  zero-sum space of the full block space with norm exactly 2 - 2/N;
* averaging any projection onto a zero-sum space over all block permutations
  collapses it to (coordinatewise lift of R) o (centring map) for a single
  projection R of ell_inf^d onto E; and
* that collapse forces lambda(zero-sum space) = (2 - 2/N) * lambda(E),
  which `verify_multiplication_law` certifies by solving both sides exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from random import Random

from .linalg import (
    Mat,
    Subspace,
    block_permutation,
    format_rational,
    inf_op_norm,
    invert_square,
    kernel_basis,
    split_blocks,
)
from .minproj import (
    DEFAULT_BUDGET,
    BudgetExceededError,
    LPBudget,
    projection_constant,
)

_ZERO = Fraction(0)
_ONE = Fraction(1)

SYMMETRIZE_MAX_COPIES = 6


class NotAProjectionError(ValueError):
    """Input matrix is not a projection onto a zero-sum space."""


class NotSymmetrizedError(ValueError):
    """Input matrix does not commute with the block permutations."""


class DecompositionIntegrityError(ValueError):
    """A symmetrized projection failed a structural identity it must satisfy."""


def amplification_factor(copies: int) -> Fraction:
    """The exact norm 2 - 2/N of the centring projection on N blocks."""
    if copies < 2:
        raise ValueError(f"need at least 2 copies, got {copies}")
    return 2 - Fraction(2, copies)


@dataclass(frozen=True)
class ZeroSumSpace:
    """The zero-sum tuples of a base subspace, with its amplification data."""

    base: Subspace
    copies: int
    space: Subspace
    mu: Fraction

    @property
    def ambient_dim(self) -> int:
        return self.space.ambient_dim

    def __post_init__(self):
        d = self.base.ambient_dim
        for i in range(self.space.dim):
            blocks = split_blocks(self.space.basis.row(i), d)
            total = [_ZERO] * d
            for blk in blocks:
                for c, x in enumerate(blk):
                    total[c] += x
            if any(total):
                raise ValueError("zero-sum basis row has nonzero block sum")


def sigma_subspace(base: Subspace, copies: int) -> ZeroSumSpace:
    """The zero-sum space of `copies` blocks of `base` inside ell_inf^{d*copies}.

    Basis rows pair each base row b with one of the later blocks:
    (b in block 1, -b in block j, 0 elsewhere), giving dimension (N-1)*k.
    """
    if copies < 2:
        raise ValueError(f"need at least 2 copies, got {copies}")
    d = base.ambient_dim
    rows = []
    for j in range(1, copies):
        for i in range(base.dim):
            row = [_ZERO] * (d * copies)
            for c, x in enumerate(base.basis.row(i)):
                row[c] = x
                row[j * d + c] = -x
            rows.append(row)
    space = Subspace.from_rows(rows, ambient_dim=d * copies)
    return ZeroSumSpace(base, copies, space, amplification_factor(copies))


def coordinate_sum_kernel(dim: int) -> Subspace:
    """The hyperplane {x : x_1 + ... + x_n = 0} of ell_inf^n.

    This is exactly the zero-sum space of n scalar blocks; its projection
    constant is 2 - 2/n, attained by the centring projection.
    """
    if dim < 2:
        raise ValueError(f"kernel hyperplane needs dimension >= 2, got {dim}")
    scalar_line = Subspace.from_rows([[_ONE]])
    return sigma_subspace(scalar_line, dim).space


def centring_projection(block_dim: int, copies: int) -> Mat:
    """The map subtracting the blockwise mean from every block.

    Entry ((i,r),(j,c)) is delta_rc * (delta_ij - 1/N); rows sum in absolute
    value to exactly 2 - 2/N, independent of the block dimension.
    """
    if block_dim < 1:
        raise ValueError(f"invalid block dimension {block_dim}")
    if copies < 2:
        raise ValueError(f"need at least 2 copies, got {copies}")
    d, n = block_dim, copies
    size = d * n
    inv = Fraction(1, n)
    flat = [_ZERO] * (size * size)
    for i in range(n):
        for j in range(n):
            val = (_ONE if i == j else _ZERO) - inv
            for r in range(d):
                flat[(i * d + r) * size + (j * d + r)] = val
    return Mat(size, size, tuple(flat))


def centring_witness(block_dim: int, copies: int) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
    """A norm-attaining input for the centring map, and its image.

    The input is (u, -u, ..., -u) with u the first coordinate vector; its
    image has first block (2 - 2/N) u and the remaining blocks -(2/N) u, so
    the sup norm of the image is exactly (2 - 2/N).
    """
    d, n = block_dim, copies
    if d < 1:
        raise ValueError(f"invalid block dimension {block_dim}")
    if n < 2:
        raise ValueError(f"need at least 2 copies, got {copies}")
    u = [_ONE] + [_ZERO] * (d - 1)
    x = list(u)
    for _ in range(n - 1):
        x.extend(-v for v in u)
    mu = amplification_factor(n)
    image = [mu * v for v in u]
    tail = Fraction(-2, n)
    for _ in range(n - 1):
        image.extend(tail * v for v in u)
    return tuple(x), tuple(image)


def coordinatewise_lift(q: Mat, copies: int) -> Mat:
    """Apply `q` to every block: the block-diagonal matrix diag(q, ..., q)."""
    if q.rows != q.cols:
        raise ValueError(f"lift needs a square block, got {q.rows}x{q.cols}")
    if copies < 1:
        raise ValueError(f"invalid copy count {copies}")
    d = q.rows
    size = d * copies
    flat = [_ZERO] * (size * size)
    for b in range(copies):
        for r in range(d):
            base = (b * d + r) * size + b * d
            row = q.row(r)
            for c in range(d):
                flat[base + c] = row[c]
    return Mat(size, size, tuple(flat))


def _block_sums_vanish(m: Mat, block_dim: int, copies: int) -> bool:
    for j in range(m.cols):
        col = m.col(j)
        for r in range(block_dim):
            total = sum((col[i * block_dim + r] for i in range(copies)), _ZERO)
            if total:
                return False
    return True


def symmetrize(p: Mat, block_dim: int, copies: int) -> Mat:
    """Average U_sigma^{-1} P U_sigma over all block permutations sigma.

    `p` must be a projection of ell_inf^{d N} whose range lies in the
    zero-sum set (both checked).  The average again projects onto the same
    range, commutes with every block permutation, and never has larger norm.
    Enumerates all N! permutations, so N is capped at 6.
    """
    d, n = block_dim, copies
    if n < 2:
        raise ValueError(f"need at least 2 copies, got {copies}")
    if n > SYMMETRIZE_MAX_COPIES:
        raise ValueError(
            f"symmetrization enumerates {n}! permutations; capped at {SYMMETRIZE_MAX_COPIES}"
        )
    size = d * n
    if (p.rows, p.cols) != (size, size):
        raise ValueError(f"matrix is {p.rows}x{p.cols}, expected {size}x{size}")
    if not p.is_idempotent():
        raise NotAProjectionError("matrix is not idempotent")
    if not _block_sums_vanish(p, d, n):
        raise NotAProjectionError("range is not inside the zero-sum set")
    total = Mat.zeros(size, size)
    count = 0
    for sigma in permutations(range(n)):
        u = block_permutation(n, d, sigma)
        inverse_sigma = [0] * n
        for j, t in enumerate(sigma):
            inverse_sigma[t] = j
        u_inv = block_permutation(n, d, inverse_sigma)
        total = total.add(u_inv @ p @ u)
        count += 1
    return total.scale(Fraction(1, count))


@dataclass(frozen=True)
class SymmetrizationDecomposition:
    """Structure of a permutation-invariant projection onto a zero-sum space.

    `a` is its action on a block from that block's own copy, `b` the action
    from every other copy, and `r = a - b` is a projection of the block space
    onto the base subspace with p_tilde = lift(r) o centring and
    norm(p_tilde) = (2 - 2/N) * norm(r) exactly.
    """

    p_tilde: Mat
    a: Mat
    b: Mat
    r: Mat


def extract_r(p_tilde: Mat, base: Subspace, copies: int) -> SymmetrizationDecomposition:
    """Read off the block structure of a symmetrized projection.

    Verifies, exactly: invariance under block permutations, equality of the
    off-diagonal blocks, the trace condition a + (N-1) b = 0, idempotence of
    r = a - b, that r fixes the base subspace, the factorization
    p_tilde = lift(r) o centring, and the norm identity.
    """
    from .linalg import subspace_contains

    d, n = base.ambient_dim, copies
    if n < 2:
        raise ValueError(f"need at least 2 copies, got {copies}")
    size = d * n
    if (p_tilde.rows, p_tilde.cols) != (size, size):
        raise ValueError(f"matrix is {p_tilde.rows}x{p_tilde.cols}, expected {size}x{size}")

    # Commuting with a transposition and an N-cycle commutes with everything.
    generators = []
    if n >= 2:
        swap = list(range(n))
        swap[0], swap[1] = 1, 0
        generators.append(swap)
        generators.append([(i + 1) % n for i in range(n)])
    for sigma in generators:
        u = block_permutation(n, d, sigma)
        if u @ p_tilde != p_tilde @ u:
            raise NotSymmetrizedError(
                "matrix does not commute with the block permutations"
            )

    def block(bi: int, bj: int) -> Mat:
        return Mat.from_rows([
            [p_tilde.at(bi * d + r, bj * d + c) for c in range(d)]
            for r in range(d)
        ])

    a = block(0, 0)
    b = block(1, 0)
    for i in range(2, n):
        if block(i, 0) != b:
            raise NotSymmetrizedError("off-diagonal blocks of the first column differ")

    if a.add(b.scale(n - 1)) != Mat.zeros(d, d):
        raise DecompositionIntegrityError("block trace a + (N-1) b does not vanish")

    r = a.add(b.scale(-1))
    if not r.is_idempotent():
        raise DecompositionIntegrityError("collapsed block map is not idempotent")
    for i in range(base.dim):
        row = base.basis.row(i)
        if r.apply(row) != row:
            raise DecompositionIntegrityError("collapsed block map moves the base subspace")
    for j in range(d):
        if not subspace_contains(base, r.col(j)):
            raise DecompositionIntegrityError("collapsed block map leaves the base subspace")
    if a != r.scale(Fraction(n - 1, n)) or b != r.scale(Fraction(-1, n)):
        raise DecompositionIntegrityError("blocks are not the expected multiples of r")
    if coordinatewise_lift(r, n) @ centring_projection(d, n) != p_tilde:
        raise DecompositionIntegrityError("matrix does not factor through the centring map")
    if inf_op_norm(p_tilde).value != amplification_factor(n) * inf_op_norm(r).value:
        raise DecompositionIntegrityError("norm identity (2 - 2/N) * norm(r) fails")
    return SymmetrizationDecomposition(p_tilde, a, b, r)


def random_projection_onto(zs: ZeroSumSpace, rng: Random, spread: int = 2) -> Mat:
    """A random exact projection of the block space onto the zero-sum space.

    P = G^T D with D G^T = I: the base solution (G G^T)^{-1} G plus random
    kernel-of-G rows.  Used to exercise symmetrization away from the
    LP minimizer.
    """
    g = zs.space.basis
    d0 = invert_square(g @ g.transpose()) @ g
    kernel = kernel_basis(g.row_lists())
    rows = []
    for p in range(d0.rows):
        row = list(d0.row(p))
        for vec in kernel:
            weight = Fraction(rng.randint(-spread, spread), rng.randint(1, spread))
            if weight:
                row = [x + weight * y for x, y in zip(row, vec)]
        rows.append(row)
    return g.transpose() @ Mat.from_rows(rows)


@dataclass(frozen=True)
class MultiplicationLawReport:
    """Outcome of certifying lambda(zero-sum space) = (2 - 2/N) * lambda(E)."""

    base_lambda: Fraction | None
    mu: Fraction
    sigma_lambda: Fraction | None
    copies: int
    ambient_dim: int
    status: str  # "ok" or "inconclusive"

    @property
    def product(self) -> Fraction | None:
        if self.base_lambda is None:
            return None
        return self.mu * self.base_lambda

    @property
    def equal(self) -> bool | None:
        if self.base_lambda is None or self.sigma_lambda is None:
            return None
        return self.sigma_lambda == self.product

    def to_json_dict(self) -> dict:
        fmt = lambda x: None if x is None else format_rational(x)
        return {
            "base_lambda": fmt(self.base_lambda),
            "mu_N": format_rational(self.mu),
            "sigma_lambda": fmt(self.sigma_lambda),
            "product": fmt(self.product),
            "equal": self.equal,
            "N": self.copies,
            "ambient_dim": self.ambient_dim,
            "status": self.status,
        }


def verify_multiplication_law(base: Subspace, copies: int,
                              budget: LPBudget = DEFAULT_BUDGET) -> MultiplicationLawReport:
    """Certify the amplification law for one base subspace by exact LP solves.

    When either side exceeds the LP budget the report comes back flagged
    inconclusive instead of raising.
    """
    zs = sigma_subspace(base, copies)
    mu = zs.mu
    try:
        budget.require(base)
        base_lambda = projection_constant(base).value
    except BudgetExceededError:
        return MultiplicationLawReport(None, mu, None, copies, zs.ambient_dim,
                                       "inconclusive")
    try:
        budget.require(zs.space)
        sigma_lambda = projection_constant(zs.space).value
    except BudgetExceededError:
        return MultiplicationLawReport(base_lambda, mu, None, copies,
                                       zs.ambient_dim, "inconclusive")
    return MultiplicationLawReport(base_lambda, mu, sigma_lambda, copies,
                                   zs.ambient_dim, "ok")
