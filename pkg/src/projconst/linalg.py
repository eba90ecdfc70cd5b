"""Exact linear algebra over the rationals for sup-normed coordinate spaces.

Scalars are arbitrary-precision rationals (`fractions.Fraction`), so every
norm, rank and product computed here is exact.  Matrices act on column
vectors of ell_inf^n; the only operator norm used anywhere in the package is
the inf->inf norm, which equals the maximum absolute row sum and is attained
at a +-1 sign vector.

No floating point enters this module.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

Rat = Fraction

RatLike = "Fraction | int | str"


def as_rat(value) -> Fraction:
    """Coerce an int, Fraction or 'p/q' literal to an exact rational."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def parse_rational(text: str) -> Fraction:
    """Parse a rational literal: an optionally signed 'p' or 'p/q'.

    The result is always reduced with a positive denominator.  Anything that
    is not a pure integer or integer/integer pair (floats included) is
    rejected.
    """
    parts = text.strip().split("/")
    if len(parts) == 1:
        try:
            return Fraction(int(parts[0]))
        except ValueError:
            raise ValueError(f"malformed rational literal {text!r}") from None
    if len(parts) == 2:
        try:
            num, den = int(parts[0]), int(parts[1])
        except ValueError:
            raise ValueError(f"malformed rational literal {text!r}") from None
        if den == 0:
            raise ValueError(f"zero denominator in rational literal {text!r}")
        return Fraction(num, den)
    raise ValueError(f"malformed rational literal {text!r}")


def format_rational(value: Fraction) -> str:
    """Render a rational as 'p' or 'p/q', reduced, denominator positive."""
    value = as_rat(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


_RAT_OPS = {
    "add": lambda x, y: x + y,
    "sub": lambda x, y: x - y,
    "mul": lambda x, y: x * y,
    "div": lambda x, y: x / y,
}


def rat_arith(x, y, op: str) -> Fraction:
    """Exact rational arithmetic; `op` is one of add/sub/mul/div.

    Division by zero propagates as ZeroDivisionError.
    """
    try:
        fn = _RAT_OPS[op]
    except KeyError:
        raise ValueError(f"unknown rational operation {op!r}") from None
    return fn(as_rat(x), as_rat(y))


@dataclass(frozen=True)
class Mat:
    """Dense exact matrix with row-major entries.

    Immutable after construction; all arithmetic returns fresh matrices.
    """

    rows: int
    cols: int
    entries: tuple[Fraction, ...]

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise ValueError(f"matrix shape {self.rows}x{self.cols} is empty")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"{self.rows}x{self.cols} matrix needs {self.rows * self.cols} "
                f"entries, got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "Mat":
        nrows = len(rows)
        if nrows == 0:
            raise ValueError("matrix needs at least one row")
        ncols = len(rows[0])
        flat = []
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged rows in matrix literal")
            flat.extend(as_rat(x) for x in r)
        return cls(nrows, ncols, tuple(flat))

    @classmethod
    def identity(cls, n: int) -> "Mat":
        one, zero = Fraction(1), Fraction(0)
        return cls(n, n, tuple(one if i == j else zero for i in range(n) for j in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Mat":
        return cls(rows, cols, (Fraction(0),) * (rows * cols))

    def at(self, i: int, j: int) -> Fraction:
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def col(self, j: int) -> tuple[Fraction, ...]:
        return self.entries[j :: self.cols]

    def row_lists(self) -> list[list[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> "Mat":
        return Mat(self.cols, self.rows,
                   tuple(self.entries[i * self.cols + j]
                         for j in range(self.cols) for i in range(self.rows)))

    def add(self, other: "Mat") -> "Mat":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError(
                f"shape mismatch in matrix sum: {self.rows}x{self.cols} vs "
                f"{other.rows}x{other.cols}"
            )
        return Mat(self.rows, self.cols,
                   tuple(a + b for a, b in zip(self.entries, other.entries)))

    def scale(self, factor) -> "Mat":
        f = as_rat(factor)
        return Mat(self.rows, self.cols, tuple(f * x for x in self.entries))

    def __matmul__(self, other: "Mat") -> "Mat":
        return mat_compose(self, other)

    def apply(self, vector: Sequence) -> tuple[Fraction, ...]:
        """Matrix times column vector."""
        if len(vector) != self.cols:
            raise ValueError(
                f"vector of length {len(vector)} does not fit {self.rows}x{self.cols}"
            )
        vec = [as_rat(x) for x in vector]
        out = []
        for i in range(self.rows):
            row = self.row(i)
            out.append(sum((a * b for a, b in zip(row, vec)), Fraction(0)))
        return tuple(out)

    def is_idempotent(self) -> bool:
        return self.rows == self.cols and mat_compose(self, self) == self


class OperatorNorm(NamedTuple):
    value: Fraction
    witness: tuple[int, ...]
    row_index: int


def inf_op_norm(m: Mat) -> OperatorNorm:
    """The inf->inf operator norm: the maximum absolute row sum.

    Also returns a +-1 sign vector on which the norm is attained (signs of
    the first maximizing row, zeros treated as +1) and the index of that row.
    """
    best = Fraction(-1)
    best_row = 0
    for i in range(m.rows):
        s = sum((abs(x) for x in m.row(i)), Fraction(0))
        if s > best:
            best, best_row = s, i
    witness = tuple(1 if x >= 0 else -1 for x in m.row(best_row))
    return OperatorNorm(best, witness, best_row)


def mat_compose(a: Mat, b: Mat) -> Mat:
    """Matrix product a @ b with an exact shape check."""
    if a.cols != b.rows:
        raise ValueError(
            f"cannot compose {a.rows}x{a.cols} with {b.rows}x{b.cols}"
        )
    zero = Fraction(0)
    bt_cols = [b.col(j) for j in range(b.cols)]
    flat = []
    for i in range(a.rows):
        arow = a.row(i)
        for j in range(b.cols):
            bcol = bt_cols[j]
            acc = zero
            for x, y in zip(arow, bcol):
                if x and y:
                    acc += x * y
            flat.append(acc)
    return Mat(a.rows, b.cols, tuple(flat))


def block_permutation(num_blocks: int, block_dim: int, sigma: Sequence[int]) -> Mat:
    """0/1 matrix permuting the N blocks of a dN-vector: block j moves to block sigma[j].

    `sigma` is a 0-based permutation of range(num_blocks).  The result always
    has inf->inf norm 1, and composition of block permutations follows
    composition of the permutations.
    """
    n, d = num_blocks, block_dim
    if n < 1 or d < 1:
        raise ValueError(f"invalid block structure: {n} blocks of dimension {d}")
    if sorted(sigma) != list(range(n)):
        raise ValueError(f"{sigma!r} is not a permutation of 0..{n - 1}")
    size = n * d
    one, zero = Fraction(1), Fraction(0)
    flat = [zero] * (size * size)
    for j in range(n):
        target = sigma[j]
        for r in range(d):
            flat[(target * d + r) * size + (j * d + r)] = one
    return Mat(size, size, tuple(flat))


def flatten_blocks(vectors: Sequence[Sequence]) -> tuple[Fraction, ...]:
    """Concatenate N block vectors of equal dimension into one dN-vector."""
    if len(vectors) == 0:
        raise ValueError("no blocks to flatten")
    d = len(vectors[0])
    out = []
    for v in vectors:
        if len(v) != d:
            raise ValueError(f"ragged blocks: expected dimension {d}, got {len(v)}")
        out.extend(as_rat(x) for x in v)
    return tuple(out)


def split_blocks(vector: Sequence, block_dim: int) -> list[tuple[Fraction, ...]]:
    if len(vector) % block_dim != 0:
        raise ValueError(
            f"vector of length {len(vector)} does not split into blocks of {block_dim}"
        )
    vec = [as_rat(x) for x in vector]
    return [tuple(vec[i : i + block_dim]) for i in range(0, len(vec), block_dim)]


class RankDeficientError(ValueError):
    """Raised when a basis fails to have full row rank."""


@dataclass(frozen=True)
class Subspace:
    """A k-dimensional subspace of ell_inf^n given by k independent basis rows.

    Rank is verified exactly at construction; a dependent row list is a hard
    error, never silently reduced.
    """

    ambient_dim: int
    basis: Mat

    def __post_init__(self):
        n, k = self.ambient_dim, self.basis.rows
        if self.basis.cols != n:
            raise ValueError(
                f"basis rows live in dimension {self.basis.cols}, expected {n}"
            )
        if not 1 <= k <= n:
            raise ValueError(f"subspace dimension {k} out of range for ambient {n}")
        if rank_of_rows(self.basis.row_lists()) != k:
            raise RankDeficientError(
                f"basis rows are linearly dependent: rank < {k}"
            )

    @property
    def dim(self) -> int:
        return self.basis.rows

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], ambient_dim: int | None = None) -> "Subspace":
        basis = Mat.from_rows(rows)
        return cls(ambient_dim if ambient_dim is not None else basis.cols, basis)


def subspace_contains(space: Subspace, vector: Sequence) -> bool:
    """Exact membership test: is the vector a combination of the basis rows?"""
    if len(vector) != space.ambient_dim:
        raise ValueError(
            f"vector of length {len(vector)} vs ambient dimension {space.ambient_dim}"
        )
    vec = [as_rat(x) for x in vector]
    # Solve B^T x = v; consistency is exactly membership in the row space.
    bt = space.basis.transpose().row_lists()
    return solve_linear_system(bt, vec) is not None


# ---------------------------------------------------------------------------
# exact elimination toolkit


def rank_of_rows(rows: Iterable[Sequence[Fraction]]) -> int:
    work = [list(r) for r in rows]
    if not work:
        return 0
    ncols = len(work[0])
    rank = 0
    col = 0
    while rank < len(work) and col < ncols:
        pivot = next((i for i in range(rank, len(work)) if work[i][col]), None)
        if pivot is None:
            col += 1
            continue
        work[rank], work[pivot] = work[pivot], work[rank]
        prow = work[rank]
        inv = 1 / prow[col]
        work[rank] = prow = [x * inv for x in prow]
        for i in range(len(work)):
            if i != rank and work[i][col]:
                f = work[i][col]
                work[i] = [a - f * b for a, b in zip(work[i], prow)]
        rank += 1
        col += 1
    return rank


def solve_linear_system(rows: Sequence[Sequence[Fraction]],
                        rhs: Sequence[Fraction]) -> list[Fraction] | None:
    """One exact solution of A x = b (free variables set to 0), or None."""
    m = len(rows)
    if m != len(rhs):
        raise ValueError("system shape mismatch")
    n = len(rows[0]) if m else 0
    aug = [list(rows[i]) + [as_rat(rhs[i])] for i in range(m)]
    pivots: list[tuple[int, int]] = []
    rank = 0
    for col in range(n):
        pivot = next((i for i in range(rank, m) if aug[i][col]), None)
        if pivot is None:
            continue
        aug[rank], aug[pivot] = aug[pivot], aug[rank]
        prow = aug[rank]
        inv = 1 / prow[col]
        aug[rank] = prow = [x * inv for x in prow]
        for i in range(m):
            if i != rank and aug[i][col]:
                f = aug[i][col]
                aug[i] = [a - f * b for a, b in zip(aug[i], prow)]
        pivots.append((rank, col))
        rank += 1
    for i in range(rank, m):
        if aug[i][n]:
            return None
    x = [Fraction(0)] * n
    for r, c in pivots:
        x[c] = aug[r][n]
    return x


def kernel_basis(rows: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    """Exact basis of the null space {x : A x = 0}, deterministic order."""
    m = len(rows)
    n = len(rows[0]) if m else 0
    work = [list(r) for r in rows]
    pivots: list[tuple[int, int]] = []
    rank = 0
    for col in range(n):
        pivot = next((i for i in range(rank, m) if work[i][col]), None)
        if pivot is None:
            continue
        work[rank], work[pivot] = work[pivot], work[rank]
        prow = work[rank]
        inv = 1 / prow[col]
        work[rank] = prow = [x * inv for x in prow]
        for i in range(m):
            if i != rank and work[i][col]:
                f = work[i][col]
                work[i] = [a - f * b for a, b in zip(work[i], prow)]
        pivots.append((rank, col))
        rank += 1
    pivot_cols = {c for _, c in pivots}
    basis = []
    for free in range(n):
        if free in pivot_cols:
            continue
        vec = [Fraction(0)] * n
        vec[free] = Fraction(1)
        for r, c in pivots:
            vec[c] = -work[r][free]
        basis.append(vec)
    return basis


def invert_square(m: Mat) -> Mat:
    """Exact inverse of a square matrix; singular input is a rank error."""
    if m.rows != m.cols:
        raise ValueError(f"cannot invert {m.rows}x{m.cols} matrix")
    n = m.rows
    aug = [list(m.row(i)) + [Fraction(1) if i == j else Fraction(0) for j in range(n)]
           for i in range(n)]
    for col in range(n):
        pivot = next((i for i in range(col, n) if aug[i][col]), None)
        if pivot is None:
            raise RankDeficientError("matrix is singular")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        prow = aug[col]
        inv = 1 / prow[col]
        aug[col] = prow = [x * inv for x in prow]
        for i in range(n):
            if i != col and aug[i][col]:
                f = aug[i][col]
                aug[i] = [a - f * b for a, b in zip(aug[i], prow)]
    return Mat.from_rows([row[n:] for row in aug])
