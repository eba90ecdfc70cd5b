"""An optimised upper bound for a Banach-Mazur distance, with a concrete model.

A one-parameter family of three-stage factorizations bounds the distance
between a space and its hyperplanes by

    K(a) = 2*nu + sqrt(2a+1),   nu = sqrt(2a+1)/a,   a > 0,

so the squared bound is the rational function

    g(a) = K(a)^2 = 2a + 9 + 12/a + 4/a^2.

g is strictly convex on (0, inf); its minimiser solves a^3 - 6a - 4 = 0,
whose unique positive root is 1 + sqrt(3), giving the optimal squared bound
9 + 6*sqrt(3) ~ 19.392 and beating the previous record 11 + 6*sqrt(2).

When 2a + 1 is the square of a rational, every coefficient in the
factorization is rational ("exact" parameter sets: a = 3/2, 4, 12, ...) and
the three stages can be instantiated as exact column-finite operators on
finitely supported rational sequences under the sup norm.  That carrier is a
dense subspace, not a complete space; it is chosen because invertibility and
row sums are then decidable by exact arithmetic.  The operators work on
even/odd interleavings of the index set; direct sums of three spaces are
flattened by residue classes mod 3.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, NamedTuple

from .linalg import format_rational

_ZERO = Fraction(0)
_ONE = Fraction(1)

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


class NonExactParameterError(ValueError):
    """2a+1 is not a rational square, so the model would need irrationals."""


def _rational_sqrt(value: Fraction) -> Fraction | None:
    if value < 0:
        return None
    num, den = value.numerator, value.denominator
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn == num and rd * rd == den:
        return Fraction(rn, rd)
    return None


@dataclass(frozen=True)
class BMParameterSet:
    """The derived coefficients for one value of the shape parameter a.

    All fields are exact rationals when 2a+1 is a rational square, floats
    otherwise.  Identities that always hold (exactly in the exact case, to
    1e-12 otherwise): scale * root = 1/mu... concretely: nu = root/a,
    b = a/root = 1/nu, K = 2*nu + root, g = K^2.
    """

    a: "Fraction | float"
    mu: "Fraction | float"       # 1/a
    nu: "Fraction | float"       # sqrt(2a+1)/a
    b: "Fraction | float"        # a/sqrt(2a+1) = 1/nu
    root: "Fraction | float"     # sqrt(2a+1)
    bound: "Fraction | float"    # K(a)
    bound_sq: "Fraction | float" # g(a)
    exact: bool

    def to_json_dict(self) -> dict:
        if self.exact:
            fmt = format_rational
        else:
            fmt = float
        return {
            "a": fmt(self.a),
            "mu": fmt(self.mu),
            "nu": fmt(self.nu),
            "b": fmt(self.b),
            "root": fmt(self.root),
            "K": fmt(self.bound),
            "g": fmt(self.bound_sq),
            "exact": self.exact,
        }


def bm_params(a) -> BMParameterSet:
    """Derive the full coefficient set for a shape parameter a > 0.

    Accepts int, Fraction, 'p/q' strings or float; the parameter set is
    exact precisely when 2a+1 is the square of a rational.
    """
    if isinstance(a, str):
        from .linalg import parse_rational
        a_exact = parse_rational(a)
    else:
        a_exact = Fraction(a)
    if a_exact <= 0:
        raise ValueError(f"shape parameter must be positive, got {a!r}")
    root = _rational_sqrt(2 * a_exact + 1)
    if root is not None:
        nu = root / a_exact
        bound = 2 * nu + root
        return BMParameterSet(a_exact, 1 / a_exact, nu, 1 / nu, root,
                              bound, bound * bound, True)
    af = float(a_exact)
    rootf = math.sqrt(2.0 * af + 1.0)
    nuf = rootf / af
    boundf = 2.0 * nuf + rootf
    return BMParameterSet(af, 1.0 / af, nuf, af / rootf, rootf,
                          boundf, boundf * boundf, False)


def bound_g(a) -> "Fraction | float":
    """The squared bound g(a) = 2a + 9 + 12/a + 4/a^2; exact on rationals.

    Satisfies the polynomial identity a^2 g(a) = (a+2)^2 (2a+1).
    """
    if isinstance(a, float):
        if a <= 0:
            raise ValueError(f"shape parameter must be positive, got {a!r}")
        return 2.0 * a + 9.0 + 12.0 / a + 4.0 / (a * a)
    a = Fraction(a)
    if a <= 0:
        raise ValueError(f"shape parameter must be positive, got {a!r}")
    return 2 * a + 9 + 12 / a + 4 / (a * a)


class ClosedFormOptimum(NamedTuple):
    a_star: float
    g_star: float
    cubic_residual: float


def optimize_closed_form() -> ClosedFormOptimum:
    """The exact minimiser of g via the factored optimality cubic.

    a^3 - 6a - 4 factors as (a + 2)(a^2 - 2a - 2); the positive root of the
    quadratic is 1 + sqrt(3).
    """
    a_star = 1.0 + math.sqrt(3.0)
    g_star = 9.0 + 6.0 * math.sqrt(3.0)
    residual = abs(a_star ** 3 - 6.0 * a_star - 4.0)
    return ClosedFormOptimum(a_star, g_star, residual)


class NumericOptimum(NamedTuple):
    a_star: float
    g_star: float
    iterations: int


def optimize_numeric(lo: float, hi: float, tol: float = 1e-9) -> NumericOptimum:
    """Golden-section minimisation of g on [lo, hi]; derivative-free.

    Valid because g is strictly convex on (0, inf).  The bracket must be a
    nondegenerate positive interval.
    """
    if not (0.0 < lo < hi):
        raise ValueError(f"invalid bracket [{lo}, {hi}]")
    if tol <= 0.0:
        raise ValueError(f"invalid tolerance {tol}")
    x1 = hi - GOLDEN * (hi - lo)
    x2 = lo + GOLDEN * (hi - lo)
    f1, f2 = bound_g(x1), bound_g(x2)
    iterations = 0
    while hi - lo > tol:
        iterations += 1
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - GOLDEN * (hi - lo)
            f1 = bound_g(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + GOLDEN * (hi - lo)
            f2 = bound_g(x2)
        if iterations > 10_000:
            raise RuntimeError("golden-section failed to contract the bracket")
    a_star = 0.5 * (lo + hi)
    return NumericOptimum(a_star, bound_g(a_star), iterations)


PRIOR_BOUND_SQ = 11.0 + 6.0 * math.sqrt(2.0)


@dataclass(frozen=True)
class BoundComparison:
    ours: float
    prior: float

    @property
    def improvement(self) -> float:
        return self.prior - self.ours

    @property
    def strict(self) -> bool:
        return self.ours < self.prior

    def to_json_dict(self) -> dict:
        return {
            "ours": self.ours,
            "prior": self.prior,
            "improvement": self.improvement,
            "strict": self.strict,
        }


def compare_with_prior_bound() -> BoundComparison:
    """Our optimal squared bound against the previous record 11 + 6*sqrt(2)."""
    return BoundComparison(optimize_closed_form().g_star, PRIOR_BOUND_SQ)


# ---------------------------------------------------------------------------
# column-finite operators on finitely supported sequences

Vector = dict  # index -> Fraction, zero entries dropped


def unit(index: int) -> Vector:
    return {index: _ONE}


def sup_norm(vec: Mapping[int, Fraction]) -> Fraction:
    return max((abs(x) for x in vec.values()), default=_ZERO)


@dataclass(frozen=True)
class Clause:
    """One residue-class rule: out[om*k + or_] += coeff * in[im*k + ir]."""

    out_modulus: int
    out_residue: int
    in_modulus: int
    in_residue: int
    coeff: Fraction


class SeqOperator:
    """A column- and row-finite linear operator on finitely supported sequences.

    `row(i)` lists the (input index, coefficient) pairs feeding output i;
    `col(j)` lists the (output index, coefficient) pairs fed by input j.
    Both directions are kept so that application (column-driven) and row-sum
    norms (row-driven) are each direct.
    """

    def __init__(self, row_fn: Callable[[int], list], col_fn: Callable[[int], list],
                 descriptor: str):
        self._row_fn = row_fn
        self._col_fn = col_fn
        self.descriptor = descriptor

    def __repr__(self):
        return f"SeqOperator({self.descriptor})"

    @staticmethod
    def _merge(pairs) -> tuple[tuple[int, Fraction], ...]:
        acc: dict[int, Fraction] = {}
        for idx, coeff in pairs:
            acc[idx] = acc.get(idx, _ZERO) + coeff
        return tuple(sorted((i, c) for i, c in acc.items() if c))

    def row(self, i: int) -> tuple[tuple[int, Fraction], ...]:
        return self._merge(self._row_fn(i))

    def col(self, j: int) -> tuple[tuple[int, Fraction], ...]:
        return self._merge(self._col_fn(j))

    def apply(self, vec: Mapping[int, Fraction]) -> Vector:
        out: dict[int, Fraction] = {}
        for j, x in vec.items():
            if not x:
                continue
            for i, coeff in self.col(j):
                out[i] = out.get(i, _ZERO) + coeff * x
        return {i: v for i, v in out.items() if v}

    @classmethod
    def identity(cls) -> "SeqOperator":
        return cls.from_clauses([Clause(1, 0, 1, 0, _ONE)], "I")

    @classmethod
    def from_clauses(cls, clauses, descriptor: str) -> "SeqOperator":
        clauses = tuple(clauses)

        def row_fn(i: int):
            pairs = []
            for cl in clauses:
                if i % cl.out_modulus == cl.out_residue:
                    k = i // cl.out_modulus
                    pairs.append((cl.in_modulus * k + cl.in_residue, cl.coeff))
            return pairs

        def col_fn(j: int):
            pairs = []
            for cl in clauses:
                if j % cl.in_modulus == cl.in_residue:
                    k = j // cl.in_modulus
                    pairs.append((cl.out_modulus * k + cl.out_residue, cl.coeff))
            return pairs

        return cls(row_fn, col_fn, descriptor)

    @classmethod
    def compose(cls, outer: "SeqOperator", inner: "SeqOperator") -> "SeqOperator":
        def row_fn(i: int):
            pairs = []
            for mid, c1 in outer.row(i):
                for j, c2 in inner.row(mid):
                    pairs.append((j, c1 * c2))
            return pairs

        def col_fn(j: int):
            pairs = []
            for mid, c1 in inner.col(j):
                for i, c2 in outer.col(mid):
                    pairs.append((i, c1 * c2))
            return pairs

        return cls(row_fn, col_fn, f"{outer.descriptor}∘{inner.descriptor}")


class NormWindow(NamedTuple):
    lower: Fraction
    stabilized: bool


def operator_norm_window(op: SeqOperator, window: int = 4096) -> NormWindow:
    """Max absolute row sum over output indices below `window`.

    This is a lower bound for the sup-norm operator norm.  `stabilized`
    reports whether the distinct row-coefficient multisets seen in the full
    window already all occur in its first half, the heuristic for "growing
    the window will not reveal new row shapes".
    """
    if window < 2:
        raise ValueError(f"window {window} too small")
    best = _ZERO
    patterns_full: set = set()
    patterns_half: set = set()
    half = window // 2
    for i in range(window):
        row = op.row(i)
        total = sum((abs(c) for _, c in row), _ZERO)
        if total > best:
            best = total
        shape = tuple(sorted(c for _, c in row))
        patterns_full.add(shape)
        if i < half:
            patterns_half.add(shape)
    return NormWindow(best, patterns_full == patterns_half)


def verify_inverse(forward: SeqOperator, inverse: SeqOperator,
                   basis_count: int = 256) -> bool:
    """Check both composition orders on the first `basis_count` unit vectors."""
    for j in range(basis_count):
        e = unit(j)
        if inverse.apply(forward.apply(e)) != e:
            return False
        if forward.apply(inverse.apply(e)) != e:
            return False
    return True


# ---------------------------------------------------------------------------
# the concrete three-stage model

# Index conventions.  A single sequence space carries the domain and the
# codomain; even/odd splittings are the maps
#   split_even x = (x_{2k})_k,  split_odd x = (x_{2k+1})_k,
#   embed_even w = w on the even indices, zero on the odd ones,
# and zero_odd keeps the even coordinates (a norm-one projection whose
# kernel is the odd-supported vectors).  Direct sums of three sequence
# spaces are flattened by residue classes mod 3, so component c of triple
# index k lives at flat index 3k + c; a vector from the odd-supported kernel
# keeps its native indexing inside its residue class.


@dataclass(frozen=True)
class SquareSystem:
    """The fixed even/odd machinery shared by both sides of the factorization.

    phi1/phi2 split the domain into its even- and odd-indexed halves,
    psi1/psi2 do the same on the codomain side; theta/eta embed one space
    onto the even-indexed subspace of the other; p/r are the norm-one
    projections zeroing the odd coordinates.  The kernels of p and r (the
    odd-supported vectors) are exposed as membership predicates.
    """

    phi1: SeqOperator
    phi2: SeqOperator
    psi1: SeqOperator
    psi2: SeqOperator
    theta: SeqOperator
    eta: SeqOperator
    p: SeqOperator
    r: SeqOperator

    @staticmethod
    def kernel_contains(vec: Mapping[int, Fraction]) -> bool:
        """Membership in ker p = ker r: support on odd indices only."""
        return all(i % 2 == 1 for i, x in vec.items() if x)


def _square_system() -> SquareSystem:
    split_even = [Clause(1, 0, 2, 0, _ONE)]   # out k <- in 2k
    split_odd = [Clause(1, 0, 2, 1, _ONE)]    # out k <- in 2k+1
    embed = [Clause(2, 0, 1, 0, _ONE)]        # out 2k <- in k
    zero_odd = [Clause(2, 0, 2, 0, _ONE)]     # out 2k <- in 2k
    mk = SeqOperator.from_clauses
    return SquareSystem(
        phi1=mk(split_even, "phi_1"),
        phi2=mk(split_odd, "phi_2"),
        psi1=mk(split_even, "psi_1"),
        psi2=mk(split_odd, "psi_2"),
        theta=mk(embed, "theta"),
        eta=mk(embed, "eta"),
        p=mk(zero_odd, "P"),
        r=mk(zero_odd, "R"),
    )


@dataclass(frozen=True)
class SequenceModel:
    """The instantiated factorization: W = U_a o S o T_a and its inverse."""

    params: BMParameterSet
    system: SquareSystem
    stages: tuple[SeqOperator, SeqOperator, SeqOperator]
    inverse_stages: tuple[SeqOperator, SeqOperator, SeqOperator]
    forward: SeqOperator
    inverse: SeqOperator
    bound: Fraction


def build_model(a) -> SequenceModel:
    """Instantiate the three stages for an exact parameter set.

    The stage actions, written on triples and then flattened mod 3:

      T_a x       = (nu * even(even x),  mu * odd(even x),  x - zero_odd x)
      S (y1,y2,e) = (even y1,  embed y2 + e,  y1 - zero_odd y1)
      U_a (x1,x2,f) = embed(interleave(a*x1, b*x2)) + f

    and the inverses:

      U_a^-1 y    = (mu * even(even y),  nu * odd(even y),  y - zero_odd y)
      S^-1 (x1,x2,f) = (embed x1 + f,  even x2,  x2 - zero_odd x2)
      T_a^-1 (y1,y2,e) = embed(interleave(y1/nu, a*y2)) + e

    where even/odd extract the even- or odd-indexed half of a sequence and
    embed doubles indices.  Each stage reduces to finitely many residue-class
    clauses on flat indices, recorded below.
    """
    params = bm_params(a)
    if not params.exact:
        raise NonExactParameterError(
            f"2*{a}+1 is not the square of a rational; the sequence model "
            f"needs exact coefficients"
        )
    av, mu, nu, b = params.a, params.mu, params.nu, params.b
    mk = SeqOperator.from_clauses

    t_fwd = mk([
        Clause(3, 0, 4, 0, nu),    # first component k <- nu * x_{4k}
        Clause(3, 1, 4, 2, mu),    # second component k <- mu * x_{4k+2}
        Clause(6, 5, 2, 1, _ONE),  # third component keeps the odd part of x
    ], "T_a")
    s_mid = mk([
        Clause(3, 0, 6, 0, _ONE),  # first out component k <- y1_{2k}
        Clause(6, 1, 3, 1, _ONE),  # second out component 2k <- y2_k
        Clause(3, 1, 3, 2, _ONE),  # second out component k += e_k
        Clause(6, 5, 6, 3, _ONE),  # third out component = odd part of y1
    ], "S")
    u_fwd = mk([
        Clause(4, 0, 3, 0, av),    # out 4k <- a * x1_k
        Clause(4, 2, 3, 1, b),     # out 4k+2 <- b * x2_k
        Clause(1, 0, 3, 2, _ONE),  # out i += f_i
    ], "U_a")

    u_inv = mk([
        Clause(3, 0, 4, 0, mu),    # x1_k <- mu * y_{4k}
        Clause(3, 1, 4, 2, nu),    # x2_k <- nu * y_{4k+2}
        Clause(6, 5, 2, 1, _ONE),  # f keeps the odd part of y
    ], "U_a^-1")
    s_inv = mk([
        Clause(6, 0, 3, 0, _ONE),  # y1_{2k} <- x1_k
        Clause(3, 0, 3, 2, _ONE),  # y1_i += f_i
        Clause(3, 1, 6, 1, _ONE),  # y2_k <- x2_{2k}
        Clause(6, 5, 6, 4, _ONE),  # e = odd part of x2
    ], "S^-1")
    t_inv = mk([
        Clause(4, 0, 3, 0, 1 / nu),  # out 4k <- y1_k / nu
        Clause(4, 2, 3, 1, av),      # out 4k+2 <- a * y2_k
        Clause(1, 0, 3, 2, _ONE),    # out i += e_i
    ], "T_a^-1")

    forward = SeqOperator.compose(u_fwd, SeqOperator.compose(s_mid, t_fwd))
    inverse = SeqOperator.compose(t_inv, SeqOperator.compose(s_inv, u_inv))
    return SequenceModel(params, _square_system(), (t_fwd, s_mid, u_fwd),
                         (u_inv, s_inv, t_inv), forward, inverse, params.bound)
