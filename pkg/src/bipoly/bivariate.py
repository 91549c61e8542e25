"""Bivariate polynomial machinery behind the coded shares.

A product of the masked encoding polynomials lives on a fixed monomial
support in the (x-degree, y-degree) plane: a full rectangle of width
K+T and height L, plus a strip of height m covering the x-degrees
K+T .. 2K+2T-2 contributed by the mask cross terms.  This module builds
that support, evaluates the encoding polynomials and their formal
y-derivatives, and produces the per-response rows of the interpolation
system.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import DimensionMismatchError, InvalidOrderError, ParameterError
from .fieldcore import PrimeField, prime_field


class EvalPoint(NamedTuple):
    """One worker's evaluation point (x, y), both canonical in [0, q)."""

    x: int
    y: int


def falling_factorial(a: int, b: int) -> int:
    """a * (a-1) * ... * (a-b+1); equals 1 for b == 0."""
    out = 1
    for i in range(b):
        out *= a - i
    return out


@dataclass(frozen=True)
class SchemeParams:
    """Parameters of one coded-multiplication instance.

    K, L   -- row partitions of the left matrix, column partitions of the right
    T      -- collusion tolerance (0 disables masking, for non-private tests)
    m      -- sub-tasks per worker, at most L
    N      -- number of workers
    q      -- prime field order
    """

    K: int
    L: int
    T: int
    m: int
    N: int
    q: int

    def __post_init__(self):
        for name in ("K", "L", "m", "N"):
            if getattr(self, name) < 1:
                raise ParameterError(f"{name} must be >= 1, got {getattr(self, name)}")
        if self.T < 0:
            raise ParameterError(f"T must be >= 0, got {self.T}")
        if self.m > self.L:
            raise ParameterError(
                f"m <= L violated: m={self.m}, L={self.L} "
                "(a worker cannot hold more derivative shares than column blocks)"
            )
        prime_field(self.q)  # validates primality and the 2**62 cap
        max_x_deg = 2 * self.K + 2 * self.T - 2
        if self.q <= max_x_deg:
            raise ParameterError(
                f"q > 2K+2T-2 violated: q={self.q} but the product polynomial has "
                f"x-degree {max_x_deg}; formal derivatives need a larger field"
            )
        if self.q <= self.L - 1:
            raise ParameterError(
                f"q > L-1 violated: q={self.q}, y-degree reaches {self.L - 1}"
            )
        if self.q < self.N:
            raise ParameterError(
                f"q >= N violated: q={self.q} cannot give {self.N} workers distinct points"
            )

    @property
    def field(self) -> PrimeField:
        return prime_field(self.q)


@dataclass(frozen=True)
class MonomialSupport:
    """Sorted (x-degree, y-degree) pairs carried by the product polynomial."""

    entries: tuple[tuple[int, int], ...]

    def __len__(self) -> int:
        return len(self.entries)

    def index_map(self) -> dict[tuple[int, int], int]:
        """Column index of each monomial in interpolation-system order."""
        return {pair: i for i, pair in enumerate(self.entries)}


def build_support(params: SchemeParams) -> MonomialSupport:
    """Monomial support of the coded product for the given parameters.

    Rectangle [0, K+T-1] x [0, L-1] union strip [K+T, 2K+2T-2] x [0, m-1],
    sorted lexicographically so decoding is bit-reproducible.
    """
    k, l, t, m = params.K, params.L, params.T, params.m
    entries = {(dx, dy) for dx in range(k + t) for dy in range(l)}
    entries |= {
        (dx, dy)
        for dx in range(k + t, 2 * k + 2 * t - 1)
        for dy in range(m)
    }
    return MonomialSupport(tuple(sorted(entries)))


def _check_same_shape(mats: Sequence[np.ndarray], what: str) -> None:
    shapes = {m.shape for m in mats}
    if len(shapes) > 1:
        raise DimensionMismatchError(f"{what} blocks disagree in shape: {shapes}")


def eval_coded_a(
    params: SchemeParams,
    parts_a: Sequence[np.ndarray],
    masks_r: Sequence[np.ndarray],
    x: int,
) -> np.ndarray:
    """Evaluate the masked left-matrix polynomial at x.

    The polynomial has the K partitions on x^0 .. x^(K-1) and the T
    masks on x^K .. x^(K+T-1); evaluation is Horner in x.
    """
    if len(parts_a) != params.K or len(masks_r) != params.T:
        raise DimensionMismatchError(
            f"expected {params.K} partitions and {params.T} masks, "
            f"got {len(parts_a)} and {len(masks_r)}"
        )
    coeffs = list(parts_a) + list(masks_r)
    _check_same_shape(coeffs, "left-matrix")
    q = params.q
    acc = coeffs[-1] % q
    for c in reversed(coeffs[:-1]):
        acc = (acc * (x % q) + c) % q
    return acc


def eval_coded_b_derivative(
    params: SchemeParams,
    parts_b: Sequence[np.ndarray],
    masks_s: Sequence[Sequence[np.ndarray]],
    point: EvalPoint,
    order: int,
) -> np.ndarray:
    """Formal order-th y-derivative of the masked right-matrix polynomial.

    The polynomial carries the L partitions on y^0 .. y^(L-1) and mask
    S[t][j] on x^(K+t) * y^j.  Differentiation multiplies each live term
    by a falling factorial of its y-degree; terms of y-degree below
    `order` vanish.
    """
    if not 0 <= order < params.m:
        raise InvalidOrderError(
            f"derivative order {order} outside [0, {params.m - 1}]"
        )
    if len(parts_b) != params.L:
        raise DimensionMismatchError(
            f"expected {params.L} partitions, got {len(parts_b)}"
        )
    if len(masks_s) != params.T or any(len(row) != params.m for row in masks_s):
        raise DimensionMismatchError(
            f"expected a {params.T} x {params.m} mask grid"
        )
    flat = list(parts_b) + [s for row in masks_s for s in row]
    _check_same_shape(flat, "right-matrix")
    q = params.q
    x, y = point.x % q, point.y % q

    def horner_derivative(coeffs_by_degree: Sequence[np.ndarray]) -> np.ndarray:
        # coeffs_by_degree[d] multiplies y^d; differentiate then evaluate.
        terms = [
            c * (falling_factorial(d, order) % q) % q
            for d, c in enumerate(coeffs_by_degree)
            if d >= order
        ]
        acc = terms[-1]
        for t in reversed(terms[:-1]):
            acc = (acc * y + t) % q
        return acc

    total = horner_derivative(parts_b)
    if params.T:
        xk = pow(x, params.K, q)
        mask_acc = horner_derivative(masks_s[-1])
        for row in reversed(masks_s[:-1]):
            mask_acc = (mask_acc * x + horner_derivative(row)) % q
        total = (total + mask_acc * xk) % q
    return total


def derivative_row(
    support: MonomialSupport, point: EvalPoint, order: int, field: PrimeField
) -> np.ndarray:
    """Row of order-th y-derivative monomial evaluations at one point."""
    q = field.q
    x, y = point.x % q, point.y % q
    vals = []
    for dx, dy in support.entries:
        if dy < order:
            vals.append(0)
        else:
            v = falling_factorial(dy, order) % q
            v = v * pow(x, dx, q) % q
            v = v * pow(y, dy - order, q) % q
            vals.append(v)
    return field.asarray(vals)


def xi(a: int, b: int) -> int:
    """Total degree of all monomials x^i y^j over the rectangle [0,a] x [0,b]."""
    if a < 0 or b < 0:
        raise ParameterError(f"rectangle corners must be >= 0, got ({a}, {b})")
    return a * (a + 1) // 2 * (b + 1) + b * (b + 1) // 2 * (a + 1)


def support_degree_sum(support: MonomialSupport) -> int:
    """Sum of dx + dy over the support, by direct enumeration."""
    return sum(dx + dy for dx, dy in support.entries)
