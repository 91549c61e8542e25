"""End-to-end coded multiplication: encode, worker products, decode.

The master splits A into K row blocks and B into L column blocks, masks
them with uniform random matrices, and hands worker i one evaluation of
the left polynomial plus the first m y-derivatives of the right
polynomial at a private point (x_i, y_i).  Every sub-task result is one
dense block product; any recovery_threshold() of them, taken in
per-worker derivative order, pin down all K*L blocks of A @ B through
one square linear solve.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import NamedTuple, Sequence

import numpy as np

from .bivariate import (
    EvalPoint,
    MonomialSupport,
    SchemeParams,
    build_support,
    derivative_row,
    eval_coded_a,
    eval_coded_b_derivative,
)
from .errors import (
    BudgetTooSmallError,
    DecodeSingularError,
    FieldTooSmallError,
    IndivisibleDimensionsError,
    InvalidOrderError,
    NonIntegerBoundError,
    NotEnoughResponsesError,
    OrderViolationError,
    ParameterError,
)
from .fieldcore import prime_field


@dataclass(frozen=True)
class WorkerShare:
    """Everything one worker receives: A(x_i) plus m derivative shares of B."""

    worker_id: int
    point: EvalPoint
    q: int
    share_a: np.ndarray
    shares_b: tuple[np.ndarray, ...]


@dataclass(frozen=True)
class PartialResult:
    """One completed sub-task: the product for a (worker, derivative order)."""

    worker_id: int
    order: int
    point: EvalPoint
    product: np.ndarray


@dataclass(frozen=True)
class DecodedProduct:
    """K x L grid of recovered blocks and their assembly into A @ B."""

    blocks: tuple[tuple[np.ndarray, ...], ...]
    assembled: np.ndarray


class Encoding(NamedTuple):
    shares: list[WorkerShare]
    masks_r: list[np.ndarray]
    masks_s: list[list[np.ndarray]]


def recovery_threshold(params: SchemeParams) -> int:
    """Minimum number of in-order sub-task results that determine A @ B."""
    k, l, t, m = params.K, params.L, params.T, params.m
    return (k + t) * l + m * (k + t - 1)


def failure_bound_d(params: SchemeParams) -> int:
    """Closed-form degree bound d; decoding fails with probability <= d/q.

    Evaluated in exact integer arithmetic.  See support_degree_sum for
    the enumeration oracle, which exceeds this expression by m*K.
    """
    k, l, t, m = params.K, params.L, params.T, params.m
    s = k + t
    num = m * (3 * s * s + m * s - 8 * k - 6 * t - m + 3) + s * l * (k + l + t - 2)
    if num % 2:
        raise NonIntegerBoundError(f"bound numerator {num} is odd for {params}")
    return num // 2


def field_element_bits(q: int) -> int:
    """ceil(log2 q): bits needed to address one field element."""
    return (q - 1).bit_length()


def upload_cost_bits(params: SchemeParams, r: int, s: int, c: int) -> int:
    """Total master-to-worker bits: N(rs/K + m*sc/L) elements."""
    _check_divisible(params, r, c)
    per_worker = r * s // params.K + params.m * s * c // params.L
    return params.N * per_worker * field_element_bits(params.q)


def max_m_for_budget(budget: int, l: int) -> int:
    """Largest m under an upload budget counted in matrix partitions.

    One partition-equivalent carries the A share; the rest carry B
    derivative shares, capped at L.
    """
    if budget < 2:
        raise BudgetTooSmallError(
            f"budget {budget} cannot hold one A share and one B share"
        )
    return min(budget - 1, l)


def _check_divisible(params: SchemeParams, r: int, c: int) -> None:
    if r % params.K:
        raise IndivisibleDimensionsError(f"K={params.K} does not divide r={r}")
    if c % params.L:
        raise IndivisibleDimensionsError(f"L={params.L} does not divide c={c}")


def partition(
    params: SchemeParams, a: np.ndarray, b: np.ndarray
) -> tuple[list[np.ndarray], list[np.ndarray]]:
    """Row blocks of A (height r/K) and column blocks of B (width c/L)."""
    r, s = a.shape
    s2, c = b.shape
    if s != s2:
        raise IndivisibleDimensionsError(
            f"inner dimensions differ: A is {a.shape}, B is {b.shape}"
        )
    _check_divisible(params, r, c)
    br, bc = r // params.K, c // params.L
    parts_a = [a[i * br : (i + 1) * br, :].copy() for i in range(params.K)]
    parts_b = [b[:, j * bc : (j + 1) * bc].copy() for j in range(params.L)]
    return parts_a, parts_b


def sample_points(params: SchemeParams, rng: np.random.Generator) -> list[EvalPoint]:
    """Uniform evaluation points with pairwise-distinct (x, y) tuples.

    With T >= 1 the x coordinates are additionally pairwise distinct and
    nonzero: x_i = 0 would hand worker i an unmasked A block, and a
    repeated x would let two colluders cancel mask contributions.
    """
    q, n = params.q, params.N
    if q < n:
        raise FieldTooSmallError(f"q={q} < N={n}: not enough points to go around")
    if params.T >= 1:
        if q - 1 < n:
            raise FieldTooSmallError(
                f"q-1={q - 1} < N={n}: masking needs distinct nonzero x coordinates"
            )
        xs: list[int] = []
        seen = set()
        while len(xs) < n:
            cand = int(rng.integers(1, q))
            if cand not in seen:
                seen.add(cand)
                xs.append(cand)
        ys = [int(rng.integers(0, q)) for _ in range(n)]
        return [EvalPoint(x, y) for x, y in zip(xs, ys)]
    points: list[EvalPoint] = []
    taken = set()
    while len(points) < n:
        cand = EvalPoint(int(rng.integers(0, q)), int(rng.integers(0, q)))
        if cand not in taken:
            taken.add(cand)
            points.append(cand)
    return points


def encode(
    params: SchemeParams,
    a: np.ndarray,
    b: np.ndarray,
    rng: np.random.Generator | None = None,
    points: Sequence[EvalPoint] | None = None,
    masks_r: Sequence[np.ndarray] | None = None,
    masks_s: Sequence[Sequence[np.ndarray]] | None = None,
) -> Encoding:
    """Produce the N worker shares for multiplying a @ b.

    Masks default to fresh uniform draws; points default to
    sample_points().  Both can be injected for deterministic tests.  The
    returned masks exist for test instrumentation only and must never be
    serialized alongside worker-facing data.
    """
    field = params.field
    parts_a, parts_b = partition(params, a, b)
    br, s = parts_a[0].shape
    bc = parts_b[0].shape[1]
    if rng is None and (points is None or masks_r is None or masks_s is None):
        raise ParameterError(
            "encode needs an rng when points or masks are not supplied"
        )
    if points is None:
        points = sample_points(params, rng)
    elif len(points) != params.N:
        raise ParameterError(
            f"expected {params.N} evaluation points, got {len(points)}"
        )
    if masks_r is None:
        masks_r = [field.random_matrix(rng, br, s) for _ in range(params.T)]
    if masks_s is None:
        masks_s = [
            [field.random_matrix(rng, s, bc) for _ in range(params.m)]
            for _ in range(params.T)
        ]
    masks_r = [field.asarray(mk) for mk in masks_r]
    masks_s = [[field.asarray(mk) for mk in row] for row in masks_s]
    shares = []
    for wid, pt in enumerate(points, start=1):
        share_a = eval_coded_a(params, parts_a, masks_r, pt.x)
        shares_b = tuple(
            eval_coded_b_derivative(params, parts_b, masks_s, pt, order)
            for order in range(params.m)
        )
        shares.append(
            WorkerShare(
                worker_id=wid, point=pt, q=params.q, share_a=share_a, shares_b=shares_b
            )
        )
    return Encoding(shares, list(masks_r), [list(row) for row in masks_s])


def worker_compute(share: WorkerShare, order: int) -> PartialResult:
    """One sub-task: multiply the A share by the order-th B share.

    Workers run orders 0, 1, ..., m-1 in sequence; drivers enforce that
    ordering, and decode rejects response sets that break it.
    """
    if not 0 <= order < len(share.shares_b):
        raise InvalidOrderError(
            f"order {order} outside [0, {len(share.shares_b) - 1}] "
            f"for worker {share.worker_id}"
        )
    field = prime_field(share.q)
    product = field.mat_mul(share.share_a, share.shares_b[order])
    return PartialResult(
        worker_id=share.worker_id, order=order, point=share.point, product=product
    )


def compute_all(shares: Sequence[WorkerShare]) -> list[PartialResult]:
    """Run every worker through all m sub-tasks in increasing order."""
    return [
        worker_compute(share, order)
        for share in shares
        for order in range(len(share.shares_b))
    ]


def sort_responses(results: Sequence[PartialResult]) -> list[PartialResult]:
    """Deterministic master-side ordering: by (worker_id, order)."""
    return sorted(results, key=lambda r: (r.worker_id, r.order))


def validate_prefix(results: Sequence[PartialResult], m: int | None = None) -> None:
    """Check the in-order computation contract.

    Each worker's received orders must be exactly 0..k-1 for some k
    (no gaps, no duplicates), and below m when m is given.
    """
    by_worker: dict[int, list[int]] = {}
    for res in results:
        by_worker.setdefault(res.worker_id, []).append(res.order)
    for wid, orders in by_worker.items():
        orders.sort()
        if orders != list(range(len(orders))):
            raise OrderViolationError(
                f"worker {wid} responses have orders {orders}; "
                "expected a gap-free prefix 0..k-1"
            )
        if m is not None and len(orders) > m:
            raise OrderViolationError(
                f"worker {wid} returned {len(orders)} results but m={m}"
            )


def interpolation_matrix(
    params: SchemeParams,
    support: MonomialSupport,
    point_orders: Sequence[tuple[EvalPoint, int]],
) -> np.ndarray:
    """Stack derivative-evaluation rows for the given (point, order) pairs."""
    field = params.field
    if not point_orders:
        return np.zeros((0, len(support)), dtype=field.dtype)
    rows = [derivative_row(support, pt, order, field) for pt, order in point_orders]
    return np.stack(rows)


def build_interpolation_matrix(
    params: SchemeParams,
    support: MonomialSupport,
    results: Sequence[PartialResult],
) -> np.ndarray:
    """Interpolation matrix of a response set, rows in (worker, order) order."""
    validate_prefix(results, params.m)
    ordered = sort_responses(results)
    return interpolation_matrix(
        params, support, [(res.point, res.order) for res in ordered]
    )


def decode(
    params: SchemeParams,
    results: Sequence[PartialResult],
    support: MonomialSupport | None = None,
) -> DecodedProduct:
    """Recover A @ B from at least recovery_threshold() in-order results.

    Exactly the first R_th responses in (worker_id, order) order are
    used; truncating a sorted response set keeps each worker's prefix,
    so the order contract survives.  The coefficient of x^(k-1) y^(l-1)
    for k <= K, l <= L is the block A_k @ B_l: mask cross terms only
    reach x-degrees >= K, so the extracted blocks are mask-free.
    """
    r_th = recovery_threshold(params)
    if len(results) < r_th:
        raise NotEnoughResponsesError(
            f"{len(results)} responses < recovery threshold {r_th}"
        )
    validate_prefix(results, params.m)
    chosen = sort_responses(results)[:r_th]
    if support is None:
        support = build_support(params)
    field = params.field
    mat = interpolation_matrix(
        params, support, [(res.point, res.order) for res in chosen]
    )
    rhs = np.stack([field.asarray(res.product).ravel() for res in chosen])
    coeffs = field.solve_linear(mat, rhs)
    if coeffs is None:
        raise DecodeSingularError(
            "interpolation matrix is singular for these evaluation points; "
            "re-encode with fresh points"
        )
    br, bc = chosen[0].product.shape
    index = support.index_map()
    blocks = tuple(
        tuple(coeffs[index[(k, l)]].reshape(br, bc) for l in range(params.L))
        for k in range(params.K)
    )
    assembled = np.concatenate(
        [np.concatenate(row, axis=1) for row in blocks], axis=0
    )
    return DecodedProduct(blocks=blocks, assembled=assembled)


def random_prefix_subset(
    results: Sequence[PartialResult], size: int, rng: np.random.Generator
) -> list[PartialResult]:
    """Random subset of `size` results that respects per-worker order.

    Picks how many results each worker contributes, then takes that
    worker's lowest orders, so any returned subset is decode-eligible.
    """
    by_worker: dict[int, list[PartialResult]] = {}
    for res in results:
        by_worker.setdefault(res.worker_id, []).append(res)
    for lst in by_worker.values():
        lst.sort(key=lambda r: r.order)
    wids = sorted(by_worker)
    caps = {wid: len(by_worker[wid]) for wid in wids}
    if size > sum(caps.values()):
        raise NotEnoughResponsesError(
            f"cannot draw {size} results from {sum(caps.values())} available"
        )
    counts = dict.fromkeys(wids, 0)
    total = 0
    while total < size:
        open_wids = [wid for wid in wids if counts[wid] < caps[wid]]
        pick = open_wids[int(rng.integers(len(open_wids)))]
        counts[pick] += 1
        total += 1
    return [res for wid in wids for res in by_worker[wid][: counts[wid]]]


def with_m(params: SchemeParams, m: int) -> SchemeParams:
    """Copy of params with a different per-worker task cap."""
    return replace(params, m=m)
