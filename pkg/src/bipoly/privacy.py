"""Machine-checkable privacy verification for the coded shares.

A coalition of T workers observes T evaluations of the masked left
polynomial and m*T evaluations (derivatives included) of the masked
right polynomial.  Privacy holds when the coefficient matrices mapping
the uniform masks onto those observations have full rank: the masks
then act as a one-time pad and the coalition's view is independent of
the inputs.  The rank criterion is validated here in two independent
ways: structurally (exact rank over F_q, single subsets or batched
sweeps over every subset) and information-theoretically (exhaustive
mutual-information enumeration at toy scale).

These checks deliberately take the masking dimensions (K, T, m, q)
directly: the column-partition count L never enters the coalition's
view, so toy instances are not forced to satisfy the decode-side
m <= L coupling.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .bivariate import EvalPoint, falling_factorial
from .errors import (
    DuplicatePointsError,
    ParameterError,
    TooLargeToEnumerateError,
)
from .fieldcore import prime_field
from .scheme import WorkerShare

# Hard cap on exhaustive enumeration: q**(2 + T + T*m) states.
_ENUM_LIMIT = 20_000_000


@dataclass(frozen=True)
class MaskMatrices:
    """Coefficient matrices from mask variables to coalition observations.

    a_coeffs[i, t] multiplies left-mask t in worker i's A share;
    b_coeffs[i*m + o, t*m + j] multiplies right-mask (t, j) in worker
    i's order-o derivative share.
    """

    a_coeffs: np.ndarray
    b_coeffs: np.ndarray


@dataclass(frozen=True)
class PrivacyCheck:
    """Outcome of a rank check, with the deficient matrix as witness."""

    passed: bool
    rank_a: int
    rank_b: int
    failed_name: str | None = None
    witness: np.ndarray | None = None


@dataclass(frozen=True)
class CollusionView:
    """What a T-subset of workers sees: their points and raw shares."""

    subset: tuple[int, ...]
    observations_a: tuple[tuple[EvalPoint, np.ndarray], ...]
    observations_b: tuple[tuple[EvalPoint, int, np.ndarray], ...]


def _validate_points(points: Sequence[EvalPoint], t: int) -> None:
    if len(points) != t:
        raise ParameterError(f"expected {t} coalition points, got {len(points)}")
    if len(set(points)) != len(points):
        raise DuplicatePointsError(f"coalition points are not distinct: {points}")


def mask_matrices(
    points: Sequence[EvalPoint], K: int, T: int, m: int, q: int
) -> MaskMatrices:
    """Build the mask-to-observation coefficient matrices for one coalition.

    Left masks ride on x^(K+t); right mask (t, j) rides on x^(K+t) y^j,
    so its order-o derivative coefficient is fall(j, o) x^(K+t) y^(j-o).
    """
    field = prime_field(q)
    _validate_points(points, T)
    ma = field.zeros(T, T)
    mb = field.zeros(m * T, m * T)
    for i, pt in enumerate(points):
        x, y = pt.x % q, pt.y % q
        for t in range(T):
            ma[i, t] = pow(x, K + t, q)
        for o in range(m):
            for t in range(T):
                xpow = pow(x, K + t, q)
                for j in range(m):
                    if j < o:
                        continue
                    coeff = falling_factorial(j, o) % q
                    coeff = coeff * xpow % q
                    coeff = coeff * pow(y, j - o, q) % q
                    mb[i * m + o, t * m + j] = coeff
    return MaskMatrices(a_coeffs=ma, b_coeffs=mb)


def perfect_privacy_check(
    points: Sequence[EvalPoint], K: int, T: int, m: int, q: int
) -> PrivacyCheck:
    """PASS iff both mask-coefficient matrices have full rank over F_q.

    Full rank means every observation carries an independent uniform
    mask combination, so the coalition's view is a one-time-pad image.
    A failed check returns the rank-deficient matrix as witness.
    """
    field = prime_field(q)
    mats = mask_matrices(points, K, T, m, q)
    rank_a = field.rank(mats.a_coeffs) if T else 0
    rank_b = field.rank(mats.b_coeffs) if T else 0
    if rank_a < T:
        return PrivacyCheck(False, rank_a, rank_b, "a_coeffs", mats.a_coeffs)
    if rank_b < m * T:
        return PrivacyCheck(False, rank_a, rank_b, "b_coeffs", mats.b_coeffs)
    return PrivacyCheck(True, rank_a, rank_b)


def collusion_view(
    shares: Sequence[WorkerShare], subset: Sequence[int], T: int
) -> CollusionView:
    """Assemble the raw view of a coalition from actual worker shares.

    Coalitions larger than the tolerance T are outside the threat model
    and rejected.
    """
    if len(subset) != T:
        raise ParameterError(
            f"coalition size {len(subset)} differs from tolerance T={T}"
        )
    if len(set(subset)) != len(subset):
        raise DuplicatePointsError(f"coalition lists worker {subset} twice")
    by_id = {sh.worker_id: sh for sh in shares}
    missing = [wid for wid in subset if wid not in by_id]
    if missing:
        raise ParameterError(f"unknown worker ids in coalition: {missing}")
    obs_a = []
    obs_b = []
    for wid in subset:
        sh = by_id[wid]
        obs_a.append((sh.point, sh.share_a))
        for order, blk in enumerate(sh.shares_b):
            obs_b.append((sh.point, order, blk))
    return CollusionView(tuple(subset), tuple(obs_a), tuple(obs_b))


def _power_tables(
    points: Sequence[EvalPoint], K: int, T: int, m: int, q: int
) -> tuple[np.ndarray, np.ndarray]:
    """xpow[i, t] = x_i^(K+t), ypow[i, e] = y_i^e, both int64 mod q."""
    n = len(points)
    xpow = np.zeros((n, max(T, 1)), dtype=np.int64)
    ypow = np.zeros((n, max(m, 1)), dtype=np.int64)
    for i, pt in enumerate(points):
        x, y = pt.x % q, pt.y % q
        acc = pow(x, K, q)
        for t in range(max(T, 1)):
            xpow[i, t] = acc
            acc = acc * x % q
        acc = 1
        for e in range(max(m, 1)):
            ypow[i, e] = acc
            acc = acc * y % q
    return xpow, ypow


def _fall_table(m: int, q: int) -> np.ndarray:
    """ft[o, j] = fall(j, o) mod q; zero wherever j < o."""
    ft = np.zeros((m, m), dtype=np.int64)
    for o in range(m):
        for j in range(m):
            ft[o, j] = falling_factorial(j, o) % q
    return ft


@dataclass(frozen=True)
class SweepReport:
    """Result of a rank sweep over coalition subsets."""

    subsets_checked: int
    failing_subsets: tuple[tuple[int, ...], ...]

    @property
    def passed(self) -> bool:
        return not self.failing_subsets


def sweep_collusion_subsets(
    points: Sequence[EvalPoint],
    K: int,
    T: int,
    m: int,
    q: int,
    subsets: Iterable[Sequence[int]] | None = None,
    chunk: int = 50_000,
    max_failures: int = 20,
) -> SweepReport:
    """Rank-check every T-subset of workers in one vectorised pass.

    Subsets index into `points` (0-based).  Needs q < 2**31 for the
    batched elimination; the single-subset perfect_privacy_check covers
    larger fields.  Agreement between the two paths is enforced in the
    test suite.
    """
    field = prime_field(q)
    if T == 0:
        return SweepReport(0, ())
    if subsets is None:
        subsets = itertools.combinations(range(len(points)), T)
    sub_arr = np.array(list(subsets), dtype=np.intp).reshape(-1, T)
    xpow, ypow = _power_tables(points, K, T, m, q)
    ft = _fall_table(m, q)
    # w[i, o, j] = fall(j, o) * y_i^(j-o); the fall factor zeroes j < o,
    # so the clipped power index never leaks a wrong value.
    ydiff = np.arange(m)[None, :] - np.arange(m)[:, None]
    w = ft[None, :, :] * ypow[:, np.clip(ydiff, 0, None)] % q
    failures: list[tuple[int, ...]] = []
    checked = 0
    for lo in range(0, sub_arr.shape[0], chunk):
        sub = sub_arr[lo : lo + chunk]
        ma = xpow[sub]  # (S, T, T)
        xs = ma[:, :, None, :, None]  # worker axis, mask-t axis
        wb = w[sub][:, :, :, None, :]  # worker axis, order axis, mask-j axis
        mb = (xs * wb % q).reshape(sub.shape[0], T * m, T * m)
        ok = field.batched_nonsingular(ma)
        ok &= field.batched_nonsingular(mb)
        checked += sub.shape[0]
        for bad in np.nonzero(~ok)[0]:
            if len(failures) < max_failures:
                failures.append(tuple(int(v) for v in sub[bad]))
    return SweepReport(checked, tuple(failures))


def exhaustive_mi_check(
    points: Sequence[EvalPoint],
    K: int,
    T: int,
    m: int,
    q: int,
    zero_r_masks: bool = False,
    zero_s_masks: bool = False,
) -> float:
    """Exact mutual information (bits) between scalar inputs and the view.

    Enumerates every (A, B, masks) tuple for a single-partition instance
    (scalar A and B) and counts the joint distribution of ((A, B),
    coalition view).  Returns exactly 0.0 when the view is independent
    of the inputs.  The zero_*_masks switches pin a mask family to zero
    to instrument deliberately broken encodings.
    """
    prime_field(q)
    if K != 1:
        raise ParameterError(
            "exhaustive enumeration covers single-partition instances (K = 1)"
        )
    _validate_points(points, T)
    if T == 0:
        return 0.0
    n_mask = T + T * m
    n_view = T * (1 + m)
    states = q ** (2 + n_mask)
    if states > _ENUM_LIMIT:
        raise TooLargeToEnumerateError(
            f"{states} states exceed the enumeration limit {_ENUM_LIMIT}"
        )
    xpow, ypow = _power_tables(points, K, T, m, q)
    ft = _fall_table(m, q)
    n_tuples = q**n_mask
    idx = np.arange(n_tuples, dtype=np.int64)
    zero = np.zeros(n_tuples, dtype=np.int64)

    def digit(v: int) -> np.ndarray:
        return (idx // q**v) % q

    r_digit = [zero if zero_r_masks else digit(t) for t in range(T)]
    s_digit = [
        [zero if zero_s_masks else digit(T + t * m + j) for j in range(m)]
        for t in range(T)
    ]
    # Mask contribution to each view component; components are ordered
    # A-view per worker first, then (worker, order) derivative views.
    mask_parts: list[np.ndarray] = []
    for i in range(T):
        part = zero.copy()
        for t in range(T):
            part = (part + r_digit[t] * int(xpow[i, t])) % q
        mask_parts.append(part)
    for i in range(T):
        for o in range(m):
            part = zero.copy()
            for t in range(T):
                for j in range(o, m):
                    coeff = int(ft[o, j]) * int(xpow[i, t]) % q
                    coeff = coeff * int(ypow[i, j - o]) % q
                    part = (part + s_digit[t][j] * coeff) % q
            mask_parts.append(part)
    code = np.zeros(n_tuples, dtype=np.int64)
    for comp, part in enumerate(mask_parts):
        code += part * q**comp
    base_counts = np.bincount(code, minlength=q**n_view)
    grid = base_counts.reshape((q,) * n_view)
    # Axis a of the grid is component n_view-1-a (most significant first).
    # Shifting the A-view axes by A and the order-0 derivative axes by B
    # turns the mask distribution into the view distribution for (A, B).
    joint = np.zeros((q * q, q**n_view), dtype=np.int64)
    for a_val in range(q):
        for b_val in range(q):
            shifts = []
            for axis in range(n_view):
                comp = n_view - 1 - axis
                if comp < T:
                    shifts.append(a_val)
                elif (comp - T) % m == 0:
                    shifts.append(b_val)
                else:
                    shifts.append(0)
            rolled = np.roll(grid, shift=tuple(shifts), axis=tuple(range(n_view)))
            joint[a_val * q + b_val] = rolled.ravel()
    total = q * q * n_tuples
    colsum = joint.sum(axis=0)
    rows, cols = np.nonzero(joint)
    c = joint[rows, cols].astype(np.float64)
    # log2(c * q^2) - log2(colsum) is exactly zero when the conditional
    # equals the marginal, keeping the perfectly-private case at 0.0.
    terms = c / total * (np.log2(c * q * q) - np.log2(colsum[cols].astype(np.float64)))
    return float(terms.sum())
