import itertools
import math

import numpy as np
import pytest

from bipoly.bivariate import EvalPoint, SchemeParams
from bipoly.errors import (
    DuplicatePointsError,
    ParameterError,
    TooLargeToEnumerateError,
)
from bipoly.fieldcore import prime_field
from bipoly.privacy import (
    collusion_view,
    exhaustive_mi_check,
    mask_matrices,
    perfect_privacy_check,
    sweep_collusion_subsets,
)
from bipoly.scheme import encode, sample_points

Q31 = 2**31 - 1


# -- coefficient matrices ---------------------------------------------------


def test_mask_matrices_single_worker():
    mats = mask_matrices([EvalPoint(3, 5)], K=2, T=1, m=1, q=101)
    assert mats.a_coeffs.shape == (1, 1)
    assert mats.a_coeffs[0, 0] == pow(3, 2, 101)
    assert mats.b_coeffs.shape == (1, 1)
    assert mats.b_coeffs[0, 0] == pow(3, 2, 101)


def test_mask_matrices_vandermonde_example():
    pts = [EvalPoint(1, 0), EvalPoint(2, 0)]
    mats = mask_matrices(pts, K=1, T=2, m=1, q=7)
    assert mats.a_coeffs.tolist() == [[1, 1], [2, 4]]
    # determinant 2 mod 7: full rank
    assert perfect_privacy_check(pts, K=1, T=2, m=1, q=7).passed


def test_mask_matrices_empty_for_t_zero():
    mats = mask_matrices([], K=2, T=0, m=2, q=101)
    assert mats.a_coeffs.shape == (0, 0)
    assert mats.b_coeffs.shape == (0, 0)
    assert perfect_privacy_check([], K=2, T=0, m=2, q=101).passed


def test_mask_matrices_reject_duplicate_tuples():
    with pytest.raises(DuplicatePointsError):
        mask_matrices([EvalPoint(1, 1), EvalPoint(1, 1)], K=1, T=2, m=1, q=7)


def test_zero_x_fails_with_witness():
    chk = perfect_privacy_check([EvalPoint(0, 3)], K=1, T=1, m=1, q=7)
    assert not chk.passed
    assert chk.failed_name == "a_coeffs"
    assert chk.witness is not None and chk.witness[0, 0] == 0


def test_repeated_x_fails_rank():
    pts = [EvalPoint(4, 1), EvalPoint(4, 2)]  # distinct tuples, same x
    chk = perfect_privacy_check(pts, K=1, T=2, m=2, q=101)
    assert not chk.passed


def test_rank_invariant_under_point_permutation():
    pts = [EvalPoint(3, 9), EvalPoint(5, 2), EvalPoint(7, 7)]
    f = prime_field(101)
    base = mask_matrices(pts, K=2, T=3, m=2, q=101)
    for perm in itertools.permutations(pts):
        mats = mask_matrices(list(perm), K=2, T=3, m=2, q=101)
        assert f.rank(mats.a_coeffs) == f.rank(base.a_coeffs)
        assert f.rank(mats.b_coeffs) == f.rank(base.b_coeffs)


@pytest.mark.parametrize("q", [5, 7])
def test_distinct_nonzero_x_always_full_rank(q):
    # exhaustive small-field sweep: any distinct nonzero x pair passes
    for x1, x2 in itertools.permutations(range(1, q), 2):
        for y1 in range(q):
            pts = [EvalPoint(x1, y1), EvalPoint(x2, (y1 + 1) % q)]
            assert perfect_privacy_check(pts, K=1, T=2, m=1, q=q).passed


def test_coefficients_match_encode_differences():
    # column t of a_coeffs (column (t, j) of b_coeffs) must equal the
    # observation change caused by setting exactly that mask to one
    q = 101
    p = SchemeParams(K=1, L=1, T=2, m=1, N=3, q=q)
    f = p.field
    a = f.asarray([[0]])
    b = f.asarray([[0]])
    pts = [EvalPoint(3, 7), EvalPoint(5, 2), EvalPoint(9, 4)]
    subset = [1, 2]
    mats = mask_matrices([pts[0], pts[1]], K=1, T=2, m=1, q=q)
    zero_r = [f.zeros(1, 1) for _ in range(2)]
    zero_s = [[f.zeros(1, 1)] for _ in range(2)]
    base = encode(p, a, b, points=pts, masks_r=zero_r, masks_s=zero_s)
    base_view = collusion_view(base.shares, subset, T=2)
    for t in range(2):
        bumped_r = [f.zeros(1, 1) for _ in range(2)]
        bumped_r[t] = f.asarray([[1]])
        enc = encode(p, a, b, points=pts, masks_r=bumped_r, masks_s=zero_s)
        view = collusion_view(enc.shares, subset, T=2)
        for i in range(2):
            delta = (view.observations_a[i][1] - base_view.observations_a[i][1]) % q
            assert delta[0, 0] == mats.a_coeffs[i, t]
    for t in range(2):
        bumped_s = [[f.zeros(1, 1)] for _ in range(2)]
        bumped_s[t] = [f.asarray([[1]])]
        enc = encode(p, a, b, points=pts, masks_r=zero_r, masks_s=bumped_s)
        view = collusion_view(enc.shares, subset, T=2)
        for i in range(2):
            delta = (view.observations_b[i][2] - base_view.observations_b[i][2]) % q
            assert delta[0, 0] == mats.b_coeffs[i, t]


def test_collusion_view_rejects_oversized_subsets():
    p = SchemeParams(K=1, L=1, T=1, m=1, N=3, q=101)
    f = p.field
    rng = np.random.default_rng(0)
    enc = encode(p, f.zeros(1, 1), f.zeros(1, 1), rng)
    with pytest.raises(ParameterError):
        collusion_view(enc.shares, [1, 2], T=1)


# -- batched sweep -----------------------------------------------------------


def test_sweep_agrees_with_single_checks():
    q = 101
    p = SchemeParams(K=2, L=2, T=2, m=2, N=6, q=q)
    rng = np.random.default_rng(8)
    pts = sample_points(p, rng)
    report = sweep_collusion_subsets(pts, p.K, p.T, p.m, q)
    assert report.subsets_checked == math.comb(6, 2)
    failing = set(report.failing_subsets)
    for subset in itertools.combinations(range(6), 2):
        single = perfect_privacy_check(
            [pts[i] for i in subset], p.K, p.T, p.m, q
        )
        assert single.passed == (subset not in failing)
    assert report.passed


def test_sweep_flags_planted_degenerate_point():
    q = 101
    pts = [EvalPoint(3, 1), EvalPoint(3, 2), EvalPoint(7, 5), EvalPoint(9, 1)]
    report = sweep_collusion_subsets(pts, K=1, T=2, m=1, q=q)
    assert not report.passed
    assert (0, 1) in report.failing_subsets


# -- exhaustive mutual information --------------------------------------------


def test_mi_zero_for_masked_toy_instance():
    assert exhaustive_mi_check([EvalPoint(1, 1)], K=1, T=1, m=1, q=3) == 0.0


def test_mi_positive_when_left_masks_zeroed():
    mi = exhaustive_mi_check(
        [EvalPoint(1, 1)], K=1, T=1, m=1, q=3, zero_r_masks=True
    )
    assert mi == pytest.approx(math.log2(3), rel=1e-12)


def test_mi_positive_for_zero_x_point():
    mi = exhaustive_mi_check([EvalPoint(0, 1)], K=1, T=1, m=1, q=3)
    assert mi > 1.0  # both scalars leak outright


def test_mi_agrees_with_rank_criterion():
    # rank PASS -> MI exactly 0; planted rank FAIL -> MI > 0
    for q in (3, 5):
        for t in (1, 2):
            if q - 1 < t:
                continue
            for m in (1, 2):
                pts = [EvalPoint(1 + i, (2 * i + 1) % q) for i in range(t)]
                assert perfect_privacy_check(pts, 1, t, m, q).passed
                assert exhaustive_mi_check(pts, 1, t, m, q) == 0.0
    bad = [EvalPoint(0, 1)]
    assert not perfect_privacy_check(bad, 1, 1, 2, 5).passed
    assert exhaustive_mi_check(bad, 1, 1, 2, 5) > 0.0


def test_mi_rejects_infeasible_requests():
    with pytest.raises(TooLargeToEnumerateError):
        exhaustive_mi_check(
            [EvalPoint(i + 1, i) for i in range(2)], K=1, T=2, m=2, q=101
        )
    with pytest.raises(ParameterError):
        exhaustive_mi_check([EvalPoint(1, 1)], K=2, T=1, m=1, q=7)
