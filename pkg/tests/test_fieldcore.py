import numpy as np
import pytest

from bipoly.errors import (
    DimensionMismatchError,
    NonPrimeModulusError,
    ZeroInverseError,
)
from bipoly.fieldcore import PrimeField, is_prime, prime_field

BIG_PRIME = 4611686018427387847  # largest prime below 2**62


def naive_mat_mul(a, b, q):
    rows, inner = a.shape
    cols = b.shape[1]
    out = [[0] * cols for _ in range(rows)]
    for i in range(rows):
        for j in range(cols):
            acc = 0
            for k in range(inner):
                acc += int(a[i, k]) * int(b[k, j])
            out[i][j] = acc % q
    return np.array(out, dtype=object)


def test_is_prime_known_values():
    for p in (2, 3, 5, 7, 101, 2**31 - 1, BIG_PRIME):
        assert is_prime(p)
    # 561 and 1105 are Carmichael numbers; 3215031751 is a strong
    # pseudoprime to bases 2, 3, 5, 7.
    for n in (0, 1, 4, 9, 561, 1105, 2047, 3215031751, 2**31 + 1):
        assert not is_prime(n)


def test_field_rejects_bad_modulus():
    with pytest.raises(NonPrimeModulusError):
        PrimeField(15)
    with pytest.raises(NonPrimeModulusError):
        PrimeField(1 << 62)


def test_dtype_selection():
    assert prime_field(101).dtype is np.int64
    assert prime_field(2**31 - 1).dtype is np.int64
    assert prime_field(BIG_PRIME).dtype is object


def test_scalar_add():
    f = prime_field(7)
    assert f.add(3, 4) == 0
    assert f.add(0, 5) == 5
    assert f.add(6, 1) == 0


def test_scalar_mul():
    f = prime_field(7)
    assert f.mul(3, 4) == 5
    assert f.mul(1, 6) == 6
    assert f.mul(6, 6) == 1  # (-1)^2


def test_scalar_inv():
    f = prime_field(7)
    assert f.inv(1) == 1
    assert f.inv(2) == 4
    assert f.inv(3) == 5
    with pytest.raises(ZeroInverseError):
        f.inv(0)


@pytest.mark.parametrize("q", [101, 2**31 - 1, BIG_PRIME])
def test_inverse_property(q):
    f = prime_field(q)
    rng = np.random.default_rng(11)
    for _ in range(50):
        a = int(rng.integers(1, min(q, 2**62)))
        assert f.mul(a, f.inv(a)) == 1


def test_mat_mul_identity_and_zero():
    f = prime_field(101)
    rng = np.random.default_rng(0)
    b = f.random_matrix(rng, 4, 5)
    assert np.array_equal(f.mat_mul(f.identity(4), b), b)
    assert np.array_equal(f.mat_mul(f.zeros(3, 4), b), f.zeros(3, 5))


def test_mat_mul_hand_example():
    f = prime_field(7)
    a = f.asarray([[1, 2], [3, 4]])
    b = f.asarray([[5, 6], [0, 1]])
    assert np.array_equal(f.mat_mul(a, b), f.asarray([[5, 1], [1, 1]]))


def test_mat_mul_shape_error():
    f = prime_field(7)
    with pytest.raises(DimensionMismatchError):
        f.mat_mul(f.zeros(2, 3), f.zeros(2, 3))


@pytest.mark.parametrize("q", [101, 2**31 - 1, BIG_PRIME])
def test_mat_mul_matches_naive(q):
    f = prime_field(q)
    rng = np.random.default_rng(q % 97)
    a = f.random_matrix(rng, 3, 4)
    b = f.random_matrix(rng, 4, 2)
    assert np.array_equal(np.asarray(f.mat_mul(a, b), dtype=object),
                          naive_mat_mul(a, b, q))


def test_mat_mul_associativity_and_distributivity():
    f = prime_field(101)
    rng = np.random.default_rng(5)
    for _ in range(10):
        a = f.random_matrix(rng, 3, 3)
        b = f.random_matrix(rng, 3, 3)
        c = f.random_matrix(rng, 3, 3)
        assert np.array_equal(
            f.mat_mul(f.mat_mul(a, b), c), f.mat_mul(a, f.mat_mul(b, c))
        )
        assert np.array_equal(
            f.mat_mul(a, f.mat_add(b, c)),
            f.mat_add(f.mat_mul(a, b), f.mat_mul(a, c)),
        )


def test_solve_identity_and_singular():
    f = prime_field(101)
    rng = np.random.default_rng(2)
    rhs = f.random_matrix(rng, 4, 3)
    assert np.array_equal(f.solve_linear(f.identity(4), rhs), rhs)
    m = f.random_matrix(rng, 4, 4)
    m[2] = m[0]  # rank deficient
    assert f.solve_linear(m, rhs) is None


@pytest.mark.parametrize("q", [101, 2**31 - 1, BIG_PRIME])
def test_solve_round_trip(q):
    f = prime_field(q)
    rng = np.random.default_rng(q % 89)
    trials = 0
    while trials < 8:
        m = f.random_matrix(rng, 5, 5)
        if f.rank(m) < 5:
            continue
        x = f.random_matrix(rng, 5, 2)
        sol = f.solve_linear(m, f.mat_mul(m, x))
        assert np.array_equal(sol, x)
        trials += 1


def test_rank_row_permutation_invariance():
    f = prime_field(101)
    rng = np.random.default_rng(3)
    for _ in range(10):
        m = f.random_matrix(rng, 5, 4)
        m[3] = m[1]
        perm = rng.permutation(5)
        assert f.rank(m) == f.rank(m[perm])


def test_batched_nonsingular_matches_rank():
    f = prime_field(101)
    rng = np.random.default_rng(4)
    mats = np.stack([f.random_matrix(rng, 4, 4) for _ in range(40)])
    mats[7, 2] = mats[7, 0]  # plant one singular matrix
    mats[19] = 0
    flags = f.batched_nonsingular(mats)
    for i in range(40):
        assert flags[i] == (f.rank(mats[i]) == 4)


def test_batched_nonsingular_big_field_rejected():
    f = prime_field(BIG_PRIME)
    with pytest.raises(NonPrimeModulusError):
        f.batched_nonsingular(np.zeros((1, 2, 2), dtype=np.int64))


def test_canonicalisation():
    f = prime_field(7)
    arr = f.asarray([[-1, 8], [14, 6]])
    assert arr.min() >= 0 and arr.max() < 7
    assert np.array_equal(arr, f.asarray([[6, 1], [0, 6]]))
