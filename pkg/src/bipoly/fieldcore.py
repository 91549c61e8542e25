"""Prime-field arithmetic and dense exact linear algebra over F_q.

Matrices are plain numpy arrays holding canonical representatives in
[0, q).  For q below 2**31 the array dtype is int64 and every kernel is
vectorised with widened intermediates; for larger moduli (up to 2**62)
arrays fall back to object dtype with Python integers, trading speed for
the same exact results.  No function mutates its inputs.
"""

from __future__ import annotations

import functools

import numpy as np

from .errors import (
    DimensionMismatchError,
    NonPrimeModulusError,
    ZeroInverseError,
)

# Largest supported modulus: products of two canonical elements must fit
# Python's native big ints comfortably and the serialized u64 words.
MAX_MODULUS = 1 << 62

# Moduli below this get the vectorised int64 kernels (a*b < 2**62).
_INT64_LIMIT = 1 << 31

# Witness set making Miller-Rabin deterministic for all 64-bit inputs.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin primality test, exact for n < 2**64."""
    if n < 2:
        return False
    for p in _MR_WITNESSES:
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class PrimeField:
    """The field F_q for a prime q with 2 <= q < 2**62.

    Scalar helpers work on plain ints; matrix helpers work on numpy
    arrays of canonical residues.  Use :func:`prime_field` to get a
    cached instance.
    """

    __slots__ = ("q", "dtype")

    def __init__(self, q: int):
        q = int(q)
        if q >= MAX_MODULUS:
            raise NonPrimeModulusError(
                f"field order {q} exceeds the supported maximum 2**62"
            )
        if not is_prime(q):
            raise NonPrimeModulusError(f"field order {q} is not prime")
        self.q = q
        self.dtype = np.int64 if q < _INT64_LIMIT else object

    def __repr__(self) -> str:
        return f"PrimeField({self.q})"

    def __eq__(self, other) -> bool:
        return isinstance(other, PrimeField) and other.q == self.q

    def __hash__(self) -> int:
        return hash(("PrimeField", self.q))

    # -- scalars ---------------------------------------------------------

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.q

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.q

    def mul(self, a: int, b: int) -> int:
        return a * b % self.q

    def neg(self, a: int) -> int:
        return -a % self.q

    def inv(self, a: int) -> int:
        """Multiplicative inverse via Fermat exponentiation."""
        if a % self.q == 0:
            raise ZeroInverseError("zero has no multiplicative inverse")
        return pow(a, self.q - 2, self.q)

    def pow(self, a: int, e: int) -> int:
        return pow(a, e, self.q)

    # -- array plumbing --------------------------------------------------

    def asarray(self, values) -> np.ndarray:
        """Canonical field array from any integer array-like."""
        arr = np.asarray(values)
        if arr.dtype == object or self.dtype is object:
            arr = arr.astype(object)
        else:
            arr = arr.astype(np.int64)
        return arr % self.q

    def zeros(self, rows: int, cols: int) -> np.ndarray:
        if self.dtype is object:
            return np.zeros((rows, cols), dtype=object) + 0
        return np.zeros((rows, cols), dtype=np.int64)

    def identity(self, n: int) -> np.ndarray:
        out = self.zeros(n, n)
        for i in range(n):
            out[i, i] = 1
        return out

    def random_matrix(self, rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
        """Uniform matrix over F_q, shape (rows, cols)."""
        arr = rng.integers(0, self.q, size=(rows, cols), dtype=np.int64)
        if self.dtype is object:
            arr = arr.astype(object)
        return arr

    # -- matrix algebra --------------------------------------------------

    def mat_mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Exact matrix product over F_q."""
        if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[0]:
            raise DimensionMismatchError(
                f"cannot multiply shapes {a.shape} x {b.shape}"
            )
        if self.dtype is object:
            return np.dot(a.astype(object), b.astype(object)) % self.q
        if a.shape[1] > 32768:
            # int64 accumulators would overflow; do it exactly instead.
            return (np.dot(a.astype(object), b.astype(object)) % self.q).astype(np.int64)
        # Split the left operand into 16-bit halves so each int64 dot
        # product stays below 2**63 for q < 2**31.
        hi, lo = a >> 16, a & 0xFFFF
        part = ((hi @ b) % self.q << 16) + (lo @ b) % self.q
        return part % self.q

    def mat_add(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if a.shape != b.shape:
            raise DimensionMismatchError(f"cannot add shapes {a.shape} + {b.shape}")
        return (a + b) % self.q

    def scale(self, c: int, a: np.ndarray) -> np.ndarray:
        return a * (c % self.q) % self.q

    def solve_linear(self, m: np.ndarray, rhs: np.ndarray) -> np.ndarray | None:
        """Solve m @ x = rhs by Gauss-Jordan elimination.

        Returns the unique solution, or None when m is singular.  The
        pivot is the first nonzero entry of each column; in an exact
        field any nonzero pivot is as good as any other.
        """
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionMismatchError(f"coefficient matrix {m.shape} is not square")
        if rhs.ndim != 2 or rhs.shape[0] != m.shape[0]:
            raise DimensionMismatchError(
                f"right-hand side {rhs.shape} does not match system size {m.shape[0]}"
            )
        n = m.shape[0]
        aug = np.concatenate([self.asarray(m), self.asarray(rhs)], axis=1)
        for col in range(n):
            pivots = np.nonzero(aug[col:, col])[0]
            if pivots.size == 0:
                return None
            p = col + int(pivots[0])
            if p != col:
                aug[[col, p]] = aug[[p, col]]
            inv = self.inv(int(aug[col, col]))
            aug[col] = aug[col] * inv % self.q
            factors = aug[:, col].copy()
            factors[col] = 0
            aug = (aug - factors[:, None] * aug[col][None, :]) % self.q
        return aug[:, n:]

    def rank(self, m: np.ndarray) -> int:
        """Rank over F_q via row elimination with column skipping."""
        a = self.asarray(m).copy()
        rows, cols = a.shape
        r = 0
        for col in range(cols):
            if r == rows:
                break
            pivots = np.nonzero(a[r:, col])[0]
            if pivots.size == 0:
                continue
            p = r + int(pivots[0])
            if p != r:
                a[[r, p]] = a[[p, r]]
            inv = self.inv(int(a[r, col]))
            a[r] = a[r] * inv % self.q
            if r + 1 < rows:
                factors = a[r + 1 :, col].copy()
                a[r + 1 :] = (a[r + 1 :] - factors[:, None] * a[r][None, :]) % self.q
            r += 1
        return r

    def batched_nonsingular(self, mats: np.ndarray) -> np.ndarray:
        """Non-singularity of a stack of square matrices, shape (B, n, n).

        Vectorised over the batch axis; requires the int64 fast path
        (q < 2**31).  Uses cross-multiplication instead of pivot
        normalisation so no batched inversions are needed.
        """
        if self.dtype is object:
            raise NonPrimeModulusError(
                "batched non-singularity checks need q < 2**31"
            )
        a = np.asarray(mats, dtype=np.int64) % self.q
        if a.ndim != 3 or a.shape[1] != a.shape[2]:
            raise DimensionMismatchError(f"expected a (B, n, n) stack, got {a.shape}")
        batch, n, _ = a.shape
        if n == 0:
            return np.ones(batch, dtype=bool)
        a = a.copy()
        singular = np.zeros(batch, dtype=bool)
        bidx = np.arange(batch)
        for col in range(n):
            colvals = a[:, col:, col]
            nonzero = colvals != 0
            singular |= ~nonzero.any(axis=1)
            piv_row = np.argmax(nonzero, axis=1) + col
            swap = a[bidx, piv_row].copy()
            a[bidx, piv_row] = a[:, col]
            a[:, col] = swap
            if col + 1 == n:
                break
            piv = a[:, col, col]
            below = a[:, col + 1 :, :]
            scaled = piv[:, None, None] * below % self.q
            wiped = below[:, :, col][:, :, None] * a[:, col : col + 1, :] % self.q
            a[:, col + 1 :, :] = (scaled - wiped) % self.q
        return ~singular


@functools.lru_cache(maxsize=None)
def prime_field(q: int) -> PrimeField:
    """Cached PrimeField factory; validates primality once per modulus."""
    return PrimeField(q)
