"""Flat binary layout for shares and partial results.

Every file is a sequence of little-endian unsigned 64-bit words:

    header (11 words): magic, version, q, K, L, T, m, N, r, s, c

followed by fixed-size records of field elements and small integers.

Share files hold N records of
    worker_id, x, y, A-share (r/K * s words, row-major),
    m B-shares (s * c/L words each, row-major).

Result files hold records of
    worker_id, order, x, y, product (r/K * c/L words, row-major);
the record count is implied by the file length.

Masks are deliberately absent: serialized bytes model exactly what the
workers and master exchange.  The layout is bit-exact across platforms.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .bivariate import EvalPoint, SchemeParams
from .errors import WireFormatError
from .scheme import PartialResult, WorkerShare

MAGIC = int.from_bytes(b"FQPCODE1", "little")
VERSION = 1

_HEADER_WORDS = 11


def _header(params: SchemeParams, dims: tuple[int, int, int]) -> np.ndarray:
    r, s, c = dims
    return np.array(
        [MAGIC, VERSION, params.q, params.K, params.L, params.T, params.m,
         params.N, r, s, c],
        dtype=np.uint64,
    )


def _words_to_bytes(chunks: list[np.ndarray]) -> bytes:
    return np.concatenate([np.asarray(ch, dtype=np.uint64) for ch in chunks]).astype(
        "<u8"
    ).tobytes()


def _read_words(data: bytes) -> np.ndarray:
    if len(data) % 8:
        raise WireFormatError(f"byte length {len(data)} is not a multiple of 8")
    return np.frombuffer(data, dtype="<u8")


def _parse_header(words: np.ndarray) -> tuple[SchemeParams, tuple[int, int, int]]:
    if words.size < _HEADER_WORDS:
        raise WireFormatError("truncated header")
    if int(words[0]) != MAGIC:
        raise WireFormatError(f"bad magic word {int(words[0]):#x}")
    if int(words[1]) != VERSION:
        raise WireFormatError(f"unsupported version {int(words[1])}")
    q, k, l, t, m, n, r, s, c = (int(w) for w in words[2:_HEADER_WORDS])
    params = SchemeParams(K=k, L=l, T=t, m=m, N=n, q=q)
    return params, (r, s, c)


def _flat(arr: np.ndarray) -> np.ndarray:
    flat = np.asarray(arr).ravel()
    if flat.dtype == object:
        flat = np.array([int(v) for v in flat], dtype=np.uint64)
    return flat.astype(np.uint64)


def dump_shares(
    params: SchemeParams,
    dims: tuple[int, int, int],
    shares: Sequence[WorkerShare],
) -> bytes:
    """Serialize all worker shares (header + N fixed-size records)."""
    if len(shares) != params.N:
        raise WireFormatError(f"expected {params.N} shares, got {len(shares)}")
    chunks = [_header(params, dims)]
    for sh in shares:
        chunks.append(
            np.array([sh.worker_id, sh.point.x, sh.point.y], dtype=np.uint64)
        )
        chunks.append(_flat(sh.share_a))
        for blk in sh.shares_b:
            chunks.append(_flat(blk))
    return _words_to_bytes(chunks)


def load_shares(data: bytes) -> tuple[SchemeParams, tuple[int, int, int], list[WorkerShare]]:
    words = _read_words(data)
    params, dims = _parse_header(words)
    r, s, c = dims
    br, bc = r // params.K, c // params.L
    rec = 3 + br * s + params.m * s * bc
    body = words[_HEADER_WORDS:]
    if body.size != rec * params.N:
        raise WireFormatError(
            f"share payload holds {body.size} words, expected {rec * params.N}"
        )
    field = params.field
    shares = []
    for i in range(params.N):
        w = body[i * rec : (i + 1) * rec]
        wid, x, y = int(w[0]), int(w[1]), int(w[2])
        off = 3
        share_a = field.asarray(w[off : off + br * s].astype(np.int64).reshape(br, s))
        off += br * s
        blocks = []
        for _ in range(params.m):
            blocks.append(
                field.asarray(w[off : off + s * bc].astype(np.int64).reshape(s, bc))
            )
            off += s * bc
        shares.append(
            WorkerShare(
                worker_id=wid,
                point=EvalPoint(x, y),
                q=params.q,
                share_a=share_a,
                shares_b=tuple(blocks),
            )
        )
    return params, dims, shares


def dump_results(
    params: SchemeParams,
    dims: tuple[int, int, int],
    results: Sequence[PartialResult],
) -> bytes:
    """Serialize partial results; the record count is implicit."""
    chunks = [_header(params, dims)]
    for res in results:
        chunks.append(
            np.array(
                [res.worker_id, res.order, res.point.x, res.point.y], dtype=np.uint64
            )
        )
        chunks.append(_flat(res.product))
    return _words_to_bytes(chunks)


def load_results(
    data: bytes,
) -> tuple[SchemeParams, tuple[int, int, int], list[PartialResult]]:
    words = _read_words(data)
    params, dims = _parse_header(words)
    r, s, c = dims
    br, bc = r // params.K, c // params.L
    rec = 4 + br * bc
    body = words[_HEADER_WORDS:]
    if body.size % rec:
        raise WireFormatError(
            f"result payload of {body.size} words is not a multiple of record size {rec}"
        )
    field = params.field
    results = []
    for i in range(body.size // rec):
        w = body[i * rec : (i + 1) * rec]
        results.append(
            PartialResult(
                worker_id=int(w[0]),
                order=int(w[1]),
                point=EvalPoint(int(w[2]), int(w[3])),
                product=field.asarray(w[4:].astype(np.int64).reshape(br, bc)),
            )
        )
    return params, dims, results
