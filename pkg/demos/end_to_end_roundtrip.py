"""End-to-end walk through one private coded multiplication.

The master wants A @ B but only trusts the workers with masked material.
We encode, let every worker finish its sub-tasks, throw away a third of
the results to play stragglers, and decode from what is left.
"""

import numpy as np

import bipoly as bp

# A small but non-trivial instance: A split into 3 row blocks, B into
# 2 column blocks, privacy against any 2 colluding workers, 2 sub-tasks
# per worker, 12 workers.
params = bp.SchemeParams(K=3, L=2, T=2, m=2, N=12, q=2**31 - 1)
field = params.field
rng = np.random.default_rng(7)

A = field.random_matrix(rng, 6, 8)
B = field.random_matrix(rng, 8, 6)

# Encoding: every worker receives one evaluation of the masked
# left-matrix polynomial and m derivative evaluations of the masked
# right-matrix polynomial, all at its own secret point.
enc = bp.encode(params, A, B, rng)
share = enc.shares[0]
print(f"worker 1 point: {share.point}")
print(f"worker 1 stores: A-share {share.share_a.shape}, "
      f"{len(share.shares_b)} B-shares of shape {share.shares_b[0].shape}")

# Computation: workers multiply their shares in increasing derivative
# order and stream each product back as soon as it is done.
results = bp.compute_all(enc.shares)
r_th = bp.recovery_threshold(params)
print(f"{len(results)} sub-task results produced, any {r_th} decode")

# Pretend some workers straggle: keep a random order-respecting subset
# of exactly the recovery threshold.
kept = bp.random_prefix_subset(results, r_th, rng)
decoded = bp.decode(params, kept)

ok = np.array_equal(decoded.assembled, field.mat_mul(A, B))
print("decoded product equals direct multiplication:", ok)

# The decoder actually recovers each block A_k @ B_l separately:
print("block (2, 1) shape:", decoded.blocks[1][0].shape)
