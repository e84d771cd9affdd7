"""Vectorised row-distance engine over the minimal encoder state space.

The encoder state keeps, for each generator row, its last nu_i input
symbols, so there are q^delta states.  This module handles the uniform
case (all Forney indices equal, which covers every k = 1 code): the state
is then a shift register of m input *blocks*, radix R = q^k, and one
min-plus sweep per stage computes all path weights at once in numpy.

Row distances come out exactly as in the enumeration engine: paths start
with a nonzero input block (messages with leading zero blocks are shifted
copies already accounted for by earlier stages), and each stage's answer
is min(previous, best terminated path), termination adding the weight of
flushing the register with zero blocks.

State layout: the newest register block is the low base-R digit, so a
transition on input block a maps s to (s mod R^(m-1)) * R + a and the
min-plus sweep is a reshape + reduction.  The (states x inputs) weight
table is materialised when it fits; above that it is recomputed slice by
slice every stage (slower per stage, no large allocation).
"""

from __future__ import annotations

from .code import ConvCode

_MAX_TABLE = 150_000_000     # materialised weight table entries (uint8)
_MAX_STREAMED = 320_000_000  # per-stage recomputation budget
_MAX_STATES = 2_200_000


def supports(c: ConvCode) -> bool:
    if c.delta == 0:
        return False
    if any(f != c.memory for f in c.forney):
        return False
    q = c.field.q
    if c.field.p != 2 and q > 4096:
        return False
    R = q**c.k
    S = R**c.memory
    return S <= _MAX_STATES and S * R <= _MAX_STREAMED


def _field_add_arrays(field, x, y):
    if field.p == 2:
        return x ^ y
    return field.np_add_table()[x, y]


def _block_images(field, block, np):
    """(R, n) array: image of every input block under a k x n coefficient
    matrix, input blocks indexed base-q with row 0 as the low digit."""
    q = field.q
    k, n = block.shape
    per_row = []
    for i in range(k):
        g = [e.code for e in block.rows[i]]
        img = np.empty((q, n), dtype=np.uint16)
        for s in range(q):
            img[s] = [field.mul_codes(s, v) for v in g]
        per_row.append(img)
    R = q**k
    idx = np.arange(R)
    out = per_row[0][idx % q]
    for i in range(1, k):
        out = _field_add_arrays(field, out, per_row[i][(idx // q**i) % q])
    return out


def _weight_slab(field, P_rows, T0, np):
    """(len(P_rows), R) uint8: block weights for register images P_rows
    against every input-block image."""
    n = P_rows.shape[1]
    out = np.zeros((P_rows.shape[0], T0.shape[0]), dtype=np.uint8)
    if field.p == 2:
        for j in range(n):
            out += (P_rows[:, j, None] ^ T0[None, :, j]) != 0
    else:
        add_tab = field.np_add_table()
        for j in range(n):
            out += add_tab[P_rows[:, j, None], T0[None, :, j]] != 0
    return out


def iter_row_distances(c: ConvCode):
    import numpy as np

    f = c.field
    q, k, m = f.q, c.k, c.memory
    blocks = c.decompose()
    assert len(blocks) == m + 1

    R = q**k
    S = R**m
    rest = S // R

    T = [_block_images(f, b, np) for b in blocks]
    T0 = T[0]

    # Register contribution to the output block, per state.
    sidx = np.arange(S)
    P = None
    for d in range(1, m + 1):
        contrib = T[d][(sidx // R ** (d - 1)) % R]
        P = contrib if P is None else _field_add_arrays(f, P, contrib)

    # Flushing the register emits P[s], then P[next state], ... m times.
    nnzP = (P != 0).sum(axis=1).astype(np.int64)
    F = np.zeros(S, dtype=np.int64)
    cur = sidx.copy()
    for _ in range(m):
        F += nnzP[cur]
        cur = (cur % rest) * R

    W = None
    if S * R <= _MAX_TABLE:
        W = np.empty((S, R), dtype=np.uint8)
        chunk = max(1, _MAX_TABLE // (4 * R))
        for lo in range(0, S, chunk):
            W[lo : lo + chunk] = _weight_slab(f, P[lo : lo + chunk], T0, np)

    INF = np.int64(1) << 40
    D = np.full(S, INF, dtype=np.int64)
    D[1:R] = (T0[1:] != 0).sum(axis=1)

    best = int((D[:R] + F[:R]).min())
    yield best

    P3 = P.reshape(R, rest, P.shape[1])
    while True:
        D3 = D.reshape(R, rest)
        acc = None
        for o in range(R):
            slab = W.reshape(R, rest, R)[o] if W is not None else _weight_slab(
                f, P3[o], T0, np
            )
            cand = D3[o][:, None] + slab
            if acc is None:
                acc = cand
            else:
                np.minimum(acc, cand, out=acc)
        D = acc.reshape(S)
        best = min(best, int((D + F).min()))
        yield best
