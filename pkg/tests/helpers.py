"""Shared oracle constructions for the test suite.

These deliberately avoid the code paths they are used to check.
"""

import numpy as np

from charp.complexes import CochainComplex, cohomology_dims
from charp.linalg import Mat
from charp.rings import ring_make, prime_field


def shifted_module(ring, rank, deg):
    """E[-deg]: a free module of the given rank placed in degree deg."""
    ranks = [0] * deg + [rank]
    diffs = [Mat.zeros(ring, ranks[i + 1], ranks[i])
             for i in range(len(ranks) - 1)]
    return CochainComplex(ring, 0, ranks, diffs)


def cyclic_perm_matrix(ring, d, p):
    """sigma on E^(x p): cyclic shift of tensor factors, with the sign of
    the p-cycle (trivial for odd p, and equal to +1 in characteristic 2)."""
    n = d ** p
    out = Mat.zeros(ring, n, n)
    for idx in range(n):
        digits = []
        x = idx
        for _ in range(p):
            digits.append(x % d)
            x //= d
        digits = digits[::-1]          # (i_1, ..., i_p), i_1 major
        rolled = digits[1:] + digits[:1]
        tgt = 0
        for v in rolled:
            tgt = tgt * d + v
        out.data[tgt, idx] = ring.one
    return out


def tensor_power_matrix(ring, f, p):
    acc = f.data
    for _ in range(p - 1):
        acc = np.kron(acc, f.data)
    # kron multiplies integer codes; valid only for 0/1 or prime-coded rings
    return Mat(ring, acc % ring.char) if ring.r == 1 else None


def hsp_truncated_dims(p, d, top_buffer=2):
    """Dims of H^j(tau^(>=1) (E[-1]^(x p))_{hS_p}) for j = 1..p over F_p.

    Independent oracle: the two-periodic cyclic complex ending in degree p
    with differentials (1 - sigma) and the norm, then (for p = 3) the
    invariants of the normalizer action on the cyclic-group cohomology,
    with the standard comparison multipliers on the periodic resolution.
    """
    ring = ring_make(prime_field(p))
    n = d ** p
    sigma = cyclic_perm_matrix(ring, d, p)
    one = Mat.identity(ring, n)
    norm = Mat.zeros(ring, n, n)
    power = Mat.identity(ring, n)
    for _ in range(p):
        norm = norm + power
        power = power @ sigma
    one_minus = one - sigma
    # degrees lo..p with d into degree p given by (1 - sigma)
    lo = 1 - top_buffer
    diffs = []
    for deg in range(lo, p):
        j = p - deg            # resolution degree of the source
        diffs.append(one_minus if j % 2 == 1 else norm)
    C = CochainComplex(ring, lo, [n] * (p - lo + 1), diffs)
    if p == 2:
        return [cohomology_dims(C)[i - lo] for i in range(1, p + 1)]
    # p = 3: project to the S_3-part = invariants of the normalizer action
    from charp.complexes import cohomology
    from charp.linalg import echelon
    k = 2                      # generator of (Z/3)^x
    w = transposition_conjugator(ring, d, p, k)
    dims = []
    for ideg in range(1, p + 1):
        j = p - ideg           # resolution degree
        s, odd = divmod(j, 2)
        mult = pow(k, s, p)
        op = w.scale(ring.from_int(mult))
        if odd:
            acc = Mat.identity(ring, n)
            tot = Mat.zeros(ring, n, n)
            for _ in range(k):
                tot = tot + acc
                acc = acc @ sigma
            op = op @ tot
        h = cohomology(C, ideg)
        if h.gens.cols == 0:
            dims.append(0)
            continue
        cols = []
        for t in range(h.gens.cols):
            img = ring.vmatmul(op.data, h.gens.data[:, t][:, None])[:, 0]
            cols.append(h.express(img))
        A = Mat(ring, np.stack(cols, axis=1))
        fixed = A - Mat.identity(ring, A.rows)
        dims.append(A.rows - echelon(fixed, transform=False).rank)
    return dims


def transposition_conjugator(ring, d, p, k):
    """Permutation of tensor factors by some w with w sigma w^-1 = sigma^k,
    twisted by its sign."""
    assert p == 3 and k == 2
    # w = transposition of factors 2 and 3 conjugates (123) to (132)
    n = d ** p
    out = Mat.zeros(ring, n, n)
    sign = ring.from_int(-1)
    for idx in range(n):
        a = idx // (d * d)
        b = (idx // d) % d
        c = idx % d
        tgt = a * d * d + c * d + b
        out.data[tgt, idx] = sign
    return out
