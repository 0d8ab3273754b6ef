"""Bounded cochain complexes of finite free modules.

Cohomology is exact: reduced row echelon over fields, Smith-type
diagonalisation over Z/p^e and GR(p^e, r).  Connecting homomorphisms are
computed by the snake lemma on degreewise-split short exact sequences; the
mod-p reduction sequence of a free Z/p^e complex is provided as a first
class construction since every Bockstein in scope arises that way.
"""

import numpy as np

from .linalg import (Mat, ModuleStructure, diagonalize, echelon,
                     kernel_basis)
from .rings import coerce_down, lift_up


class CochainComplex:
    """Complex C^lo -> ... -> C^hi of free modules with d.d = 0."""

    def __init__(self, ring, lo, ranks, diffs, check=True):
        self.ring = ring
        self.lo = lo
        self.ranks = list(ranks)
        self.diffs = list(diffs)
        if len(self.diffs) != max(0, len(self.ranks) - 1):
            raise ValueError("need one differential per adjacent pair")
        for k, d in enumerate(self.diffs):
            if (d.rows, d.cols) != (self.ranks[k + 1], self.ranks[k]):
                raise ValueError(f"differential {k} has shape "
                                 f"{(d.rows, d.cols)}, expected "
                                 f"{(self.ranks[k + 1], self.ranks[k])}")
        if check:
            for k in range(len(self.diffs) - 1):
                if not (self.diffs[k + 1] @ self.diffs[k]).is_zero():
                    raise ValueError(f"d.d != 0 at degree {lo + k}")

    @property
    def hi(self):
        return self.lo + len(self.ranks) - 1

    def degrees(self):
        return range(self.lo, self.hi + 1)

    def rank(self, i):
        if self.lo <= i <= self.hi:
            return self.ranks[i - self.lo]
        return 0

    def d(self, i):
        """Differential C^i -> C^(i+1) (zero matrix outside range)."""
        k = i - self.lo
        if 0 <= k < len(self.diffs):
            return self.diffs[k]
        return Mat.zeros(self.ring, self.rank(i + 1), self.rank(i))

    def euler_characteristic(self):
        return sum((-1) ** i * self.rank(i) for i in self.degrees())

    def reduce_to(self, ring2):
        """Entrywise reduction Z/p^e -> Z/p^f (f < e), or GR likewise."""
        diffs = [Mat(ring2, np.vectorize(
            lambda c: coerce_down(self.ring, ring2, int(c)))(d.data))
            if d.data.size else Mat.zeros(ring2, d.rows, d.cols)
            for d in self.diffs]
        return CochainComplex(ring2, self.lo, self.ranks, diffs, check=False)

    def twist(self):
        """Frobenius twist: same ranks, entrywise-Frobenius differentials."""
        return CochainComplex(self.ring, self.lo, self.ranks,
                              [d.frobenius_entries() for d in self.diffs],
                              check=False)

    def __repr__(self):
        return (f"CochainComplex({self.ring}, deg [{self.lo},{self.hi}], "
                f"ranks {self.ranks})")


def module_complex(ring, rank, degree=0):
    """A single free module placed in one degree."""
    return CochainComplex(ring, degree, [rank], [])


def two_term(ring, mat, lo=0):
    """[R^cols -> R^rows] with the matrix as the differential."""
    return CochainComplex(ring, lo, [mat.cols, mat.rows], [mat])


class ComplexMap:
    """Degreewise map of complexes commuting with the differentials."""

    def __init__(self, source, target, components, check=True):
        self.source = source
        self.target = target
        self.components = dict(components)
        for i, f in self.components.items():
            if (f.rows, f.cols) != (target.rank(i), source.rank(i)):
                raise ValueError(f"component {i} has wrong shape")
        if check:
            self.validate()

    def component(self, i):
        if i in self.components:
            return self.components[i]
        return Mat.zeros(self.source.ring, self.target.rank(i),
                         self.source.rank(i))

    def validate(self):
        lo = min(self.source.lo, self.target.lo)
        hi = max(self.source.hi, self.target.hi)
        for i in range(lo, hi):
            lhs = self.target.d(i) @ self.component(i)
            rhs = self.component(i + 1) @ self.source.d(i)
            if not (lhs - rhs).is_zero():
                raise ValueError(f"map does not commute with d at degree {i}")

    @classmethod
    def identity(cls, C):
        comps = {i: Mat.identity(C.ring, C.rank(i)) for i in C.degrees()}
        return cls(C, C, comps, check=False)

    def compose(self, other):
        """self after other."""
        comps = {}
        for i in other.source.degrees():
            comps[i] = self.component(i) @ other.component(i)
        return ComplexMap(other.source, self.target, comps, check=False)


# ---------------------------------------------------------------------------
# cohomology

class CohomologySlice:
    """H^i of a complex: structure, generating cocycles, comparison data."""

    def __init__(self, complex_, degree):
        self.complex = complex_
        self.degree = degree
        self.ring = complex_.ring
        ring = self.ring
        d_out = complex_.d(degree)
        d_in = complex_.d(degree - 1)
        self._d_in = d_in
        n = complex_.rank(degree)
        if ring.is_field:
            Z = kernel_basis(d_out)
            self._im_ech = echelon(d_in)
            B = Mat(ring, d_in.data[:, self._im_ech.pivots]) \
                if self._im_ech.pivots else Mat.zeros(ring, n, 0)
            comb = B.hstack(Z)
            ech = echelon(comb)
            gens = [j - B.cols for j in ech.pivots if j >= B.cols]
            self.gens = Mat(ring, Z.data[:, gens]) if gens else \
                Mat.zeros(ring, n, 0)
            self.structure = ModuleStructure(ring.p, 1, [1] * len(gens))
            self._express_ech = echelon(B.hstack(self.gens))
            self._b_cols = B.cols
        else:
            ker_diag = diagonalize(d_out)
            K = ker_diag.kernel_gens()
            self._im_diag = diagonalize(d_in) if d_in.cols else None
            # present H = span(K) / span(im d_in) as a cokernel
            if K.cols == 0:
                self.gens = Mat.zeros(ring, n, 0)
                self.structure = ModuleStructure(ring.p, ring.e, [])
            else:
                kd = diagonalize(K)
                cols = []
                if d_in.cols:
                    for j in range(d_in.cols):
                        x = kd.solve(d_in.col(j))
                        if x is None:
                            raise AssertionError(
                                "image not inside kernel; complex invalid")
                        cols.append(x)
                syz = kd.kernel_gens()
                rel = Mat(ring, np.stack(cols, axis=1)) if cols else \
                    Mat.zeros(ring, K.cols, 0)
                rel = rel.hstack(syz)
                pres = diagonalize(rel)
                self.structure = pres.cokernel()
                self.gens = K
            self._express_mat = (d_in.hstack(self.gens)
                                 if self.gens.cols or d_in.cols else None)
            self._express_diag = (diagonalize(self._express_mat)
                                  if self._express_mat is not None and
                                  self._express_mat.cols else None)

    def dim(self):
        """Dimension over a field; length of the factor list otherwise."""
        return len(self.structure.exponents)

    def is_cocycle(self, vec):
        d_out = self.complex.d(self.degree)
        v = self.ring.vmatmul(d_out.data,
                              np.asarray(vec, dtype=np.int64)[:, None])
        return bool(np.all(v == self.ring.zero))

    def is_coboundary(self, vec):
        vec = np.asarray(vec, dtype=np.int64)
        if self._d_in.cols == 0:
            return bool(np.all(vec == self.ring.zero))
        if self.ring.is_field:
            return self._im_ech.in_image(vec)
        return self._im_diag.in_image(vec)

    def classes_equal(self, v1, v2):
        return self.is_coboundary(self.ring.vsub(
            np.asarray(v1, dtype=np.int64), np.asarray(v2, dtype=np.int64)))

    def class_is_zero(self, vec):
        return self.is_coboundary(vec)

    def express(self, vec):
        """Coefficients of the class of vec over the generators."""
        vec = np.asarray(vec, dtype=np.int64)
        if self.gens.cols == 0:
            if not self.is_coboundary(vec):
                raise ValueError("nonzero class in zero cohomology")
            return np.zeros(0, dtype=np.int64)
        if self.ring.is_field:
            x = self._express_ech.solve(vec)
            if x is None:
                raise ValueError("vector is not a cocycle class element")
            return x[self._b_cols:]
        x = self._express_diag.solve(vec)
        if x is None:
            raise ValueError("cannot express class over generators")
        return x[self._d_in.cols:]

    def zero_class(self):
        return np.full(self.complex.rank(self.degree), self.ring.zero,
                       dtype=np.int64)


def cohomology(C, i):
    if not (C.lo <= i <= C.hi):
        raise ValueError(f"degree {i} outside [{C.lo}, {C.hi}]")
    return CohomologySlice(C, i)


def slice_at(C, i):
    """Like cohomology() but silently zero outside the degree range."""
    return CohomologySlice(C, i)


def cohomology_dims(C):
    """List of H^i dimensions (field) or factor counts, for i in range."""
    if C.ring.is_field:
        from .linalg import rank as _rank
        rk = {}
        for i in range(C.lo - 1, C.hi + 1):
            d = C.d(i)
            rk[i] = _rank(d) if d.rows and d.cols else 0
        return [C.rank(i) - rk[i] - rk[i - 1] for i in C.degrees()]
    return [cohomology(C, i).dim() for i in C.degrees()]


def induced_on_H(f, i):
    """Matrix of H^i(f) from source generators to target generator coords."""
    src = slice_at(f.source, i)
    tgt = slice_at(f.target, i)
    ring = f.source.ring
    cols = []
    comp = f.component(i)
    for j in range(src.gens.cols):
        img = ring.vmatmul(comp.data, src.gens.data[:, j][:, None])[:, 0]
        cols.append(tgt.express(img))
    if not cols:
        return Mat.zeros(ring, tgt.gens.cols, 0)
    return Mat(ring, np.stack(cols, axis=1))


# ---------------------------------------------------------------------------
# constructions

def shift(C, s):
    """H^i(shift(C, s)) = H^(i-s)(C)."""
    sign = C.ring.from_int((-1) ** (s % 2))
    diffs = [d.scale(sign) for d in C.diffs]
    return CochainComplex(C.ring, C.lo + s, C.ranks, diffs, check=False)


def stupid_truncate_le(C, n):
    """Brutal truncation keeping degrees <= n."""
    if n >= C.hi:
        return C
    if n < C.lo:
        return CochainComplex(C.ring, C.lo, [], [])
    k = n - C.lo
    return CochainComplex(C.ring, C.lo, C.ranks[:k + 1], C.diffs[:k],
                          check=False)


def stupid_truncate_ge(C, n):
    """Brutal truncation keeping degrees >= n."""
    if n <= C.lo:
        return C
    if n > C.hi:
        return CochainComplex(C.ring, n, [], [])
    k = n - C.lo
    return CochainComplex(C.ring, n, C.ranks[k:], C.diffs[k:], check=False)


def _local_inverse(M):
    ring = M.ring
    d = diagonalize(M)
    cols = []
    for j in range(M.rows):
        b = np.full(M.rows, ring.zero, dtype=np.int64)
        b[j] = ring.one
        x = d.solve(b)
        if x is None:
            raise ValueError("matrix not invertible over the local ring")
        cols.append(x)
    return Mat(ring, np.stack(cols, axis=1))


def _kernel_free_basis(C, n):
    """Free basis of ker d^n, or raise if not a free direct summand."""
    ring = C.ring
    d = C.d(n)
    if ring.is_field:
        return kernel_basis(d)
    K = diagonalize(d).kernel_gens()
    if K.cols == 0:
        return K
    kd = diagonalize(K)
    if any(0 < a < ring.e for a in kd.exps):
        raise ValueError(f"kernel of d^{n} is not free over {ring}")
    Uinv = _local_inverse(kd.U)
    keep = [j for j, a in enumerate(kd.exps) if a == 0]
    return Mat(ring, Uinv.data[:, keep]) if keep else \
        Mat.zeros(ring, K.rows, 0)


def truncate_le(C, n):
    """Canonical truncation: degrees <= n with C^n replaced by ker d^n."""
    if n >= C.hi:
        return C
    if n < C.lo:
        return CochainComplex(C.ring, C.lo, [], [])
    K = _kernel_free_basis(C, n)
    ranks = C.ranks[: n - C.lo] + [K.cols]
    diffs = list(C.diffs[: max(0, n - C.lo - 1)])
    if n > C.lo:
        d_prev = C.d(n - 1)
        if C.ring.is_field:
            X = echelon(K).solve_mat(d_prev)
        else:
            kd = diagonalize(K)
            cols = [kd.solve(d_prev.col(j)) for j in range(d_prev.cols)]
            if any(c is None for c in cols):
                raise ValueError("image of d^(n-1) not inside ker d^n")
            X = Mat(C.ring, np.stack(cols, axis=1)) if cols else \
                Mat.zeros(C.ring, K.cols, 0)
        if X is None:
            raise ValueError("image of d^(n-1) not inside ker d^n")
        diffs.append(X)
    return CochainComplex(C.ring, C.lo, ranks, diffs, check=False)


def truncate_ge(C, n):
    """Canonical truncation from below (fields only): kills H^(<n).

    Degree n becomes C^n / im d^(n-1), realised on a complement of the
    image; higher degrees are untouched.
    """
    if n <= C.lo:
        return C
    if n > C.hi:
        return CochainComplex(C.ring, n, [], [])
    ring = C.ring
    if not ring.is_field:
        raise ValueError("canonical truncation from below needs a field")
    d_in = C.d(n - 1)
    ech = echelon(d_in)
    B = Mat(ring, d_in.data[:, ech.pivots]) if ech.pivots else \
        Mat.zeros(ring, C.rank(n), 0)
    full = B.hstack(Mat.identity(ring, C.rank(n)))
    full_ech = echelon(full)
    comp_idx = [j - B.cols for j in full_ech.pivots if j >= B.cols]
    Q = Mat(ring, np.eye(C.rank(n), dtype=np.int64)[:, comp_idx])
    # projection along im(d): coordinates of x in [B | Q] basis, Q-part
    proj_ech = echelon(B.hstack(Q))

    def project(vec):
        x = proj_ech.solve(vec)
        return x[B.cols:]

    ranks = [len(comp_idx)] + C.ranks[n - C.lo + 1:]
    diffs = []
    if n < C.hi:
        diffs.append(Mat(ring, ring.vmatmul(C.d(n).data, Q.data)))
        diffs.extend(C.diffs[n - C.lo + 1:])
    out = CochainComplex(ring, n, ranks, diffs, check=False)
    out._tge_include = Q          # section of the quotient at degree n
    out._tge_project = project    # quotient map at degree n
    return out


def cone(f):
    """cone(f)^i = C^(i+1) (+) D^i with d = [[-d_C, 0], [f, d_D]]."""
    C, D = f.source, f.target
    ring = C.ring
    lo = min(C.lo - 1, D.lo)
    hi = max(C.hi - 1, D.hi)
    ranks = [C.rank(i + 1) + D.rank(i) for i in range(lo, hi + 1)]
    diffs = []
    for i in range(lo, hi):
        rc1, rd = C.rank(i + 1), D.rank(i)
        rc2, rd2 = C.rank(i + 2), D.rank(i + 1)
        m = Mat.zeros(ring, rc2 + rd2, rc1 + rd)
        dc = C.d(i + 1)
        m.data[:rc2, :rc1] = ring.vneg(dc.data)
        m.data[rc2:, :rc1] = f.component(i + 1).data
        m.data[rc2:, rc1:] = D.d(i).data
        diffs.append(m)
    return CochainComplex(ring, lo, ranks, diffs)


def direct_sum(C, D):
    ring = C.ring
    lo, hi = min(C.lo, D.lo), max(C.hi, D.hi)
    ranks = [C.rank(i) + D.rank(i) for i in range(lo, hi + 1)]
    diffs = []
    for i in range(lo, hi):
        m = Mat.zeros(ring, C.rank(i + 1) + D.rank(i + 1),
                      C.rank(i) + D.rank(i))
        m.data[:C.rank(i + 1), :C.rank(i)] = C.d(i).data
        m.data[C.rank(i + 1):, C.rank(i):] = D.d(i).data
        diffs.append(m)
    return CochainComplex(ring, lo, ranks, diffs, check=False)


def tensor(C, D):
    """Total complex of the double complex C (x) D."""
    ring = C.ring
    lo, hi = C.lo + D.lo, C.hi + D.hi
    pairs = {n: [(i, n - i) for i in range(C.lo, C.hi + 1)
                 if D.lo <= n - i <= D.hi] for n in range(lo, hi + 1)}
    offs = {}
    ranks = []
    for n in range(lo, hi + 1):
        off = 0
        for (i, j) in pairs[n]:
            offs[(i, j)] = off
            off += C.rank(i) * D.rank(j)
        ranks.append(off)
    diffs = []
    for n in range(lo, hi):
        m = Mat.zeros(ring, ranks[n + 1 - lo], ranks[n - lo])
        for (i, j) in pairs[n]:
            blk = offs[(i, j)]
            rc, rd = C.rank(i), D.rank(j)
            if rc * rd == 0:
                continue
            # kron against a 0/1 identity only places code entries
            if (i + 1, j) in offs and C.rank(i + 1):
                tgt = offs[(i + 1, j)]
                m.data[tgt:tgt + C.rank(i + 1) * rd, blk:blk + rc * rd] = \
                    np.kron(C.d(i).data, np.eye(rd, dtype=np.int64))
            if (i, j + 1) in offs and D.rank(j + 1):
                tgt = offs[(i, j + 1)]
                sgn = ring.from_int((-1) ** (i % 2))
                m.data[tgt:tgt + rc * D.rank(j + 1), blk:blk + rc * rd] = \
                    np.kron(np.eye(rc, dtype=np.int64),
                            ring.vscale(sgn, D.d(j).data))
        diffs.append(Mat(ring, m.data))
    return CochainComplex(ring, lo, ranks, diffs)


# ---------------------------------------------------------------------------
# connecting homomorphisms

class SplitSES:
    """Degreewise-split 0 -> Cp -> C -> Cpp -> 0 over a single ring."""

    def __init__(self, inc, proj, split):
        self.Cp, self.C, self.Cpp = inc.source, proj.source, proj.target
        if proj.source is not inc.target:
            raise ValueError("inc and proj must share the middle complex")
        self.inc, self.proj, self.split = inc, proj, split
        ring = self.C.ring
        for i in self.C.degrees():
            both = inc.component(i).hstack(split.component(i))
            if both.rows != both.cols:
                raise ValueError(f"not exact at degree {i}: rank mismatch")
            if ring.is_field:
                ok = echelon(both).rank == both.rows
            else:
                red = both.map_entries(ring.reduce_mod_p)
                ok = echelon(Mat(ring.residue_ring(), red.data)).rank == \
                    both.rows
            if not ok:
                raise ValueError(f"not split exact at degree {i}")
            pi = proj.component(i) @ split.component(i)
            if not (pi - Mat.identity(ring, self.Cpp.rank(i))).is_zero():
                raise ValueError(f"splitting is not a section at degree {i}")

    def connecting(self, i, z):
        """Value of H^i(Cpp) -> H^(i+1)(Cp) on a cocycle vector."""
        ring = self.C.ring
        w = ring.vmatmul(self.split.component(i).data,
                         np.asarray(z, dtype=np.int64)[:, None])[:, 0]
        dw = ring.vmatmul(self.C.d(i).data, w[:, None])[:, 0]
        inc1 = self.inc.component(i + 1)
        if ring.is_field:
            y = echelon(inc1).solve(dw)
        else:
            y = diagonalize(inc1).solve(dw)
        if y is None:
            raise ValueError("snake: d(split(z)) not in the subcomplex")
        return y

    def connecting_matrix(self, i):
        src = slice_at(self.Cpp, i)
        tgt = slice_at(self.Cp, i + 1)
        cols = [tgt.express(self.connecting(i, src.gens.data[:, j]))
                for j in range(src.gens.cols)]
        if not cols:
            return Mat.zeros(self.C.ring, tgt.gens.cols, 0)
        return Mat(self.C.ring, np.stack(cols, axis=1))


class ModPBockstein:
    """Connecting of 0 -> C/p -> C -> C/p -> 0 for C free over Z/p^2-type.

    ``reduced`` is the complex over the residue ring; ``connecting`` maps a
    cocycle of the reduced complex in degree i to one in degree i+1.
    """

    def __init__(self, C):
        ring = C.ring
        if ring.is_field or ring.e != 2:
            raise ValueError("mod-p Bockstein needs a free complex over "
                             "Z/p^2 or GR(p^2, r)")
        self.C = C
        self.ring = ring
        self.res = ring.residue_ring()
        diffs = []
        for d in C.diffs:
            if d.data.size:
                diffs.append(Mat(self.res,
                                 np.vectorize(ring.reduce_mod_p)(d.data)))
            else:
                diffs.append(Mat.zeros(self.res, d.rows, d.cols))
        self.reduced = CochainComplex(self.res, C.lo, C.ranks, diffs,
                                      check=False)

    def connecting(self, i, z):
        ring, res = self.ring, self.res
        lift = np.array([lift_up(res, ring, int(c)) for c in z],
                        dtype=np.int64)
        dz = ring.vmatmul(self.C.d(i).data, lift[:, None])[:, 0]
        out = np.empty(dz.shape[0], dtype=np.int64)
        from .linalg import _exact_divide
        for k, c in enumerate(dz):
            if ring.valuation(int(c)) < 1:
                raise AssertionError("lifted cocycle has non-divisible d")
            out[k] = coerce_down(ring, res,
                                 _exact_divide(ring, int(c), 1))
        return out

    def connecting_matrix(self, i):
        src = slice_at(self.reduced, i)
        tgt = slice_at(self.reduced, i + 1)
        cols = [tgt.express(self.connecting(i, src.gens.data[:, j]))
                for j in range(src.gens.cols)]
        if not cols:
            return Mat.zeros(self.res, tgt.gens.cols, 0)
        return Mat(self.res, np.stack(cols, axis=1))
