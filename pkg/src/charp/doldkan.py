"""Dold-Kan correspondence and derived polynomial functors.

A cochain complex C in degrees [0, D] of finite free modules determines a
cosimplicial module DK(C) with level n = (+)_{[n] ->> [k]} C^k, summing
over monotone surjections.  Applying Sym^n / Gamma^n / Lambda^n levelwise
and conormalizing computes the derived power functors; the natural maps
(norm, restriction, Frobenius factorisation Delta/psi) are levelwise
integer matrices in fixed monomial bases:

- Sym: weakly increasing index tuples, lex order;
- Ext: strictly increasing tuples, lex order;
- Div: the basis dual to the orbit sums e_I, indexed like Sym (so the
  divided power of a matrix is Sym of its transpose, transposed).
"""

from functools import lru_cache
from itertools import combinations, combinations_with_replacement
from math import comb, factorial

import numpy as np

from .config import DEFAULT, BudgetExceeded
from .complexes import CochainComplex, ComplexMap
from .linalg import Mat, diagonalize, echelon

# ---------------------------------------------------------------------------
# simplicial operator combinatorics (monotone maps [m] -> [n] as value tuples)

@lru_cache(maxsize=None)
def surjections(n, k):
    """Monotone surjections [n] ->> [k] as value tuples (lex order)."""
    if k > n or k < 0:
        return ()
    out = []
    for steps in combinations(range(1, n + 1), k):
        vals = []
        cur = 0
        si = 0
        for x in range(n + 1):
            while si < k and steps[si] == x:
                cur += 1
                si += 1
            vals.append(cur)
        out.append(tuple(vals))
    return tuple(sorted(out))


def coface_tuple(n, i):
    """delta^i : [n-1] -> [n] skipping i."""
    return tuple(x if x < i else x + 1 for x in range(n))


def codegeneracy_tuple(n, j):
    """sigma^j : [n+1] -> [n] repeating j."""
    return tuple(x if x <= j else x - 1 for x in range(n + 2))


def compose_ops(f, g):
    """f o g as value tuples (g first)."""
    return tuple(f[x] for x in g)


def epi_mono_factor(alpha):
    """alpha = eps o eta with eta surjective, eps injective monotone."""
    image = sorted(set(alpha))
    eta = tuple(image.index(v) for v in alpha)
    eps = tuple(image)
    return eps, eta


# differential convention for DK structure maps: the component attached to
# an injection [k] -> [k+1] carries d when the injection misses MISS
# ("last" or "first"); fixed by the cosimplicial identity tests.
_DK_MISS = "last"


class CosimplicialModule:
    """Levels 0..L of free modules with coface/codegeneracy matrices."""

    def __init__(self, ring, ranks, cofaces, codegens, check=True):
        self.ring = ring
        self.ranks = list(ranks)
        self.L = len(ranks) - 1
        self.cofaces = dict(cofaces)      # (n, i): level n-1 -> n, 0<=i<=n
        self.codegens = dict(codegens)    # (n, j): level n+1 -> n, 0<=j<=n
        if check:
            self.validate()

    def rank(self, n):
        return self.ranks[n] if 0 <= n <= self.L else 0

    def d(self, n, i):
        return self.cofaces[(n, i)]

    def s(self, n, j):
        return self.codegens[(n, j)]

    def validate(self):
        ring = self.ring

        def eq(a, b):
            return (a - b).is_zero()

        for n in range(2, self.L + 1):
            for i in range(n + 1):
                for j in range(i + 1, n + 1):
                    if not eq(self.d(n, j) @ self.d(n - 1, i),
                              self.d(n, i) @ self.d(n - 1, j - 1)):
                        raise ValueError(
                            f"coface identity fails at level {n}: "
                            f"d^{j} d^{i}")
        for n in range(0, self.L - 1):
            for j in range(n + 1):
                for i in range(j + 1):
                    if not eq(self.s(n, i) @ self.s(n + 1, j + 1),
                              self.s(n, j) @ self.s(n + 1, i)):
                        raise ValueError(f"codegeneracy identity at {n}")
        for n in range(0, self.L):
            for j in range(n + 1):
                for i in range(n + 2):
                    lhs = self.s(n, j) @ self.d(n + 1, i)
                    if i < j:
                        rhs = self.d(n, i) @ self.s(n - 1, j - 1) \
                            if n >= 1 else None
                        ok = rhs is not None and eq(lhs, rhs)
                    elif i in (j, j + 1):
                        ok = eq(lhs, Mat.identity(ring, self.rank(n)))
                    else:
                        rhs = self.d(n, i - 1) @ self.s(n - 1, j) \
                            if n >= 1 else None
                        ok = rhs is not None and eq(lhs, rhs)
                    if not ok:
                        raise ValueError(
                            f"mixed identity fails: s^{j} d^{i} level {n}")

    def operator(self, alpha, m, n):
        """Matrix of the structure map for monotone alpha: [m] -> [n]."""
        eps, eta = epi_mono_factor(alpha)
        mat = Mat.identity(self.ring, self.rank(m))
        cur = m
        # peel codegeneracies: contract the first double point repeatedly
        work = list(eta)
        while len(work) - 1 > max(work):
            a = next(x for x in range(len(work) - 1)
                     if work[x] == work[x + 1])
            mat = self.s(cur - 1, a) @ mat
            cur -= 1
            work = work[:a + 1] + work[a + 2:]
        # injection part: insert the missing values in increasing order
        missing = [v for v in range(n + 1) if v not in eps]
        for b in missing:
            mat = self.d(cur + 1, b) @ mat
            cur += 1
        assert cur == n
        return mat

    def twist(self):
        """Frobenius twist: all structure matrices entrywise-Frobenius."""
        cf = {k: m.frobenius_entries() for k, m in self.cofaces.items()}
        cd = {k: m.frobenius_entries() for k, m in self.codegens.items()}
        return CosimplicialModule(self.ring, self.ranks, cf, cd, check=False)


# ---------------------------------------------------------------------------
# DK construction

class DKBasis:
    """Level basis of DK(C): blocks (k, sigma) of width rank C^k."""

    def __init__(self, C, n):
        self.blocks = []          # (k, sigma, offset)
        off = 0
        for k in range(0, min(n, C.hi) + 1):
            rk = C.rank(k)
            if rk == 0:
                continue
            for sigma in surjections(n, k):
                self.blocks.append((k, sigma, off))
                off += rk
        self.rank = off
        self.index = {(k, s): o for (k, s, o) in self.blocks}


def _dk_component(C, alpha, m, n, src_basis, tgt_basis):
    ring = C.ring
    out = Mat.zeros(ring, tgt_basis.rank, src_basis.rank)
    for (l, tau, toff) in tgt_basis.blocks:
        eps, eta = epi_mono_factor(compose_ops(tau, alpha))
        k = max(eta)
        key = (k, eta)
        if key not in src_basis.index:
            continue
        soff = src_basis.index[key]
        rk, rl = C.rank(k), C.rank(l)
        if eps == tuple(range(l + 1)):
            out.data[toff:toff + rl, soff:soff + rk] = \
                Mat.identity(ring, rk).data
        elif l == k + 1:
            if _DK_MISS == "last" and eps == tuple(range(k + 1)):
                out.data[toff:toff + rl, soff:soff + rk] = C.d(k).data
            elif _DK_MISS == "first" and eps == tuple(range(1, k + 2)):
                out.data[toff:toff + rl, soff:soff + rk] = C.d(k).data
    return out


def dold_kan(C, L):
    """Cosimplicial module with level n = (+)_{[n]->>[k]} C^k, levels <= L."""
    if C.lo < 0:
        raise ValueError("dold_kan needs a complex in non-negative degrees")
    bases = [DKBasis(C, n) for n in range(L + 1)]
    cofaces = {}
    codegens = {}
    for n in range(1, L + 1):
        for i in range(n + 1):
            cofaces[(n, i)] = _dk_component(
                C, coface_tuple(n, i), n - 1, n, bases[n - 1], bases[n])
    for n in range(0, L):
        for j in range(n + 1):
            codegens[(n, j)] = _dk_component(
                C, codegeneracy_tuple(n, j), n + 1, n, bases[n + 1], bases[n])
    A = CosimplicialModule(C.ring, [b.rank for b in bases], cofaces,
                           codegens)
    A.dk_bases = bases
    A.dk_source = C
    return A


# ---------------------------------------------------------------------------
# conormalization

class Conormalized:
    def __init__(self, complex_, bases):
        self.complex = complex_
        self.bases = bases        # bases[n]: level-rank x N^n-rank

    def restrict(self, n, level_vec):
        """Coordinates of a level-n vector lying in N^n."""
        ring = self.complex.ring
        K = self.bases[n]
        if ring.is_field:
            x = echelon(K).solve(level_vec)
        else:
            x = diagonalize(K).solve(level_vec)
        if x is None:
            raise ValueError("vector not in the conormalized part")
        return x

    def include(self, n, vec):
        ring = self.complex.ring
        return ring.vmatmul(self.bases[n].data,
                            np.asarray(vec, dtype=np.int64)[:, None])[:, 0]


def _free_kernel_basis_stacked(ring, mats):
    """Free basis of the intersection of kernels of the given matrices."""
    from .complexes import _kernel_free_basis  # reuse the local-ring logic
    if not mats:
        raise ValueError("need at least one matrix")
    stacked = mats[0]
    for m in mats[1:]:
        stacked = stacked.vstack(m)
    fake = CochainComplex(ring, 0, [stacked.cols, stacked.rows], [stacked],
                          check=False)
    return _kernel_free_basis(fake, 0)


def conormalize(A):
    """N^n = intersection of ker s^j, differential = alternating coface sum."""
    ring = A.ring
    bases = []
    for n in range(A.L + 1):
        if n == 0:
            bases.append(Mat.identity(ring, A.rank(0)))
            continue
        mats = [A.s(n - 1, j) for j in range(n)]
        bases.append(_free_kernel_basis_stacked(ring, mats))
    diffs = []
    for n in range(A.L):
        total = Mat.zeros(ring, A.rank(n + 1), A.rank(n))
        for i in range(n + 2):
            term = A.d(n + 1, i)
            total = total + (term if i % 2 == 0 else -term)
        img = total @ bases[n]
        K = bases[n + 1]
        if ring.is_field:
            X = echelon(K).solve_mat(img)
        else:
            cols = [diagonalize(K).solve(img.col(j))
                    for j in range(img.cols)]
            if any(c is None for c in cols):
                X = None
            else:
                X = Mat(ring, np.stack(cols, axis=1)) if cols else \
                    Mat.zeros(ring, K.cols, 0)
        if X is None:
            raise ValueError("conormalized differential does not restrict")
        diffs.append(X)
    cx = CochainComplex(ring, 0, [b.cols for b in bases], diffs)
    return Conormalized(cx, bases)


def conormalize_map(src_conorm, tgt_conorm, level_maps, twist_source=False):
    """ComplexMap induced on conormalizations by levelwise maps.

    ``level_maps[n]``: level n of the source to level n of the target.
    With ``twist_source`` the source complex is Frobenius-twisted first
    (for semilinear maps out of a twist).
    """
    ring = src_conorm.complex.ring
    comps = {}
    source = src_conorm.complex.twist() if twist_source else \
        src_conorm.complex
    for n in source.degrees():
        if n >= len(level_maps) or level_maps[n] is None:
            continue
        src_base = src_conorm.bases[n]
        if twist_source:
            src_base = src_base.frobenius_entries()
        img = level_maps[n] @ src_base
        K = tgt_conorm.bases[n]
        if ring.is_field:
            X = echelon(K).solve_mat(img)
        else:
            cols = [diagonalize(K).solve(img.col(j)) for j in range(img.cols)]
            X = None if any(c is None for c in cols) else \
                (Mat(ring, np.stack(cols, axis=1)) if cols else
                 Mat.zeros(ring, K.cols, 0))
        if X is None:
            raise ValueError("levelwise map does not preserve "
                             "normalized parts")
        comps[n] = X
    return ComplexMap(source, tgt_conorm.complex, comps)


# ---------------------------------------------------------------------------
# polynomial functors on free modules

class PolyFunctor:
    def __init__(self, kind, arity):
        if kind not in ("sym", "div", "ext"):
            raise ValueError(f"unknown functor kind {kind}")
        if arity < 0:
            raise ValueError("arity must be >= 0")
        self.kind = kind
        self.arity = arity

    def __repr__(self):
        return f"{self.kind}^{self.arity}"

    def dim(self, d):
        if self.kind == "ext":
            return comb(d, self.arity)
        return comb(d + self.arity - 1, self.arity) if self.arity else 1


@lru_cache(maxsize=None)
def sym_basis(d, n):
    return tuple(combinations_with_replacement(range(d), n))


@lru_cache(maxsize=None)
def ext_basis(d, n):
    return tuple(combinations(range(d), n))


def sym_power_matrix(ring, f, n):
    """Sym^n of a matrix in the weakly-increasing monomial bases.

    Columns are built degree by degree: the column of a monomial
    (j_1 <= ... <= j_t) is the polynomial product of the columns of f,
    sharing the common prefix (j_1 <= ... <= j_(t-1)).
    """
    d_tgt, d_src = f.rows, f.cols
    if n == 0:
        return Mat(ring, [[ring.one]])
    prev = Mat(ring, f.data.copy())     # degree 1: variables x variables
    for t in range(2, n + 1):
        src_t = sym_basis(d_src, t)
        tgt_t = sym_basis(d_tgt, t)
        tgt_idx = {m: i for i, m in enumerate(tgt_t)}
        prev_src_idx = {m: i for i, m in enumerate(sym_basis(d_src, t - 1))}
        prev_tgt_idx = {m: i for i, m in enumerate(sym_basis(d_tgt, t - 1))}
        # column c of degree t = prefix column times variable var[c]
        pre = np.array([prev_src_idx[m[:-1]] for m in src_t], dtype=np.int64)
        var = np.array([m[-1] for m in src_t], dtype=np.int64)
        new = np.full((len(tgt_t), len(src_t)), ring.zero, dtype=np.int64)
        gathered = prev.data[:, pre]        # (|tgt_(t-1)|, cols_t)
        for v in range(d_tgt):
            rows = [tgt_idx[m] for m in tgt_t if v in m]
            if not rows:
                continue
            drop = [prev_tgt_idx[_drop_one(m, v)] for m in tgt_t if v in m]
            fv = f.data[v, var]             # (cols_t,)
            contrib = ring.vmul(gathered[drop, :],
                                np.broadcast_to(fv, (len(rows), len(fv))))
            new[rows, :] = ring.vadd(new[rows, :], contrib)
        prev = Mat(ring, new)
    return prev


def _drop_one(mono, v):
    out = list(mono)
    out.remove(v)
    return tuple(out)


def _det(ring, rows, cols, data):
    """Determinant of the submatrix data[rows][:, cols] (small sizes)."""
    k = len(rows)
    if k == 0:
        return ring.one
    if k == 1:
        return int(data[rows[0], cols[0]])
    acc = ring.zero
    for t, r in enumerate(rows):
        a = int(data[r, cols[0]])
        if a == ring.zero:
            continue
        sub = _det(ring, rows[:t] + rows[t + 1:], cols[1:], data)
        term = ring.mul(a, sub)
        acc = ring.add(acc, term) if t % 2 == 0 else ring.sub(acc, term)
    return acc


def ext_power_matrix(ring, f, n):
    src = ext_basis(f.cols, n)
    tgt = ext_basis(f.rows, n)
    out = Mat.zeros(ring, len(tgt), len(src))
    for ci, J in enumerate(src):
        for ri, I in enumerate(tgt):
            out.data[ri, ci] = _det(ring, list(I), list(J), f.data)
    return out


def div_power_matrix(ring, f, n):
    return sym_power_matrix(ring, f.transpose(), n).transpose()


def power_matrix(ring, functor, f):
    if functor.kind == "sym":
        return sym_power_matrix(ring, f, functor.arity)
    if functor.kind == "ext":
        return ext_power_matrix(ring, f, functor.arity)
    return div_power_matrix(ring, f, functor.arity)


def levelwise(functor, A):
    """Apply a polynomial functor to every level and structure map."""
    ring = A.ring
    cf = {k: power_matrix(ring, functor, m) for k, m in A.cofaces.items()}
    cd = {k: power_matrix(ring, functor, m) for k, m in A.codegens.items()}
    ranks = [functor.dim(r) for r in A.ranks]
    return CosimplicialModule(ring, ranks, cf, cd, check=False)


# ---------------------------------------------------------------------------
# derived powers and the natural maps

def derived_power(functor, C, bound, budget=None, return_conorm=False):
    """conormalize(levelwise(functor, dold_kan(C))), valid in degrees <= bound."""
    budget = budget or DEFAULT
    L = bound + 1
    if L > budget.max_level:
        raise BudgetExceeded(
            f"derived power needs {L} cosimplicial levels; budget allows "
            f"{budget.max_level}")
    A = dold_kan(C, L)
    FA = levelwise(functor, A)
    conorm = conormalize(FA)
    return conorm if return_conorm else conorm.complex


def multiset_multiplicity_factorials(mono):
    from collections import Counter
    acc = 1
    for c in Counter(mono).values():
        acc *= factorial(c)
    return acc


def norm_matrix(ring, d, n):
    """N_n : Sym^n -> Div^n, diagonal with prod(mult_i!)."""
    basis = sym_basis(d, n)
    out = Mat.zeros(ring, len(basis), len(basis))
    for i, mono in enumerate(basis):
        out.data[i, i] = ring.from_int(multiset_multiplicity_factorials(mono))
    return out


def restriction_matrix(ring, d, n):
    """r_n : Div^n -> Sym^n, diagonal with n! / prod(mult_i!)."""
    basis = sym_basis(d, n)
    out = Mat.zeros(ring, len(basis), len(basis))
    for i, mono in enumerate(basis):
        out.data[i, i] = ring.from_int(
            factorial(n) // multiset_multiplicity_factorials(mono))
    return out


def delta_matrix(ring, d, p):
    """Delta : F*M -> Sym^p M, e_i -> e_i^p."""
    basis = {m: i for i, m in enumerate(sym_basis(d, p))}
    out = Mat.zeros(ring, len(basis), d)
    for i in range(d):
        out.data[basis[(i,) * p], i] = ring.one
    return out


def psi_matrix(ring, d, p):
    """psi : Div^p M -> F*M, dual-orbit basis e_I -> [I constant] e_i."""
    basis = sym_basis(d, p)
    out = Mat.zeros(ring, d, len(basis))
    for j, mono in enumerate(basis):
        if all(v == mono[0] for v in mono):
            out.data[mono[0], j] = ring.one
    return out


def natural_map(name, n, C, bound, budget=None):
    """Levelwise natural transformation as a ComplexMap of derived powers.

    name in {"N", "r", "Delta", "Psi"}; for Delta/Psi, n must be the
    characteristic p and C must live over a char-p ring, with the
    Frobenius twist carried by twisting the DK complex.
    """
    budget = budget or DEFAULT
    ring = C.ring
    L = bound + 1
    if L > budget.max_level:
        raise BudgetExceeded("level budget exceeded")
    A = dold_kan(C, L)
    if name in ("Delta", "Psi"):
        if ring.char != ring.p:
            raise ValueError(f"{name} needs a characteristic-p ring")
        if n != ring.p:
            raise ValueError(f"{name} is defined for arity p = {ring.p}")
    sym = levelwise(PolyFunctor("sym", n), A)
    div = levelwise(PolyFunctor("div", n), A)
    conorm_sym = conormalize(sym)
    conorm_div = conormalize(div)
    if name == "N":
        mats = [norm_matrix(ring, A.rank(m), n) for m in range(L + 1)]
        return conormalize_map(conorm_sym, conorm_div, mats)
    if name == "r":
        mats = [restriction_matrix(ring, A.rank(m), n) for m in range(L + 1)]
        return conormalize_map(conorm_div, conorm_sym, mats)
    conorm_dk = conormalize(A)
    if name == "Delta":
        mats = [delta_matrix(ring, A.rank(m), n) for m in range(L + 1)]
        return conormalize_map(conorm_dk, conorm_sym, mats, twist_source=True)
    if name == "Psi":
        mats = [psi_matrix(ring, A.rank(m), n) for m in range(L + 1)]
        # target is the twisted DK complex: build the twisted conorm
        twisted = Conormalized(conorm_dk.complex.twist(),
                               [b.frobenius_entries()
                                for b in conorm_dk.bases])
        return conormalize_map(conorm_div, twisted, mats)
    raise ValueError(f"unknown natural map {name}")


# ---------------------------------------------------------------------------
# de Rham weight complexes Omega^bullet_n

def de_rham_weight_complex(ring, d, n, upto=None):
    """S^n V -> S^(n-1) V (x) V -> ... -> Lambda^n V for dim V = d.

    ``upto`` truncates brutally after the given number of terms (the
    complex with the last term removed is upto = n).
    """
    terms = n + 1 if upto is None else min(n + 1, upto + 1)
    ranks = []
    for i in range(terms):
        ranks.append(comb(d + n - i - 1, n - i) * comb(d, i))
    diffs = []
    for i in range(terms - 1):
        sb = sym_basis(d, n - i)
        eb = ext_basis(d, i)
        sb2 = sym_basis(d, n - i - 1)
        eb2 = ext_basis(d, i + 1)
        sidx = {m: a for a, m in enumerate(sb2)}
        eidx = {J: a for a, J in enumerate(eb2)}
        out = Mat.zeros(ring, len(sb2) * len(eb2), len(sb) * len(eb))
        for a, mono in enumerate(sb):
            for b, J in enumerate(eb):
                col = a * len(eb) + b
                seen = set()
                for j in mono:
                    if j in seen or j in J:
                        continue
                    seen.add(j)
                    mult = mono.count(j)
                    rest = list(mono)
                    rest.remove(j)
                    pos = sum(1 for l in J if l < j)
                    sign = (-1) ** pos
                    row = sidx[tuple(rest)] * len(eb2) + \
                        eidx[tuple(sorted(J + (j,)))]
                    val = ring.from_int(sign * mult)
                    out.data[row, col] = ring.add(int(out.data[row, col]),
                                                  val)
        diffs.append(out)
    return CochainComplex(ring, 0, ranks, diffs)
