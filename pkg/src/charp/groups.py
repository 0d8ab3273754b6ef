"""Finite groups as dense multiplication tables, and their linear actions.

Groups are built by explicit constructors (cyclic groups, products,
semidirect products, matrix groups generated to closure).  Elements are
integer indices into the table; optional labels keep constructors
readable.  A GModule carries one action matrix per element over a coded
ring; lattice actions (Z^m) are handled separately in :mod:`charp.gcoh`.
"""

import random

import numpy as np

from .linalg import Mat


class FiniteGroup:
    def __init__(self, table, labels=None, generators=None, check=True):
        self.table = np.asarray(table, dtype=np.int64)
        self.order = self.table.shape[0]
        self.labels = labels
        self.generators = generators or []
        self.identity = self._find_identity()
        self.inverse = self._build_inverses()
        if check:
            self.validate()

    def _find_identity(self):
        for e in range(self.order):
            if np.array_equal(self.table[e], np.arange(self.order)) and \
                    np.array_equal(self.table[:, e], np.arange(self.order)):
                return e
        raise ValueError("no identity element")

    def _build_inverses(self):
        inv = np.full(self.order, -1, dtype=np.int64)
        for g in range(self.order):
            hits = np.nonzero(self.table[g] == self.identity)[0]
            if hits.size != 1 or self.table[hits[0], g] != self.identity:
                raise ValueError(f"element {g} has no two-sided inverse")
            inv[g] = hits[0]
        return inv

    def validate(self):
        n = self.order
        if n <= 100:
            for a in range(n):
                for b in range(n):
                    for c in range(n):
                        if self.mul(self.mul(a, b), c) != \
                                self.mul(a, self.mul(b, c)):
                            raise ValueError("associativity fails")
        else:
            rng = random.Random(0)
            for _ in range(10000):
                a, b, c = (rng.randrange(n) for _ in range(3))
                if self.mul(self.mul(a, b), c) != \
                        self.mul(a, self.mul(b, c)):
                    raise ValueError("associativity fails (spot check)")

    def mul(self, a, b):
        return int(self.table[a, b])

    def inv(self, a):
        return int(self.inverse[a])

    def conj(self, t, a):
        """t a t^-1."""
        return self.mul(self.mul(t, a), self.inv(t))

    def elements(self):
        return range(self.order)

    def element_order(self, a):
        k, x = 1, a
        while x != self.identity:
            x = self.mul(x, a)
            k += 1
        return k

    def __repr__(self):
        return f"FiniteGroup(order {self.order})"


def cyclic_group(n):
    table = [[(a + b) % n for b in range(n)] for a in range(n)]
    return FiniteGroup(table, labels=list(range(n)), generators=[1 % n])


def direct_product(G, H):
    n, m = G.order, H.order

    def idx(a, b):
        return a * m + b

    table = np.zeros((n * m, n * m), dtype=np.int64)
    for a in range(n):
        for b in range(m):
            for c in range(n):
                for d in range(m):
                    table[idx(a, b), idx(c, d)] = idx(G.mul(a, c),
                                                      H.mul(b, d))
    labels = None
    if G.labels is not None and H.labels is not None:
        labels = [(G.labels[a], H.labels[b])
                  for a in range(n) for b in range(m)]
    return FiniteGroup(table, labels=labels, check=False)


def semidirect_product(H, A, act):
    """H acting on A: act[h] is a permutation array on A's indices.

    Elements are pairs (h, a) with (h1,a1)(h2,a2) = (h1 h2, act[h2^-1](a1) a2)
    -- i.e. A is normal and H acts by the given automorphisms.
    """
    n, m = H.order, A.order

    def idx(h, a):
        return h * m + a

    table = np.zeros((n * m, n * m), dtype=np.int64)
    for h1 in range(n):
        for a1 in range(m):
            for h2 in range(n):
                for a2 in range(m):
                    moved = int(act[H.inv(h2)][a1])
                    table[idx(h1, a1), idx(h2, a2)] = \
                        idx(H.mul(h1, h2), A.mul(moved, a2))
    return FiniteGroup(table, check=n * m <= 400)


class ElementaryAbelian(FiniteGroup):
    """(Z/p)^m with labelled vectors and the coordinate generators."""

    def __init__(self, p, m):
        self.p = p
        self.m = m
        size = p ** m
        vecs = []
        for code in range(size):
            v = []
            c = code
            for _ in range(m):
                v.append(c % p)
                c //= p
            vecs.append(tuple(v))
        self._vecs = vecs
        self._index = {v: i for i, v in enumerate(vecs)}
        table = np.zeros((size, size), dtype=np.int64)
        for i, a in enumerate(vecs):
            for j, b in enumerate(vecs):
                table[i, j] = self._index[
                    tuple((x + y) % p for x, y in zip(a, b))]
        gens = [self._index[tuple(1 if k == j else 0 for k in range(m))]
                for j in range(m)]
        super().__init__(table, labels=vecs, generators=gens,
                         check=size <= 100)

    def vector(self, idx):
        return self._vecs[idx]

    def from_vector(self, vec):
        return self._index[tuple(x % self.p for x in vec)]

    def automorphism_from_matrix(self, mat):
        """Permutation of element indices induced by a matrix in GL_m(F_p)."""
        mat = np.asarray(mat, dtype=np.int64)
        perm = np.zeros(self.order, dtype=np.int64)
        for i, v in enumerate(self._vecs):
            w = tuple(int(x) % self.p for x in mat @ np.array(v))
            perm[i] = self._index[w]
        return perm


def matrix_group(ring, gens, labels_as="tuple", max_order=20000):
    """Closure of invertible matrices over a coded ring."""
    def key(m):
        return tuple(int(x) for x in m.data.ravel())

    n = gens[0].rows
    ident = Mat.identity(ring, n)
    elems = [ident]
    index = {key(ident): 0}
    frontier = [ident]
    while frontier:
        nxt = []
        for m in frontier:
            for g in gens:
                prod = m @ g
                k = key(prod)
                if k not in index:
                    index[k] = len(elems)
                    elems.append(prod)
                    nxt.append(prod)
                    if len(elems) > max_order:
                        raise ValueError("matrix group closure exceeds bound")
        frontier = nxt
    size = len(elems)
    table = np.zeros((size, size), dtype=np.int64)
    for i, a in enumerate(elems):
        for j, b in enumerate(elems):
            table[i, j] = index[key(a @ b)]
    G = FiniteGroup(table, labels=elems, check=size <= 100)
    G.matrices = elems
    G.generators = [index[key(g)] for g in gens]
    return G


def sl2_group(ring):
    """SL_2 over a finite field, generated by elementary matrices."""
    gens = []
    one = ring.one
    # multiplicative generators of the field give all elementary matrices
    for a in ring.elements():
        if a == ring.zero:
            continue
        gens.append(Mat(ring, [[one, a], [ring.zero, one]]))
        gens.append(Mat(ring, [[one, ring.zero], [a, one]]))
    return matrix_group(ring, gens)


class GModule:
    """A finite group acting linearly on a free coded-ring module."""

    def __init__(self, group, ring, mats, check=True):
        self.group = group
        self.ring = ring
        self.rank = mats[group.identity].rows
        self.mats = list(mats)
        if check:
            self.validate()

    def validate(self):
        G = self.group
        ident = self.mats[G.identity]
        if not (ident - Mat.identity(self.ring, self.rank)).is_zero():
            raise ValueError("identity does not act as identity")
        rng = random.Random(1)
        pairs = [(a, b) for a in G.elements() for b in G.elements()] \
            if G.order <= 30 else \
            [(rng.randrange(G.order), rng.randrange(G.order))
             for _ in range(400)]
        for a, b in pairs:
            lhs = self.mats[a] @ self.mats[b]
            if not (lhs - self.mats[G.mul(a, b)]).is_zero():
                raise ValueError("action is not a homomorphism")

    def act(self, g):
        return self.mats[g]

    def act_vec(self, g, vec):
        return self.ring.vmatmul(self.mats[g].data,
                                 np.asarray(vec, dtype=np.int64)[:, None])[:, 0]

    @classmethod
    def trivial(cls, group, ring, rank=1):
        ident = Mat.identity(ring, rank)
        return cls(group, ring, [ident] * group.order, check=False)

    @classmethod
    def from_function(cls, group, ring, fn, check=True):
        return cls(group, ring, [fn(g) for g in group.elements()],
                   check=check)

    def twist(self):
        """Frobenius twist: entrywise Frobenius on every action matrix."""
        return GModule(self.group, self.ring,
                       [m.frobenius_entries() for m in self.mats],
                       check=False)

    def dual(self):
        from .linalg import inverse
        return GModule(self.group, self.ring,
                       [inverse(m).transpose() for m in self.mats],
                       check=False)

    def tensor(self, other):
        from .linalg import kron
        return GModule(self.group, self.ring,
                       [kron(self.mats[g], other.mats[g])
                        for g in self.group.elements()], check=False)

    def hom_into(self, target):
        """Hom(self, target), f -> rho_t(g) f rho_s(g)^-1, row-major vec."""
        from .linalg import inverse, kron
        mats = []
        for g in self.group.elements():
            inv_s = inverse(self.mats[g])
            mats.append(kron(target.mats[g], inv_s.transpose()))
        return GModule(self.group, self.ring, mats, check=False)

    def apply_functor(self, fn):
        return GModule(self.group, self.ring,
                       [fn(m) for m in self.mats], check=False)

    def restrict(self, subgroup_indices, subgroup):
        return GModule(subgroup, self.ring,
                       [self.mats[subgroup_indices[h]]
                        for h in subgroup.elements()], check=False)
