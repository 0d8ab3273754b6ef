"""Extension classes of equivariant complexes.

The characteristic class of a rank-p module V is the connecting class of
the two-cohomology complex tau^(>=2) S^p(V[-1]) (equivalently, of the
truncated weight-p de Rham complex): a (p-1)-cocycle valued in
Hom(Lambda^p V, F*V).  For p = 2 it is the splitting cocycle of the short
exact sequence 0 -> F*V -> S^2 V -> Lambda^2 V -> 0.

For p > 2 the class is computed by a staircase: lift a linear splitting of
the top cohomology through the complex, degree by degree, which is always
possible because the intermediate cohomology vanishes.
"""

import random

import numpy as np

from .complexes import CochainComplex, slice_at, truncate_ge
from .doldkan import (PolyFunctor, conormalize, conormalize_map,
                      de_rham_weight_complex, dold_kan, ext_power_matrix,
                      levelwise, sym_power_matrix)
from .linalg import Mat, echelon, kernel_basis, kron


class EquivariantComplex:
    """A field complex with a compatible group action in every degree.

    ``actions``: dict degree -> dict element -> Mat.  Multiplicativity is
    the caller's responsibility (covered by building from generators).
    """

    def __init__(self, complex_, actions, check_elements=None):
        self.complex = complex_
        self.actions = actions
        if check_elements:
            for g in check_elements:
                for i in range(complex_.lo, complex_.hi):
                    lhs = complex_.d(i) @ self.act(g, i)
                    rhs = self.act(g, i + 1) @ complex_.d(i)
                    if not (lhs - rhs).is_zero():
                        raise ValueError(
                            f"action of {g} does not commute with d at {i}")

    def act(self, g, i):
        return self.actions[i][g]


def actions_from_generators(group, degree_mats):
    """Extend generator action matrices multiplicatively to all elements.

    ``degree_mats``: dict degree -> dict generator-position -> Mat.
    Elements are reached breadth-first, so every element's matrix is a
    product of generator matrices (rho(g s) = rho(g) rho(s))."""
    degrees = sorted(degree_mats)
    gens = list(group.generators)
    ring = degree_mats[degrees[0]][0].ring
    full = {}
    for i in degrees:
        n = degree_mats[i][0].rows
        full[i] = {group.identity: Mat.identity(ring, n)}
    known = {group.identity}
    frontier = [group.identity]
    while frontier:
        nxt = []
        for g in frontier:
            for j, s in enumerate(gens):
                h = group.mul(g, s)
                if h in known:
                    continue
                known.add(h)
                for i in degrees:
                    full[i][h] = full[i][g] @ degree_mats[i][j]
                nxt.append(h)
        frontier = nxt
    if len(known) != group.order:
        raise ValueError("generators do not generate the group")
    return full


class HyperextClass:
    """Connecting class of a complex with exactly two cohomology groups.

    For cohomology A in degree a (the bottom of the complex) and B in
    degree b (the top), produces a (b-a+1)-cocycle of the group valued in
    Hom(B, A), as an evaluator on group tuples.
    """

    def __init__(self, equivariant, group, rng=None):
        self.ec = equivariant
        self.G = group
        C = equivariant.complex
        self.ring = C.ring
        rng = rng or random.Random(0)
        dims = [(i, slice_at(C, i).dim()) for i in C.degrees()]
        nonzero = [(i, d) for i, d in dims if d]
        if len(nonzero) != 2:
            raise ValueError(f"expected exactly two cohomology groups, "
                             f"found {nonzero}")
        (self.a, _), (self.b, _) = nonzero
        if self.a != C.lo or self.b != C.hi:
            raise ValueError("cohomology must sit at the ends of the "
                             "complex")
        self.a_slice = slice_at(C, self.a)
        self.b_slice = slice_at(C, self.b)
        self.degree = self.b - self.a + 1
        # induced actions on A = H^a and B = H^b
        self.rho_A = {}
        self.rho_B = {}
        for g in group.elements():
            self.rho_A[g] = self._induced(self.a_slice, self.a, g)
            self.rho_B[g] = self._induced(self.b_slice, self.b, g)
        self.rho_B_inv = {g: self.rho_B[group.inv(g)]
                          for g in group.elements()}
        # linear splitting sigma_0 : B -> D^b of the projection onto H^b,
        # perturbed by a random coboundary part for choice-independence
        sigma = self.b_slice.gens
        d_in = C.d(self.b - 1)
        if d_in.cols and rng is not None:
            noise_cols = []
            for j in range(sigma.cols):
                coeffs = np.array([self.ring.random(rng)
                                   for _ in range(d_in.cols)],
                                  dtype=np.int64)
                noise_cols.append(
                    self.ring.vmatmul(d_in.data, coeffs[:, None])[:, 0])
            sigma = sigma + Mat(self.ring, np.stack(noise_cols, axis=1))
        self.sigma = sigma
        self._solvers = {}
        self._lam = {1: {}}
        self._rng = rng
        self._kernel_noise = {}

    def _induced(self, sl, i, g):
        ring = self.ring
        act = self.ec.act(g, i)
        cols = [sl.express(ring.vmatmul(act.data,
                                        sl.gens.data[:, j][:, None])[:, 0])
                for j in range(sl.gens.cols)]
        if not cols:
            return Mat.zeros(ring, sl.gens.cols, 0)
        return Mat(ring, np.stack(cols, axis=1))

    def _solver(self, i):
        if i not in self._solvers:
            self._solvers[i] = echelon(self.ec.complex.d(i))
        return self._solvers[i]

    def _delta(self, lam, tup):
        """Bar differential of a Hom(B, D^t)-valued cochain at a tuple."""
        G, ring = self.G, self.ring
        j = len(tup) - 1
        t_deg = self.b - j
        acc = self.ec.act(tup[0], t_deg) @ lam(tup[1:]) @ \
            self.rho_B_inv[tup[0]]
        for i in range(j):
            merged = G.mul(tup[i], tup[i + 1])
            term = lam(tup[:i] + (merged,) + tup[i + 2:])
            acc = acc + (term if (i + 1) % 2 == 0 else -term)
        last = lam(tup[:-1])
        acc = acc + (last if (j + 1) % 2 == 0 else -last)
        return acc

    def _lambda(self, j, tup):
        """Lift of the j-th defect: d^(b-j) lambda_j(t) = c_j(t)."""
        memo = self._lam.setdefault(j, {})
        if tup in memo:
            return memo[tup]
        ring = self.ring
        if all(g == self.G.identity for g in tup):
            out = Mat.zeros(ring, self.ec.complex.rank(self.b - j),
                            self.sigma.cols)
        else:
            c = self._defect(j, tup)
            solver = self._solver(self.b - j)
            out = solver.solve_mat(c)
            if out is None:
                raise AssertionError(
                    "staircase step unsolvable; intermediate cohomology "
                    "should vanish")
        memo[tup] = out
        return out

    def _defect(self, j, tup):
        """c_j valued in Hom(B, D^(b-j+1))."""
        if j == 1:
            g = tup[0]
            return self.ec.act(g, self.b) @ self.sigma @ \
                self.rho_B_inv[g] - self.sigma
        return self._delta(lambda t: self._lambda(j - 1, t), tup)

    def evaluator(self):
        """(g_1, ..., g_(b-a+1)) -> Mat of H^a-coordinates x B-gens."""
        top_j = self.b - self.a

        def fn(*tup):
            if len(tup) != self.degree:
                raise ValueError("tuple length mismatch")
            c = self._delta(lambda t: self._lambda(top_j, t), tup)
            cols = [self.a_slice.express(c.data[:, k])
                    for k in range(c.cols)]
            return Mat(self.ring, np.stack(cols, axis=1))

        return fn

    def vec_evaluator(self):
        """Same, flattened row-major (A-coords major) for engine use."""
        fn = self.evaluator()

        def vfn(*tup):
            return fn(*tup).data.ravel()

        return vfn

    def hom_rank(self):
        return self.a_slice.gens.cols * self.b_slice.gens.cols

    def hom_action(self, g):
        """Action on Hom(B, A)-coordinates: f -> rho_A(g) f rho_B(g)^-1."""
        return kron(self.rho_A[g], self.rho_B_inv[g].transpose())

    def spot_check_cocycle(self, rng, trials=5):
        G, ring = self.G, self.ring
        fn = self.vec_evaluator()
        n = self.degree
        for _ in range(trials):
            tup = tuple(rng.randrange(G.order) for _ in range(n + 1))
            acc = self.ring.vmatmul(
                self.hom_action(tup[0]).data,
                np.asarray(fn(*tup[1:]), dtype=np.int64)[:, None])[:, 0]
            for i in range(n):
                merged = G.mul(tup[i], tup[i + 1])
                term = fn(*(tup[:i] + (merged,) + tup[i + 2:]))
                term = np.asarray(term, dtype=np.int64)
                if (i + 1) % 2 == 1:
                    term = ring.vneg(term)
                acc = ring.vadd(acc, term)
            last = np.asarray(fn(*tup[:-1]), dtype=np.int64)
            if (n + 1) % 2 == 1:
                last = ring.vneg(last)
            acc = ring.vadd(acc, last)
            if not np.all(acc == ring.zero):
                raise AssertionError("staircase output is not a cocycle")


# ---------------------------------------------------------------------------
# splitting cocycle of a module extension (the p = 2 alpha class)

class ExtensionCocycle:
    """c(g) = iota^-1(rho_E(g) s rho_Q(g)^-1 - s) for 0 -> K -> E -> Q -> 0.

    All data given as matrices: iota (E x K), proj (Q x E), s a linear
    section (E x Q); actions rho_K, rho_E, rho_Q as dicts over the group.
    """

    def __init__(self, group, ring, iota, proj, section, rho_K, rho_E,
                 rho_Q):
        self.G = group
        self.ring = ring
        self.iota = iota
        self.proj = proj
        self.s = section
        self.rho_K = rho_K
        self.rho_E = rho_E
        self.rho_Q = rho_Q
        if not (proj @ section - Mat.identity(ring, proj.rows)).is_zero():
            raise ValueError("section does not split the projection")
        if not (proj @ iota).is_zero():
            raise ValueError("iota does not land in the kernel")
        self._iota_ech = echelon(iota)

    def evaluator(self):
        G, ring = self.G, self.ring

        def fn(g):
            diff = self.rho_E[g] @ self.s @ self.rho_Q[G.inv(g)] - self.s
            out = self._iota_ech.solve_mat(diff)
            if out is None:
                raise AssertionError("splitting defect not in the kernel")
            return out

        return fn

    def vec_evaluator(self):
        fn = self.evaluator()
        return lambda g: fn(g).data.ravel()

    def hom_action(self, g):
        from .linalg import inverse
        return kron(self.rho_K[g],
                    inverse(self.rho_Q[g]).transpose())


def symmetric_square_extension(group, Vmod):
    """0 -> F*V -> S^2 V -> Lambda^2 V -> 0 with its splitting cocycle."""
    from .doldkan import delta_matrix
    ring = Vmod.ring
    if ring.p != 2:
        raise ValueError("the short-exact-sequence model is for p = 2")
    d = Vmod.rank
    iota = delta_matrix(ring, d, 2)
    # S^2 basis: (0,0),(0,1),(1,1),... wedge: strictly increasing pairs
    from .doldkan import ext_basis, sym_basis
    sb, eb = sym_basis(d, 2), ext_basis(d, 2)
    proj = Mat.zeros(ring, len(eb), len(sb))
    sec = Mat.zeros(ring, len(sb), len(eb))
    for j, mono in enumerate(sb):
        if mono[0] != mono[1]:
            proj.data[eb.index(mono), j] = ring.one
    for i, pair in enumerate(eb):
        sec.data[sb.index(pair), i] = ring.one
    rho_K = {g: Vmod.act(g).frobenius_entries()
             for g in group.elements()}
    rho_E = {g: sym_power_matrix(ring, Vmod.act(g), 2)
             for g in group.elements()}
    rho_Q = {g: ext_power_matrix(ring, Vmod.act(g), 2)
             for g in group.elements()}
    return ExtensionCocycle(group, ring, iota, proj, sec, rho_K, rho_E,
                            rho_Q)


# ---------------------------------------------------------------------------
# equivariant models of tau^(>=.) S^p(V[-1])

def omega_model(group, Vmod, p):
    """tau^(>=1) of the truncated weight-p de Rham complex, equivariant.

    Terms S^(p-i)V (x) Lambda^i V for i <= p-1; the group acts through
    Sym and Ext powers of the module action.
    """
    ring = Vmod.ring
    C = de_rham_weight_complex(ring, Vmod.rank, p, upto=p - 1)
    Ct = truncate_ge(C, 1)
    Q, project = Ct._tge_include, Ct._tge_project
    gen_mats = {}
    for i in range(0, p):
        gen_mats[i] = {}
    for j, gidx in enumerate(group.generators):
        act = Vmod.act(gidx)
        for i in range(0, p):
            m = kron(sym_power_matrix(ring, act, p - i),
                     ext_power_matrix(ring, act, i))
            gen_mats[i][j] = m
    # transport degree-1 ... p-1 to the truncated complex
    trunc_gens = {}
    for i in range(1, p):
        trunc_gens[i] = {}
        for j in gen_mats[i]:
            if i == 1:
                inner = gen_mats[1][j] @ Q
                cols = [project(inner.data[:, k]) for k in range(inner.cols)]
                trunc_gens[1][j] = Mat(ring, np.stack(cols, axis=1))
            else:
                trunc_gens[i][j] = gen_mats[i][j]
    actions = actions_from_generators(group, trunc_gens)
    return EquivariantComplex(Ct, actions,
                              check_elements=list(group.generators))


class AlphaClass:
    """The characteristic class of a rank-p module, with its zero test.

    ``engine`` must expose cocycle_from_function and slice(i) (bar or
    elementary-abelian).  For p = 2: the splitting cocycle of
    0 -> F*V -> S^2 V -> Lambda^2 V -> 0.  For p > 2: the staircase class
    of both chain models, which must vanish simultaneously.
    """

    def __init__(self, group, Vmod, engine_factory, rng=None):
        ring = Vmod.ring
        p = ring.p
        if Vmod.rank != p:
            raise ValueError("the class needs a module of rank p")
        self.degree = p - 1
        self.p = p
        rng = rng or random.Random(0)
        if p == 2:
            ext = symmetric_square_extension(group, Vmod)
            fn = ext.vec_evaluator()
            engine = engine_factory(ext.hom_action)
            vec = engine.cocycle_from_function(1, lambda g: fn(g))
            sl = engine.slice(1)
            self.cocycle = fn
            self.vector = vec
            self.engine = engine
            self.nonzero = bool(sl.is_cocycle(vec) and
                                not sl.is_coboundary(vec))
            self.models_agree = True
            return
        flags = []
        self.engines = {}
        for name, builder in (("omega", omega_model),
                              ("derived", derived_sym_model)):
            ec = builder(group, Vmod, p)
            hy = HyperextClass(ec, group, rng=rng)
            engine = engine_factory(hy.hom_action)
            vec = engine.cocycle_from_function(p - 1, hy.vec_evaluator())
            sl = engine.slice(p - 1)
            flags.append(bool(sl.is_cocycle(vec) and
                              not sl.is_coboundary(vec)))
            self.engines[name] = (hy, engine, vec)
        self.cocycle = self.engines["omega"][0].vec_evaluator()
        self.vector = self.engines["omega"][2]
        self.engine = self.engines["omega"][1]
        self.nonzero = flags[0]
        self.models_agree = flags[0] == flags[1]
        if not self.models_agree:
            raise AssertionError("the two chain models disagree on "
                                 "vanishing of the class")


def derived_sym_model(group, Vmod, p, budget=None):
    """tau^(>=2) tau^(<=p) of the derived p-th symmetric power of V[-1],
    with the group acting through the Dold-Kan levels."""
    from .complexes import truncate_le
    if p < 3:
        raise ValueError("use the short-exact-sequence model for p = 2")
    ring = Vmod.ring
    d = Vmod.rank
    C = CochainComplex(ring, 0, [0, d], [Mat.zeros(ring, d, 0)])
    A = dold_kan(C, p + 1)
    FA = levelwise(PolyFunctor("sym", p), A)
    conorm = conormalize(FA)
    S = conorm.complex
    # generator actions: DK of the chain map rho(g) is blockwise rho(g)
    gen_maps = {}
    for j, gidx in enumerate(group.generators):
        act = Vmod.act(gidx)
        level_maps = []
        for n in range(p + 2):
            basis = A.dk_bases[n]
            blk = Mat.zeros(ring, basis.rank, basis.rank)
            for (k, sigma, off) in basis.blocks:
                blk.data[off:off + d, off:off + d] = act.data
            level_maps.append(sym_power_matrix(ring, blk, p))
        gen_maps[j] = conormalize_map(conorm, conorm, level_maps)
    # canonical truncation above p (the top computed level is unreliable):
    # the new top is ker d^p, and the action restricts to it
    Sle = truncate_le(S, p)
    K = kernel_basis(S.d(p))
    k_ech = echelon(K)
    # then kill H^(<2) from below
    Ct = truncate_ge(Sle, 2)
    Q, project = Ct._tge_include, Ct._tge_project
    trunc_gens = {i: {} for i in range(2, p + 1)}
    for j, cm in gen_maps.items():
        for i in range(2, p + 1):
            if i == p:
                restricted = k_ech.solve_mat(cm.component(p) @ K)
                if restricted is None:
                    raise AssertionError("action does not preserve ker d^p")
                trunc_gens[p][j] = restricted
            elif i == 2:
                inner = cm.component(2) @ Q
                cols = [project(inner.data[:, k])
                        for k in range(inner.cols)]
                trunc_gens[2][j] = Mat(ring, np.stack(cols, axis=1))
            else:
                trunc_gens[i][j] = cm.component(i)
    actions = actions_from_generators(group, trunc_gens)
    return EquivariantComplex(Ct, actions,
                              check_elements=list(group.generators))
