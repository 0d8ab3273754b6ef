import numpy as np
import pytest

from charp.gcoh import (BarEngine, KoszulEngine, PeriodicEngine, bockstein,
                        closure_of_action, invariant_subspace,
                        invariants_of_matrices)
from charp.groups import (ElementaryAbelian, GModule, cyclic_group,
                          direct_product, semidirect_product, sl2_group)
from charp.linalg import Mat
from charp.config import BudgetExceeded
from charp.rings import (galois_field, galois_ring, integers_mod,
                         prime_field, ring_make)


def test_cyclic_and_products():
    C6 = cyclic_group(6)
    assert C6.order == 6 and C6.element_order(1) == 6
    C2xC3 = direct_product(cyclic_group(2), cyclic_group(3))
    assert C2xC3.order == 6
    orders = sorted(C2xC3.element_order(g) for g in C2xC3.elements())
    assert orders == sorted(C6.element_order(g) for g in C6.elements())


def test_elementary_abelian():
    A = ElementaryAbelian(3, 2)
    assert A.order == 9
    for g in A.generators:
        assert A.element_order(g) == 3
    perm = A.automorphism_from_matrix([[0, 1], [1, 0]])
    assert perm[A.from_vector((1, 0))] == A.from_vector((0, 1))


def test_semidirect_s3():
    C2, C3 = cyclic_group(2), cyclic_group(3)
    inv = np.array([C3.inv(a) for a in C3.elements()])
    S3 = semidirect_product(C2, C3, {0: np.arange(3), 1: inv})
    assert S3.order == 6
    assert sorted(S3.element_order(g) for g in S3.elements()) == \
        [1, 2, 2, 2, 3, 3]


def test_sl2_f4():
    F4 = ring_make(galois_field(2, 2))
    G = sl2_group(F4)
    assert G.order == 60
    # perfect group: the abelianization is trivial; sanity via orders
    assert max(G.element_order(g) for g in G.elements()) == 5


def test_gmodule_validation():
    G = cyclic_group(3)
    F = ring_make(prime_field(3))
    bad = [Mat.identity(F, 1), Mat(F, [[2]]), Mat(F, [[2]])]
    with pytest.raises(ValueError):
        GModule(G, F, bad)


def test_gmodule_hom_and_dual():
    G = cyclic_group(4)
    F = ring_make(prime_field(5))
    gen = Mat(F, [[0, 4], [1, 0]])   # rotation of order 4
    mats = [Mat.identity(F, 2)]
    for _ in range(3):
        mats.append(mats[-1] @ gen)
    assert (mats[-1] @ gen - Mat.identity(F, 2)).is_zero()
    M = GModule(G, F, mats)
    H = M.hom_into(M)
    H.validate()
    D = M.dual()
    D.validate()


def test_bar_trivial_group_and_hom():
    F = ring_make(prime_field(2))
    G = cyclic_group(1)
    M = GModule.trivial(G, F, rank=3)
    eng = BarEngine(G, M, 3)
    assert eng.dims() == [3, 0, 0, 0]
    # H^1((Z/2)^2, F_2 trivial) = Hom(G, F_2) has dim 2
    A = ElementaryAbelian(2, 2)
    eng2 = BarEngine(A, GModule.trivial(A, F), 1)
    assert eng2.dims()[1] == 2


@pytest.mark.parametrize("p", [2, 3, 5])
def test_cyclic_cohomology_bar_vs_periodic(p):
    F = ring_make(prime_field(p))
    G = cyclic_group(p)
    bar = BarEngine(G, GModule.trivial(G, F), 3)
    A = ElementaryAbelian(p, 1)
    eng = PeriodicEngine(A, F, [Mat.identity(F, 1)], 3)
    assert bar.dims() == eng.dims() == [1, 1, 1, 1]


def test_bar_budget_exceeded():
    F = ring_make(prime_field(2))
    A = ElementaryAbelian(2, 2)
    from charp.config import Budget, _FAST
    tiny = Budget(_FAST)
    tiny["max_cells"] = 10
    with pytest.raises(BudgetExceeded):
        BarEngine(A, GModule.trivial(A, F), 2, budget=tiny)


def test_periodic_engine_nontrivial_action():
    # C_3 acting on F_3^2 by a unipotent: dims match the bar engine
    F = ring_make(prime_field(3))
    A = ElementaryAbelian(3, 1)
    u = Mat(F, [[1, 1], [0, 1]])
    eng = PeriodicEngine(A, F, [u], 3)
    G = cyclic_group(3)
    mats = [Mat.identity(F, 2)]
    for _ in range(2):
        mats.append(mats[-1] @ u)
    bar = BarEngine(G, GModule(G, F, mats), 3)
    assert eng.dims() == bar.dims()


def test_periodic_transport_roundtrip_and_action():
    F = ring_make(prime_field(3))
    A = ElementaryAbelian(3, 2)
    eng = PeriodicEngine(A, F, [Mat.identity(F, 1)] * 2, 3)
    for n in (1, 2):
        sl = eng.slice(n)
        for j in range(sl.gens.cols):
            vec = sl.gens.data[:, j]
            ev = eng.evaluator_from_cocycle(n, vec)
            back = eng.cocycle_from_function(n, ev)
            assert sl.classes_equal(vec, back)
    swap = A.automorphism_from_matrix([[0, 1], [1, 0]])
    m = eng.action_matrix(2, swap, Mat.identity(F, 1))
    assert (m @ m) == Mat.identity(F, m.rows)


def test_koszul_engine():
    F9 = ring_make(galois_field(3, 2))
    eng = KoszulEngine(F9, [Mat.identity(F9, 1)] * 3)
    assert eng.dims() == [1, 3, 3, 1]
    lam = F9.from_coeffs([0, 1])
    eng2 = KoszulEngine(F9, [Mat(F9, [[lam]]), Mat.identity(F9, 1)])
    assert eng2.dims() == [0, 0, 0]
    with pytest.raises(ValueError):
        KoszulEngine(F9, [Mat(F9, [[F9.zero]])])


def test_koszul_group_cocycle_encoding():
    # 1-cocycles of Z^2 from generator values, with a nontrivial action
    F4 = ring_make(galois_field(2, 2))
    B1 = Mat(F4, [[F4.one, F4.one], [F4.zero, F4.one]])
    eng = KoszulEngine(F4, [B1, Mat.identity(F4, 2)])
    # coboundary values: c(e_j) = (rho(e_j) - 1) m
    m = np.array([F4.from_coeffs([0, 1]), F4.one], dtype=np.int64)
    vals = [F4.vsub(F4.vmatmul(B1.data, m[:, None])[:, 0], m),
            np.zeros(2, dtype=np.int64)]
    vec = eng.cocycle_from_values(vals)
    assert eng.slice(1).is_coboundary(vec)
    with pytest.raises(ValueError):
        eng.cocycle_from_values([np.array([F4.one, F4.zero]),
                                 np.array([F4.one, F4.one])])


def test_invariant_subspace_prime_to_p_check():
    F = ring_make(prime_field(2))
    A = ElementaryAbelian(2, 1)
    eng = PeriodicEngine(A, F, [Mat.identity(F, 1)], 2)
    pairs = [(np.arange(2), Mat.identity(F, 1))] * 2
    with pytest.raises(ValueError):
        invariant_subspace(eng, 1, pairs)


def test_semidirect_exhaustive_small():
    # (Z/3)^2 x| C_2 (inversion) over F_3, degrees <= 2
    F = ring_make(prime_field(3))
    A = ElementaryAbelian(3, 2)
    inv_perm = np.array([A.inv(a) for a in A.elements()], dtype=np.int64)
    C2 = cyclic_group(2)
    G = semidirect_product(C2, A, {0: np.arange(9), 1: inv_perm})
    assert G.order == 18
    bar = BarEngine(G, GModule.trivial(G, F), 2)
    eng = PeriodicEngine(A, F, [Mat.identity(F, 1)] * 2, 2)
    pairs = [(np.arange(9), Mat.identity(F, 1)),
             (inv_perm, Mat.identity(F, 1))]
    dims_inv = [invariant_subspace(eng, i, pairs)[0] for i in range(3)]
    assert bar.dims() == dims_inv


def test_semidirect_bar_inner_group():
    # C_9 x| C_2 over F_3: the inner engine is a bar engine
    F = ring_make(prime_field(3))
    C9 = cyclic_group(9)
    inv_perm = np.array([C9.inv(a) for a in C9.elements()], dtype=np.int64)
    C2 = cyclic_group(2)
    G = semidirect_product(C2, C9, {0: np.arange(9), 1: inv_perm})
    bar_full = BarEngine(G, GModule.trivial(G, F), 2)
    inner = BarEngine(C9, GModule.trivial(C9, F), 2)
    pairs = [(np.arange(9), Mat.identity(F, 1)),
             (inv_perm, Mat.identity(F, 1))]
    dims_inv = [invariant_subspace(inner, i, pairs)[0] for i in range(3)]
    assert bar_full.dims() == dims_inv


@pytest.mark.parametrize("p", [2, 3])
def test_group_bockstein_cyclic(p):
    F = ring_make(prime_field(p))
    Z = ring_make(integers_mod(p, 2))
    A = ElementaryAbelian(p, 1)
    eng = PeriodicEngine(A, F, [Mat.identity(F, 1)], 3)
    lifted = PeriodicEngine(A, Z, [Mat.identity(Z, 1)], 3)
    z = eng.slice(1).gens.data[:, 0]
    b = bockstein(eng, lifted, 1, z)
    assert not eng.slice(2).is_coboundary(b)
    assert eng.slice(3).is_coboundary(bockstein(eng, lifted, 2, b))


def test_bockstein_zero_on_liftable():
    # a class lifting to the GR coefficients has vanishing Bockstein:
    # H^1(Z^2, trivial GR) classes reduce to liftable F_4 classes
    F4 = ring_make(galois_field(2, 2))
    GR = ring_make(galois_ring(2, 2, 2))
    eng = KoszulEngine(F4, [Mat.identity(F4, 1)] * 2)
    lifted = KoszulEngine(GR, [Mat.identity(GR, 1)] * 2)
    z = eng.slice(1).gens.data[:, 0]
    b = bockstein(eng, lifted, 1, z)
    assert eng.slice(2).is_coboundary(b)


def test_lattice_closure_of_action():
    # units acting through a finite quotient on H^1(Z^2, F_4)
    F4 = ring_make(galois_field(2, 2))
    lam = F4.from_coeffs([0, 1])
    eng = KoszulEngine(F4, [Mat.identity(F4, 1)] * 2)
    Q = np.array([[1, 1], [1, 2]], dtype=np.int64)
    mats = closure_of_action(eng, 1, [(Q, Mat(F4, [[lam]]))], bound=100)
    assert 1 <= len(mats) <= 100
    dim, _ = invariants_of_matrices(F4, mats)
    assert dim <= eng.slice(1).dim()
