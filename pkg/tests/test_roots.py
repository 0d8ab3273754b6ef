from math import comb

import pytest

from charp.roots import (Expression, WeightVector, chi, enumerate_expressions,
                         find_quadratic_field, monoid_member,
                         norm_subgroup_order, positive_roots,
                         wieferich_expression, _unit_order_in_fp2,
                         _is_residue)


def test_positive_roots_counts():
    for p in (2, 3, 5, 7):
        du, da = positive_roots(p)
        assert len(du) == comb(p - 1, 2) + (p - 1)
        assert len(da) == p - 1
        assert all(r in du for r in da)


def test_positive_roots_p2_p3():
    du2, _ = positive_roots(2)
    assert du2 == [WeightVector((2,))]
    du3, _ = positive_roots(3)
    assert set(du3) == {WeightVector((1, -1)), WeightVector((2, 1)),
                        WeightVector((1, 2))}


def test_unique_expression_of_p_chi1():
    # p=3: exactly (chi1 - chi2) + (2chi1 + chi2)
    du3, _ = positive_roots(3)
    t = chi(3, 1).scale(3)
    exprs = enumerate_expressions(3, t, du3, 2)
    assert len(exprs) == 1
    assert exprs[0] == Expression([(0, WeightVector((1, -1))),
                                   (0, WeightVector((2, 1)))])


def test_no_congruence_other_characters():
    du3, _ = positive_roots(3)
    for j in (2, 3):
        t = chi(3, j).scale(3)
        assert enumerate_expressions(3, t, du3, 2, modulus=8) == []


def test_borel_unique_congruence_is_exact():
    S = [chi(3, 1) - chi(3, i) for i in (2, 3)]
    S += [v.scale(3) for v in S]
    t = chi(3, 1).scale(3)
    found = enumerate_expressions(3, t, S, 2, exponent_bound=0, modulus=4)
    assert len(found) == 1 and found[0].is_exact(3, t)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_monoid_membership(p):
    du, _ = positive_roots(p)
    assert monoid_member(p, chi(p, 1).scale(p), du)
    for j in range(2, p + 1):
        assert not monoid_member(p, chi(p, j).scale(p), du)


@pytest.mark.parametrize("p", [2, 3])
def test_exact_is_sublist_of_congruence(p):
    # every exact equality shows up among the congruences mod q-1
    du, _ = positive_roots(p)
    t = chi(p, 1).scale(p)
    exact = enumerate_expressions(p, t, du, p - 1, exponent_bound=1)
    cong = enumerate_expressions(p, t, du, p - 1, exponent_bound=1,
                                 modulus=p * p - 1)
    for e in exact:
        assert e in cong


def test_certified_exponent_bound_refuses_bad_generators():
    with pytest.raises(ValueError):
        enumerate_expressions(3, chi(3, 1), [WeightVector((-1, 0))], 2)


def test_deterministic_ordering():
    du3, _ = positive_roots(3)
    t = chi(3, 1).scale(3)
    a = enumerate_expressions(3, t, du3, 3, exponent_bound=2)
    b = enumerate_expressions(3, t, du3, 3, exponent_bound=2)
    assert a == b


def test_field_search_p2_fixed_answer():
    data = find_quadratic_field(2)
    assert data.N == 5


@pytest.mark.parametrize("p", [3, 5, 7])
def test_field_search_conditions(p):
    data = find_quadratic_field(p)
    assert not _is_residue(p, data.N)
    assert _unit_order_in_fp2(p, data.d % p) == norm_subgroup_order(p)
    assert wieferich_expression(p, data.d) % (p * p) != 0


def test_wieferich_expression_exact():
    # Tr((d + sqrt(d^2+1))^p) - 2d reduces to 2(d^p - d) mod p
    for p in (3, 5, 7):
        for d in range(1, 12):
            w = wieferich_expression(p, d)
            assert w % p == (2 * (pow(d, p, p * p * p) - d)) % p
