"""Weight combinatorics for type A_(p-1) and the quadratic field search.

Weights live in Z^(p-1) in the basis chi_1, ..., chi_(p-1), with
chi_p = -(chi_1 + ... + chi_(p-1)).  The searches are certified complete:

- congruence searches reduce exponents modulo the multiplicative order of
  p (p^r * lambda only depends on r mod ord);
- exact-equality searches with p-power scalings are truncated by two
  positive functionals: the coefficient sum sigma (positive on the long
  roots) and f = -sum(k * coefficient of chi_k) (positive on the short
  roots chi_i - chi_j, i < j), each of which bounds the usable exponents.
"""

from itertools import combinations_with_replacement
from math import comb, gcd

from .rings import galois_field, galois_ring, is_prime, ring_make


class WeightVector(tuple):
    """Integer vector in the chi_1..chi_(p-1) basis."""

    def __new__(cls, coords):
        return super().__new__(cls, (int(c) for c in coords))

    def __add__(self, other):
        return WeightVector(a + b for a, b in zip(self, other))

    def __sub__(self, other):
        return WeightVector(a - b for a, b in zip(self, other))

    def scale(self, k):
        return WeightVector(k * a for a in self)

    def sigma(self):
        return sum(self)

    def fpos(self):
        return -sum((k + 1) * a for k, a in enumerate(self))


def chi(p, i):
    """chi_i as a WeightVector (1 <= i <= p)."""
    if not 1 <= i <= p:
        raise ValueError("index out of range")
    if i < p:
        return WeightVector(1 if k == i - 1 else 0 for k in range(p - 1))
    return WeightVector([-1] * (p - 1))


def positive_roots(p):
    """(Delta_{U_p}, Delta_{A_p}) as WeightVector lists."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    delta_u = []
    for i in range(1, p):
        for j in range(i + 1, p):
            delta_u.append(chi(p, i) - chi(p, j))
    total = WeightVector([1] * (p - 1))
    for i in range(1, p):
        delta_u.append(chi(p, i) + total)
    delta_a = [chi(p, 1) - chi(p, i) for i in range(2, p + 1)]
    assert len(delta_u) == comb(p - 1, 2) + (p - 1)
    assert all(r in delta_u for r in delta_a) and len(delta_a) == p - 1
    return delta_u, delta_a


def _mult_order(p, m):
    if m <= 1:
        raise ValueError("modulus must be > 1")
    if gcd(p, m) != 1:
        raise ValueError("p must be invertible mod m")
    k, acc = 1, p % m
    while acc != 1:
        acc = acc * p % m
        k += 1
    return k


class Expression(tuple):
    """Multiset of (exponent, root) pairs, canonically sorted."""

    def __new__(cls, terms):
        return super().__new__(cls, tuple(sorted(terms)))

    def value(self, p):
        total = None
        for r, lam in self:
            term = WeightVector(lam).scale(p ** r)
            total = term if total is None else total + term
        return total if total is not None else None

    def is_exact(self, p, target):
        return self.value(p) == WeightVector(target)


def enumerate_expressions(p, target, gens, max_terms, exponent_bound=None,
                          modulus=0):
    """All multisets {(r_k, lambda_k)} with sum p^(r_k) lambda_k = target.

    modulus = 0 asks for exact equality; modulus m > 0 asks for
    coordinatewise congruence mod m.  With exponent_bound=None the search
    is certified complete: congruences cycle exponents mod ord_m(p), and
    equalities are truncated by the sigma / f functional bounds (every
    generator must have sigma >= 0 and f > 0 or sigma > 0, which holds for
    the type-A sets used here; violations raise).
    """
    target = WeightVector(target)
    gens = [WeightVector(g) for g in gens]
    if modulus:
        ord_p = _mult_order(p, modulus)
        bound = ord_p - 1 if exponent_bound is None else \
            min(exponent_bound, ord_p - 1)
    else:
        if exponent_bound is None:
            bound = _certified_exponent_bound(p, target, gens, max_terms)
        else:
            bound = exponent_bound
    options = [(r, g) for g in gens for r in range(bound + 1)]
    out = []
    for size in range(0, max_terms + 1):
        for combo in combinations_with_replacement(options, size):
            total = WeightVector([0] * (p - 1))
            for r, g in combo:
                total = total + g.scale(pow(p, r, modulus) if modulus
                                        else p ** r)
            if modulus:
                ok = all((a - b) % modulus == 0
                         for a, b in zip(total, target))
            else:
                ok = total == target
            if ok:
                out.append(Expression(combo))
    return out


def _certified_exponent_bound(p, target, gens, max_terms):
    """Exponent cap for exact searches, from two positive functionals.

    sigma is >= 0 on every admissible generator, so a term p^r g with
    sigma(g) > 0 contributes p^r sigma(g) <= sigma(target); this caps the
    exponent and the f-deficit any such term can create.  Terms with
    sigma(g) = 0 must have f(g) > 0, and their f-contribution is at most
    f(target) plus the total deficit of the sigma-positive terms.
    """
    if any(g.sigma() < 0 or (g.sigma() == 0 and g.fpos() <= 0)
           for g in gens):
        raise ValueError("generator set is not certifiably positive; "
                         "pass an explicit exponent bound")
    s_budget = max(target.sigma(), 0)
    smax = 0
    deficit = 0
    for g in gens:
        s = g.sigma()
        if s > 0:
            cap = s_budget // s      # p^r <= sigma(target) / sigma(g)
            smax = max(smax, _log_cap(p, s_budget, s))
            deficit = max(deficit, max(-g.fpos(), 0) * cap)
    f_budget = max(target.fpos(), 0) + max_terms * deficit
    fmax = 0
    for g in gens:
        if g.sigma() == 0:
            fmax = max(fmax, _log_cap(p, f_budget, g.fpos()))
    return max(smax, fmax)


def _log_cap(p, budget, weight):
    r = 0
    while weight * p ** (r + 1) <= budget:
        r += 1
    return r


def monoid_member(p, target, gens):
    """Exact membership of target in the N-span of gens (no p-scalings).

    Certified by the sigma-split: at most sigma(target)/p long roots can
    occur, and the short-root residual lies in the A_(p-2) positive cone,
    which is decided by the partial-sum criterion.
    """
    target = WeightVector(target)
    delta_u, _ = positive_roots(p)
    long_roots = [g for g in delta_u if g.sigma() > 0]
    short_roots = [g for g in delta_u if g.sigma() == 0]
    if target.sigma() < 0:
        return False
    max_long = target.sigma() // p
    for count in range(max_long + 1):
        for combo in combinations_with_replacement(long_roots, count):
            residual = target
            for g in combo:
                residual = residual - g
            if residual.sigma() != 0:
                continue
            if _in_short_cone(residual):
                return True
    return False


def _in_short_cone(v):
    """v in the N-span of {chi_i - chi_j : i < j <= p-1}: all partial sums
    of the coordinates nonnegative and the total zero."""
    acc = 0
    for c in v:
        acc += c
        if acc < 0:
            return False
    return acc == 0


# ---------------------------------------------------------------------------
# quadratic field search

class QuadraticFieldData:
    def __init__(self, p, d, N, unit_desc, order_checked, wieferich_value):
        self.p = p
        self.d = d
        self.N = N
        self.unit_desc = unit_desc
        self.order_checked = order_checked
        self.wieferich_value = wieferich_value

    def __repr__(self):
        return (f"QuadraticFieldData(p={self.p}, d={self.d}, N={self.N}, "
                f"unit={self.unit_desc})")


def norm_subgroup_order(p):
    """Order of {x in F_(p^2)^x : N(x) = +-1} = 2(p+1) for odd p, 3 for 2."""
    return 3 if p == 2 else 2 * (p + 1)


def _unit_order_in_fp2(p, d):
    """Multiplicative order of d + sqrt(d^2+1) in F_(p^2)^x."""
    F = ring_make(galois_field(p, 2, _sqrt_modulus(p, d)))
    u = F.from_coeffs([d % p, 1])
    order = 1
    acc = u
    while acc != F.one:
        acc = F.mul(acc, u)
        order += 1
        if order > p * p:
            raise AssertionError("order computation ran away")
    return order


def _sqrt_modulus(p, d):
    """Modulus x^2 - (d^2+1) over F_p (irreducible when d^2+1 nonresidue)."""
    c = (d * d + 1) % p
    return ((-c) % p, 0, 1)


def _is_residue(p, a):
    a %= p
    if a == 0:
        return True
    return pow(a, (p - 1) // 2, p) == 1


def wieferich_expression(p, d):
    """Tr((d + sqrt(d^2+1))^p) - 2d, computed exactly over Z."""
    # (d + s)^p with s^2 = d^2 + 1: expand in Z[s]/(s^2 - (d^2+1))
    a, b = 1, 0          # a + b s
    base_a, base_b = d, 1
    n = p
    while n:
        if n & 1:
            a, b = (a * base_a + b * base_b * (d * d + 1),
                    a * base_b + b * base_a)
        base_a, base_b = (base_a * base_a + base_b * base_b * (d * d + 1),
                          2 * base_a * base_b)
        n >>= 1
    return 2 * a - 2 * d


def find_quadratic_field(p, search_bound=2000):
    """d with: d^2+1 a nonresidue mod p, d + sqrt(d^2+1) generating the
    norm-(+-1) subgroup of F_(p^2)^x, and the trace expression nonzero
    mod p^2.  For p = 2 the answer is fixed: N = 5 with u = -1 and
    u' = (1 + sqrt 5)/2."""
    if p == 2:
        data = QuadraticFieldData(2, 1, 5, "u = -1, u' = (1+sqrt(5))/2",
                                  order_checked=3, wieferich_value=None)
        _check_p2(data)
        return data
    target_order = norm_subgroup_order(p)
    for d in range(1, search_bound):
        if _is_residue(p, d * d + 1):
            continue
        if _unit_order_in_fp2(p, d % p) != target_order:
            continue
        w = wieferich_expression(p, d)
        if w % (p * p) == 0:
            continue
        # independent re-check of both conditions
        assert not _is_residue(p, d * d + 1)
        assert wieferich_expression(p, d) % (p * p) != 0
        return QuadraticFieldData(
            p, d, d * d + 1, f"u = {d} + sqrt({d * d + 1})",
            order_checked=target_order, wieferich_value=w % (p * p))
    raise ValueError(f"no admissible d below {search_bound}")


def _check_p2(data):
    """Conditions (1)-(2) for F = Q(sqrt 5) at p = 2.

    (1) (1+sqrt 5)/2 reduces to a generator of F_4^x (= the norm
    subgroup); (2) Fr(-1) != (-1)^2 in W_2(F_4)."""
    F4 = ring_make(galois_field(2, 2, (1, 1, 1)))
    phi = F4.from_coeffs([0, 1])     # (1+sqrt5)/2 satisfies x^2 = x+1
    order = 1
    acc = phi
    while acc != F4.one:
        acc = F4.mul(acc, phi)
        order += 1
    if order != 3:
        raise AssertionError("unit does not generate F_4^x")
    GR = ring_make(galois_ring(2, 2, 2, (3, 3, 1)))
    minus1 = GR.from_int(-1)
    if GR.frobenius(minus1) == GR.mul(minus1, minus1):
        raise AssertionError("Frobenius condition fails for u = -1")
