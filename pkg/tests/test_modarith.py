import math

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from ternaryrep.modarith import (
    CongruenceSpec,
    InconsistentCongruences,
    LegendreConstraint,
    NotSquarefree,
    SearchExhausted,
    crt,
    factor_squarefree,
    find_prime,
    is_prime,
    is_squarefree,
    jacobi,
    lift_sqrt,
    nonresidues,
    quadratic_residues,
    sqrt_mod_prime,
    symmetric_mod,
)

ODD_PRIMES = list(sympy.primerange(3, 200))


def euler(a, p):
    r = pow(a % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


@pytest.mark.parametrize("p", ODD_PRIMES)
def test_jacobi_matches_euler_on_primes(p):
    for a in range(-p, 2 * p):
        assert jacobi(a, p) == euler(a, p)


@given(st.integers(-10**6, 10**6), st.integers(1, 5000).map(lambda k: 2 * k + 1))
def test_jacobi_agrees_with_sympy(a, n):
    assert jacobi(a, n) == sympy.jacobi_symbol(a % n, n)


@given(st.integers(-10**4, 10**4), st.integers(-10**4, 10**4),
       st.integers(0, 2000).map(lambda k: 2 * k + 1))
def test_jacobi_multiplicative_in_top(a, b, n):
    assert jacobi(a * b, n) == jacobi(a, n) * jacobi(b, n)


@pytest.mark.parametrize("n", [0, -3, 4, 10])
def test_jacobi_rejects_bad_modulus(n):
    with pytest.raises(ValueError):
        jacobi(3, n)


def test_is_prime_small_range():
    expected = set(sympy.primerange(0, 20000))
    assert {n for n in range(20000) if is_prime(n)} == expected


@pytest.mark.parametrize("n", [
    3215031751,            # strong pseudoprime to bases 2, 3, 5, 7
    3825123056546413051,   # strong pseudoprime to the first nine prime bases
    318665857834031151167461,
    2**61 - 1, 2**89 - 1, (2**61 - 1) * (2**31 - 1),
])
def test_is_prime_hard_cases(n):
    assert is_prime(n) == sympy.isprime(n)


@given(st.integers(2, 10**18))
def test_is_prime_random(n):
    assert is_prime(n) == sympy.isprime(n)


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13, 17, 23, 29, 41, 97, 113, 257, 1009, 65537])
def test_sqrt_mod_prime_exhaustive(p):
    squares = {x * x % p: x for x in range(p)}
    for d in range(min(p, 3000)):
        r = sqrt_mod_prime(d, p)
        if d in squares:
            assert r is not None and r * r % p == d and 2 * r <= p
        else:
            assert r is None


def test_sqrt_mod_prime_known():
    assert sqrt_mod_prime(2, 7) == 3
    assert sqrt_mod_prime(3, 7) is None


@pytest.mark.parametrize("r,d,p,k", [(3, 2, 7, 2), (3, 2, 7, 5), (1, 1, 11, 3), (4, 5, 11, 4)])
def test_lift_sqrt(r, d, p, k):
    s = lift_sqrt(r, d, p, k)
    assert (s * s - d) % p**k == 0 and s % p == r % p and 0 <= s < p**k


def test_lift_sqrt_known_and_errors():
    assert lift_sqrt(3, 2, 7, 2) == 10
    with pytest.raises(ValueError, match="singular"):
        lift_sqrt(0, 7, 7, 2)
    with pytest.raises(ValueError):
        lift_sqrt(2, 2, 7, 2)


@settings(deadline=None)
@given(st.lists(st.tuples(st.integers(0, 500), st.integers(1, 40)), min_size=1, max_size=4))
def test_crt_against_brute_force(pairs):
    lcm = math.lcm(*(n for _, n in pairs))
    sols = [x for x in range(lcm) if all((x - r) % n == 0 for r, n in pairs)]
    if sols:
        assert crt(pairs) == (sols[0], lcm)
    else:
        with pytest.raises(InconsistentCongruences):
            crt(pairs)


def test_crt_known():
    assert crt([(38, 51), (0, 49)]) == (1568, 2499)
    assert crt([]) == (0, 1)
    with pytest.raises(InconsistentCongruences) as info:
        crt([(1, 4), (2, 6)])
    assert info.value.pair == (2, 6)


def test_factor_squarefree():
    assert factor_squarefree(1) == []
    assert factor_squarefree(2 * 3 * 17 * 101) == [2, 3, 17, 101]
    for m in range(1, 3000):
        assert is_squarefree(m) == all(e == 1 for e in sympy.factorint(m).values())
    with pytest.raises(NotSquarefree):
        factor_squarefree(50)


def test_residue_sets():
    assert quadratic_residues(7) == {1, 2, 4}
    assert nonresidues(7) == {3, 5, 6}
    assert nonresidues(11) == {2, 6, 7, 8, 10}


@given(st.integers(-10**6, 10**6), st.integers(1, 1000))
def test_symmetric_mod(x, n):
    r = symmetric_mod(x, n)
    assert (r - x) % n == 0 and -n < 2 * r <= n


def _brute_find_prime(spec, cap):
    # smallest prime in the folded progression, by plain scanning
    r, n = spec.folded()
    q = 2
    while spec.multiplier * q <= cap:
        if q % n == r and sympy.isprime(q):
            return spec.multiplier * q
        q += 1
    return None


def _legendre(*primes):
    return tuple(LegendreConstraint(p) for p in primes)


@pytest.mark.parametrize("spec,expected", [
    (CongruenceSpec(((1, 4), (3, 49)), _legendre(3, 17)), 4217),
    (CongruenceSpec(((1, 4), (2, 121)), _legendre(67)), 170249),
    (CongruenceSpec(((1, 8), (26, 49)), _legendre(13), multiplier=2), 55618),
])
def test_find_prime_worked_values(spec, expected):
    assert find_prime(spec) == expected


@given(st.sampled_from([(1, 4), (3, 4), (1, 8), (5, 8)]),
       st.lists(st.sampled_from([3, 5, 7, 11, 13]), max_size=2, unique=True),
       st.sampled_from([1, 2]))
def test_find_prime_first_in_progression(res, primes, mult):
    spec = CongruenceSpec((res,), _legendre(*primes), multiplier=mult)
    v = find_prime(spec, 10**6)
    assert v == _brute_find_prime(spec, 10**6)
    assert spec.satisfied_by(v // mult)


def test_folding_picks_smallest_class():
    spec = CongruenceSpec(((1, 4),), _legendre(5))
    # (-q/5) = 1 first holds at q = 1 mod 5
    assert spec.folded() == (1, 20)
    assert find_prime(spec) == 41


def test_find_prime_cap():
    assert find_prime(CongruenceSpec(((1, 2),)), 10) == 3
    with pytest.raises(SearchExhausted):
        find_prime(CongruenceSpec(((3, 49), (1, 4))), 100)


def test_find_prime_contradictory_legendre():
    # 3 mod 7 forces (-3/7) = (4/7) = 1, so requiring -1 cannot be met
    spec = CongruenceSpec(((3, 7),), (LegendreConstraint(7, required=-1),))
    with pytest.raises(InconsistentCongruences):
        find_prime(spec, 10**6)
