"""Exact modular arithmetic used by the certificate engine.

Everything here works on Python integers, so there is no overflow concern
for the magnitudes the engine produces (a*b is around 10^10 in practice).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence


class SearchExhausted(LookupError):
    """No value satisfying a congruence specification was found below the cap."""


class InconsistentCongruences(ValueError):
    """Raised by :func:`crt` when two congruences cannot hold simultaneously."""

    def __init__(self, pair, modulus_so_far, residue_so_far):
        self.pair = pair
        super().__init__(
            f"congruence x = {pair[0]} (mod {pair[1]}) is incompatible with "
            f"x = {residue_so_far} (mod {modulus_so_far})"
        )


class NotSquarefree(ValueError):
    pass


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a/n) for odd positive n."""
    if n < 1 or n % 2 == 0:
        raise ValueError(f"jacobi symbol needs an odd positive modulus, got {n}")
    a %= n
    acc = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                acc = -acc
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            acc = -acc
        a %= n
    return acc if n == 1 else 0


# Deterministic for n < 3.317e24 (Sorenson & Webster); beyond that the test
# is a strong probable-prime test to these bases.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for base in _MR_BASES:
        x = pow(base, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _nonresidue(p: int) -> int:
    z = 2
    while jacobi(z, p) != -1:
        z += 1
    return z


def sqrt_mod_prime(d: int, p: int) -> int | None:
    """Square root of d modulo the odd prime p, or None for a nonresidue.

    Of the two roots the one <= p/2 is returned.
    """
    d %= p
    if d == 0:
        return 0
    if jacobi(d, p) != 1:
        return None
    if p % 4 == 3:
        r = pow(d, (p + 1) // 4, p)
    else:
        # Tonelli-Shanks
        q, s = p - 1, 0
        while q % 2 == 0:
            q //= 2
            s += 1
        c = pow(_nonresidue(p), q, p)
        r = pow(d, (q + 1) // 2, p)
        t = pow(d, q, p)
        m = s
        while t != 1:
            i, t2 = 0, t
            while t2 != 1:
                t2 = t2 * t2 % p
                i += 1
            b = pow(c, 1 << (m - i - 1), p)
            r = r * b % p
            c = b * b % p
            t = t * c % p
            m = i
    return min(r, p - r)


def lift_sqrt(r: int, d: int, p: int, k: int) -> int:
    """Hensel-lift a root r of x^2 = d (mod p) to a root modulo p**k.

    The result is congruent to r modulo p and lies in [0, p**k).
    """
    if k < 1:
        raise ValueError("exponent must be >= 1")
    if d % p == 0:
        raise ValueError("unsupported singular lift: p divides d")
    if (r * r - d) % p:
        raise ValueError(f"{r} is not a square root of {d} modulo {p}")
    s, pk = r % p, p
    for _ in range(k - 1):
        pk *= p
        # s <- s - (s^2 - d) / (2s)  (mod pk)
        s = (s - (s * s - d) * pow(2 * s, -1, pk)) % pk
    return s


def crt(pairs: Iterable[tuple[int, int]]) -> tuple[int, int]:
    """Combine congruences x = r_i (mod n_i); moduli need not be coprime.

    Returns ``(x, lcm)`` with ``0 <= x < lcm``.
    """
    x, n = 0, 1
    for r, m in pairs:
        if m < 1:
            raise ValueError(f"modulus must be positive, got {m}")
        g = math.gcd(n, m)
        if (r - x) % g:
            raise InconsistentCongruences((r, m), n, x)
        # x + n*t = r (mod m)  ->  t = (r-x)/g * (n/g)^-1 (mod m/g)
        mg = m // g
        t = (r - x) // g * pow(n // g, -1, mg) % mg if mg > 1 else 0
        x += n * t
        n *= mg
        x %= n
    return x, n


def factor_squarefree(m: int) -> list[int]:
    """Prime factors of a squarefree m, ascending; NotSquarefree otherwise."""
    if m < 1:
        raise ValueError("m must be positive")
    primes = []
    p = 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                raise NotSquarefree(f"{p}^2 divides the input")
            primes.append(p)
        p += 1 if p == 2 else 2
    if m > 1:
        primes.append(m)
    return primes


def is_squarefree(m: int) -> bool:
    try:
        factor_squarefree(m)
    except NotSquarefree:
        return False
    return True


@dataclass(frozen=True)
class LegendreConstraint:
    """jacobi(sign * multiplier * q, prime) must equal ``required``.

    ``sign`` is -1 when ``negate`` is set, which is how the condition
    (-a/p) = 1 on a = multiplier*q is written.
    """

    prime: int
    required: int = 1
    negate: bool = True

    def holds(self, value: int) -> bool:
        return jacobi(-value if self.negate else value, self.prime) == self.required


@dataclass(frozen=True)
class CongruenceSpec:
    """Conditions on a value v = multiplier * q with q prime.

    Residue constraints are stated on q (``a' = 26 mod 49``), Legendre
    constraints on v (``(-2a'/p) = 1``).
    """

    residue_constraints: tuple[tuple[int, int], ...] = ()
    legendre_constraints: tuple[LegendreConstraint, ...] = ()
    multiplier: int = 1

    def __post_init__(self):
        if self.multiplier not in (1, 2):
            raise ValueError("multiplier must be 1 or 2")
        for c in self.legendre_constraints:
            if c.prime < 3 or not is_prime(c.prime):
                raise ValueError(f"Legendre constraint prime must be an odd prime: {c.prime}")

    def satisfied_by(self, q: int) -> bool:
        v = self.multiplier * q
        return (
            all((q - r) % n == 0 for r, n in self.residue_constraints)
            and all(c.holds(v) for c in self.legendre_constraints)
        )

    def folded(self) -> tuple[int, int]:
        """CRT system for q with each Legendre condition replaced by the
        smallest residue class mod its prime that satisfies it."""
        pairs = list(self.residue_constraints)
        for c in self.legendre_constraints:
            fixed = [(r, n) for r, n in pairs if n % c.prime == 0]
            if fixed:
                # class mod p already pinned by a residue constraint
                r, n = fixed[0]
                if not c.holds(self.multiplier * r):
                    raise InconsistentCongruences((r, n), c.prime, "Legendre condition")
                continue
            for r in range(1, c.prime):
                if c.holds(self.multiplier * r):
                    pairs.append((r, c.prime))
                    break
            else:  # pragma: no cover - every odd prime has both symbol values
                raise InconsistentCongruences((0, c.prime), c.prime, "Legendre condition")
        return crt(pairs)


DEFAULT_SEARCH_CAP = 10**9


def find_prime(spec: CongruenceSpec, search_cap: int = DEFAULT_SEARCH_CAP) -> int:
    """v = multiplier*q <= search_cap for the smallest prime q in the folded
    progression of ``spec``.

    Each Legendre condition is pinned to one residue class first, so this is
    not always the smallest prime satisfying ``spec`` overall.
    """
    r, n = spec.folded()
    q = r
    while q < 2:
        q += n
    while spec.multiplier * q <= search_cap:
        if is_prime(q):
            assert spec.satisfied_by(q)
            return spec.multiplier * q
        q += n
    raise SearchExhausted(f"no admissible prime below {search_cap} (progression {r} mod {n})")


def quadratic_residues(p: int) -> frozenset[int]:
    return frozenset(x * x % p for x in range(1, p))


def nonresidues(p: int) -> frozenset[int]:
    return frozenset(range(1, p)) - quadratic_residues(p)


def symmetric_mod(x: int, n: int) -> int:
    """Representative of x mod n in (-n/2, n/2]."""
    x %= n
    return x - n if 2 * x > n else x


def odd_prime_factors(primes: Sequence[int]) -> list[int]:
    return [p for p in primes if p != 2]
