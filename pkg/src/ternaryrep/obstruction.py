"""Local obstructions: excluded classes 4^k(c*l + r), the 2-adic descent
lemmas, and the multiples p*n (n a nonresidue) missed by competitor forms.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from dataclasses import dataclass, field
from typing import Iterable

from .forms import TernaryForm, content, evaluate, gram_determinant
from .modarith import is_prime, nonresidues, quadratic_residues


@dataclass(frozen=True)
class ExclusionPattern:
    """The integers 4^k (modulus * l + residue), k, l >= 0."""

    modulus: int
    residue: int

    def __post_init__(self):
        if not 0 <= self.residue < self.modulus:
            raise ValueError("residue must lie in [0, modulus)")

    def match(self, m: int) -> tuple[int, int] | None:
        """(k, l) with m = 4^k (modulus*l + residue), or None."""
        if m < 1:
            raise ValueError("m must be positive")
        k = 0
        while m % 4 == 0:
            m //= 4
            k += 1
        if m % self.modulus != self.residue:
            return None
        return k, (m - self.residue) // self.modulus

    def describe(self, m: int) -> str:
        k, l = self.match(m)
        return f"{m} = 4^{k}({self.modulus}*{l}+{self.residue})"

    def __str__(self):
        return f"4^k({self.modulus}l+{self.residue})"


def in_excluded_class(m: int, pattern: ExclusionPattern) -> bool:
    return pattern.match(m) is not None


@dataclass(frozen=True)
class Theorem:
    number: int
    determinant: int
    prime: int  # the anisotropic prime p with D = p or 2p
    form: TernaryForm
    pattern: ExclusionPattern
    competitors: tuple[TernaryForm, ...] = field(default=())

    @property
    def named_forms(self) -> tuple[TernaryForm, ...]:
        return (self.form,) + self.competitors


def _F(*c):
    return TernaryForm(*c)


THEOREMS: dict[int, Theorem] = {
    1: Theorem(1, 7, 7, _F(2, 2, 2, 2, 2, 3), ExclusionPattern(8, 1),
               (_F(1, 0, 0, 1, 0, 7), _F(1, 0, 0, 2, 2, 4))),
    2: Theorem(2, 11, 11, _F(1, 0, 0, 2, 2, 6), ExclusionPattern(8, 5),
               (_F(1, 0, 0, 1, 0, 11), _F(1, 0, 0, 3, 2, 4))),
    3: Theorem(3, 14, 7, _F(1, 0, 0, 3, 2, 5), ExclusionPattern(16, 2),
               (_F(1, 0, 0, 1, 0, 14), _F(1, 0, 0, 2, 0, 7))),
    4: Theorem(4, 23, 23, _F(2, 2, 0, 3, 2, 5), ExclusionPattern(8, 1),
               (_F(1, 0, 0, 1, 0, 23), _F(1, 0, 0, 2, 2, 12), _F(1, 0, 0, 3, 2, 8),
                _F(1, 0, 0, 4, 2, 6))),
}


def theorem(theorem_id: int) -> Theorem:
    try:
        return THEOREMS[theorem_id]
    except (KeyError, TypeError):
        raise ValueError(f"unknown theorem id {theorem_id!r}; expected 1..4") from None


def decide(theorem_id: int, m: int) -> bool:
    """True iff m is represented by the theorem's form (pattern test only)."""
    return not in_excluded_class(m, theorem(theorem_id).pattern)


def verify_parity_reduction(Q: TernaryForm, target_residue: int, modulus: int) -> bool:
    """Check that Q(v) = target (mod modulus) forces v = 0 (mod 2)."""
    if modulus not in (4, 8, 16):
        raise ValueError("modulus must be 4, 8 or 16")
    target = target_residue % modulus
    for v in itertools.product(range(modulus), repeat=3):
        if evaluate(Q, v) % modulus == target and any(c % 2 for c in v):
            return False
    return True


def _check_odd_prime(p: int) -> None:
    if p == 2:
        raise ValueError("p = 2 is unsupported")
    if p < 3 or not is_prime(p):
        raise ValueError(f"{p} is not an odd prime")


def _gram_kernel(Q: TernaryForm, v, p) -> bool:
    """A_Q v = 0 (mod p)."""
    g = Q.gram
    return all(sum(g[i][j] * v[j] for j in range(3)) % p == 0 for i in range(3))


@lru_cache(maxsize=256)
def attained_multiples(Q: TernaryForm, p: int) -> frozenset[int]:
    """Residues n mod p such that Q(v) = p*n (mod p^2) for some v.

    Writing v = u + p*w with u in [0, p)^3,
        Q(u + p w) = Q(u) + 2p B(u, w)   (mod p^2),
    so an isotropic u outside the radical mod p reaches every class, and a
    radical u contributes the single class Q(u)/p.
    """
    _check_odd_prime(p)
    out: set[int] = set()
    for u in itertools.product(range(p), repeat=3):
        q = evaluate(Q, u)
        if q % p:
            continue
        if _gram_kernel(Q, u, p):
            out.add(q // p % p)
        else:
            return frozenset(range(p))
    return frozenset(out)


def excluded_multiples(Q: TernaryForm, p: int) -> frozenset[int]:
    """Residues n mod p for which Q represents no integer p*n' with n' = n."""
    return frozenset(range(p)) - attained_multiples(Q, p)


@dataclass(frozen=True)
class ObstructionTable:
    form: TernaryForm
    prime: int
    forced_zero_vars: frozenset[str]
    rows: tuple[tuple[tuple[int, int], int | None], ...]
    excluded_n: frozenset[int]

    def as_dict(self) -> dict:
        return {
            "form": list(self.form.coefficients),
            "prime": self.prime,
            "forced_zero_vars": sorted(self.forced_zero_vars),
            "rows": [{"y": y, "z": z, "n": n} for (y, z), n in self.rows],
            "excluded_n": sorted(self.excluded_n),
        }

    def render(self) -> str:
        p = self.prime
        head = f"(y mod {p}, z mod {p})"
        cells = [(f"({_pm(y)}, {_pm(z)})",
                  "any" if n is None else str(n)) for (y, z), n in self.rows]
        w = max([len(head)] + [len(c) for c, _ in cells])
        lines = [f"{head:<{w}} | n mod {p}", "-" * (w + 3 + len(f'n mod {p}'))]
        lines += [f"{c:<{w}} | {n}" for c, n in cells]
        lines.append(f"excluded n mod {p}: {sorted(self.excluded_n)}")
        return "\n".join(lines)

    def to_csv(self) -> str:
        out = ["y,z,n"]
        out += [f"{y},{z},{'' if n is None else n}" for (y, z), n in self.rows]
        return "\n".join(out) + "\n"


def _pm(c: int) -> str:
    return f"±{c}" if c else "0"


class StructureMismatch(ValueError):
    pass


def obstruction_table(Q: TernaryForm, p: int) -> ObstructionTable:
    """Isotropic residues of Q mod p and the resulting n = Q(v)/p mod p.

    Requires that x = 0 (mod p) on every solution of Q = 0 (mod p). Each row
    is a {v, -v} orbit shown by its lexicographically smallest (y, z).
    """
    _check_odd_prime(p)
    sols = [u for u in itertools.product(range(p), repeat=3)
            if any(u) and evaluate(Q, u) % p == 0]
    if any(u[0] for u in sols):
        raise StructureMismatch(f"Q = 0 (mod {p}) does not force x = 0 (mod {p})")
    forced = frozenset(name for i, name in enumerate("xyz") if all(u[i] == 0 for u in sols))
    rows = {}
    for u in sols:
        neg = tuple(-c % p for c in u)
        key = min((u[1], u[2]), (neg[1], neg[2]))
        n = evaluate(Q, u) // p % p if _gram_kernel(Q, u, p) else None
        rows[key] = n
    return ObstructionTable(
        form=Q,
        prime=p,
        forced_zero_vars=forced,
        rows=tuple(sorted(rows.items())),
        excluded_n=excluded_multiples(Q, p),
    )


def eliminates(Q: TernaryForm, value: int, p: int) -> bool:
    """True if a local argument shows Q cannot represent ``value``.

    Two tests are used: the content of Q (gcd of its coefficients) must
    divide any represented value, and value = p*n with n mod p in
    excluded_multiples(Q, p).
    """
    if value % content(Q):
        return True
    if value % p == 0 and (value // p) % p in excluded_multiples(Q, p):
        return True
    return False


def lemma_cross_check(Q: TernaryForm, p: int, limit: int) -> Iterable[int]:
    """p*n <= limit with n a nonresidue mod p that Q nevertheless represents
    (should be empty for competitor forms)."""
    from .forms import represents

    bad = nonresidues(p)
    for n in range(1, limit // p + 1):
        if n % p in bad and represents(Q, p * n):
            yield p * n


__all__ = [
    "ExclusionPattern", "Theorem", "THEOREMS", "theorem", "decide", "in_excluded_class",
    "verify_parity_reduction", "attained_multiples", "excluded_multiples",
    "ObstructionTable", "obstruction_table", "StructureMismatch", "eliminates",
    "lemma_cross_check", "quadratic_residues", "nonresidues", "gram_determinant",
]
