"""Construction and verification of representation certificates.

For squarefree m the engine finds integers a, b, h, A, B with

    a*b - h^2 = D*m,   A^2 + a = B^2 + b = A*B + h = 0  (mod m),

and assembles the form R with m*R(x, y, z) = (Ax + By + mz)^2 + ax^2 + 2hxy + by^2.
R has determinant D and R(0, 0, 1) = m. A, B are further fixed modulo p^2
(p the anisotropic prime) so that R(x, y, 0) = p*n with n a nonresidue
mod p. No other class of determinant D represents such a value, hence
R is equivalent to the theorem's form.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any

from . import forms
from .forms import TernaryForm, Vector3, evaluate
from .modarith import (
    DEFAULT_SEARCH_CAP,
    CongruenceSpec,
    LegendreConstraint,
    NotSquarefree,
    SearchExhausted,
    crt,
    factor_squarefree,
    find_prime,
    is_prime,
    jacobi,
    lift_sqrt,
    sqrt_mod_prime,
    symmetric_mod,
)
from .obstruction import Theorem, decide, eliminates, theorem


class CertificateError(RuntimeError):
    """A case precondition failed while building a certificate."""


class UnsupportedInput(ValueError):
    """m is outside what the constructive cases cover."""


@dataclass(frozen=True)
class CaseRule:
    theorem_id: int
    case_id: int
    m_modulus: int
    m_residues: frozenset[int]
    a_residues: tuple[tuple[int, int], ...]  # congruences on the prime a (or a')
    multiplier: int = 1
    odd_count_claim: bool = False  # "the number of p | m with p = 5, 7 (mod 8) is odd"

    def matches(self, m: int) -> bool:
        return m % self.m_modulus in self.m_residues

    @property
    def square_modulus(self) -> int:
        return theorem(self.theorem_id).prime ** 2

    def congruence_spec(self, m: int) -> CongruenceSpec:
        odd = [p for p in factor_squarefree(m) if p != 2]
        return CongruenceSpec(
            residue_constraints=self.a_residues,
            legendre_constraints=tuple(LegendreConstraint(p, 1, True) for p in odd),
            multiplier=self.multiplier,
        )


def _rule(t, c, mod, res, a_res, mult=1, odd=False):
    return CaseRule(t, c, mod, frozenset(res), tuple(a_res), mult, odd)


CASE_RULES: dict[int, tuple[CaseRule, ...]] = {
    1: (
        _rule(1, 1, 4, {3}, [(1, 4), (3, 49)]),
        _rule(1, 2, 8, {6}, [(1, 8), (3, 49)]),
        _rule(1, 3, 8, {5}, [(1, 4), (26, 49)], 2),
        _rule(1, 4, 8, {2}, [(5, 8), (3, 49)]),
    ),
    2: (
        _rule(2, 1, 8, {1}, [(1, 4), (1, 121)], 2),
        _rule(2, 2, 8, {2}, [(5, 8), (2, 121)]),
        _rule(2, 3, 4, {3}, [(1, 4), (2, 121)]),
        _rule(2, 4, 8, {6}, [(1, 8), (2, 121)]),
    ),
    3: (
        _rule(3, 1, 4, {1}, [(5, 8), (3, 49)]),
        _rule(3, 2, 4, {3}, [(1, 8), (3, 49)]),
        _rule(3, 3, 16, {6, 14}, [(1, 8), (3, 49)]),
        _rule(3, 4, 16, {10}, [(1, 8), (26, 49)], 2, True),
    ),
    4: (
        _rule(4, 1, 4, {3}, [(1, 4), (5, 529)]),
        _rule(4, 2, 8, {6}, [(1, 8), (5, 529)]),
        _rule(4, 3, 8, {5}, [(1, 4), (267, 529)], 2, True),
        _rule(4, 4, 8, {2}, [(5, 8), (5, 529)]),
    ),
}

# One representative of each {h, -h} class mod p for the (b, h) pairs.
ADMISSIBLE_H: dict[int, frozenset[int]] = {
    1: frozenset({0, 1, 2, 4}),
    2: frozenset(range(6)),
    3: frozenset({0, 1, 2, 4}),
    4: frozenset(range(12)),
}

EVAL_VECTORS = (Vector3(1, 1, 0), Vector3(2, 1, 0))


@dataclass(frozen=True)
class Certificate:
    theorem_id: int
    m: int
    D: int
    case_id: int
    a: int
    a_prime: int | None
    b: int
    h: int
    A: int
    B: int
    form: TernaryForm
    eval_vector: Vector3
    eval_value: int

    @property
    def prime(self) -> int:
        return theorem(self.theorem_id).prime

    @property
    def eliminating_residue(self) -> int:
        return self.eval_value // self.prime

    def to_dict(self) -> dict[str, Any]:
        d = {
            "theorem_id": self.theorem_id, "m": self.m, "D": self.D,
            "case_id": self.case_id, "a": self.a, "a_prime": self.a_prime,
            "b": self.b, "h": self.h, "A": self.A, "B": self.B,
            "form": list(self.form.coefficients),
            "eval_vector": list(self.eval_vector),
            "eval_value": self.eval_value,
        }
        if self.a_prime is None:
            del d["a_prime"]
        return _json_safe(d)

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "Certificate":
        try:
            ints = {k: _int(d[k]) for k in ("theorem_id", "m", "D", "case_id",
                                            "a", "b", "h", "A", "B", "eval_value")}
            a_prime = _int(d["a_prime"]) if d.get("a_prime") is not None else None
            coeffs = [_int(c) for c in d["form"]]
            vec = [_int(c) for c in d["eval_vector"]]
            if len(coeffs) != 6 or len(vec) != 3:
                raise ValueError("form needs 6 and eval_vector 3 entries")
            form = TernaryForm(*coeffs)
        except (KeyError, TypeError, ValueError) as exc:
            raise CertificateFormatError(f"malformed certificate: {exc}") from exc
        return cls(form=form, eval_vector=Vector3(*vec), a_prime=a_prime, **ints)

    @classmethod
    def from_json(cls, text: str) -> "Certificate":
        try:
            d = json.loads(text)
        except json.JSONDecodeError as exc:
            raise CertificateFormatError(f"invalid JSON: {exc}") from exc
        if not isinstance(d, dict):
            raise CertificateFormatError("certificate must be a JSON object")
        return cls.from_dict(d)


class CertificateFormatError(ValueError):
    pass


_SAFE = 2**53 - 1


def _json_safe(obj):
    if isinstance(obj, bool):
        return obj
    if isinstance(obj, int):
        return obj if -_SAFE <= obj <= _SAFE else str(obj)
    if isinstance(obj, list):
        return [_json_safe(x) for x in obj]
    if isinstance(obj, dict):
        return {k: _json_safe(v) for k, v in obj.items()}
    return obj


def _int(x) -> int:
    if isinstance(x, bool):
        raise TypeError("boolean where integer expected")
    if isinstance(x, int):
        return x
    if isinstance(x, str):
        return int(x)
    raise TypeError(f"expected integer, got {type(x).__name__}")


# --- construction -------------------------------------------------------------

def _prepare(theorem_id: int, m: int) -> Theorem:
    t = theorem(theorem_id)
    if m < 1:
        raise UnsupportedInput("m must be positive")
    if not decide(theorem_id, m):
        raise UnsupportedInput(f"{t.pattern.describe(m)} is excluded by theorem {theorem_id}")
    try:
        factor_squarefree(m)
    except NotSquarefree as exc:
        raise UnsupportedInput(f"m = {m} is not squarefree") from exc
    return t


def select_case(theorem_id: int, m: int) -> CaseRule:
    _prepare(theorem_id, m)
    for rule in CASE_RULES[theorem_id]:
        if rule.matches(m):
            return rule
    raise CertificateError(f"no case of theorem {theorem_id} covers m = {m}")  # pragma: no cover


def choose_a(rule: CaseRule, m: int, search_cap: int = DEFAULT_SEARCH_CAP) -> tuple[int, int | None]:
    t = theorem(rule.theorem_id)
    if rule.odd_count_claim:
        count = sum(1 for p in factor_squarefree(m) if p % 8 in (5, 7))
        if count % 2 == 0:
            raise CertificateError(
                f"theorem {t.number} case {rule.case_id}: expected an odd number of "
                f"primes = 5, 7 (mod 8) dividing {m}, found {count}")
    a = find_prime(rule.congruence_spec(m), search_cap)
    q = a // rule.multiplier
    if jacobi(-t.determinant * m, q) != 1:
        raise CertificateError(f"(-{t.determinant}*{m} / {q}) != 1 for the chosen prime")
    return a, (q if rule.multiplier == 2 else None)


def solve_bh(a: int, D: int, m: int, p: int, admissible_h: frozenset[int]) -> tuple[int, int]:
    """b, h with a*b - h^2 = D*m and h mod p in ``admissible_h``.

    h starts from the smaller square root of -D*m modulo a (for a = 2a'
    the root mod a' is combined with the parity forced by D*m) and is then
    moved through +-h + t*a for increasing |t| <= D.
    """
    target = -D * m
    if a % 2 == 0:
        q = a // 2
        r = sqrt_mod_prime(target, q)
        if r is None or jacobi(target, q) != 1:
            raise CertificateError(f"-{D}*{m} is not a square modulo {q}")
        r, _ = crt([(r, q), (target % 2, 2)])
    else:
        r = sqrt_mod_prime(target, a)
        if r is None or jacobi(target, a) != 1:
            raise CertificateError(f"-{D}*{m} is not a square modulo {a}")
    r = symmetric_mod(r, a)
    for step in range(D + 1):
        for t in ((0,) if step == 0 else (step, -step)):
            for sign in (1, -1):
                h = sign * r + t * a
                if h % p in admissible_h:
                    b, rem = divmod(h * h + D * m, a)
                    assert rem == 0
                    return b, h
    raise CertificateError(f"no admissible (b, h) class mod {p} reachable")


def choose_eval_vector(a: int, b: int, h: int, p: int) -> Vector3:
    """First vector (x, y, 0) with -(a x^2 + 2h xy + b y^2) a nonzero square mod p."""
    for v in EVAL_VECTORS:
        c = a * v.x * v.x + 2 * h * v.x * v.y + b * v.y * v.y
        if jacobi(-c, p) == 1:
            return v
    raise CertificateError(f"no evaluation vector works for (b, h) = ({b % p}, {h % p}) mod {p}")


def solve_AB(m: int, D: int, a: int, b: int, h: int, p: int,
             eval_vector: Vector3 | None = None) -> tuple[int, int, Vector3]:
    """A, B meeting the mod-m conditions and the mod-p^2 evaluation target.

    Modulo p^2 we need (A x + B y)^2 + a x^2 + 2h xy + b y^2 = p*k with k
    of the opposite quadratic character to m, so that R(x, y, 0) = p*n with
    n = k/m a nonresidue. The smallest such k is used, with A = 0 and
    B the lifted root (all vectors used have y = 1).
    """
    if a * b - h * h != D * m:
        raise CertificateError("a*b - h^2 != D*m")
    if math.gcd(m, p) != 1:
        raise UnsupportedInput(f"{p} divides m")
    v = eval_vector or choose_eval_vector(a, b, h, p)
    assert v.y == 1
    c = a * v.x * v.x + 2 * h * v.x * v.y + b * v.y * v.y
    want = -jacobi(m, p)
    p2 = p * p
    for k in range(1, p):
        if jacobi(k, p) != want:
            continue
        T = (p * k - c) % p2
        s0 = sqrt_mod_prime(T, p)
        if s0 is None or T % p == 0:
            continue
        s = lift_sqrt(s0, T, p, 2)
        break
    else:
        raise CertificateError(f"no solvable multiple p*k modulo {p2}")
    a_pairs, b_pairs = [(0, p2)], [(s, p2)]
    for q in factor_squarefree(m):
        if q == 2:
            a_pairs.append((a % 2, 2))
            b_pairs.append((b % 2, 2))
            continue
        Aq = sqrt_mod_prime(-a, q)
        if Aq is None or Aq == 0:
            raise CertificateError(f"-a is not a nonzero square modulo {q}")
        a_pairs.append((Aq, q))
        b_pairs.append((-h * pow(Aq, -1, q) % q, q))
    A, N = crt(a_pairs)
    B, _ = crt(b_pairs)
    return symmetric_mod(A, N), symmetric_mod(B, N), v


def build_form(m: int, a: int, b: int, h: int, A: int, B: int) -> TernaryForm:
    parts = (A * A + a, A * B + h, B * B + b)
    if any(x % m for x in parts):
        raise CertificateError("invalid witness: m does not divide A^2+a, AB+h, B^2+b")
    return TernaryForm(parts[0] // m, 2 * parts[1] // m, 2 * A, parts[2] // m, 2 * B, m)


def generate(theorem_id: int, m: int, search_cap: int = DEFAULT_SEARCH_CAP) -> Certificate:
    t = _prepare(theorem_id, m)
    if m % t.prime == 0:
        raise UnsupportedInput(
            f"m = {m} is divisible by {t.prime}; the constructive cases do not cover it")
    rule = select_case(theorem_id, m)
    a, a_prime = choose_a(rule, m, search_cap)
    b, h = solve_bh(a, t.determinant, m, t.prime, ADMISSIBLE_H[theorem_id])
    A, B, v = solve_AB(m, t.determinant, a, b, h, t.prime)
    R = build_form(m, a, b, h, A, B)
    return Certificate(
        theorem_id=theorem_id, m=m, D=t.determinant, case_id=rule.case_id,
        a=a, a_prime=a_prime, b=b, h=h, A=A, B=B, form=R,
        eval_vector=v, eval_value=evaluate(R, v),
    )


# --- verification ---------------------------------------------------------------

@dataclass(frozen=True)
class VerificationReport:
    ok: bool
    check: str | None = None
    message: str = ""
    passed: tuple[str, ...] = field(default=())

    def __bool__(self):
        return self.ok

    def __str__(self):
        return "PASS" if self.ok else f"FAIL {self.check}: {self.message}"


@lru_cache(maxsize=None)
def competitor_classes(theorem_id: int) -> tuple[TernaryForm, ...]:
    """Every class of determinant D (imprimitive ones included) other than
    the theorem's own form."""
    t = theorem(theorem_id)
    own = forms.canonical(t.form)
    return tuple(R for R in forms.enumerate_classes(t.determinant, primitive=False) if R != own)


def verify(cert: Certificate) -> VerificationReport:
    passed: list[str] = []

    def fail(check, message):
        return VerificationReport(False, check, message, tuple(passed))

    try:
        t = theorem(cert.theorem_id)
    except ValueError as exc:
        return fail("theorem", str(exc))
    p, D, m = t.prime, t.determinant, cert.m
    a, b, h, A, B = cert.a, cert.b, cert.h, cert.A, cert.B
    checks = []

    def check(name):
        def deco(fn):
            checks.append((name, fn))
            return fn
        return deco

    @check("D")
    def _():
        return cert.D == D or f"D = {cert.D}, theorem {t.number} has determinant {D}"

    @check("m")
    def _():
        if m < 1:
            return "m must be positive"
        try:
            factor_squarefree(m)
        except NotSquarefree:
            return f"m = {m} is not squarefree"
        if math.gcd(m, p) != 1:
            return f"{p} divides m"
        return decide(t.number, m) or f"m = {m} lies in {t.pattern}"

    @check("ab-h^2=Dm")
    def _():
        return a * b - h * h == D * m or f"ab-h^2 = {a * b - h * h} != Dm = {D * m}"

    @check("a")
    def _():
        if cert.a_prime is None:
            return is_prime(a) or f"a = {a} is not prime"
        return (a == 2 * cert.a_prime and is_prime(cert.a_prime)) or \
            f"a = {a} is not 2 * prime {cert.a_prime}"

    @check("legendre")
    def _():
        q = cert.a_prime or a
        if jacobi(-D * m, q) != 1:
            return f"(-Dm / {q}) != 1"
        for r in factor_squarefree(m):
            if r != 2 and jacobi(-a, r) != 1:
                return f"(-a / {r}) != 1"
        return True

    @check("A^2+a=0 mod m")
    def _():
        return (A * A + a) % m == 0 or f"A^2 + a = {(A * A + a) % m} (mod {m})"

    @check("B^2+b=0 mod m")
    def _():
        return (B * B + b) % m == 0 or f"B^2 + b = {(B * B + b) % m} (mod {m})"

    @check("AB+h=0 mod m")
    def _():
        return (A * B + h) % m == 0 or f"AB + h = {(A * B + h) % m} (mod {m})"

    @check("form")
    def _():
        expected = build_form(m, a, b, h, A, B)
        return cert.form == expected or f"form {cert.form} != constructed {expected}"

    @check("det")
    def _():
        if not forms.is_positive_definite(cert.form):
            return "form is not positive definite"
        d = forms.gram_determinant(cert.form)
        return d == D or f"det = {d} != {D}"

    @check("R(0,0,1)=m")
    def _():
        return evaluate(cert.form, (0, 0, 1)) == m or "R(0,0,1) != m"

    @check("eval")
    def _():
        if cert.eval_vector.z != 0 or cert.eval_vector not in EVAL_VECTORS:
            return f"unexpected evaluation vector {tuple(cert.eval_vector)}"
        value = evaluate(cert.form, cert.eval_vector)
        return value == cert.eval_value or f"R{tuple(cert.eval_vector)} = {value} != {cert.eval_value}"

    @check("nonresidue")
    def _():
        v = cert.eval_value
        if v % p:
            return f"{p} does not divide {v}"
        return jacobi(v // p, p) == -1 or f"{v // p} is not a nonresidue mod {p}"

    @check("elimination")
    def _():
        for C in competitor_classes(t.number):
            if not eliminates(C, cert.eval_value, p):
                return f"class {C} is not ruled out by {cert.eval_value}"
        return True

    @check("equivalence")
    def _():
        return forms.is_equivalent(cert.form, t.form) or f"form is not equivalent to {t.form}"

    for name, fn in checks:
        try:
            result = fn()
        except CertificateError as exc:
            result = str(exc)
        if result is not True:
            return fail(name, result)
        passed.append(name)
    return VerificationReport(True, passed=tuple(passed))


# --- decision layer -------------------------------------------------------------

def _split(m: int) -> tuple[int, int, int]:
    """m = 4^k * t^2 * s with t odd and s squarefree."""
    k = 0
    while m % 4 == 0:
        m //= 4
        k += 1
    t, s, q = 1, m, 3
    while q * q <= s:
        while s % (q * q) == 0:
            s //= q * q
            t *= q
        q += 2
    return k, t, s


def find_representation(theorem_id: int, m: int,
                        search_cap: int = DEFAULT_SEARCH_CAP) -> Vector3 | None:
    """A vector v with Q(v) = m for the theorem's form Q, or None if excluded.

    The squarefree part of m goes through a certificate; the vector is then
    transported to Q by the reduction transforms and scaled back up. When the
    certificate route is unavailable (p | m, or the prime search hits the
    cap) a direct search is used.
    """
    t = theorem(theorem_id)
    if not decide(theorem_id, m):
        return None
    k, sq, s = _split(m)
    try:
        cert = generate(theorem_id, s, search_cap)
    except (UnsupportedInput, SearchExhausted):
        return forms.first_representation(t.form, m)
    T = forms.equivalence_transform(t.form, cert.form)
    w = [T[i][2] for i in range(3)]
    v = Vector3(*(c * sq * 2**k for c in w))
    assert evaluate(t.form, v) == m
    return v


__all__ = [
    "CaseRule", "CASE_RULES", "ADMISSIBLE_H", "Certificate", "CertificateError",
    "CertificateFormatError", "UnsupportedInput", "VerificationReport",
    "select_case", "choose_a", "solve_bh", "solve_AB", "choose_eval_vector",
    "build_form", "generate", "verify", "find_representation", "competitor_classes",
]
