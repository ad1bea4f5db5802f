"""Positive definite, classically integral ternary quadratic forms.

A form is stored by its six polynomial coefficients in the fixed order
``(c11, c12, c13, c22, c23, c33)``::

    Q(x, y, z) = c11 x^2 + c12 xy + c13 xz + c22 y^2 + c23 yz + c33 z^2

Canonical representatives are Minkowski reduced: the diagonal holds the
successive minima, and among all proper bases realising them the one with
the lexicographically largest cross terms ``(c12, c13, c23)`` is kept.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, NamedTuple, Sequence

Matrix = tuple[tuple[int, int, int], tuple[int, int, int], tuple[int, int, int]]

IDENTITY: Matrix = ((1, 0, 0), (0, 1, 0), (0, 0, 1))


class Vector3(NamedTuple):
    x: int
    y: int
    z: int


@dataclass(frozen=True, order=True)
class TernaryForm:
    c11: int
    c12: int
    c13: int
    c22: int
    c23: int
    c33: int

    def __post_init__(self):
        for name in ("c11", "c12", "c13", "c22", "c23", "c33"):
            if not isinstance(getattr(self, name), int):
                raise TypeError(f"{name} must be an integer")
        if self.c12 % 2 or self.c13 % 2 or self.c23 % 2:
            raise ValueError(f"form {self.coefficients} is not classically integral (odd cross term)")

    @classmethod
    def from_gram(cls, g: Sequence[Sequence[int]]) -> "TernaryForm":
        return cls(g[0][0], 2 * g[0][1], 2 * g[0][2], g[1][1], 2 * g[1][2], g[2][2])

    @classmethod
    def parse(cls, text: str) -> "TernaryForm":
        """Parse the ``[c11,c12,c13,c22,c23,c33]`` notation."""
        body = text.strip()
        if not re.fullmatch(r"\[\s*-?\d+(\s*,\s*-?\d+){5}\s*\]", body):
            raise ValueError(f"expected [c11,c12,c13,c22,c23,c33], got {text!r}")
        return cls(*(int(t) for t in body[1:-1].split(",")))

    @property
    def coefficients(self) -> tuple[int, int, int, int, int, int]:
        return (self.c11, self.c12, self.c13, self.c22, self.c23, self.c33)

    @property
    def gram(self) -> Matrix:
        return (
            (self.c11, self.c12 // 2, self.c13 // 2),
            (self.c12 // 2, self.c22, self.c23 // 2),
            (self.c13 // 2, self.c23 // 2, self.c33),
        )

    def __call__(self, x: int, y: int, z: int) -> int:
        return evaluate(self, (x, y, z))

    def __str__(self) -> str:
        return "[" + ",".join(str(c) for c in self.coefficients) + "]"

    def polynomial(self) -> str:
        """Human-readable polynomial, e.g. ``x^2 + 2y^2 + 2yz + 6z^2``."""
        monomials = ("x^2", "xy", "xz", "y^2", "yz", "z^2")
        out = ""
        for c, mono in zip(self.coefficients, monomials):
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = "" if abs(c) == 1 else str(abs(c))
            if not out:
                out = ("-" if c < 0 else "") + mag + mono
            else:
                out += f" {sign} {mag}{mono}"
        return out or "0"


def evaluate(Q: TernaryForm, v: Sequence[int]) -> int:
    x, y, z = v
    return (Q.c11 * x * x + Q.c12 * x * y + Q.c13 * x * z
            + Q.c22 * y * y + Q.c23 * y * z + Q.c33 * z * z)


def det3(m: Sequence[Sequence[int]]) -> int:
    return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))


def gram_determinant(Q: TernaryForm) -> int:
    return det3(Q.gram)


def is_positive_definite(Q: TernaryForm) -> bool:
    g = Q.gram
    return g[0][0] > 0 and g[0][0] * g[1][1] - g[0][1] ** 2 > 0 and det3(g) > 0


def _require_pd(Q: TernaryForm) -> None:
    if not is_positive_definite(Q):
        raise ValueError(f"form {Q} is not positive definite")


# --- matrix helpers (3x3 integer, row-major tuples) -------------------------

def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> Matrix:
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(3)) for j in range(3))
        for i in range(3)
    )


def transpose(a: Sequence[Sequence[int]]) -> Matrix:
    return tuple(tuple(a[j][i] for j in range(3)) for i in range(3))


def inverse_unimodular(m: Sequence[Sequence[int]]) -> Matrix:
    d = det3(m)
    if d not in (1, -1):
        raise ValueError("matrix is not unimodular")
    adj = [[0] * 3 for _ in range(3)]
    for i in range(3):
        for j in range(3):
            r = [k for k in range(3) if k != j]
            c = [k for k in range(3) if k != i]
            minor = m[r[0]][c[0]] * m[r[1]][c[1]] - m[r[0]][c[1]] * m[r[1]][c[0]]
            adj[i][j] = (-1) ** (i + j) * minor * d
    return tuple(tuple(row) for row in adj)


def columns(m: Sequence[Sequence[int]]) -> list[tuple[int, int, int]]:
    return [tuple(m[i][j] for i in range(3)) for j in range(3)]


def from_columns(cols: Sequence[Sequence[int]]) -> Matrix:
    return tuple(tuple(cols[j][i] for j in range(3)) for i in range(3))


def transform(Q: TernaryForm, M: Sequence[Sequence[int]]) -> TernaryForm:
    """The form with Gram matrix M^T A_Q M, i.e. v -> Q(M v)."""
    return TernaryForm.from_gram(matmul(transpose(M), matmul(Q.gram, M)))


# --- ellipsoid enumeration ----------------------------------------------------

def _centered(lo: int, hi: int) -> Iterator[int]:
    """Integers of [lo, hi] ordered by distance from the middle."""
    if lo > hi:
        return
    mid = (lo + hi) // 2
    yield mid
    for d in range(1, hi - lo + 1):
        if mid + d <= hi:
            yield mid + d
        if mid - d >= lo:
            yield mid - d


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def _shell(Q: TernaryForm, m: int, upto: bool) -> Iterator[tuple[int, int, int]]:
    """Integer vectors with Q(v) == m (or Q(v) <= m when ``upto``).

    With g the Gram matrix, completing the square twice gives
        g11 * Q  = (g11 x + g12 y + g13 z)^2 + P(y, z)
        al * P   = (al y + be z)^2 + g11 * det * z^2
    where P = al y^2 + 2 be yz + ga z^2, so all ranges are exact integers.
    Iteration starts at the centre of each range so that hits come early.
    """
    if m < 0:
        return
    g = Q.gram
    g11, g12, g13 = g[0]
    g22, g23, g33 = g[1][1], g[1][2], g[2][2]
    det = det3(g)
    al = g11 * g22 - g12 * g12
    be = g11 * g23 - g12 * g13
    ga = g11 * g33 - g13 * g13
    disc = g11 * det
    top = g11 * m
    zmax = math.isqrt(m * al // det)
    for z in _centered(-zmax, zmax):
        rad = al * top - disc * z * z
        if rad < 0:
            continue
        s = math.isqrt(rad)
        for y in _centered(_ceil_div(-be * z - s, al), (-be * z + s) // al):
            w2 = top - (al * y * y + 2 * be * y * z + ga * z * z)
            if w2 < 0:
                continue
            lin = g12 * y + g13 * z
            if upto:
                wmax = math.isqrt(w2)
                # w = g11 x + lin with |w| <= wmax
                for x in range(_ceil_div(-wmax - lin, g11), (wmax - lin) // g11 + 1):
                    yield (x, y, z)
            else:
                w = math.isqrt(w2)
                if w * w != w2:
                    continue
                for ww in ((w, -w) if w else (0,)):
                    if (ww - lin) % g11 == 0:
                        yield ((ww - lin) // g11, y, z)


def enumerate_representations(Q: TernaryForm, m: int) -> list[Vector3]:
    """All integer vectors v with Q(v) = m, in lexicographic order."""
    _require_pd(Q)
    return sorted(Vector3(*v) for v in _shell(Q, m, upto=False))


def represents(Q: TernaryForm, m: int) -> bool:
    _require_pd(Q)
    return next(_shell(Q, m, upto=False), None) is not None


def first_representation(Q: TernaryForm, m: int) -> Vector3 | None:
    reps = enumerate_representations(Q, m)
    return reps[0] if reps else None


def short_vectors(Q: TernaryForm, bound: int) -> list[Vector3]:
    """All nonzero v with Q(v) <= bound, sorted by (Q(v), v)."""
    _require_pd(Q)
    vs = [Vector3(*v) for v in _shell(Q, bound, upto=True) if any(v)]
    vs.sort(key=lambda v: (evaluate(Q, v), v))
    return vs


def representation_counts(Q: TernaryForm, bound: int) -> list[int]:
    """r_Q(n) for n = 0..bound (theta series coefficients)."""
    _require_pd(Q)
    counts = [0] * (bound + 1)
    for v in _shell(Q, bound, upto=True):
        counts[evaluate(Q, v)] += 1
    return counts


# --- reduction ----------------------------------------------------------------

def _lll(gram: Sequence[Sequence[int]], delta: Fraction = Fraction(99, 100)) -> Matrix:
    """LLL on a positive definite Gram matrix; returns the basis change
    (columns = new basis vectors in old coordinates)."""
    n = 3
    basis = [list(row) for row in IDENTITY]  # basis[i] is the i-th vector

    def ip(u, v):
        return sum(u[i] * gram[i][j] * v[j] for i in range(n) for j in range(n))

    def gso():
        mu = [[Fraction(0)] * n for _ in range(n)]
        bstar = [Fraction(0)] * n
        for i in range(n):
            for j in range(i):
                s = Fraction(ip(basis[i], basis[j]))
                for k in range(j):
                    s -= mu[j][k] * mu[i][k] * bstar[k]
                mu[i][j] = s / bstar[j]
            s = Fraction(ip(basis[i], basis[i]))
            for k in range(i):
                s -= mu[i][k] * mu[i][k] * bstar[k]
            bstar[i] = s
        return mu, bstar

    k = 1
    mu, bstar = gso()
    while k < n:
        for j in range(k - 1, -1, -1):
            q = round(mu[k][j])
            if q:
                basis[k] = [a - q * b for a, b in zip(basis[k], basis[j])]
                mu, bstar = gso()
        if bstar[k] >= (delta - mu[k][k - 1] ** 2) * bstar[k - 1]:
            k += 1
        else:
            basis[k], basis[k - 1] = basis[k - 1], basis[k]
            mu, bstar = gso()
            k = max(k - 1, 1)
    M = from_columns(basis)
    if det3(M) < 0:
        M = from_columns([basis[0], basis[1], [-c for c in basis[2]]])
    return M


def _primitive_pair(u: Sequence[int], v: Sequence[int]) -> bool:
    minors = (u[0] * v[1] - u[1] * v[0], u[0] * v[2] - u[2] * v[0], u[1] * v[2] - u[2] * v[1])
    return math.gcd(*minors) == 1


def _canonical_basis(Q: TernaryForm) -> tuple[TernaryForm, Matrix]:
    """Minkowski canonicalisation of an (already LLL-reduced) form."""
    bound = max(Q.c11, Q.c22, Q.c33)
    vecs = short_vectors(Q, bound)
    norm = {v: evaluate(Q, v) for v in vecs}
    lam1 = norm[vecs[0]]
    firsts = [v for v in vecs if norm[v] == lam1]

    pairs, lam2 = [], None
    for v1 in firsts:
        for v2 in vecs:
            if lam2 is not None and norm[v2] > lam2:
                break
            if _primitive_pair(v1, v2):
                if lam2 is None or norm[v2] < lam2:
                    lam2, pairs = norm[v2], []
                pairs.append((v1, v2))
                # keep scanning vectors of the same norm
    triples, lam3 = [], None
    for v1, v2 in pairs:
        for v3 in vecs:
            if lam3 is not None and norm[v3] > lam3:
                break
            d = det3(from_columns([v1, v2, v3]))
            if d in (1, -1):
                if lam3 is None or norm[v3] < lam3:
                    lam3, triples = norm[v3], []
                triples.append((v1, v2, v3 if d == 1 else tuple(-c for c in v3)))

    best = None
    for t in triples:
        M = from_columns(t)
        R = transform(Q, M)
        key = (R.c11, R.c22, R.c33, -R.c12, -R.c13, -R.c23, M)
        if best is None or key < best[0]:
            best = (key, R, M)
    return best[1], best[2]


def reduce(Q: TernaryForm) -> tuple[TernaryForm, Matrix]:
    """Canonical reduced form of Q's class and a det +1 transform M with
    M^T A_Q M equal to the reduced Gram matrix."""
    _require_pd(Q)
    L = _lll(Q.gram)
    R1 = transform(Q, L)
    R, M = _canonical_basis(R1)
    total = matmul(L, M)
    assert det3(total) == 1 and transform(Q, total) == R
    return R, total


def canonical(Q: TernaryForm) -> TernaryForm:
    return reduce(Q)[0]


def is_equivalent(Q: TernaryForm, R: TernaryForm) -> bool:
    if gram_determinant(Q) != gram_determinant(R):
        return False
    return canonical(Q) == canonical(R)


def equivalence_transform(Q: TernaryForm, R: TernaryForm) -> Matrix | None:
    """A det +1 matrix T with R(v) = Q(T v), or None if inequivalent."""
    cq, mq = reduce(Q)
    cr, mr = reduce(R)
    if cq != cr:
        return None
    return matmul(mq, inverse_unimodular(mr))


# --- class enumeration --------------------------------------------------------

@dataclass(frozen=True)
class ClassList:
    determinant: int
    representatives: tuple[TernaryForm, ...]

    def __len__(self):
        return len(self.representatives)

    def __iter__(self):
        return iter(self.representatives)

    def index_of(self, Q: TernaryForm) -> int | None:
        c = canonical(Q)
        for i, r in enumerate(self.representatives):
            if r == c:
                return i
        return None


def reduced_box(D: int, product_factor: int = 2) -> Iterator[TernaryForm]:
    """Candidate Gram matrices satisfying the Minkowski bounds
    g11 <= g22 <= g33, |2 g12|, |2 g13| <= g11, |2 g23| <= g22 and
    g11 g22 g33 <= product_factor * D (Gauss-Seeber gives factor 2)."""
    cap = product_factor * D
    g11 = 1
    while g11 ** 3 <= cap:
        g22 = g11
        while g11 * g22 * g22 <= cap:
            g33 = g22
            while g11 * g22 * g33 <= cap:
                r1, r2 = g11 // 2, g22 // 2
                for g12, g13, g23 in itertools.product(
                        range(-r1, r1 + 1), range(-r1, r1 + 1), range(-r2, r2 + 1)):
                    g = ((g11, g12, g13), (g12, g22, g23), (g13, g23, g33))
                    if det3(g) == D:
                        Q = TernaryForm.from_gram(g)
                        if is_positive_definite(Q):
                            yield Q
                g33 += 1
            g22 += 1
        g11 += 1


def content(Q: TernaryForm) -> int:
    """gcd of the coefficients; every value of Q is a multiple of it."""
    return math.gcd(*Q.coefficients)


def enumerate_classes(D: int, primitive: bool = True, product_factor: int = 2) -> ClassList:
    """Proper equivalence classes of determinant D, canonical forms sorted.

    With ``primitive`` (the default) only forms whose coefficients have gcd 1
    are listed; pass False to include scaled forms such as
    2x^2 + 2xz + 2y^2 + 4z^2 of determinant 14.
    """
    if D < 1:
        raise ValueError("determinant must be positive")
    reps = {canonical(Q) for Q in reduced_box(D, product_factor)}
    if primitive:
        reps = {R for R in reps if content(R) == 1}
    return ClassList(D, tuple(sorted(reps, key=lambda R: (R.c11, R.c22, R.c33, R.coefficients))))
