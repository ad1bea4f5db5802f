import itertools
import math

import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from ternaryrep import forms
from ternaryrep.forms import TernaryForm, Vector3
from ternaryrep.obstruction import THEOREMS

NAMED = sorted({Q for t in THEOREMS.values() for Q in t.named_forms}, key=lambda Q: Q.coefficients)


def naive_reps(Q, m):
    lam = min(np.linalg.eigvalsh(np.array(Q.gram, dtype=float)))
    r = math.isqrt(int(m / lam)) + 1
    box = range(-r, r + 1)
    return sorted(Vector3(*v) for v in itertools.product(box, repeat=3) if forms.evaluate(Q, v) == m)


unimodular_step = st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(-3, 3)).filter(
    lambda s: s[0] != s[1])


def unimodular(steps):
    M = [list(row) for row in forms.IDENTITY]
    for i, j, c in steps:
        for row in M:
            row[j] += c * row[i]
    return tuple(tuple(r) for r in M)


def test_named_forms_count():
    assert len(NAMED) == 14


def test_parse_and_str_round_trip():
    Q = TernaryForm.parse("[2, 2, 2, 2, 2, 3]")
    assert Q == TernaryForm(2, 2, 2, 2, 2, 3)
    assert TernaryForm.parse(str(Q)) == Q
    assert Q.polynomial() == "2x^2 + 2xy + 2xz + 2y^2 + 2yz + 3z^2"
    for bad in ["[1,2,3]", "1,0,0,1,0,7", "[1,0,0,1,0,a]"]:
        with pytest.raises(ValueError):
            TernaryForm.parse(bad)


def test_odd_cross_term_rejected():
    with pytest.raises(ValueError):
        TernaryForm(1, 1, 0, 1, 0, 1)


@pytest.mark.parametrize("Q", NAMED, ids=str)
def test_determinant_against_numpy(Q):
    assert forms.gram_determinant(Q) == round(np.linalg.det(np.array(Q.gram, dtype=float)))
    assert forms.gram_determinant(Q) in (7, 11, 14, 23)
    assert forms.is_positive_definite(Q)


@given(st.lists(st.integers(-50, 50), min_size=6, max_size=6).map(
    lambda c: TernaryForm(c[0], 2 * c[1], 2 * c[2], c[3], 2 * c[4], c[5])),
    st.tuples(*[st.integers(-100, 100)] * 3))
def test_evaluate_is_quadratic_form_of_gram(Q, v):
    x = sympy.Matrix(v)
    assert forms.evaluate(Q, v) == (x.T * sympy.Matrix(Q.gram) * x)[0]
    assert Q(*v) == forms.evaluate(Q, v)
    assert forms.det3(Q.gram) == sympy.Matrix(Q.gram).det()


def test_positive_definite_detection():
    assert not forms.is_positive_definite(TernaryForm(1, 0, 0, -1, 0, 1))
    assert not forms.is_positive_definite(TernaryForm(1, 2, 0, 1, 0, 1))
    assert not forms.is_positive_definite(TernaryForm(0, 0, 0, 1, 0, 1))


@pytest.mark.parametrize("Q", NAMED, ids=str)
def test_enumeration_matches_box_scan(Q):
    for m in range(0, 101):
        assert forms.enumerate_representations(Q, m) == naive_reps(Q, m)


@pytest.mark.parametrize("Q", NAMED, ids=str)
def test_represents_and_counts(Q):
    counts = forms.representation_counts(Q, 60)
    assert counts[0] == 1
    for m, c in enumerate(counts):
        assert c == len(forms.enumerate_representations(Q, m))
        assert forms.represents(Q, m) == (c > 0)
    assert sum(counts) - 1 == len(forms.short_vectors(Q, 60))


def test_three_squares_theta():
    # r_3(n) for n = 0..10
    Q = TernaryForm(1, 0, 0, 1, 0, 1)
    assert forms.representation_counts(Q, 10) == [1, 6, 12, 8, 6, 24, 24, 0, 12, 30, 24]


def test_first_representation_known():
    Q = TernaryForm(1, 0, 0, 1, 0, 7)
    reps = forms.enumerate_representations(Q, 8)
    assert len(reps) == 12 and reps[0] == (-2, -2, 0)
    assert forms.first_representation(Q, 8) in reps
    assert forms.first_representation(THEOREMS[1].form, 1) is None


def test_enumeration_rejects_indefinite():
    with pytest.raises(ValueError):
        forms.enumerate_representations(TernaryForm(1, 0, 0, -1, 0, 1), 1)


def test_reduce_example():
    R, M = forms.reduce(TernaryForm(48291, 64544, 3136, 21567, 2096, 51))
    assert R == TernaryForm(2, 2, 2, 2, 2, 3)
    assert forms.det3(M) == 1


@pytest.mark.parametrize("Q", NAMED, ids=str)
def test_named_forms_are_canonical(Q):
    assert forms.canonical(Q) == Q


@settings(max_examples=150, deadline=None)
@given(st.sampled_from(NAMED), st.lists(unimodular_step, max_size=8))
def test_reduce_is_class_invariant(Q, steps):
    U = unimodular(steps)
    assert forms.det3(U) == 1
    P = forms.transform(Q, U)
    R, M = forms.reduce(P)
    assert R == Q
    assert forms.det3(M) == 1 and forms.transform(P, M) == R
    assert forms.reduce(R)[0] == R
    T = forms.equivalence_transform(Q, P)
    assert forms.transform(Q, T) == P and forms.det3(T) == 1


def test_inequivalent_forms():
    assert not forms.is_equivalent(TernaryForm(1, 0, 0, 1, 0, 7), TernaryForm(1, 0, 0, 2, 2, 4))
    assert forms.equivalence_transform(TernaryForm(1, 0, 0, 1, 0, 7), TernaryForm(1, 0, 0, 1, 0, 11)) is None


def test_inverse_unimodular():
    U = unimodular([(0, 1, 2), (2, 0, -3), (1, 2, 1)])
    assert forms.matmul(U, forms.inverse_unimodular(U)) == forms.IDENTITY


@pytest.mark.parametrize("D,expected", [
    (1, [(1, 0, 0, 1, 0, 1)]),
    (7, [(1, 0, 0, 1, 0, 7), (1, 0, 0, 2, 2, 4), (2, 2, 2, 2, 2, 3)]),
    (11, [(1, 0, 0, 1, 0, 11), (1, 0, 0, 2, 2, 6), (1, 0, 0, 3, 2, 4)]),
    (14, [(1, 0, 0, 1, 0, 14), (1, 0, 0, 2, 0, 7), (1, 0, 0, 3, 2, 5)]),
    (23, [(1, 0, 0, 1, 0, 23), (1, 0, 0, 2, 2, 12), (1, 0, 0, 3, 2, 8), (1, 0, 0, 4, 2, 6),
          (2, 2, 0, 3, 2, 5)]),
])
def test_class_lists(D, expected):
    cl = forms.enumerate_classes(D)
    assert [R.coefficients for R in cl] == expected
    assert cl.index_of(forms.transform(cl.representatives[-1], unimodular([(0, 2, 1)]))) == len(cl) - 1


def test_imprimitive_class_of_determinant_14():
    cl = forms.enumerate_classes(14, primitive=False)
    assert len(cl) == 4
    extra = [R for R in cl if forms.content(R) > 1]
    assert extra == [TernaryForm(2, 0, 2, 2, 0, 4)]


@pytest.mark.parametrize("D", range(1, 31))
def test_class_lists_stable_under_wider_box(D):
    # a looser bound on g11*g22*g33 must not uncover further classes
    a = forms.enumerate_classes(D, primitive=False)
    b = forms.enumerate_classes(D, primitive=False, product_factor=4)
    assert a.representatives == b.representatives
    for R in a:
        assert forms.gram_determinant(R) == D and forms.canonical(R) == R


@pytest.mark.parametrize("D", range(1, 16))
def test_classes_distinguished_by_theta(D):
    # distinct theta series is a cheap certificate that the classes differ
    cl = forms.enumerate_classes(D, primitive=False)
    thetas = [tuple(forms.representation_counts(R, 40)) for R in cl]
    for i, j in itertools.combinations(range(len(cl)), 2):
        if thetas[i] == thetas[j]:
            assert not forms.is_equivalent(cl.representatives[i], cl.representatives[j])
