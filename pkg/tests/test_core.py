import cmath

import pytest
from hypothesis import given, strategies as st

from glab.core import (
    ROOTS_OF_UNITY, SparseVector, axpy, index_set, indicator, restrict, sign, sign_pattern, signs_of,
)

idx = st.integers(min_value=1, max_value=40)
real = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False).filter(lambda v: abs(v) > 1e-9)
vectors = st.dictionaries(idx, real, max_size=12).map(SparseVector)
sets = st.sets(idx, max_size=12)


def test_restrict_examples():
    x = SparseVector({1: 3, 2: -2, 5: 1})
    assert restrict(x, []) == SparseVector()
    assert restrict(x, x.support) == x
    assert restrict(x, {2, 5}) == SparseVector({2: -2, 5: 1})


def test_indicator_examples():
    assert indicator([]) == SparseVector()
    assert indicator({1, 2}) == SparseVector({1: 1, 2: 1})
    assert indicator({3, 7}, {3: -1, 7: 1}) == SparseVector({3: -1, 7: 1})
    with pytest.raises(KeyError):
        indicator({3, 7}, {3: -1})


def test_axpy_examples():
    x = SparseVector({1: 1.5, 4: -2})
    y = SparseVector({2: 7})
    assert axpy(1, x, -x) == SparseVector()
    assert axpy(0, x, y) == y
    assert axpy(2, SparseVector({1: 1}), SparseVector({1: -2, 2: 1})) == SparseVector({2: 1})


def test_zero_entries_are_dropped():
    x = SparseVector({1: 0.0, 2: 1e-16, 3: 2.0})
    assert x.support == (3,)


def test_sign():
    assert sign(0) == 1.0
    assert sign(-3.0) == -1.0
    assert abs(sign(2j) - 1j) < 1e-15


def test_sign_pattern_rejects_non_unimodular():
    assert sign_pattern({1: -1.0, 2: 1j}) == {1: -1.0, 2: 1j}
    with pytest.raises(ValueError):
        sign_pattern({1: 0.5})


def test_roots_of_unity_are_unimodular():
    assert len(ROOTS_OF_UNITY) == 8
    assert all(abs(abs(z) - 1) < 1e-12 for z in ROOTS_OF_UNITY)


def test_index_set_sorted_unique():
    assert index_set([5, 1, 5, 3]) == (1, 3, 5)
    with pytest.raises(ValueError):
        index_set([0, 1])


def test_text_and_json_forms():
    x = SparseVector({1: 0.5, 3: -2.0, 10: 1 / 3})
    assert SparseVector.from_text(x.to_text()) == x
    assert SparseVector.loads('{"1": 0.5, "3": -2}') == SparseVector({1: 0.5, 3: -2})
    z = SparseVector({2: 1 + 2j})
    assert SparseVector.from_text(z.to_text()) == z
    assert SparseVector.from_json(z.to_json()) == z
    with pytest.raises(ValueError):
        SparseVector.from_text("1:2 1:3")


def test_complex_signs():
    x = SparseVector({1: 2j, 2: -3.0})
    s = signs_of(x)
    assert abs(s[1] - 1j) < 1e-15 and s[2] == -1.0
    assert cmath.isclose(x[1], 2j)


@given(vectors, sets)
def test_restrict_idempotent(x, A):
    assert restrict(restrict(x, A), A) == restrict(x, A)


@given(vectors, sets)
def test_restrict_splits_x(x, A):
    rest = [n for n in x.support if n not in A]
    assert restrict(x, A) + restrict(x, rest) == x


@given(sets)
def test_indicator_support(A):
    eps = {n: (-1.0) ** n for n in A}
    assert indicator(A, eps).support == index_set(A)


@given(vectors)
def test_json_round_trip(x):
    assert SparseVector.from_json(x.to_json()) == x
    assert SparseVector.loads(x.to_text()) == x
