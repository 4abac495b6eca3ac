import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from glab.core import GlabError, SparseVector, WindowError, indicator
from glab.experiments import dirichlet_set, lacunary_set
from glab.spaces import (
    BlockSpace, BlockSpec, DescriptorError, NoClosedForm, balanced_max_values, balanced_sign_max, cesaro,
    parse_space, partial_sum, trig_frequency, trig_index, vp_operator,
)

REAL_SPACES = ["summing:10", "difference:10", "lp:1:10", "lp:2:10", "lp:3:10", "lp:inf:10", "block:geom:2:3"]


def _vec(draw_vals, n):
    return SparseVector.from_dense(np.array(draw_vals[:n]))


vals10 = st.lists(st.floats(-10, 10, allow_nan=False), min_size=10, max_size=10)


def test_difference_all_ones_has_norm_one():
    S = parse_space("difference:12")
    assert S.norm(SparseVector.from_dense([1.0] * 9)) == 1.0


def test_summing_alternating():
    assert parse_space("summing:4").norm(SparseVector.from_dense([1, -1, 1, -1])) == 1.0


def test_trig_dirichlet_parseval():
    S = parse_space("trig:2:64")
    for ell in (1, 5, 20):
        x = indicator(dirichlet_set(ell))
        assert abs(S.norm(x) - math.sqrt(2 * ell + 1)) < 1e-9


def test_block_default_indicator_of_s2():
    S = parse_space("block:default:3")
    lo, hi = S.spec.block(2)
    x = SparseVector.from_arrays(np.arange(lo, hi + 1), np.ones(hi - lo + 1))
    assert S.norm(x) == 2.0


def test_dual_norm_entries():
    S = parse_space("summing:5")
    assert S.dual_norm_entry(1) == 1 and S.dual_norm_entry(4) == 2
    assert parse_space("difference:5").dual_norm_entry(3) == 1
    assert parse_space("lp:2:5").dual_norm_entry(2) == 1


def test_no_closed_form_dual():
    class Odd(type(parse_space("lp:2:3"))):
        def dual_norm_entry(self, n):
            raise NoClosedForm("none")
    with pytest.raises(NoClosedForm):
        Odd(2.0, 3).dual_norm_entry(1)


def test_partial_sum_examples():
    S = parse_space("lp:2:10")
    x = SparseVector({1: 1, 3: 2})
    assert partial_sum(S, x, 0) == SparseVector()
    assert partial_sum(S, x, 5) == x
    assert partial_sum(S, x, 2) == SparseVector({1: 1})


def test_cesaro_examples():
    S = parse_space("lp:2:10")
    x = SparseVector({1: 2.0, 3: 1.0})
    assert cesaro(S, x, 1) == SparseVector({1: 2.0})
    N = 4
    got = cesaro(S, indicator(range(1, N + 1)), N)
    assert np.allclose(got.to_dense(N), [1, 0.75, 0.5, 0.25])


@given(vals10, st.integers(1, 12))
def test_cesaro_is_average_of_partial_sums(v, N):
    S = parse_space("lp:2:10")
    x = SparseVector.from_dense(v)
    avg = sum((partial_sum(S, x, n).to_dense(10) for n in range(1, N + 1)), np.zeros(10)) / N
    assert np.allclose(cesaro(S, x, N).to_dense(10), avg, atol=1e-12)


def test_vp_operator():
    S = parse_space("lp:2:20")
    x = SparseVector({1: 1.0, 2: -3.0})
    assert vp_operator(S, x, 2, 5) == x
    assert vp_operator(S, SparseVector({7: 1.0}), 2, 5) == SparseVector()
    with pytest.raises(ValueError):
        vp_operator(S, x, 3, 3)


@given(vals10, st.integers(1, 5), st.integers(1, 5))
def test_vp_is_cesaro_blend(v, N, gap):
    S = parse_space("lp:2:10")
    x = SparseVector.from_dense(v)
    M = N + gap
    blend = (M * cesaro(S, x, M).to_dense(10) - N * cesaro(S, x, N).to_dense(10)) / (M - N)
    assert np.allclose(vp_operator(S, x, N, M).to_dense(10), blend, atol=1e-9)


@pytest.mark.parametrize("d", ["summing:10", "difference:10", "lp:1:10"])
@given(vals10, st.integers(1, 4), st.integers(1, 4))
@settings(max_examples=40)
def test_vp_operator_bound(d, v, N, gap):
    S = parse_space(d)
    x = SparseVector.from_dense(v)
    M = N + gap
    c = S.cesaro_constant * (M + N) / (M - N)
    V = vp_operator(S, x, N, M)
    assert S.norm(V) <= c * S.norm(x) + 1e-9
    assert S.norm(x - V) <= c * S.norm(x) + 1e-9


@pytest.mark.parametrize("d", REAL_SPACES)
@given(vals10, vals10, st.floats(-5, 5, allow_nan=False))
@settings(max_examples=40)
def test_norm_axioms(d, a, b, c):
    S = parse_space(d)
    n = min(10, S.n_max)
    x, y = _vec(a, n), _vec(b, n)
    assert S.norm(x + y) <= S.norm(x) + S.norm(y) + 1e-12 * (1 + S.norm(x) + S.norm(y))
    assert abs(S.norm(c * x) - abs(c) * S.norm(x)) <= 1e-12 * (1 + abs(c) * S.norm(x))


@pytest.mark.parametrize("d", REAL_SPACES + ["trig:1:8", "trig:inf:8"])
def test_basis_norm_metadata(d):
    S = parse_space(d)
    for n in range(1, min(S.n_max, 10) + 1):
        assert abs(S.basis_norm(n) - S.norm(indicator([n]))) < 1e-12


@pytest.mark.parametrize("d", REAL_SPACES)
def test_dense_norms_match_norm(d):
    S = parse_space(d)
    rng = np.random.default_rng(1)
    n = min(10, S.n_max)
    C = rng.normal(size=(20, n))
    got = S.dense_norms(C)
    want = [S.norm(SparseVector.from_dense(r)) for r in C]
    assert np.allclose(got, want, rtol=1e-12, atol=1e-12)


@given(vals10, st.integers(0, 12))
def test_summing_partial_sums_contract(v, N):
    S = parse_space("summing:10")
    x = SparseVector.from_dense(v)
    assert S.norm(partial_sum(S, x, N)) <= S.norm(x) + 1e-12


def test_window_and_field_errors():
    S = parse_space("lp:2:4")
    with pytest.raises(WindowError):
        S.norm(SparseVector({5: 1.0}))
    with pytest.raises(GlabError):
        S.norm(SparseVector({1: 1j}))


def test_descriptors_round_trip():
    for d in ["summing:8", "difference:9", "lp:2:16", "lp:inf:4", "trig:1:64", "trig:2:8:128",
              "block:default:2", "block:geom:4:3"]:
        assert parse_space(d).descriptor == d
    assert parse_space("lp:4/3:8").p == pytest.approx(4 / 3)
    for bad in ["foo:1", "lp:2", "summing:x", "block:geom:3:2", "block:default:4"]:
        with pytest.raises(DescriptorError):
            parse_space(bad)


def test_trig_ordering():
    assert [trig_frequency(n) for n in range(1, 6)] == [0, 1, -1, 2, -2]
    for k in range(-20, 21):
        assert trig_frequency(trig_index(k)) == k


def test_lacunary_norm_is_order_sqrt_m():
    for p in (1.0, 2.0, 4.0):
        S = parse_space(f"trig:{p:g}:{2 ** 12}")
        for m in (4, 8, 16):
            A = lacunary_set(m, 1)
            r = S.norm(indicator(A)) / math.sqrt(m)
            assert S.lacunary_constants[0] <= r <= S.lacunary_constants[1]


# -- block space --------------------------------------------------------------


def test_balanced_sign_max_examples():
    S = BlockSpace(BlockSpec.geometric(4, 2))
    lo, hi = S.spec.block(2)
    full = SparseVector.from_arrays(np.arange(lo, hi + 1), np.ones(16))
    assert balanced_sign_max(S, 2, full) == 0
    half = SparseVector.from_arrays(np.arange(lo, lo + 8), np.ones(8))
    assert balanced_sign_max(S, 2, half) == 8
    with pytest.raises(ValueError):
        balanced_max_values(np.ones(2), 3)


def test_balanced_sign_max_brute_force():
    S = BlockSpace(BlockSpec.geometric(4, 2))
    lo, _ = S.spec.block(1)
    balanced = [s for s in itertools.product((1, -1), repeat=4) if sum(s) == 0]
    rng = np.random.default_rng(3)
    for _ in range(50):
        k = int(rng.integers(1, 3))
        B0 = rng.choice(4, size=k, replace=False)
        eta = rng.choice((-1.0, 1.0), size=k)
        x = SparseVector.from_arrays(lo + B0, eta)
        dense = x.to_dense(lo + 3)[lo - 1:]
        brute = max(abs(float(np.dot(s, dense))) for s in balanced)
        assert balanced_sign_max(S, 1, x) == brute == k


@given(st.data())
def test_balanced_sign_lemma(data):
    size = data.draw(st.sampled_from([2, 4, 8, 16]))
    k = data.draw(st.integers(0, size))
    eta = np.array(data.draw(st.lists(st.sampled_from([1.0, -1.0]), min_size=k, max_size=k)))
    got = balanced_max_values(eta, size)
    assert got >= min(k, size - k)


def test_block_default_sizes():
    spec = BlockSpec.default(3)
    assert spec.sizes[:2] == (4, 65536)
    assert math.isinf(spec.sizes[2]) and spec.alphas[2] == 0.0 and spec.betas[2] == 0.0
