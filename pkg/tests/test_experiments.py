import math

import numpy as np
import pytest

from glab.core import GlabError, SparseVector, WindowError, indicator
from glab.experiments import (
    check_upper_bounds, convergence_run, dirichlet_set, expected_sharp_ratio, lacunary_set, loglog_slope,
    mu_chain_checks, random_witness, rudin_shapiro, upper_bound_tables, vallee_poussin_tail,
    witness_block, witness_cesaro_lower, witness_difference, witness_summing, witness_trig,
)
from glab.spaces import BlockSpec, parse_space, trig_frequency


def test_summing_witness_values():
    rep = witness_summing(2, 0.5)
    assert rep.residual == 6.5 and rep.sigma == 0.5 and rep.ratio == 13.0
    assert rep.expected_ratio == 13.0 == expected_sharp_ratio(2, 0.5)
    assert rep.sigma_mode == "exhaustive"
    assert all(b.satisfied for b in rep.bounds)


def test_difference_witness_values():
    rep = witness_difference(2, 0.5)
    assert rep.residual == 13.0 and rep.sigma == 1.0 and rep.ratio == 13.0
    assert rep.extra["chebyshev_coefficients"] == [0.0, 0.0]


def test_witness_input_checks():
    with pytest.raises(ValueError):
        witness_summing(0, 1.0)
    with pytest.raises(ValueError):
        witness_difference(1, 0.0)


@pytest.mark.parametrize("make", [witness_summing, witness_difference])
def test_general_bound_is_attained(make):
    rep = make(2, 1.0)
    space = parse_space(rep.space)
    tables = upper_bound_tables(space, 2)
    checks = {b.name: b for b in check_upper_bounds(space, 2, 1.0, rep, tables)}
    g = checks["general"]
    assert g.satisfied and abs(g.lhs - g.rhs) < 1e-9
    assert checks["chain-cheb-greedy"].satisfied
    assert checks["chain-greedy-kc"].satisfied


def test_missing_tables():
    rep = witness_summing(1, 1.0)
    space = parse_space(rep.space)
    with pytest.raises(GlabError):
        check_upper_bounds(space, 1, 1.0, rep, None)
    with pytest.raises(GlabError):
        check_upper_bounds(space, 1, 1.0, rep, {})


def test_cesaro_lower_l2():
    S = parse_space("lp:2:64")
    rep = witness_cesaro_lower(S, (9, 10), (1, 2), 3, 0.5)
    assert rep.extra["case"] == "A>cB"
    assert rep.extra["indicator_ratio"] == pytest.approx(2.0)
    assert all(b.satisfied for b in rep.bounds)


def test_cesaro_lower_summing_quotient():
    S = parse_space("summing:16")
    A, B = (10, 11), (1, 2)
    rep = witness_cesaro_lower(S, A, B, 2, 1.0)
    q = S.norm(indicator(A)) / S.norm(indicator(B))
    assert rep.extra["norm_A"] / rep.extra["norm_B_plus_y"] == pytest.approx(q)
    assert rep.greedy_set == B and rep.extra["C"] == []
    assert rep.bounds[0].satisfied
    with pytest.raises(ValueError):
        witness_cesaro_lower(S, (3, 4), (1, 2), 2, 1.0)


def test_trig_p1_consistency():
    rep = witness_trig(1.0, 5)
    assert rep.extra["case"] == "p=1"
    assert rep.ratio == pytest.approx(rep.extra["indicator_ratio"])
    assert rep.extra["kernel_norm"] <= 3 + 1e-6


def test_trig_p2_ratio():
    rep = witness_trig(2.0, 9)
    assert rep.ratio == pytest.approx(1.0, abs=1e-9)


def test_rudin_shapiro():
    assert rudin_shapiro(0).tolist() == [1.0]
    assert rudin_shapiro(2).tolist() == [1.0, 1.0, 1.0, -1.0]
    theta = np.linspace(0, 2 * np.pi, 4096, endpoint=False)
    P = rudin_shapiro(4)
    vals = np.abs(np.exp(1j * np.outer(theta, np.arange(16))) @ P)
    assert vals.max() <= math.sqrt(2) * 4 + 1e-9


def test_frequency_sets():
    assert sorted(trig_frequency(n) for n in dirichlet_set(2)) == [-2, -1, 0, 1, 2]
    L = lacunary_set(5, 10)
    assert len(L) == 5 and min(L) > 10
    assert all(math.log2(abs(trig_frequency(n))).is_integer() for n in L)
    y = vallee_poussin_tail(1)
    assert {trig_frequency(n): v for n, v in y.items()} == {2: 1.0, -2: 1.0, 3: 0.5, -3: 0.5}


def test_loglog_slope():
    assert loglog_slope([2, 4, 8], [3, 6, 12]) == pytest.approx(1.0)


def test_block_witness_geometric():
    out = witness_block(BlockSpec.geometric(4, 3), k=2, samples=20)
    assert out["pair_bound_holds"] and out["ratio"] >= 1
    with pytest.raises(WindowError):
        witness_block(BlockSpec.geometric(4, 3), k=3)


def test_l2_random_witness_ratio():
    rep = random_witness(parse_space("lp:2:8"), 2, 1.0, samples=30, seed=5)
    assert rep.ratio <= 1 + 1e-9


def test_mu_chain_has_no_failures():
    out = mu_chain_checks(parse_space("lp:2:6"), 3)
    assert out["checks"] and all(c.satisfied for c in out["checks"])


def test_convergence_l2():
    S = parse_space("lp:2:10")
    x = SparseVector.from_dense([2.0 ** -n for n in range(1, 11)])
    run = convergence_run(S, x, 1.0, 10)
    for m, v in enumerate(run["chebyshev"]):
        assert v == pytest.approx(math.sqrt(sum(4.0 ** -n for n in range(m + 1, 11))), abs=1e-12)
    assert run["chebyshev"][-1] == 0


def test_convergence_support_capture():
    S = parse_space("summing:8")
    x = SparseVector({2: 1.0, 5: -0.5, 7: 0.25})
    run = convergence_run(S, x, 0.5, 4)
    assert run["chebyshev"][3] == 0 and run["chebyshev"][4] == 0
    assert all(c <= g + 1e-12 for c, g in zip(run["chebyshev"], run["greedy"]))
