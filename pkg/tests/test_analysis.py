from __future__ import annotations

import math

import numpy as np
import pytest

from rendezvous.analysis import (
    boundary_sum,
    conjecture1_row,
    conjecture2_check,
    derive_seed,
    kronecker_bridge,
    lemma1_check,
    lemma1_grid,
    proposition1_pipeline,
    ratio_spread,
    scaling_study,
    torus_eigenvalue_forms,
    torus_partition_sums,
)
from rendezvous.graphs import build_circle, build_complete, build_torus, random_regular
from rendezvous.walks import SimpleWalk, transition_matrix


def test_lemma1_examples():
    assert lemma1_check(math.pi / 4, math.pi / 4)
    assert lemma1_check(math.pi / 4, math.pi / 8)


@pytest.mark.parametrize("bad", [0.0, -0.1, math.pi / 4 + 1e-6])
def test_lemma1_domain(bad):
    with pytest.raises(ValueError):
        lemma1_check(bad, 0.5)


def test_lemma1_grid():
    assert lemma1_grid(100) == (True, 10_000)


def test_partition_sums_two():
    ps = torus_partition_sums(2)
    assert len(ps.S) == 2 and all(np.isfinite(ps.S))
    assert ps.S[0] <= ps.S[1]


@pytest.mark.parametrize("N", [16, 64])
def test_partition_sums_monotone(N):
    assert torus_partition_sums(N).monotone


def test_partition_last_shell_aggregate():
    ps = torus_partition_sums(64)
    assert 0.5 * ps.shell_sizes[-1] <= ps.S[-1] <= 2 * ps.shell_sizes[-1]


def test_partition_last_shell_terms_exceed_two():
    # the outermost shell's largest term sits near (N/2, N/2); measured 3.22 at N = 64
    ps = torus_partition_sums(64)
    assert ps.term_min[-1] >= 1.0
    assert ps.term_max[-1] == pytest.approx(3.22, abs=0.01)


def test_partition_requires_power_of_two():
    with pytest.raises(ValueError):
        torus_partition_sums(12)


def test_boundary_sum_grows_quadratically():
    ratios = [boundary_sum(N) / N**2 for N in (8, 16, 32, 64, 128)]
    assert max(ratios) / min(ratios) <= 1.2


def test_circle_three_scaling_row():
    (row,) = scaling_study("circle", [3])
    assert row.e_tau == pytest.approx(2.0, abs=1e-12)


def test_circle_scaling_spread():
    assert ratio_spread(scaling_study("circle", [16, 32, 64, 128, 256])) <= 1.5


def test_torus_scaling_spread():
    assert ratio_spread(scaling_study("torus", [8, 16, 32, 64])) <= 2.0


def test_scaling_rejects_oversized_torus():
    with pytest.raises(ValueError):
        scaling_study("torus", [256])


@pytest.mark.parametrize("N", [3, 4, 8, 16])
def test_torus_eigenvalue_forms(N):
    forms = torus_eigenvalue_forms(N)
    assert forms["expanded_error"] <= 1e-12
    assert forms["factored_constant_min"] == pytest.approx(8 / 25, abs=1e-12)
    assert forms["factored_constant_max"] == pytest.approx(8 / 25, abs=1e-12)


@pytest.mark.parametrize("n,d,seed", [(6, 3, 0), (8, 4, 1), (10, 3, 2)])
def test_kronecker_bridge(n, d, seed):
    gaps = kronecker_bridge(transition_matrix(random_regular(n, d, seed=seed), SimpleWalk()))
    assert gaps["pair_gap"] <= 1e-9
    assert gaps["diagonal_gap"] <= 1e-9


def test_derive_seed_is_stable_and_distinct():
    assert derive_seed(1, 2, 3) == derive_seed(1, 2, 3)
    assert derive_seed(1, 2, 3) != derive_seed(1, 2, 4)
    assert 0 <= derive_seed(5, 0) < 2**63


def test_conjecture1_complete_graph_agrees():
    row = conjecture1_row(build_complete(4), trials=2000, mc_seed=1)
    assert row.spectral == pytest.approx(3.0, abs=1e-10)
    assert row.exact == pytest.approx(3.0, abs=1e-10)
    assert row.discrepancy <= 1e-9


@pytest.mark.parametrize("g", [build_circle(7), build_torus(3), build_complete(5)])
def test_conjecture1_holds_on_vertex_transitive_graphs(g):
    row = conjecture1_row(g, trials=0, mc_seed=0)
    assert row.discrepancy <= 1e-9


def test_conjecture1_random_cubic_finding():
    # on a generic cubic graph the spectral value is not the exact expectation;
    # the simulation sides with the exact one
    g = random_regular(10, 3, seed=1000)
    row = conjecture1_row(g, trials=10_000, mc_seed=2000)
    assert row.discrepancy > 1e-6
    assert row.mc_covered


def test_conjecture2_triangle_satisfied():
    rep = conjecture2_check(build_circle(3))
    assert rep.status == "satisfied"
    assert all(rep.properties.values())
    X = rep.basis
    assert np.allclose(X[-1], 1.0)
    assert np.allclose(X.T @ X, 3 * np.eye(3), atol=1e-9)
    assert np.allclose(X[:, -1], 1.0)
    assert np.allclose(rep.column_sums, [0, 0, 3], atol=1e-9)


@pytest.mark.parametrize("N", [4, 5, 6])
def test_conjecture2_cycles_use_two_dimensional_search(N):
    rep = conjecture2_check(build_circle(N))
    assert rep.status == "satisfied"
    assert not rep.witness["failures"]


def test_conjecture2_complete_graph_is_indeterminate():
    rep = conjecture2_check(build_complete(4))
    assert rep.status == "indeterminate"
    assert rep.witness["unsearched"][0]["dimension"] == 3


def test_conjecture2_reports_violation_with_witness():
    statuses = {conjecture2_check(random_regular(10, 3, seed=s)).status for s in range(5)}
    assert "violated" in statuses
    rep = next(conjecture2_check(random_regular(10, 3, seed=s)) for s in range(5)
               if conjecture2_check(random_regular(10, 3, seed=s)).status == "violated")
    assert rep.witness["failures"]


@pytest.mark.parametrize("N", [3, 4, 5, 6])
def test_proposition1_on_cycles(N):
    g = build_circle(N)
    out = proposition1_pipeline(g, conjecture2_check(g))
    assert out["inner_residual"] <= 1e-8
    assert out["delta_residual"] <= 1e-8
    assert out["pair_system_residual"] <= 1e-9
    assert out["basis_sum"] == pytest.approx(out["spectral"], rel=1e-10)
    assert out["basis_sum"] == pytest.approx(out["exact"], rel=1e-10)


def test_proposition1_exposes_row_defect_on_random_graph():
    g = random_regular(10, 3, seed=1000)
    out = proposition1_pipeline(g, conjecture2_check(g))
    assert out["pair_system_residual"] > 1e-3
    assert out["basis_sum"] == pytest.approx(out["spectral"], rel=1e-9)
