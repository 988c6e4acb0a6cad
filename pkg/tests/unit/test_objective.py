"""Unit tests for SE, fairness and conditioning metrics and the weighted objective."""

import itertools

import numpy as np
import pytest
from pydantic import ValidationError

from freqalloc_core.channel import ChannelTensor
from freqalloc_core.clustering import ClusterMap
from freqalloc_core.objective import (
    AllocationProblem,
    ObjectiveWeights,
    check_constraints,
    evaluate,
    gini,
    min_eigenvalue,
    reference_se,
    subband_gram,
    total_se,
)
from freqalloc_core.phy import UNASSIGNED, Assignment, evaluate_phy


def _double_loop_gini(x):
    x = np.asarray(x, dtype=float)
    k = x.size
    return sum(abs(a - b) for a in x for b in x) / (2 * k * k * x.mean())


def _instance(seed=0, k=4, l=3, s=3, n=2, m=2):
    rng = np.random.default_rng(seed)
    h = rng.standard_normal((k, l, s, n)) + 1j * rng.standard_normal((k, l, s, n))
    channels = ChannelTensor(h=h)
    order = np.argsort(-channels.gain, axis=1, kind="stable")[:, :m]
    cluster = ClusterMap(serves=[row.tolist() for row in order], cluster_size=m, num_aps=l)
    return channels, cluster


def test_total_se():
    assert total_se([1, 2, 3]) == 6
    assert total_se(np.zeros(5)) == 0
    x = np.random.default_rng(1).random(40)
    assert total_se(x) == pytest.approx(sum(reversed(x.tolist())), abs=1e-12)


@pytest.mark.parametrize(("se", "expected"), [([2, 2, 2], 0.0), ([1, 3], 0.25), ([0, 4], 0.5)])
def test_gini_reference_values(se, expected):
    assert gini(se) == pytest.approx(expected, abs=1e-12)


def test_gini_matches_double_loop():
    rng = np.random.default_rng(2)
    for _ in range(20):
        x = rng.random(rng.integers(2, 12)) * 5
        assert gini(x) == pytest.approx(_double_loop_gini(x), abs=1e-12)


def test_gini_all_zero_is_zero():
    assert gini([0.0, 0.0, 0.0]) == 0.0


def test_min_eigenvalue_one_ue_per_subband():
    channels, cluster = _instance(k=3, s=3)
    assert min_eigenvalue(channels, cluster, Assignment(subband_of=[0, 1, 2], num_subbands=3)) == pytest.approx(1.0)


def test_min_eigenvalue_empty_assignment():
    channels, cluster = _instance(k=2)
    assert min_eigenvalue(channels, cluster, Assignment(subband_of=[UNASSIGNED, UNASSIGNED], num_subbands=3)) == 1.0


def test_min_eigenvalue_orthogonal_and_identical():
    h = np.zeros((2, 1, 1, 2), dtype=complex)
    h[0, 0, 0] = [1, 0]
    h[1, 0, 0] = [0, 1]
    cluster = ClusterMap(serves=[(0,), (0,)], cluster_size=1, num_aps=1)
    shared = Assignment(subband_of=[0, 0], num_subbands=1)
    assert min_eigenvalue(ChannelTensor(h=h), cluster, shared) == pytest.approx(1.0)

    h[1, 0, 0] = [1, 0]
    assert min_eigenvalue(ChannelTensor(h=h), cluster, shared) == pytest.approx(0.0, abs=1e-12)


def test_min_eigenvalue_matches_dense_solver():
    rng = np.random.default_rng(3)
    for trial in range(20):
        channels, cluster = _instance(seed=trial, k=5, l=4, s=2, n=2, m=3)
        assignment = Assignment(subband_of=rng.integers(0, 2, size=5), num_subbands=2)
        expected = min(np.linalg.eigvalsh(subband_gram(channels, cluster, assignment.occupancy(s), s)).min() for s in assignment.occupied_subbands())
        value = min_eigenvalue(channels, cluster, assignment)
        assert value == pytest.approx(expected, abs=1e-8)
        assert value >= -1e-10


def test_weights_not_all_zero():
    with pytest.raises(ValidationError):
        ObjectiveWeights(w_eta=0, w_evd=0, w_gini=0)


def test_power_constraint_tight_at_equal_power():
    channels, cluster = _instance()
    rho = 0.02
    assignment = Assignment(subband_of=[0, 1, 2, 0], num_subbands=3)
    phy = evaluate_phy(channels, cluster, assignment, 1e-3, rho)
    weights = ObjectiveWeights(rho_max=4 * rho)
    assert float(np.sum(phy.rho)) == pytest.approx(weights.rho_max)
    assert not check_constraints(phy, assignment, weights, rho).power_exceeded
    assert check_constraints(phy, assignment, ObjectiveWeights(rho_max=rho), rho).power_exceeded


def test_min_se_constraint():
    h = np.zeros((2, 1, 1, 1), dtype=complex)
    h[0, 0, 0, 0] = 1.0
    cluster = ClusterMap(serves=[(0,), ()], cluster_size=1, num_aps=1)
    assignment = Assignment(subband_of=[0, 0], num_subbands=1)
    phy = evaluate_phy(ChannelTensor(h=h), cluster, assignment, 1.0, 1.0)
    violations = check_constraints(phy, assignment, ObjectiveWeights(eta_th=1.0), 1.0)
    assert violations.below_se_floor == 1
    assert violations.labels() == ["se_floor:1"]
    assert not violations.multi_subband


def test_se_only_objective_has_no_penalty():
    channels, cluster = _instance(k=3, s=3)
    weights = ObjectiveWeights(w_eta=1, w_evd=0, w_gini=0, eta_th=0)
    assignment = Assignment(subband_of=[0, 1, 2], num_subbands=3)
    report = evaluate(assignment, channels, cluster, weights, 1e-2, 0.1)
    eta_ref = reference_se(channels, cluster, 1e-2, 0.1)
    assert report.normalized_value == pytest.approx(report.total_se / eta_ref)
    assert report.feasible


def test_exhaustive_small_instance_argmax():
    channels, cluster = _instance(k=2, l=2, s=2, n=1, m=1)
    weights = ObjectiveWeights()
    candidates = [Assignment(subband_of=list(a), num_subbands=2) for a in itertools.product(range(2), repeat=2)]
    values = [evaluate(a, channels, cluster, weights, 1e-2, 0.1).normalized_value for a in candidates]
    problem = AllocationProblem(channels, cluster, weights, 1e-2, 0.1)
    best = max(candidates, key=problem.score)
    assert problem.score(best) == pytest.approx(max(values))


def test_identical_channels_on_one_subband():
    h = np.ones((2, 1, 1, 2), dtype=complex)
    cluster = ClusterMap(serves=[(0,), (0,)], cluster_size=1, num_aps=1)
    report = evaluate(Assignment(subband_of=[0, 0], num_subbands=1), ChannelTensor(h=h), cluster, ObjectiveWeights(), 1e-2, 0.1)
    assert report.lambda_min == pytest.approx(0.0, abs=1e-12)
    assert report.gini == 0.0
    assert report.total_se == 0.0
    assert "gini_degenerate" in report.flags
    assert "zf_infeasible:0" in report.flags


def test_problem_cache_and_hash():
    channels, cluster = _instance()
    problem = AllocationProblem(channels, cluster, ObjectiveWeights(), 1e-2, 0.1, cache_size=2)
    a = Assignment(subband_of=[0, 1, 2, 0], num_subbands=3)
    first = problem.evaluate(a)
    assert problem.evaluate(a) is first
    assert problem.evaluations == 1
    problem.evaluate(Assignment(subband_of=[1, 1, 2, 0], num_subbands=3))
    problem.evaluate(Assignment(subband_of=[2, 1, 2, 0], num_subbands=3))
    problem.evaluate(a)
    assert problem.evaluations == 4

    same = AllocationProblem(channels, cluster, ObjectiveWeights(), 1e-2, 0.1)
    other = AllocationProblem(channels, cluster, ObjectiveWeights(w_gini=0.3), 1e-2, 0.1)
    assert problem.instance_hash() == same.instance_hash()
    assert problem.instance_hash() != other.instance_hash()


def test_problem_rejects_mismatched_cluster():
    channels, _ = _instance(k=3)
    cluster = ClusterMap(serves=[(0,), (1,)], cluster_size=1, num_aps=3)
    with pytest.raises(ValueError):
        AllocationProblem(channels, cluster, ObjectiveWeights(), 1e-2, 0.1)


def test_gini_of_equal_se_is_exactly_zero():
    assert gini([0.1] * 5) == 0.0
    for value in np.random.default_rng(7).random(50) * 10:
        assert gini([value] * int(3 + value)) == 0.0


def test_symmetric_instance_reports_zero_gini():
    cluster = ClusterMap(serves=[(0,)] * 5, cluster_size=1, num_aps=1)
    assignment = Assignment(subband_of=[0, 1, 2, 3, 4], num_subbands=5)
    for scale in np.logspace(-6, 0, 25):
        channels = ChannelTensor(h=np.full((5, 1, 5, 2), scale, dtype=complex))
        report = evaluate(assignment, channels, cluster, ObjectiveWeights(), 1e-9, 0.1)
        assert report.gini == 0.0
        assert len(set(report.se)) == 1


def test_gini_is_scale_invariant_and_bounded():
    rng = np.random.default_rng(8)
    for _ in range(50):
        k = int(rng.integers(1, 30))
        x = rng.exponential(size=k) * rng.integers(0, 2, size=k)
        if x.sum() == 0:
            x[0] = 1.0
        value = gini(x)
        assert 0.0 <= value <= (k - 1) / k + 1e-12
        assert gini(x * rng.uniform(1e-3, 1e3)) == pytest.approx(value, abs=1e-12)


def test_argmax_unchanged_when_weights_scaled():
    candidates = [Assignment(subband_of=list(a), num_subbands=2) for a in itertools.product(range(2), repeat=3)]
    for seed in range(5):
        channels, cluster = _instance(seed=seed, k=3, l=2, s=2, n=2, m=1)
        base = ObjectiveWeights(w_eta=0.5, w_evd=0.3, w_gini=0.2)
        scaled = ObjectiveWeights(w_eta=2.5, w_evd=1.5, w_gini=1.0)
        values = [evaluate(a, channels, cluster, base, 1e-2, 0.1).normalized_value for a in candidates]
        scaled_values = [evaluate(a, channels, cluster, scaled, 1e-2, 0.1).normalized_value for a in candidates]
        np.testing.assert_allclose(scaled_values, 5 * np.asarray(values), rtol=1e-9, atol=1e-12)
        assert int(np.argmax(scaled_values)) == int(np.argmax(values))


def _masked_rows(channels, cluster, ues, s):
    n = channels.antennas_per_ap
    rows = np.zeros((len(ues), channels.num_aps * n), dtype=complex)
    for i, k in enumerate(ues):
        for ap in cluster.serves[k]:
            rows[i, ap * n : (ap + 1) * n] = channels.h[k, ap, s]
    return rows


def test_min_eigenvalue_zero_exactly_when_rank_deficient():
    seen = set()
    for seed in range(6):
        channels, cluster = _instance(seed=seed, k=3, l=2, s=2, n=1, m=1)
        for subbands in itertools.product(range(2), repeat=3):
            assignment = Assignment(subband_of=list(subbands), num_subbands=2)
            deficient = any(
                np.linalg.matrix_rank(_masked_rows(channels, cluster, assignment.occupancy(s), s)) < len(assignment.occupancy(s)) for s in assignment.occupied_subbands()
            )
            value = min_eigenvalue(channels, cluster, assignment)
            assert (value < 1e-9) == deficient
            seen.add(deficient)
    assert seen == {True, False}
