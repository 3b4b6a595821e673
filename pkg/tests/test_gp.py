import time

import numpy as np
import pytest

from grid_oracle import grid_best_sum_rate, make_instance
from hapsris.allocator import ProblemSpec, build_gp, rate_values, snr_values, solve_gp
from hapsris.gp import InfeasibleProblem, Posynomial


def two_ue_spec(**overrides) -> ProblemSpec:
    base = dict(
        cascade_gain=np.array([1e-20, 1e-20]),
        noise_gain=np.array([1e-24, 1e-24]),
        noise_floor_w=8e-15,
        beta=1e4,
        n_max=20000,
        p_max_w=0.2,
        n_min_per_ue=np.array([1000.0, 1000.0]),
        n_max_per_ue=np.array([15000.0, 15000.0]),
        p_min_per_ue_w=np.array([0.003, 0.003]),
        p_max_per_ue_w=np.array([0.15, 0.15]),
        gamma_min=1.0,
        bandwidth_hz=2e6,
    )
    base.update(overrides)
    return ProblemSpec(**base)


def test_posynomial_rejects_nonpositive_coefficients():
    with pytest.raises(ValueError):
        Posynomial.from_terms([1.0, -2.0], np.zeros((2, 3)))


def test_symmetric_two_ue_split_is_equal():
    spec = two_ue_spec()
    rel = solve_gp(build_gp(spec))
    assert rel.n_elements[0] == pytest.approx(rel.n_elements[1], rel=1e-4)
    assert rel.tx_power_w[0] == pytest.approx(rel.tx_power_w[1], rel=1e-4)
    # budgets are binding for a monotone objective
    assert rel.n_elements.sum() == pytest.approx(20000, rel=1e-5)
    assert rel.tx_power_w.sum() == pytest.approx(0.2, rel=1e-5)


def test_single_ue_saturates_boxes_when_budgets_are_loose():
    spec = two_ue_spec(
        cascade_gain=np.array([1e-20]),
        noise_gain=np.array([1e-24]),
        n_max=50000,
        p_max_w=1.0,
        n_min_per_ue=np.array([1000.0]),
        n_max_per_ue=np.array([15000.0]),
        p_min_per_ue_w=np.array([0.003]),
        p_max_per_ue_w=np.array([0.15]),
    )
    rel = solve_gp(build_gp(spec))
    assert rel.n_elements[0] == pytest.approx(15000.0, rel=1e-4)
    assert rel.tx_power_w[0] == pytest.approx(0.15, rel=1e-4)


def test_infeasible_rate_floor_is_certified():
    spec = two_ue_spec(gamma_min=1e12)
    with pytest.raises(InfeasibleProblem, match="infeasible"):
        solve_gp(build_gp(spec))


def test_kkt_residual_meets_tolerance():
    rel = solve_gp(build_gp(two_ue_spec()), tol=1e-6)
    assert rel.kkt_residual <= 1e-6


@pytest.mark.parametrize("seed", range(6))
def test_matches_grid_oracle(seed):
    spec = make_instance(seed)
    start = time.perf_counter()
    rel = solve_gp(build_gp(spec))
    oracle = grid_best_sum_rate(spec)
    elapsed = time.perf_counter() - start
    achieved = float(rate_values(spec, snr_values(spec, rel.n_elements, rel.tx_power_w)).sum())
    assert achieved >= oracle * (1 - 0.005)
    assert elapsed < 1.0


def test_scale_invariance_of_argmax():
    spec = two_ue_spec(
        cascade_gain=np.array([1e-20, 3e-20]),
        noise_gain=np.array([1e-24, 2e-24]),
    )
    rel1 = solve_gp(build_gp(spec))
    import dataclasses

    scaled = dataclasses.replace(spec, cascade_gain=spec.cascade_gain * 37.0)
    rel2 = solve_gp(build_gp(scaled))
    assert rel2.n_elements == pytest.approx(rel1.n_elements, rel=1e-4)
    assert rel2.tx_power_w == pytest.approx(rel1.tx_power_w, rel=1e-4)


def test_budget_monotonicity():
    import dataclasses

    spec = two_ue_spec()
    base = solve_gp(build_gp(spec))
    base_rate = float(rate_values(spec, snr_values(spec, base.n_elements, base.tx_power_w)).sum())
    for grown in (
        dataclasses.replace(spec, n_max=30000, n_max_per_ue=np.array([25000.0, 25000.0])),
        dataclasses.replace(spec, p_max_w=0.4, p_max_per_ue_w=np.array([0.3, 0.3])),
    ):
        rel = solve_gp(build_gp(grown))
        rate = float(rate_values(grown, snr_values(grown, rel.n_elements, rel.tx_power_w)).sum())
        assert rate >= base_rate * (1 - 1e-6)


class TestBuildStructure:
    def test_single_ue_structure(self):
        spec = two_ue_spec(
            cascade_gain=np.array([1e-20]),
            noise_gain=np.array([1e-24]),
            n_min_per_ue=np.array([1000.0]),
            n_max_per_ue=np.array([15000.0]),
            p_min_per_ue_w=np.array([0.003]),
            p_max_per_ue_w=np.array([0.15]),
        )
        gp = build_gp(spec)
        assert gp.n_vars == 2
        assert len(gp.objective) == 1
        assert gp.objective[0].n_monomials == 2

    def test_passive_objective_is_single_monomial(self):
        spec = two_ue_spec(noise_gain=np.array([0.0, 0.0]), beta=1.0)
        gp = build_gp(spec)
        assert all(p.n_monomials == 1 for p in gp.objective)

    def test_ue_swap_symmetry(self):
        spec = two_ue_spec(
            cascade_gain=np.array([1e-20, 5e-20]),
            noise_gain=np.array([1e-24, 7e-24]),
        )
        swapped = two_ue_spec(
            cascade_gain=np.array([5e-20, 1e-20]),
            noise_gain=np.array([7e-24, 1e-24]),
        )
        rel = solve_gp(build_gp(spec))
        rel_swapped = solve_gp(build_gp(swapped))
        assert rel.n_elements[::-1] == pytest.approx(rel_swapped.n_elements, rel=1e-4)
        assert rel.tx_power_w[::-1] == pytest.approx(rel_swapped.tx_power_w, rel=1e-4)

    def test_reference_size_problem_counts(self):
        # 30 UEs: 60 log-space variables, 30 rate floors plus the two budget
        # sums as inequality constraints, boxes handled as variable bounds.
        k = 30
        spec = two_ue_spec(
            cascade_gain=np.full(k, 1e-20),
            noise_gain=np.full(k, 1e-24),
            n_max=389120,
            p_max_w=1.995,
            n_min_per_ue=np.full(k, 1000.0),
            n_max_per_ue=np.full(k, 50000.0),
            p_min_per_ue_w=np.full(k, 0.00316),
            p_max_per_ue_w=np.full(k, 1.0),
        )
        gp = build_gp(spec)
        assert gp.n_vars == 60
        assert gp.n_constraints == 32
        assert gp.lower.shape == (60,)
