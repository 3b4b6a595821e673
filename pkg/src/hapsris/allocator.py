"""Sum-rate maximization over per-user transmit power and element counts.

The problem maximizes sum_k B*log2(1 + gamma_k) under per-user rate floors,
element/power budgets and per-user boxes. With the reflection gain fixed, the
inverse SNR of each user is a two-monomial posynomial in (N_k, P_k), so the
product-SNR relaxation is a geometric program; the continuous optimum is then
rounded up and repaired to an integer element allocation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .gp import GpProblem, IpmResult, Posynomial, solve_gp as _solve_log_space


@dataclass(frozen=True)
class ProblemSpec:
    """Coefficients and limits of one allocation problem.

    cascade_gain is the per-user linear two-hop element gain |h|^2*|g_k|^2;
    noise_gain is |g_k|^2 * sigma_z^2 (zero for a passive surface). The
    reflection gain may be a scalar (one amplifier setting for the whole
    surface) or per-UE.
    """

    cascade_gain: np.ndarray
    noise_gain: np.ndarray
    noise_floor_w: float
    beta: float | np.ndarray
    n_max: int
    p_max_w: float
    n_min_per_ue: np.ndarray
    n_max_per_ue: np.ndarray
    p_min_per_ue_w: np.ndarray
    p_max_per_ue_w: np.ndarray
    gamma_min: float
    bandwidth_hz: float

    def __post_init__(self) -> None:
        k = len(self.cascade_gain)
        arrays = {
            "cascade_gain": np.asarray(self.cascade_gain, dtype=float),
            "noise_gain": np.asarray(self.noise_gain, dtype=float),
            "n_min_per_ue": np.asarray(self.n_min_per_ue, dtype=float),
            "n_max_per_ue": np.asarray(self.n_max_per_ue, dtype=float),
            "p_min_per_ue_w": np.asarray(self.p_min_per_ue_w, dtype=float),
            "p_max_per_ue_w": np.asarray(self.p_max_per_ue_w, dtype=float),
        }
        for name, arr in arrays.items():
            if arr.shape != (k,):
                raise ValueError(f"{name} must have one entry per UE")
            object.__setattr__(self, name, arr)
        if k == 0:
            raise ValueError("at least one UE required")
        if np.any(arrays["cascade_gain"] <= 0):
            raise ValueError("cascade gains must be positive")
        if np.any(arrays["noise_gain"] < 0):
            raise ValueError("noise gains must be >= 0")
        beta = np.broadcast_to(np.asarray(self.beta, dtype=float), (k,)).copy()
        object.__setattr__(self, "beta", beta)
        if self.noise_floor_w <= 0 or np.any(beta <= 0):
            raise ValueError("noise floor and reflection gain must be positive")
        if self.gamma_min <= 0:
            raise ValueError("gamma_min must be positive")
        if self.bandwidth_hz <= 0:
            raise ValueError("bandwidth must be positive")
        if np.any(arrays["n_min_per_ue"] < 1) or np.any(arrays["p_min_per_ue_w"] <= 0):
            raise ValueError("per-UE lower limits must be positive")
        if np.any(arrays["n_max_per_ue"] < arrays["n_min_per_ue"]) or np.any(
            arrays["p_max_per_ue_w"] < arrays["p_min_per_ue_w"]
        ):
            raise ValueError("per-UE boxes must be non-empty")
        if arrays["n_min_per_ue"].sum() > self.n_max or arrays["p_min_per_ue_w"].sum() > self.p_max_w:
            raise ValueError("box budgets exceed totals")

    @property
    def n_ues(self) -> int:
        return len(self.cascade_gain)


@dataclass
class RelaxedSolution:
    """Continuous optimum of the geometric-program relaxation."""

    n_elements: np.ndarray
    tx_power_w: np.ndarray
    multipliers: np.ndarray
    kkt_residual: float
    n_iterations: int


@dataclass
class Allocation:
    """Integer-element allocation with evaluated SNRs and rates."""

    n_elements: np.ndarray
    tx_power_w: np.ndarray
    gamma: np.ndarray
    rate_bps: np.ndarray
    sum_rate_bps: float
    feasible: bool
    kkt_residual: float


@dataclass
class ConstraintReport:
    """Signed slacks of every constraint, recomputed from scratch."""

    ok: bool
    sum_rate_bps: float
    rate_slack: np.ndarray
    n_budget_slack: float
    p_budget_slack: float
    n_box_low_slack: np.ndarray
    n_box_high_slack: np.ndarray
    p_box_low_slack: np.ndarray
    p_box_high_slack: np.ndarray


def gamma_min_from_rate(r_th_bps: float, bandwidth_hz: float) -> float:
    """SNR floor equivalent to a rate floor: 2^(R/B) - 1."""
    if r_th_bps < 0:
        raise ValueError("rate threshold must be >= 0")
    if bandwidth_hz <= 0:
        raise ValueError("bandwidth must be positive")
    return 2.0 ** (r_th_bps / bandwidth_hz) - 1.0


def snr_values(spec: ProblemSpec, n: np.ndarray, p: np.ndarray) -> np.ndarray:
    """Closed-form per-UE SNR at allocation (n, p)."""
    b2 = np.asarray(spec.beta) ** 2
    signal = p * b2 * n * n * spec.cascade_gain
    noise = b2 * n * spec.noise_gain + spec.noise_floor_w
    return signal / noise


def rate_values(spec: ProblemSpec, gamma: np.ndarray) -> np.ndarray:
    return spec.bandwidth_hz * np.log2(1.0 + gamma)


def build_gp(spec: ProblemSpec) -> GpProblem:
    """Posynomial form: minimize prod_k 1/gamma_k over (N_k, P_k).

    Variables are ordered [N_1..N_K, P_1..P_K] in log space. Constraints are
    the K rate floors and the two budget sums; the per-UE boxes become
    variable bounds.
    """
    k = spec.n_ues
    n_vars = 2 * k
    b2 = np.asarray(spec.beta) ** 2

    def inv_snr_posynomial(i: int, scale: float) -> Posynomial:
        coeffs, expo = [], []
        if spec.noise_gain[i] > 0:
            c = spec.noise_gain[i] / spec.cascade_gain[i]
            row = np.zeros(n_vars)
            row[i] = -1.0
            row[k + i] = -1.0
            coeffs.append(scale * c)
            expo.append(row)
        c = spec.noise_floor_w / (spec.cascade_gain[i] * b2[i])
        row = np.zeros(n_vars)
        row[i] = -2.0
        row[k + i] = -1.0
        coeffs.append(scale * c)
        expo.append(row)
        return Posynomial.from_terms(coeffs, np.array(expo))

    objective = [inv_snr_posynomial(i, 1.0) for i in range(k)]
    constraints = [inv_snr_posynomial(i, spec.gamma_min) for i in range(k)]

    n_sum = Posynomial.from_terms(
        np.full(k, 1.0 / spec.n_max), np.eye(k, n_vars)
    )
    p_sum = Posynomial.from_terms(
        np.full(k, 1.0 / spec.p_max_w), np.eye(k, n_vars, k=k)
    )
    constraints.extend([n_sum, p_sum])

    lower = np.concatenate([np.log(spec.n_min_per_ue), np.log(spec.p_min_per_ue_w)])
    upper = np.concatenate([np.log(spec.n_max_per_ue), np.log(spec.p_max_per_ue_w)])
    return GpProblem(objective=objective, constraints=constraints, lower=lower, upper=upper)


def solve_gp(gp: GpProblem, tol: float = 1e-6, max_iter: int = 500) -> RelaxedSolution:
    """Continuous optimum of the relaxation via the interior-point solver."""
    result: IpmResult = _solve_log_space(gp, tol=tol, max_iter=max_iter)
    k = gp.n_vars // 2
    v = np.exp(result.x)
    return RelaxedSolution(
        n_elements=v[:k],
        tx_power_w=v[k:],
        multipliers=result.multipliers,
        kkt_residual=result.kkt_residual,
        n_iterations=result.n_iterations,
    )


def round_and_repair(rel: RelaxedSolution, spec: ProblemSpec) -> Allocation:
    """Ceil the continuous element counts, then shed overflow.

    When the ceilings exceed the element budget, the UEs with the largest
    fractional slack (ceil(N*) - N*, ties by ascending index) give back one
    element each, never dropping below the per-UE floor or the rate floor.
    """
    n_star = rel.n_elements
    p = rel.tx_power_w.copy()
    n = np.ceil(n_star - 1e-9).astype(np.int64).astype(float)
    n = np.maximum(n, spec.n_min_per_ue)

    feasible = True
    overflow = int(n.sum() - spec.n_max)
    if overflow > 0:
        slack = np.ceil(n_star - 1e-9) - n_star
        order = sorted(range(spec.n_ues), key=lambda i: (-slack[i], i))
        # Rate floor kept with a hair of margin so recomputation stays >= 0.
        guard = spec.gamma_min * (1.0 + 1e-9)
        progress = True
        while overflow > 0 and progress:
            progress = False
            for i in order:
                if overflow == 0:
                    break
                if n[i] - 1 < spec.n_min_per_ue[i]:
                    continue
                trial = n.copy()
                trial[i] -= 1
                if snr_values(spec, trial, p)[i] < guard:
                    continue
                n = trial
                overflow -= 1
                progress = True
        if overflow > 0:
            feasible = False

    gamma = snr_values(spec, n, p)
    rates = rate_values(spec, gamma)
    feasible = feasible and _constraints_hold(spec, n, p, gamma)
    return Allocation(
        n_elements=n.astype(np.int64),
        tx_power_w=p,
        gamma=gamma,
        rate_bps=rates,
        sum_rate_bps=float(rates.sum()),
        feasible=feasible,
        kkt_residual=rel.kkt_residual,
    )


def _constraints_hold(spec: ProblemSpec, n, p, gamma) -> bool:
    return bool(
        np.all(gamma >= spec.gamma_min * (1.0 - 1e-12))
        and n.sum() <= spec.n_max
        and p.sum() <= spec.p_max_w * (1.0 + 1e-12)
        and np.all(n >= spec.n_min_per_ue)
        and np.all(n <= spec.n_max_per_ue)
        and np.all(p >= spec.p_min_per_ue_w * (1.0 - 1e-12))
        and np.all(p <= spec.p_max_per_ue_w * (1.0 + 1e-12))
    )


def certify(alloc: Allocation, spec: ProblemSpec) -> ConstraintReport:
    """Re-evaluate every constraint and the sum rate from scratch.

    Deliberately written against the inverse-SNR expression, a separate code
    path from the solver and from `snr_values`, so a bug in either side shows
    up as a slack disagreement.
    """
    k = spec.n_ues
    b2 = np.asarray(spec.beta) ** 2
    gammas = np.empty(k)
    for i in range(k):
        inv = spec.noise_floor_w / (spec.cascade_gain[i] * b2[i] * alloc.tx_power_w[i] * alloc.n_elements[i] ** 2)
        if spec.noise_gain[i] > 0:
            inv += spec.noise_gain[i] / (
                spec.cascade_gain[i] * alloc.tx_power_w[i] * alloc.n_elements[i]
            )
        gammas[i] = 1.0 / inv
    rates = np.array([spec.bandwidth_hz * math.log2(1.0 + g) for g in gammas])

    report = ConstraintReport(
        ok=True,
        sum_rate_bps=float(rates.sum()),
        rate_slack=gammas - spec.gamma_min,
        n_budget_slack=float(spec.n_max - alloc.n_elements.sum()),
        p_budget_slack=float(spec.p_max_w - alloc.tx_power_w.sum()),
        n_box_low_slack=alloc.n_elements - spec.n_min_per_ue,
        n_box_high_slack=spec.n_max_per_ue - alloc.n_elements,
        p_box_low_slack=alloc.tx_power_w - spec.p_min_per_ue_w,
        p_box_high_slack=spec.p_max_per_ue_w - alloc.tx_power_w,
    )
    slack_arrays = [
        report.rate_slack,
        np.array([report.n_budget_slack, report.p_budget_slack]),
        report.n_box_low_slack,
        report.n_box_high_slack,
        report.p_box_low_slack,
        report.p_box_high_slack,
    ]
    report.ok = all(np.all(s >= 0) for s in slack_arrays)
    return report
