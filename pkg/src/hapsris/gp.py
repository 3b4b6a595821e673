"""Geometric-program machinery: posynomials and a log-space interior-point solver.

A geometric program in positive variables v becomes convex after the change of
variables x = log(v): every posynomial constraint p(v) <= 1 turns into
log-sum-exp(a + E x) <= 0 with affine arguments. The solver below works
directly on that convex form with a primal-dual interior-point method and
reports Karush-Kuhn-Tucker residuals plus the dual multipliers.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class InfeasibleProblem(Exception):
    """Phase-I certificate: no strictly feasible point exists."""

    def __init__(self, message: str, certificate: float | None = None):
        super().__init__(message)
        self.certificate = certificate


class SolverFailure(Exception):
    """Iteration cap hit before reaching the requested KKT residual."""

    def __init__(self, message: str, best_x: np.ndarray, residual: float):
        super().__init__(message)
        self.best_x = best_x
        self.residual = residual


@dataclass(frozen=True)
class Posynomial:
    """Sum of monomials c_j * prod_i v_i^(E_ji) with c_j > 0.

    Stored as log-coefficients so the log-space value is a plain log-sum-exp.
    """

    log_coeffs: np.ndarray  # shape (m,)
    exponents: np.ndarray  # shape (m, n)

    @staticmethod
    def from_terms(coeffs, exponents) -> "Posynomial":
        c = np.asarray(coeffs, dtype=float)
        e = np.atleast_2d(np.asarray(exponents, dtype=float))
        if np.any(c <= 0):
            raise ValueError("posynomial coefficients must be positive")
        if c.shape[0] != e.shape[0]:
            raise ValueError("one exponent row per coefficient required")
        return Posynomial(np.log(c), e)

    @property
    def n_monomials(self) -> int:
        return self.log_coeffs.shape[0]


class SmoothConvexFn:
    """f(x) = logsumexp(a + E x) + c.x + d with value/gradient/Hessian.

    Degenerates to an affine function when the log-sum-exp part is empty.
    """

    def __init__(self, a=None, E=None, c=None, d: float = 0.0, n_vars: int | None = None):
        if a is None:
            if n_vars is None:
                raise ValueError("n_vars required for a pure affine function")
            self.a = np.zeros(0)
            self.E = np.zeros((0, n_vars))
        else:
            self.a = np.asarray(a, dtype=float)
            self.E = np.atleast_2d(np.asarray(E, dtype=float))
        n = self.E.shape[1]
        self.c = np.zeros(n) if c is None else np.asarray(c, dtype=float)
        self.d = float(d)

    @staticmethod
    def from_posynomial(p: Posynomial, offset: float = 0.0) -> "SmoothConvexFn":
        return SmoothConvexFn(a=p.log_coeffs, E=p.exponents, d=offset)

    def _softmax(self, x: np.ndarray) -> tuple[float, np.ndarray]:
        u = self.a + self.E @ x
        umax = np.max(u)
        w = np.exp(u - umax)
        z = np.sum(w)
        return umax + np.log(z), w / z

    def value(self, x: np.ndarray) -> float:
        base = self.c @ x + self.d
        if self.a.size == 0:
            return base
        lse, _ = self._softmax(x)
        return lse + base

    def grad(self, x: np.ndarray) -> np.ndarray:
        if self.a.size == 0:
            return self.c.copy()
        _, s = self._softmax(x)
        return self.E.T @ s + self.c

    def hess(self, x: np.ndarray) -> np.ndarray:
        n = self.E.shape[1]
        if self.a.size == 0:
            return np.zeros((n, n))
        _, s = self._softmax(x)
        weighted = self.E * s[:, None]
        g = self.E.T @ s
        return weighted.T @ self.E - np.outer(g, g)

    def extend(self, extra_cols: int, s_coeff: float = 0.0) -> "SmoothConvexFn":
        """Same function on (x, extra) variables, plus s_coeff * last variable."""
        m, n = self.E.shape
        e = np.hstack([self.E, np.zeros((m, extra_cols))])
        c = np.concatenate([self.c, np.zeros(extra_cols)])
        if extra_cols:
            c[-1] += s_coeff
        return SmoothConvexFn(a=self.a if self.a.size else None, E=e if self.a.size else None,
                              c=c, d=self.d, n_vars=n + extra_cols)


@dataclass
class GpProblem:
    """min sum_t log p_t(x)  s.t.  log p_i(x) <= 0, lower <= x <= upper (log-space)."""

    objective: list[Posynomial]
    constraints: list[Posynomial]
    lower: np.ndarray
    upper: np.ndarray

    @property
    def n_vars(self) -> int:
        return self.lower.shape[0]

    @property
    def n_constraints(self) -> int:
        return len(self.constraints)


@dataclass
class IpmResult:
    x: np.ndarray
    multipliers: np.ndarray  # ordered as the constraint list passed to the solver
    kkt_residual: float
    n_iterations: int


def _bound_constraints(lower: np.ndarray, upper: np.ndarray) -> list[SmoothConvexFn]:
    n = lower.shape[0]
    fns = []
    for j in range(n):
        up = np.zeros(n)
        up[j] = 1.0
        fns.append(SmoothConvexFn(c=up, d=-upper[j], n_vars=n))
        fns.append(SmoothConvexFn(c=-up, d=lower[j], n_vars=n))
    return fns


def _solve_kkt(S: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    ridge = 0.0
    for _ in range(8):
        try:
            L = np.linalg.cholesky(S + ridge * np.eye(S.shape[0]))
            y = np.linalg.solve(L, rhs)
            return np.linalg.solve(L.T, y)
        except np.linalg.LinAlgError:
            ridge = max(ridge * 100.0, 1e-12)
    return np.linalg.lstsq(S, rhs, rcond=None)[0]


def _interior_point(
    objective_terms: list[SmoothConvexFn],
    constraints: list[SmoothConvexFn],
    x0: np.ndarray,
    tol: float,
    max_iter: int,
    stop_early=None,
):
    """Primal-dual interior-point loop; requires a strictly feasible x0.

    Returns (x, lam, kkt_residual, iterations, converged).
    """
    mu, alpha, beta = 10.0, 0.1, 0.5
    m = len(constraints)
    x = x0.copy()

    def eval_constraints(xv):
        return np.array([f.value(xv) for f in constraints])

    fvals = eval_constraints(x)
    if np.any(fvals >= 0):
        raise ValueError("interior-point start must be strictly feasible")
    lam = 1.0 / (-fvals)

    def residuals(xv, lamv, fv, t):
        g0 = sum(f.grad(xv) for f in objective_terms)
        J = np.array([f.grad(xv) for f in constraints])
        r_dual = g0 + J.T @ lamv
        r_cent = -lamv * fv - 1.0 / t
        return r_dual, r_cent, J

    best = (x.copy(), lam.copy(), np.inf)
    for it in range(1, max_iter + 1):
        eta = float(-fvals @ lam)
        t = mu * m / max(eta, 1e-300)
        r_dual, r_cent, J = residuals(x, lam, fvals, t)
        kkt = max(float(np.linalg.norm(r_dual, np.inf)), eta)
        if kkt < best[2]:
            best = (x.copy(), lam.copy(), kkt)
        if kkt <= tol:
            return x, lam, kkt, it, True
        if stop_early is not None and stop_early(x):
            return x, lam, kkt, it, True

        H = sum(f.hess(x) for f in objective_terms)
        for lam_i, f in zip(lam, constraints):
            if f.a.size:
                H = H + lam_i * f.hess(x)
        S = H + J.T @ ((lam / (-fvals))[:, None] * J)
        rhs = -(r_dual + J.T @ (r_cent / fvals))
        dx = _solve_kkt(S, rhs)
        dlam = r_cent / fvals - (lam / fvals) * (J @ dx)

        step = 1.0
        neg = dlam < 0
        if np.any(neg):
            step = min(1.0, 0.99 * float(np.min(-lam[neg] / dlam[neg])))
        norm0 = np.sqrt(float(r_dual @ r_dual + r_cent @ r_cent))
        accepted = False
        for _ in range(60):
            x_new = x + step * dx
            lam_new = lam + step * dlam
            f_new = eval_constraints(x_new)
            if np.all(f_new < 0) and np.all(lam_new > 0):
                rd, rc, _ = residuals(x_new, lam_new, f_new, t)
                if np.sqrt(float(rd @ rd + rc @ rc)) <= (1.0 - alpha * step) * norm0:
                    accepted = True
                    break
            step *= beta
        if not accepted:
            # Newton direction exhausted; report the best iterate seen.
            return best[0], best[1], best[2], it, False
        x, lam, fvals = x_new, lam_new, f_new

    return best[0], best[1], best[2], max_iter, False


def _phase_one(
    constraints: list[SmoothConvexFn],
    bounds_fns: list[SmoothConvexFn],
    x0: np.ndarray,
    tol: float,
    max_iter: int,
) -> np.ndarray:
    """Find a strictly feasible point or raise InfeasibleProblem.

    Minimizes an extra slack s over {f_i(x) <= s, bounds}; any iterate with
    max_i f_i(x) < 0 ends the search.
    """
    n = x0.shape[0]
    start_vals = np.array([f.value(x0) for f in constraints])
    if np.all(start_vals < 0):
        return x0
    shifted = [f.extend(1, s_coeff=-1.0) for f in constraints]
    shifted += [f.extend(1) for f in bounds_fns]
    s_obj = SmoothConvexFn(c=np.eye(n + 1)[-1], n_vars=n + 1)
    s0 = float(np.max(start_vals)) + 1.0
    x_ext = np.concatenate([x0, [s0]])

    def feasible_now(x_full):
        vals = [f.value(x_full[:n]) for f in constraints]
        return max(vals) < -10 * tol

    x_res, _, _, _, _ = _interior_point(
        [s_obj], shifted, x_ext, tol=tol, max_iter=max_iter, stop_early=feasible_now
    )
    vals = np.array([f.value(x_res[:n]) for f in constraints])
    if np.max(vals) >= 0:
        raise InfeasibleProblem(
            "infeasible: no point satisfies the rate and budget constraints "
            f"(phase-I certificate slack {float(np.max(vals)):.3e})",
            certificate=float(np.max(vals)),
        )
    return x_res[:n]


def _projected_gradient_warm_start(
    objective_terms, constraints, lower, upper, x0, iters: int = 300
) -> np.ndarray:
    """Crude penalized descent used to restart the interior point on failure."""
    rho = 1e4
    x = np.clip(x0, lower + 1e-9, upper - 1e-9)

    def penalized(xv):
        val = sum(f.value(xv) for f in objective_terms)
        grad = sum(f.grad(xv) for f in objective_terms)
        for f in constraints:
            v = f.value(xv) + 1e-6
            if v > 0:
                val += rho * v * v
                grad = grad + 2.0 * rho * v * f.grad(xv)
        return val, grad

    val, grad = penalized(x)
    step = 1.0
    for _ in range(iters):
        x_try = np.clip(x - step * grad, lower + 1e-9, upper - 1e-9)
        val_try, grad_try = penalized(x_try)
        if val_try < val - 1e-12:
            x, val, grad = x_try, val_try, grad_try
            step = min(step * 1.5, 1e3)
        else:
            step *= 0.5
            if step < 1e-14:
                break
    return x


def solve_gp(gp: GpProblem, tol: float = 1e-6, max_iter: int = 500) -> IpmResult:
    """Solve the log-space convex form of `gp` to a KKT residual <= tol.

    Raises InfeasibleProblem when phase I certifies the constraint set empty,
    SolverFailure when the iteration cap is hit short of the tolerance.
    Multipliers are ordered: gp.constraints, then upper/lower bound pairs per
    variable.
    """
    n = gp.n_vars
    lower, upper = gp.lower.astype(float).copy(), gp.upper.astype(float).copy()
    if np.any(upper < lower):
        raise ValueError("upper bounds below lower bounds")
    # Degenerate boxes get a hair of width so an interior exists.
    tight = upper - lower < 1e-9
    upper[tight] += 1e-9

    obj = [SmoothConvexFn.from_posynomial(p) for p in gp.objective]
    cons = [SmoothConvexFn.from_posynomial(p) for p in gp.constraints]
    bounds_fns = _bound_constraints(lower, upper)

    x_mid = 0.5 * (lower + upper)
    x0 = _phase_one(cons, bounds_fns, x_mid, tol=tol, max_iter=max_iter)
    all_cons = cons + bounds_fns

    x, lam, kkt, iters, ok = _interior_point(obj, all_cons, x0, tol=tol, max_iter=max_iter)
    if not ok:
        x_warm = _projected_gradient_warm_start(obj, all_cons, lower, upper, x)
        fvals = np.array([f.value(x_warm) for f in all_cons])
        if np.all(fvals < 0):
            x2, lam2, kkt2, it2, ok = _interior_point(
                obj, all_cons, x_warm, tol=tol, max_iter=max_iter
            )
            if kkt2 < kkt:
                x, lam, kkt, iters = x2, lam2, kkt2, iters + it2
    if not ok and kkt > tol:
        raise SolverFailure(
            f"max-iterations: KKT residual {kkt:.3e} above tolerance {tol:.1e}",
            best_x=x,
            residual=kkt,
        )
    return IpmResult(x=x, multipliers=lam, kkt_residual=kkt, n_iterations=iters)
