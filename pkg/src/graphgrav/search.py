"""Numerical solving of the tree equations of motion and derivative-free
extremal-action search under fixed boundary data.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .action import action_plain
from .dynamics import Setting, _residual_raw, interior_edges, is_tree
from .errors import BadParams, NoFreeEdges, NotATree, SingularJacobian
from .graph import GeodesicTable, WeightedGraph, edge_key

LOG_LENGTH_LO = math.log(1e-6)
LOG_LENGTH_HI = math.log(1e3)
FD_STEP = 1e-6
MAX_DAMPINGS = 30
MAX_LOG_STEP = 1.0  # trust region in log-length space
LOG_GUARD = 60.0  # beyond this the lengths are numerically meaningless


@dataclass(frozen=True)
class SearchResult:
    setting: Setting
    objective: float
    iterations: int
    converged: bool
    restarts_used: int
    at_box_boundary: bool = False


def newton_solve_teom(
    g: WeightedGraph,
    boundary: Setting,
    init: Setting,
    tol: float = 1e-12,
    max_iter: int = 200,
    restarts: int = 0,
    seed: int = 42,
) -> SearchResult:
    """Damped Newton on the log-lengths of the non-fixed interior edges.

    ``boundary`` must fix at least every non-interior edge; fixing interior
    edges as well is allowed and leaves an overdetermined system, solved in
    the least-squares sense.  Residuals of every interior edge must drop
    below tol for convergence; the objective reported is the final maximum
    absolute residual.

    Free lengths are confined to [1e-6, 1e3].  The truncated equations have
    spurious residual valleys in which a cluster of sibling edges shrinks to
    zero together; their residuals fall below any usable tolerance only
    outside this box, so the box keeps a converged run meaningful.  When the
    run from ``init`` stalls, up to ``restarts`` fresh starts are taken near
    the scale of the boundary data.
    """
    if not is_tree(g):
        raise NotATree("the equations of motion are solved on trees only")
    interior = [edge_key(u, v) for u, v in interior_edges(g)]
    interior_set = set(interior)
    edge_keys = set(g.lengths())
    for key in edge_keys:
        if key not in interior_set and key not in boundary:
            raise BadParams(f"boundary must fix non-interior edge {key!r}")
    free = [key for key in interior if key not in boundary]
    fixed = {key: boundary[key] for key in boundary.lengths if key in edge_keys}

    x0 = np.array([math.log(init[key]) for key in free]) if free else np.zeros(0)
    if x0.size and (np.min(x0) < LOG_LENGTH_LO or np.max(x0) > LOG_LENGTH_HI):
        raise BadParams("initial free lengths must lie within [1e-6, 1e3]")
    result = _newton_run(g, interior, free, fixed, x0, tol, max_iter)
    used = 0
    if not result[2] and free and restarts > 0:
        rng = np.random.default_rng(seed)
        anchor = float(np.mean([math.log(v) for v in fixed.values()])) if fixed else 0.0
        for _ in range(restarts):
            used += 1
            spread = rng.uniform(-0.3, 0.3, size=len(free))
            retry = _newton_run(g, interior, free, fixed, anchor + spread, tol, max_iter)
            if retry[2]:
                result = retry
                break
            if retry[1] < result[1]:
                result = retry
    x, worst, converged, iterations = result[0], result[1], result[2], result[3]
    lengths = dict(fixed)
    for k, key in enumerate(free):
        lengths[key] = math.exp(float(x[k]))
    return SearchResult(
        setting=Setting(lengths),
        objective=worst,
        iterations=iterations,
        converged=converged,
        restarts_used=used,
    )


def _newton_run(g, interior, free, fixed, x0, tol, max_iter):
    """One damped Newton descent; returns (x, max_abs_residual, converged, iters)."""

    def residual_vec(x):
        if x.size and (np.min(x) < LOG_LENGTH_LO or np.max(x) > LOG_LENGTH_HI):
            return None
        lengths = dict(fixed)
        for k, key in enumerate(free):
            lengths[key] = math.exp(x[k])
        return np.array([_residual_raw(g, lengths, u, v) for u, v in interior])

    x = np.asarray(x0, dtype=float)
    res = residual_vec(x)
    if res is None:
        raise BadParams("initial lengths out of the search box")
    iterations = 0
    converged = bool(np.max(np.abs(res), initial=0.0) < tol)
    while not converged and iterations < max_iter and free:
        jac = _fd_jacobian(residual_vec, x, res.size)
        if jac is None or not np.all(np.isfinite(jac)):
            break  # walked against the box: report non-convergence
        try:
            if jac.shape[0] == jac.shape[1]:
                step = np.linalg.solve(jac, -res)
            else:
                step, *_ = np.linalg.lstsq(jac, -res, rcond=None)
        except np.linalg.LinAlgError as exc:
            try:
                step, *_ = np.linalg.lstsq(jac, -res, rcond=None)
            except np.linalg.LinAlgError:
                raise SingularJacobian("cannot solve the Newton system") from exc
        biggest = float(np.max(np.abs(step), initial=0.0))
        if biggest > MAX_LOG_STEP:
            step = step * (MAX_LOG_STEP / biggest)
        norm0 = float(np.linalg.norm(res))
        lam = 1.0
        improved = False
        for _ in range(MAX_DAMPINGS):
            trial = x + lam * step
            trial_res = residual_vec(trial)
            if trial_res is not None and float(np.linalg.norm(trial_res)) < norm0:
                x, res = trial, trial_res
                improved = True
                break
            lam *= 0.5
        iterations += 1
        if not improved:
            break
        converged = bool(np.max(np.abs(res)) < tol)
    worst = float(np.max(np.abs(res), initial=0.0))
    return x, worst, converged and worst < tol, iterations


def _fd_jacobian(fun, x, n_out):
    jac = np.zeros((n_out, x.size))
    for k in range(x.size):
        bumped = x.copy()
        bumped[k] += FD_STEP
        hi = fun(bumped)
        bumped[k] -= 2.0 * FD_STEP
        lo = fun(bumped)
        if hi is None or lo is None:
            return None
        jac[:, k] = (hi - lo) / (2.0 * FD_STEP)
    return jac


def extremize_action(
    g: WeightedGraph,
    fixed: Setting | None,
    objective: str = "max",
    restarts: int = 20,
    seed: int = 42,
) -> SearchResult:
    """Nelder-Mead over the log-lengths of the free edges, restarted from
    random interior points of the box [1e-6, 1e3].

    The action is invariant under a common rescaling of all lengths, so the
    best setting is reported with its geometric mean normalized to 1 when
    every edge is free.
    """
    if objective not in ("max", "min"):
        raise BadParams(f"objective must be 'max' or 'min', got {objective}")
    fixed_map = dict(fixed.lengths) if fixed is not None else {}
    free = [key for key in g.edges if key not in fixed_map]
    if not free:
        raise NoFreeEdges("no free edges to vary")
    sign = -1.0 if objective == "max" else 1.0

    def value(x):
        if np.any(x < LOG_LENGTH_LO) or np.any(x > LOG_LENGTH_HI):
            return 1e9
        lengths = dict(fixed_map)
        for k, key in enumerate(free):
            lengths[key] = math.exp(float(x[k]))
        g2 = g.with_lengths(lengths)
        geo = GeodesicTable(g2)
        return sign * action_plain(g2, geo).total

    rng = np.random.default_rng(seed)
    best = None
    best_x = None
    evals = 0
    for _ in range(max(1, restarts)):
        x0 = rng.uniform(math.log(0.2), math.log(5.0), size=len(free))
        out = optimize.minimize(
            value,
            x0,
            method="Nelder-Mead",
            options={"xatol": 1e-8, "fatol": 1e-12, "maxfev": 10_000},
        )
        evals += out.nfev
        if best is None or out.fun < best:
            best = out.fun
            best_x = out.x
    # gauge-fix: common rescaling leaves the action unchanged
    if not fixed_map:
        best_x = best_x - np.mean(best_x)
    at_edge = bool(
        np.any(best_x < LOG_LENGTH_LO + 1e-6) or np.any(best_x > LOG_LENGTH_HI - 1e-6)
    )
    lengths = dict(fixed_map)
    for k, key in enumerate(free):
        lengths[key] = math.exp(float(best_x[k]))
    setting = Setting(lengths)
    g2 = g.with_lengths(lengths)
    achieved = action_plain(g2, GeodesicTable(g2)).total
    return SearchResult(
        setting=setting,
        objective=achieved,
        iterations=evals,
        converged=bool(best is not None and best < 1e8),
        restarts_used=max(1, restarts),
        at_box_boundary=at_edge,
    )
