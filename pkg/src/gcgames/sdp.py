"""Feasibility and linear-objective optimization over small dense LMIs.

A constraint is an affine symmetric-matrix function

    F(x) = F0 + sum_v x_v * F_v   required  F(x) <= 0   (negative semidefinite)

with a handful of scalar variables.  Two entry points are provided:

``solve_feasibility``
    Maximizes the uniform negative-definiteness margin t subject to
    F_k(x) + t*I <= 0 for every constraint, using a log-det barrier
    interior-point method.  The achieved margin doubles as a certificate:
    a maximized margin at or below zero means the system is infeasible.

``minimize_linear``
    Phase 1 runs the margin maximization to obtain a strictly feasible
    start, phase 2 follows the central path of  min c'x  over the margin-
    shifted constraint set.

Matrix variables are expected to be pre-flattened by the caller into their
upper-triangle scalar entries (see :func:`gcgames.linalg.pack_upper`), so the
solver only ever sees scalar decision variables.  Every verdict reported in a
solution is re-checked with the package's own Jacobi eigensolver rather than
solver internals.
"""

from dataclasses import dataclass, field

import numpy as np

from . import linalg

__all__ = [
    "AffineMatrixFunction",
    "LmiProblem",
    "LmiSolution",
    "SolverOptions",
    "solve_feasibility",
    "minimize_linear",
    "evaluate_margin",
]

# Wide containment box applied to any variable without explicit bounds; keeps
# the margin maximization bounded when the feasible set has a recession cone.
_DEFAULT_BOX = 1e7
_MARGIN_CAP = 1e6


@dataclass
class AffineMatrixFunction:
    """F(x) = constant + sum of x_v * coefficient_v, all symmetric, one dim."""

    constant: np.ndarray
    terms: list = field(default_factory=list)  # list of (name, matrix)

    def __post_init__(self):
        self.constant = linalg.require_symmetric(self.constant)
        seen = set()
        normalized = []
        for name, coeff in self.terms:
            coeff = linalg.require_symmetric(coeff)
            if coeff.shape != self.constant.shape:
                raise ValueError(
                    f"coefficient for {name!r} has shape {coeff.shape}, "
                    f"expected {self.constant.shape}"
                )
            if name in seen:
                raise ValueError(f"duplicate variable {name!r} in term list")
            seen.add(name)
            normalized.append((name, coeff))
        self.terms = normalized

    @property
    def dim(self):
        return self.constant.shape[0]

    def variables(self):
        return tuple(name for name, _ in self.terms)

    def evaluate(self, values):
        """Numeric value of F at ``values`` (mapping name -> float)."""
        out = self.constant.copy()
        for name, coeff in self.terms:
            out += float(values[name]) * coeff
        return out


@dataclass
class LmiProblem:
    """A conjunction of matrix constraints F_k(x) <= 0 with scalar bounds.

    bounds maps a variable name to (lower, upper); either end may be None.
    objective, when present, maps variable names to linear cost coefficients.
    """

    constraints: list
    bounds: dict = field(default_factory=dict)
    objective: dict | None = None

    def __post_init__(self):
        if not self.constraints:
            raise ValueError("an LmiProblem needs at least one constraint")
        referenced = set()
        for c in self.constraints:
            referenced.update(c.variables())
        for name in self.bounds:
            if name not in referenced:
                raise ValueError(f"bound on {name!r}, which no constraint references")
        if self.objective:
            for name in self.objective:
                if name not in referenced:
                    raise ValueError(
                        f"objective term on {name!r}, which no constraint references"
                    )

    def variables(self):
        names = set()
        for c in self.constraints:
            names.update(c.variables())
        return tuple(sorted(names))


@dataclass
class LmiSolution:
    """Solver outcome.

    margin is the re-checked uniform margin: the most positive eigenvalue
    across all constraints at ``values``, negated (so feasible points have
    margin > 0).  For infeasible problems it is the best margin the
    maximization could certify (<= 0 for genuinely infeasible systems).
    """

    values: dict
    margin: float
    status: str  # "feasible" | "infeasible-to-tolerance" | "numerical-failure"
    iterations: int
    objective_value: float | None = None
    gap: float | None = None


@dataclass
class SolverOptions:
    strictness: float = 1e-8
    gap_abs: float = 1e-10
    gap_rel: float = 1e-8
    barrier_factor: float = 20.0
    max_newton: int = 400
    inner_tol: float = 1e-11


class _Block:
    """One barrier term: S(y) = -(F0 + sum y_i F_i) - shift*I must stay PD."""

    __slots__ = ("f0", "idx", "mats", "dim")

    def __init__(self, f0, idx, mats, shift=0.0):
        self.f0 = f0 + shift * np.eye(f0.shape[0])
        self.idx = idx  # variable indices, parallel to mats
        self.mats = mats
        self.dim = f0.shape[0]

    def slack(self, y):
        s = -self.f0.copy()
        for i, mat in zip(self.idx, self.mats):
            s -= y[i] * mat
        return s


def _bound_blocks(names, bounds, nvar_total):
    """Encode scalar bounds lo <= x <= hi as 1x1 barrier blocks."""
    blocks = []
    for j, name in enumerate(names):
        lo, hi = bounds.get(name, (None, None))
        lo = -_DEFAULT_BOX if lo is None else float(lo)
        hi = _DEFAULT_BOX if hi is None else float(hi)
        if lo >= hi:
            raise ValueError(f"empty bound interval for {name!r}: ({lo}, {hi})")
        # lo - x <= 0  and  x - hi <= 0
        blocks.append(_Block(np.array([[lo]]), [j], [np.array([[-1.0]])]))
        blocks.append(_Block(np.array([[-hi]]), [j], [np.array([[1.0]])]))
    return blocks


def _start_point(names, bounds):
    y = np.zeros(len(names))
    for j, name in enumerate(names):
        lo, hi = bounds.get(name, (None, None))
        lo = -_DEFAULT_BOX if lo is None else float(lo)
        hi = _DEFAULT_BOX if hi is None else float(hi)
        step = min(1.0, 0.5 * (hi - lo))
        y[j] = min(max(y[j], lo + step), hi - step)
    return y


def _all_pd(blocks, y):
    for b in blocks:
        s = b.slack(y)
        if b.dim == 1:
            if s[0, 0] <= 0.0:
                return False
            continue
        try:
            np.linalg.cholesky(s)
        except np.linalg.LinAlgError:
            return False
    return True


def _barrier_value(blocks, y):
    total = 0.0
    for b in blocks:
        s = b.slack(y)
        if b.dim == 1:
            if s[0, 0] <= 0.0:
                return np.inf
            total -= np.log(s[0, 0])
            continue
        try:
            L = np.linalg.cholesky(s)
        except np.linalg.LinAlgError:
            return np.inf
        total -= 2.0 * np.sum(np.log(np.diag(L)))
    return total


def _barrier_grad_hess(blocks, y, nvar):
    g = np.zeros(nvar)
    H = np.zeros((nvar, nvar))
    for b in blocks:
        s = b.slack(y)
        if b.dim == 1:
            inv = 1.0 / s[0, 0]
            for i, mat in zip(b.idx, b.mats):
                g[i] += inv * mat[0, 0]
            for a_pos, mat_a in zip(b.idx, b.mats):
                for b_pos, mat_b in zip(b.idx, b.mats):
                    H[a_pos, b_pos] += inv * inv * mat_a[0, 0] * mat_b[0, 0]
            continue
        L = np.linalg.cholesky(s)
        Linv = np.linalg.inv(L)
        ws = [Linv @ mat @ Linv.T for mat in b.mats]
        for i, w in zip(b.idx, ws):
            g[i] += np.trace(w)
        for a_pos, wa in zip(b.idx, ws):
            for b_pos, wb in zip(b.idx, ws):
                H[a_pos, b_pos] += np.sum(wa * wb)
    return g, H


def _newton_minimize(blocks, cost, y, options, t_obj):
    """Minimize t_obj * cost.y + barrier(y); returns (y, newton_steps, ok).

    Convergence is judged by the Newton decrement, with a floor tied to the
    floating-point noise of the composite objective so that very large
    barrier weights terminate cleanly.
    """
    nvar = y.size
    steps = 0
    for _ in range(options.max_newton):
        g_bar, H = _barrier_grad_hess(blocks, y, nvar)
        grad = t_obj * cost + g_bar
        scale = max(np.max(np.abs(np.diag(H))), 1.0)
        delta = None
        reg = 0.0
        for attempt in range(6):
            try:
                delta = np.linalg.solve(H + reg * np.eye(nvar), -grad)
                decrement2 = float(-grad @ delta)
                if decrement2 >= 0.0:
                    break
            except np.linalg.LinAlgError:
                pass
            reg = scale * 1e-14 * 10.0 ** attempt
        else:
            return y, steps, False
        steps += 1
        psi0 = t_obj * float(cost @ y) + _barrier_value(blocks, y)
        noise = 1e-13 * (1.0 + abs(psi0))
        if decrement2 / 2.0 <= max(options.inner_tol, noise):
            return y, steps, True
        alpha = 1.0
        accepted = False
        for _ in range(60):
            trial = y + alpha * delta
            if _all_pd(blocks, trial):
                psi = t_obj * float(cost @ trial) + _barrier_value(blocks, trial)
                if psi <= psi0 - 0.25 * alpha * decrement2 + noise:
                    y = trial
                    accepted = True
                    break
            alpha *= 0.5
        if not accepted:
            # Progress is below floating-point resolution; accept the point
            # if the decrement is already small on the noise scale.
            return y, steps, decrement2 / 2.0 <= max(1e-6, 1e4 * noise)
    return y, steps, False


def evaluate_margin(problem, values):
    """Uniform margin at a point: -(max eigenvalue over all constraints).

    Uses the package Jacobi eigensolver, independent of the barrier solver.
    """
    worst = -np.inf
    for c in problem.constraints:
        worst = max(worst, linalg.max_eigenvalue(c.evaluate(values)))
    return -worst


def _build_blocks(problem, names, with_margin, shift=0.0):
    index = {name: j for j, name in enumerate(names)}
    nvar = len(names) + (1 if with_margin else 0)
    blocks = []
    for c in problem.constraints:
        idx = [index[name] for name, _ in c.terms]
        mats = [coeff for _, coeff in c.terms]
        if with_margin:
            idx = idx + [len(names)]
            mats = mats + [np.eye(c.dim)]
        blocks.append(_Block(np.asarray(c.constant, dtype=float), idx, mats, shift))
    blocks.extend(_bound_blocks(names, problem.bounds, nvar))
    if with_margin:
        # Cap the margin variable so the maximization is always bounded.
        blocks.append(
            _Block(np.array([[-_MARGIN_CAP]]), [len(names)], [np.array([[1.0]])])
        )
    return blocks


def solve_feasibility(problem, strictness=1e-8, options=None, *,
                      _stop_at_margin=None):
    """Maximize the uniform margin and classify feasibility.

    Returns a solution whose ``margin`` is independently re-checked.  Status
    is "feasible" when the margin reaches ``strictness``; otherwise the
    maximized margin itself is the infeasibility certificate.

    ``_stop_at_margin`` is internal: phase 1 of the linear minimization only
    needs a comfortably interior point, not the exact maximum.
    """
    if strictness <= 0:
        raise ValueError("strictness must be positive")
    options = options or SolverOptions()
    names = problem.variables()
    blocks = _build_blocks(problem, names, with_margin=True)

    y = np.zeros(len(names) + 1)
    y[: len(names)] = _start_point(names, problem.bounds)
    worst = max(
        linalg.max_eigenvalue(c.evaluate(dict(zip(names, y))))
        for c in problem.constraints
    )
    y[-1] = min(-worst - 1.0, _MARGIN_CAP - 1.0)

    cost = np.zeros(y.size)
    cost[-1] = -1.0  # maximize t
    degree = sum(b.dim for b in blocks)

    t_obj = 1.0
    total_steps = 0
    ok = True
    while True:
        y, steps, good = _newton_minimize(blocks, cost, y, options, t_obj)
        total_steps += steps
        ok = ok and good
        if _stop_at_margin is not None and y[-1] >= _stop_at_margin:
            break
        gap = degree / t_obj
        if gap <= options.gap_abs + options.gap_rel * (1.0 + abs(y[-1])):
            break
        if t_obj > 1e16:
            ok = False
            break
        t_obj *= options.barrier_factor

    values = dict(zip(names, y[: len(names)].tolist()))
    margin = evaluate_margin(problem, values)
    if not ok:
        status = "numerical-failure"
    elif margin >= strictness:
        status = "feasible"
    else:
        status = "infeasible-to-tolerance"
    return LmiSolution(
        values=values,
        margin=float(margin),
        status=status,
        iterations=total_steps,
        gap=float(degree / t_obj),
    )


def minimize_linear(problem, strictness=1e-8, options=None):
    """Minimize the problem's linear objective over the margin-shifted set.

    The returned point satisfies every constraint with margin at least
    ``strictness``; ``gap`` bounds the objective suboptimality on the shifted
    problem.
    """
    if problem.objective is None:
        raise ValueError("problem has no objective; use solve_feasibility")
    options = options or SolverOptions()

    phase1 = solve_feasibility(
        problem, strictness=strictness, options=options,
        _stop_at_margin=max(1e3 * strictness, 1e-4),
    )
    if phase1.status != "feasible":
        return phase1

    names = problem.variables()
    # Over-shift slightly so the re-checked margin clears ``strictness`` even
    # when the final iterate sits on the shifted boundary to within roundoff.
    blocks = _build_blocks(problem, names, with_margin=False,
                           shift=strictness * 1.02)
    cost = np.zeros(len(names))
    for name, coeff in problem.objective.items():
        cost[names.index(name)] = float(coeff)

    y = np.array([phase1.values[name] for name in names])
    if not _all_pd(blocks, y):
        # Phase-1 maximizer should be interior; if the margin is hairline,
        # report the feasible point without optimizing further.
        return LmiSolution(
            values=phase1.values,
            margin=phase1.margin,
            status="feasible",
            iterations=phase1.iterations,
            objective_value=float(cost @ y),
            gap=None,
        )

    degree = sum(b.dim for b in blocks)
    t_obj = 1.0
    total_steps = phase1.iterations
    ok = True
    while True:
        y, steps, good = _newton_minimize(blocks, cost, y, options, t_obj)
        total_steps += steps
        ok = ok and good
        objective = float(cost @ y)
        gap = degree / t_obj
        if gap <= options.gap_abs + options.gap_rel * (1.0 + abs(objective)):
            break
        if t_obj > 1e16:
            ok = False
            break
        t_obj *= options.barrier_factor

    values = dict(zip(names, y.tolist()))
    margin = evaluate_margin(problem, values)
    status = "feasible" if ok and margin >= strictness * (1.0 - 1e-9) else "numerical-failure"
    return LmiSolution(
        values=values,
        margin=float(margin),
        status=status,
        iterations=total_steps,
        objective_value=float(cost @ y),
        gap=float(degree / t_obj),
    )
