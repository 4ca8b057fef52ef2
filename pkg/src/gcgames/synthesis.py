"""Nash cost-guaranteeing feedback synthesis for the uncertain LQ game.

The design conditions are, per player i with the rival indexed ihat:

* the coupled gain equation

      [[R11 + B1' Pt1 B1,  B1' Pt1 B2 ],   [[K1],    [[B1' Pt1],
       [B2' Pt2 B1,  R22 + B2' Pt2 B2 ]] *  [K2]] = - [B2' Pt2]] * A

* a scalar-multiplier inequality  nu_*Xi0 + tau_*S'S < 0  (blockwise), and

* a five-block matrix inequality in (Pt_i, tau^i, nu^i) that certifies the
  dissipation of player i's cost along the closed loop A + B1 K1 + B2 K2
  for every admissible disturbance.

Given a certified (Pt_i, tau^i, nu^i), the cost matrix P_i is recovered by
inverting  Pt_i = (P_i^{-1} + H Xi^{-1} H')^{-1}  and the guaranteed cost is
x0' P_i x0.  The synthesis loop alternates the gain equation with per-player
trace-minimizing LMI solves until the pair (K, Pt) reaches a fixed point.

Any feasible certificate is a valid upper bound, so the multipliers are a
selection rule, not part of the theory.  Two profiles are provided:

``reference`` (default)
    Holds all multipliers of player i at a fixed level; the shipped levels
    (8.8 for player 1, 4.9 for player 2) were calibrated once so that the
    fiscal-monetary example reproduces its published guaranteed costs.

``tight``
    Treats the multipliers as decision variables of the per-player SDPs and
    afterwards shrinks the certified costs at the initial state of interest
    by golden-section coordinate sweeps.  Bounds are typically several times
    smaller than the reference profile's.
"""

import json
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .game import xi0, check_assumption1, check_assumption2, model_hash
from .sdp import (
    AffineMatrixFunction,
    LmiProblem,
    SolverOptions,
    minimize_linear,
)

__all__ = [
    "Multipliers",
    "GuaranteedSolution",
    "SynthesisOptions",
    "SynthesisError",
    "solve_gain_equation",
    "closed_loop_matrix",
    "multiplier_inequality_matrix",
    "check_multiplier_inequality",
    "player_certificate_matrix",
    "build_player_lmi",
    "scaled_xi",
    "recover_p",
    "synthesize",
    "guaranteed_cost",
    "rollout_costs",
    "solution_to_json",
    "solution_from_json",
]


class SynthesisError(Exception):
    """Synthesis could not produce a certified solution."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


@dataclass
class Multipliers:
    """Positive scalars (one pair per uncertainty block) for one player."""

    tau: np.ndarray
    nu: np.ndarray

    def __post_init__(self):
        self.tau = np.atleast_1d(np.asarray(self.tau, dtype=float))
        self.nu = np.atleast_1d(np.asarray(self.nu, dtype=float))
        if self.tau.shape != self.nu.shape:
            raise ValueError("tau and nu must have one entry per block")
        if np.any(self.tau <= 0) or np.any(self.nu <= 0):
            raise ValueError("multipliers must be strictly positive")


@dataclass
class SynthesisOptions:
    certificate_rule: str = "reference"      # "reference" | "tight"
    reference_levels: tuple = (8.8, 4.9)     # per-player fixed multiplier level
    max_iterations: int = 200
    fixed_point_tol: float = 1e-7
    strictness: float = 1e-8
    multiplier_floor: float = 1e-7
    mu_mode: str = "tau-over-nu"  # or "nu"; see recover_p
    refine_passes: int = 3
    refine_steps: int = 48
    refine_span_decades: float = 2.0
    damping: float = 0.5
    sdp_options: SolverOptions = field(default_factory=SolverOptions)

    def __post_init__(self):
        if self.certificate_rule not in ("reference", "tight"):
            raise ValueError(
                f"unknown certificate rule {self.certificate_rule!r}"
            )


# -- gain equation -----------------------------------------------------------

def solve_gain_equation(model, ptilde1, ptilde2):
    """Solve the coupled linear system for the feedback pair (K1, K2)."""
    b1, b2, a = model.b1, model.b2, model.a
    m1, m2 = model.u1_dim, model.u2_dim
    top = np.hstack([model.r11 + b1.T @ ptilde1 @ b1, b1.T @ ptilde1 @ b2])
    bottom = np.hstack([b2.T @ ptilde2 @ b1, model.r22 + b2.T @ ptilde2 @ b2])
    coeff = np.vstack([top, bottom])
    rhs = -np.vstack([b1.T @ ptilde1, b2.T @ ptilde2]) @ a
    try:
        k = linalg.solve_linear(coeff, rhs)
    except linalg.SingularMatrixError as exc:
        raise SynthesisError(
            "gain equation is singular; the control weights R_ii may be "
            "too small or the certificate matrices collapsed",
            diagnostics={"cond": exc.cond},
        ) from exc
    return k[:m1, :], k[m1:m1 + m2, :]


def closed_loop_matrix(model, k1, k2):
    """A + B1 K1 + B2 K2."""
    return model.a + model.b1 @ k1 + model.b2 @ k2


# -- multiplier scalings -----------------------------------------------------

def _p_scaling(model, scalars):
    """diag over blocks of scalar_j * I_{p_dim_j}."""
    return np.diag(np.concatenate(
        [np.full(b.p_dim, s) for b, s in zip(model.blocks, scalars)]
    ))


def _q_scaling(model, scalars):
    return np.diag(np.concatenate(
        [np.full(b.q_dim, s) for b, s in zip(model.blocks, scalars)]
    ))


def multiplier_inequality_matrix(model, mult):
    """nu_ * Xi0 + tau_ * S0'S0, required negative definite."""
    s0 = model.script_s0()
    return linalg.symmetrize(
        _p_scaling(model, mult.nu) @ xi0(model)
        + _p_scaling(model, mult.tau) @ (s0.T @ s0)
    )


def check_multiplier_inequality(model, mult, margin=1e-10):
    """True iff the scalar-multiplier inequality holds with the given margin."""
    return linalg.is_negative_definite(multiplier_inequality_matrix(model, mult),
                                       margin=margin)


# -- certificate matrix ------------------------------------------------------

def player_certificate_matrix(model, k1, k2, player, ptilde, tau, nu):
    """Numeric value of the five-block certificate matrix for one player.

    Row/column blocks are sized (n_x, n_x, n_p, n_u_i, n_q).  The matrix must
    be negative semidefinite (with margin) for the certificate to hold.
    """
    if player not in (1, 2):
        raise ValueError("player must be 1 or 2")
    tau = np.atleast_1d(np.asarray(tau, dtype=float))
    nu = np.atleast_1d(np.asarray(nu, dtype=float))
    if tau.size != len(model.blocks) or nu.size != len(model.blocks):
        raise ValueError("one (tau, nu) pair per uncertainty block required")

    a_cl = closed_loop_matrix(model, k1, k2)
    h = model.h
    aq = model.aq_stacked()
    s0 = model.script_s0()
    xi0_m = xi0(model)
    tau_p = _p_scaling(model, tau)
    tau_q = _q_scaling(model, tau)
    nu_q = _q_scaling(model, nu)

    if player == 1:
        q_own, r_own, k_own = model.q1, model.r11, k1
        r_cross, k_other = model.r12, k2
    else:
        q_own, r_own, k_own = model.q2, model.r22, k2
        r_cross, k_other = model.r21, k1

    phi = q_own + k_other.T @ r_cross @ k_other \
        + aq.T @ (tau_q @ model.r0_stacked() + nu_q) @ aq

    n_x, n_p = model.state_dim, model.p_dim
    n_u = k_own.shape[0]
    n_q = model.q_dim
    z = np.zeros

    rows = [
        [phi - ptilde, a_cl.T @ ptilde, ptilde @ h, k_own.T, z((n_x, n_q))],
        [None, -ptilde, z((n_x, n_p)), z((n_x, n_u)), z((n_x, n_q))],
        [None, None, -h.T @ ptilde @ h + tau_p @ xi0_m, z((n_p, n_u)),
         s0.T @ tau_q],
        [None, None, None, -linalg.invert_spd(r_own), z((n_u, n_q))],
        [None, None, None, None, -nu_q],
    ]
    sizes = [n_x, n_x, n_p, n_u, n_q]
    total = sum(sizes)
    out = np.zeros((total, total))
    offs = np.concatenate([[0], np.cumsum(sizes)])
    for i in range(5):
        for j in range(i, 5):
            blockij = rows[i][j]
            out[offs[i]:offs[i + 1], offs[j]:offs[j + 1]] = blockij
            if i != j:
                out[offs[j]:offs[j + 1], offs[i]:offs[i + 1]] = blockij.T
    return linalg.symmetrize(out)


def _ptilde_variable_names(n):
    return [f"pt_{i}_{j}" for i in range(n) for j in range(i, n)]


def build_player_lmi(model, k1, k2, player, options=None,
                     fixed_multipliers=None):
    """Assemble one player's certificate as an LmiProblem.

    Decision variables are the upper triangle of Pt_i plus the per-block
    scalars tau_j, nu_j.  Constraints: the five-block certificate matrix,
    the scalar-multiplier inequality, and -Pt_i (so positive definiteness of
    Pt_i is enforced through the solver's margin).

    With ``fixed_multipliers`` the scalars are folded into the constant
    blocks and only the Pt_i entries remain decision variables.
    """
    options = options or SynthesisOptions()
    n = model.state_dim
    s = len(model.blocks)
    pt_names = _ptilde_variable_names(n)
    if fixed_multipliers is None:
        tau_names = [f"tau_{j}" for j in range(s)]
        nu_names = [f"nu_{j}" for j in range(s)]
    else:
        tau_names = nu_names = []

    def assemble(values):
        pt = linalg.unpack_upper([values[v] for v in pt_names], n)
        if fixed_multipliers is None:
            tau = np.array([values[v] for v in tau_names])
            nu = np.array([values[v] for v in nu_names])
        else:
            tau = fixed_multipliers.tau
            nu = fixed_multipliers.nu
        return pt, tau, nu

    zero = {v: 0.0 for v in pt_names + tau_names + nu_names}

    def extract(matrix_of):
        base = matrix_of(zero)
        terms = []
        for v in pt_names + tau_names + nu_names:
            unit = dict(zero)
            unit[v] = 1.0
            coeff = matrix_of(unit) - base
            if np.any(coeff != 0.0):
                terms.append((v, linalg.symmetrize(coeff)))
        return AffineMatrixFunction(constant=base, terms=terms)

    def cert(values):
        pt, tau, nu = assemble(values)
        return player_certificate_matrix(model, k1, k2, player, pt, tau, nu)

    def mult_ineq(values):
        _, tau, nu = assemble(values)
        s0 = model.script_s0()
        return linalg.symmetrize(
            _p_scaling(model, nu) @ xi0(model)
            + _p_scaling(model, tau) @ (s0.T @ s0)
        )

    def neg_ptilde(values):
        pt, _, _ = assemble(values)
        return -pt

    bounds = {name: (options.multiplier_floor, None)
              for name in tau_names + nu_names}
    return LmiProblem(
        constraints=[extract(cert), extract(mult_ineq), extract(neg_ptilde)],
        bounds=bounds,
    )


# -- cost-matrix recovery ----------------------------------------------------

def scaled_xi(model, mult, mu_mode="tau-over-nu"):
    """The scaled constraint matrix Xi = tau_*(Xi0 + S0' mu__ S0), blockwise.

    mu_mode picks the effective inner multiplier: "tau-over-nu" sets
    mu_j = tau_j / nu_j, which makes negativity of Xi equivalent to the
    scalar-multiplier inequality; "nu" sets mu_j = nu_j.
    """
    if mu_mode == "tau-over-nu":
        mu = mult.tau / mult.nu
    elif mu_mode == "nu":
        mu = mult.nu.copy()
    else:
        raise ValueError(f"unknown mu_mode {mu_mode!r}")
    s0 = model.script_s0()
    inner = xi0(model) + s0.T @ _q_scaling(model, mu) @ s0
    return linalg.symmetrize(_p_scaling(model, mult.tau) @ inner)


def recover_p(model, ptilde, mult, player, mu_mode="tau-over-nu"):
    """Recover the cost matrix P_i from a certified (Pt_i, tau^i, nu^i).

    Inverts Pt = (P^{-1} + H Xi^{-1} H')^{-1}.  Requires Xi < 0 and the
    implied P^{-1} positive definite; both are validated.
    """
    del player  # recovery uses only the player's own certificate data
    xi = scaled_xi(model, mult, mu_mode)
    if not linalg.is_negative_definite(xi, margin=0.0):
        raise SynthesisError(
            "scaled constraint matrix Xi is not negative definite; the "
            "multipliers do not admit a cost-matrix recovery",
            diagnostics={"xi_max_eig": linalg.max_eigenvalue(xi)},
        )
    xi_inv = -linalg.invert_spd(-xi)
    pt_inv = linalg.invert_spd(ptilde)
    p_inv = linalg.symmetrize(pt_inv - model.h @ xi_inv @ model.h.T)
    try:
        p = linalg.invert_spd(p_inv)
    except linalg.NotPositiveDefiniteError as exc:
        raise SynthesisError(
            "implied P^{-1} is not positive definite; certificate is "
            "inconsistent",
            diagnostics={"p_inv_min_eig": linalg.min_eigenvalue(p_inv)},
        ) from exc
    # forward-map consistency
    forward = linalg.invert_spd(linalg.invert_spd(p) + model.h @ xi_inv @ model.h.T)
    err = np.linalg.norm(forward - ptilde) / (1.0 + np.linalg.norm(ptilde))
    if err > 1e-8:
        raise SynthesisError(
            f"round trip through the recovery map drifted by {err:.3e}"
        )
    return p


# -- solution container ------------------------------------------------------

@dataclass
class GuaranteedSolution:
    k1: np.ndarray
    k2: np.ndarray
    ptilde1: np.ndarray
    ptilde2: np.ndarray
    p1: np.ndarray
    p2: np.ndarray
    mult1: Multipliers
    mult2: Multipliers
    iterations: int
    margins: dict           # per player: certificate and multiplier margins
    gain_residual: float
    closed_loop_radius: float
    mu_mode: str
    model_digest: str = ""

    def cost_matrix(self, player):
        return self.p1 if player == 1 else self.p2

    def cost(self, player, x0):
        x0 = np.asarray(x0, dtype=float).ravel()
        return float(x0 @ self.cost_matrix(player) @ x0)


def guaranteed_cost(solution, player, x0):
    """Certified upper bound x0' P_i x0 for the given player."""
    if player not in (1, 2):
        raise ValueError("player must be 1 or 2")
    return solution.cost(player, x0)


# -- synthesis driver --------------------------------------------------------

def _value_iteration_init(model, iterations=3000, tol=1e-13):
    """Coupled value iteration ignoring the uncertainty channel (H = 0)."""
    p1 = model.q1 + np.eye(model.state_dim)
    p2 = model.q2 + np.eye(model.state_dim)
    for _ in range(iterations):
        k1, k2 = solve_gain_equation(model, p1, p2)
        a_cl = closed_loop_matrix(model, k1, k2)
        p1_new = linalg.symmetrize(
            model.q1 + k1.T @ model.r11 @ k1 + k2.T @ model.r12 @ k2
            + a_cl.T @ p1 @ a_cl
        )
        p2_new = linalg.symmetrize(
            model.q2 + k2.T @ model.r22 @ k2 + k1.T @ model.r21 @ k1
            + a_cl.T @ p2 @ a_cl
        )
        change = max(np.abs(p1_new - p1).max(), np.abs(p2_new - p2).max())
        p1, p2 = p1_new, p2_new
        if not np.isfinite(change) or change > 1e9:
            return (np.eye(model.state_dim),) * 2  # fall back to identity
        if change < tol * (1.0 + np.abs(p1).max()):
            break
    return p1, p2


def _certificate_margins(model, k1, k2, player, ptilde, mult):
    cert = player_certificate_matrix(model, k1, k2, player, ptilde,
                                     mult.tau, mult.nu)
    lmi_margin = -linalg.max_eigenvalue(cert)
    mult_margin = -linalg.max_eigenvalue(multiplier_inequality_matrix(model, mult))
    return lmi_margin, mult_margin


def _reference_multipliers(model, player, options):
    level = float(options.reference_levels[player - 1])
    s = len(model.blocks)
    return Multipliers(tau=np.full(s, level), nu=np.full(s, level))


def _solve_player_sdp(model, k1, k2, player, options):
    """Trace-minimizing certificate solve for one player at fixed gains.

    Under the reference rule the multipliers are held at their profile level
    and only Pt_i is optimized; under the tight rule the multipliers are
    decision variables as well.
    """
    fixed = None
    if options.certificate_rule == "reference":
        fixed = _reference_multipliers(model, player, options)
        if not check_multiplier_inequality(model, fixed):
            raise SynthesisError(
                f"the reference multiplier level {fixed.tau[0]} violates the "
                "scalar-multiplier inequality for this model; use the "
                "'tight' certificate rule",
                diagnostics={"player": player},
            )
    problem = build_player_lmi(model, k1, k2, player, options,
                               fixed_multipliers=fixed)
    n = model.state_dim
    problem.objective = {f"pt_{i}_{i}": 1.0 for i in range(n)}
    sol = minimize_linear(problem, strictness=options.strictness,
                          options=options.sdp_options)
    if sol.status != "feasible":
        raise SynthesisError(
            f"player {player} certificate LMI is {sol.status} at the current "
            f"gains (margin {sol.margin:.3e})",
            diagnostics={"player": player, "margin": sol.margin},
        )
    pt = linalg.unpack_upper(
        [sol.values[v] for v in _ptilde_variable_names(n)], n
    )
    if fixed is not None:
        return pt, fixed
    s = len(model.blocks)
    mult = Multipliers(
        tau=[sol.values[f"tau_{j}"] for j in range(s)],
        nu=[sol.values[f"nu_{j}"] for j in range(s)],
    )
    return pt, mult


def _refine_multipliers(model, k1, k2, player, ptilde, mult, x0, options):
    """Golden-section coordinate sweeps shrinking x0' P_i x0.

    The certificate matrices are re-evaluated directly (not through the SDP
    solver), so a candidate multiplier vector is accepted only if every
    certificate condition still holds with the required margins.
    """
    gold = (np.sqrt(5.0) - 1.0) / 2.0

    def objective(tau, nu):
        try:
            cand = Multipliers(tau=tau, nu=nu)
        except ValueError:
            return None, np.inf
        lmi_m, mult_m = _certificate_margins(model, k1, k2, player, ptilde, cand)
        if lmi_m < options.strictness or mult_m < 1e-10:
            return None, np.inf
        try:
            p = recover_p(model, ptilde, cand, player, options.mu_mode)
        except SynthesisError:
            return None, np.inf
        return p, float(x0 @ p @ x0)

    tau = mult.tau.copy()
    nu = mult.nu.copy()
    best_p, best_val = objective(tau, nu)
    if best_p is None:
        return mult, None, np.inf

    coords = [("tau", j) for j in range(tau.size)] + \
             [("nu", j) for j in range(nu.size)]
    span = options.refine_span_decades
    for _ in range(options.refine_passes):
        for which, j in coords:
            current = tau[j] if which == "tau" else nu[j]
            lo = np.log10(max(current, options.multiplier_floor)) - span
            hi = np.log10(max(current, options.multiplier_floor)) + span

            def value_at(logc):
                t, v = tau.copy(), nu.copy()
                if which == "tau":
                    t[j] = 10.0 ** logc
                else:
                    v[j] = 10.0 ** logc
                return objective(t, v)[1]

            a, b = lo, hi
            c = b - gold * (b - a)
            d = a + gold * (b - a)
            fc, fd = value_at(c), value_at(d)
            for _ in range(options.refine_steps):
                if fc <= fd:
                    b, d, fd = d, c, fc
                    c = b - gold * (b - a)
                    fc = value_at(c)
                else:
                    a, c, fc = c, d, fd
                    d = a + gold * (b - a)
                    fd = value_at(d)
            log_best = c if fc <= fd else d
            candidate = 10.0 ** log_best
            t, v = tau.copy(), nu.copy()
            if which == "tau":
                t[j] = candidate
            else:
                v[j] = candidate
            p, val = objective(t, v)
            if val < best_val - 1e-15:
                tau, nu = t, v
                best_p, best_val = p, val
    return Multipliers(tau=tau, nu=nu), best_p, best_val


def synthesize(model, x0, options=None):
    """Run the full synthesis and return a certified GuaranteedSolution.

    Raises SynthesisError when the standing assumptions fail, a player LMI
    is infeasible, or the fixed-point iteration does not converge within the
    iteration cap.
    """
    options = options or SynthesisOptions()
    x0 = np.asarray(x0, dtype=float).ravel()
    if x0.size != model.state_dim:
        raise ValueError("x0 has the wrong dimension")

    rep1 = check_assumption1(model)
    if not rep1:
        raise SynthesisError("assumption on the constraint data fails: "
                             + "; ".join(rep1.failures))
    rep2 = check_assumption2(model)
    if not rep2:
        raise SynthesisError("stabilizability/detectability assumption fails: "
                             + "; ".join(rep2.failures))

    pt1, pt2 = _value_iteration_init(model)
    k1, k2 = solve_gain_equation(model, pt1, pt2)
    mult1 = mult2 = None

    history = []
    converged = False
    iterations = 0
    prev_change = np.inf
    for iterations in range(1, options.max_iterations + 1):
        new_pt1, mult1 = _solve_player_sdp(model, k1, k2, 1, options)
        new_pt2, mult2 = _solve_player_sdp(model, k1, k2, 2, options)
        change_pt = max(np.abs(new_pt1 - pt1).max(), np.abs(new_pt2 - pt2).max())
        if change_pt > prev_change * 1.05:
            # oscillation guard: damp the certificate update
            new_pt1 = options.damping * new_pt1 + (1 - options.damping) * pt1
            new_pt2 = options.damping * new_pt2 + (1 - options.damping) * pt2
            change_pt = max(np.abs(new_pt1 - pt1).max(),
                            np.abs(new_pt2 - pt2).max())
        pt1, pt2 = new_pt1, new_pt2
        new_k1, new_k2 = solve_gain_equation(model, pt1, pt2)
        change_k = max(np.abs(new_k1 - k1).max(), np.abs(new_k2 - k2).max())
        k1, k2 = new_k1, new_k2
        history.append({"iteration": iterations, "gain_change": change_k,
                        "ptilde_change": change_pt})
        prev_change = change_pt
        if change_k < options.fixed_point_tol and change_pt < options.fixed_point_tol:
            converged = True
            break

    if not converged:
        raise SynthesisError(
            f"fixed point not reached in {options.max_iterations} iterations",
            diagnostics={"history": history},
        )

    if options.certificate_rule == "tight":
        mult1, p1, _ = _refine_multipliers(model, k1, k2, 1, pt1, mult1, x0,
                                           options)
        mult2, p2, _ = _refine_multipliers(model, k1, k2, 2, pt2, mult2, x0,
                                           options)
        if p1 is None or p2 is None:
            raise SynthesisError("converged certificates lost feasibility "
                                 "during multiplier refinement")
    else:
        p1 = recover_p(model, pt1, mult1, 1, options.mu_mode)
        p2 = recover_p(model, pt2, mult2, 2, options.mu_mode)

    # final validation, all through direct eigenvalue evaluation
    lmi1, m1 = _certificate_margins(model, k1, k2, 1, pt1, mult1)
    lmi2, m2 = _certificate_margins(model, k1, k2, 2, pt2, mult2)
    rk1, rk2 = solve_gain_equation(model, pt1, pt2)
    gain_residual = max(np.abs(rk1 - k1).max(), np.abs(rk2 - k2).max())
    radius = linalg.spectral_radius(closed_loop_matrix(model, k1, k2))
    failures = []
    if lmi1 < options.strictness or lmi2 < options.strictness:
        failures.append(f"certificate margins ({lmi1:.3e}, {lmi2:.3e}) below "
                        f"{options.strictness:.1e}")
    if m1 < 1e-10 or m2 < 1e-10:
        failures.append("multiplier inequality margin below 1e-10")
    if gain_residual > 1e-8:
        failures.append(f"gain equation residual {gain_residual:.3e} > 1e-8")
    if radius >= 1.0:
        failures.append(f"closed loop not stable (spectral radius {radius:.6f})")
    if not linalg.is_positive_definite(pt1) or not linalg.is_positive_definite(pt2):
        failures.append("a certificate matrix lost positive definiteness")
    if failures:
        raise SynthesisError("synthesis finished but validation failed: "
                             + "; ".join(failures),
                             diagnostics={"history": history})

    return GuaranteedSolution(
        k1=k1, k2=k2, ptilde1=pt1, ptilde2=pt2, p1=p1, p2=p2,
        mult1=mult1, mult2=mult2, iterations=iterations,
        margins={
            "player1": {"certificate": lmi1, "multiplier": m1},
            "player2": {"certificate": lmi2, "multiplier": m2},
        },
        gain_residual=float(gain_residual),
        closed_loop_radius=float(radius),
        mu_mode=options.mu_mode,
        model_digest=model_hash(model),
    )


# -- closed-loop cost rollout -------------------------------------------------

def rollout_costs(model, solution, x0, disturbance, stop_norm=1e-10,
                  max_steps=20000):
    """Accumulate both players' costs along one disturbance realization.

    ``disturbance(t, x)`` must return an admissible stacked p vector.  The
    rollout stops once the state norm falls below ``stop_norm``.

    Returns (j1, j2, steps, converged).
    """
    x = np.asarray(x0, dtype=float).ravel().copy()
    j1 = j2 = 0.0
    for t in range(max_steps):
        if np.linalg.norm(x) < stop_norm:
            return j1, j2, t, True
        u1 = solution.k1 @ x
        u2 = solution.k2 @ x
        j1 += float(x @ model.q1 @ x + u1 @ model.r11 @ u1 + u2 @ model.r12 @ u2)
        j2 += float(x @ model.q2 @ x + u2 @ model.r22 @ u2 + u1 @ model.r21 @ u1)
        p = np.asarray(disturbance(t, x), dtype=float)
        x = model.a @ x + model.b1 @ u1 + model.b2 @ u2 + model.h @ p
    return j1, j2, max_steps, False


# -- serialization -------------------------------------------------------------

def solution_to_json(solution, indent=2):
    doc = {
        "k1": solution.k1.tolist(),
        "k2": solution.k2.tolist(),
        "ptilde1": solution.ptilde1.tolist(),
        "ptilde2": solution.ptilde2.tolist(),
        "p1": solution.p1.tolist(),
        "p2": solution.p2.tolist(),
        "mult1": {"tau": solution.mult1.tau.tolist(),
                  "nu": solution.mult1.nu.tolist()},
        "mult2": {"tau": solution.mult2.tau.tolist(),
                  "nu": solution.mult2.nu.tolist()},
        "iterations": solution.iterations,
        "margins": solution.margins,
        "gain_residual": solution.gain_residual,
        "closed_loop_radius": solution.closed_loop_radius,
        "mu_mode": solution.mu_mode,
        "model_digest": solution.model_digest,
    }
    return json.dumps(doc, indent=indent, sort_keys=True)


def solution_from_json(text):
    doc = json.loads(text)
    return GuaranteedSolution(
        k1=np.asarray(doc["k1"], dtype=float),
        k2=np.asarray(doc["k2"], dtype=float),
        ptilde1=np.asarray(doc["ptilde1"], dtype=float),
        ptilde2=np.asarray(doc["ptilde2"], dtype=float),
        p1=np.asarray(doc["p1"], dtype=float),
        p2=np.asarray(doc["p2"], dtype=float),
        mult1=Multipliers(**doc["mult1"]),
        mult2=Multipliers(**doc["mult2"]),
        iterations=doc["iterations"],
        margins=doc["margins"],
        gain_residual=doc["gain_residual"],
        closed_loop_radius=doc["closed_loop_radius"],
        mu_mode=doc["mu_mode"],
        model_digest=doc.get("model_digest", ""),
    )
