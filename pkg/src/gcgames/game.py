"""Canonical two-player uncertain linear-quadratic game.

The plant is

    x_{t+1} = A x_t + B1 u1_t + B2 u2_t + H p_t
    q_t     = A_q x_t + G p_t

where p is an unknown deterministic disturbance constrained, jointly with the
uncertain output q, by one quadratic set per block:

    [p_j; q_j]' [[Q0_j, S0_j], [S0_j', R0_j]] [p_j; q_j] >= 0.

Each player pays an infinite-horizon quadratic cost with state weight Q_i,
own-control weight R_ii > 0 and cross weight R_ij >= 0.  This module holds the
data model, the standing-assumption checks (definiteness of the stacked
constraint data, stabilizability/detectability via PBH rank tests) and the
membership test for the quadratic constraint sets.
"""

import json
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import block_diag

from . import linalg

__all__ = [
    "UncertaintyBlock",
    "GameModel",
    "AssumptionReport",
    "xi0",
    "check_assumption1",
    "check_assumption2",
    "omega_membership",
    "model_to_json",
    "model_from_json",
    "model_hash",
]

_UNIT_CIRCLE_SLACK = 1e-9   # |lambda| >= 1 - slack counts as "on or outside"
_RANK_RTOL = 1e-9           # singular values below rtol * sigma_max are zero
_SQRT_EIG_FLOOR = 1e-12     # eigenvalues of Q1+Q2 below this are dropped


def _as_matrix(value, rows=None, cols=None, name="matrix"):
    m = np.atleast_2d(np.asarray(value, dtype=float))
    if rows is not None and m.shape != (rows, cols):
        raise ValueError(f"{name} must be {rows}x{cols}, got {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError(f"{name} has non-finite entries")
    return m


@dataclass
class UncertaintyBlock:
    """One quadratic constraint set and the uncertain-output rows it binds.

    q0 is p_dim x p_dim, s0 is p_dim x q_dim, r0 is q_dim x q_dim.  aq_rows
    holds this block's rows of the stacked A_q (q_dim x state_dim) and g the
    block's feedthrough G_j (q_dim x p_dim).
    """

    q0: np.ndarray
    s0: np.ndarray
    r0: np.ndarray
    aq_rows: np.ndarray
    g: np.ndarray

    def __post_init__(self):
        self.q0 = linalg.require_symmetric(_as_matrix(self.q0, name="q0"))
        self.r0 = linalg.require_symmetric(_as_matrix(self.r0, name="r0"))
        self.s0 = _as_matrix(self.s0, self.q0.shape[0], self.r0.shape[0], "s0")
        self.aq_rows = _as_matrix(self.aq_rows, name="aq_rows")
        self.g = _as_matrix(self.g, self.r0.shape[0], self.q0.shape[0], "g")
        if self.aq_rows.shape[0] != self.q_dim:
            raise ValueError(
                f"aq_rows has {self.aq_rows.shape[0]} rows, expected {self.q_dim}"
            )

    @property
    def p_dim(self):
        return self.q0.shape[0]

    @property
    def q_dim(self):
        return self.r0.shape[0]

    def constraint_matrix(self):
        """The full quadratic form [[Q0, S0], [S0', R0]]."""
        top = np.hstack([self.q0, self.s0])
        bottom = np.hstack([self.s0.T, self.r0])
        return np.vstack([top, bottom])


@dataclass
class GameModel:
    """System, cost, and uncertainty data of the canonical game."""

    a: np.ndarray
    b1: np.ndarray
    b2: np.ndarray
    h: np.ndarray
    blocks: list = field(default_factory=list)
    q1: np.ndarray = None
    q2: np.ndarray = None
    r11: np.ndarray = None
    r22: np.ndarray = None
    r12: np.ndarray = None
    r21: np.ndarray = None

    def __post_init__(self):
        self.a = _as_matrix(self.a, name="a")
        n = self.a.shape[0]
        if self.a.shape != (n, n):
            raise ValueError("a must be square")
        self.b1 = _as_matrix(self.b1, name="b1").reshape(n, -1)
        self.b2 = _as_matrix(self.b2, name="b2").reshape(n, -1)
        if not self.blocks:
            raise ValueError("at least one uncertainty block is required")
        p_total = sum(b.p_dim for b in self.blocks)
        self.h = _as_matrix(self.h, n, p_total, "h")
        self.q1 = linalg.require_symmetric(_as_matrix(self.q1, n, n, "q1"))
        self.q2 = linalg.require_symmetric(_as_matrix(self.q2, n, n, "q2"))
        m1, m2 = self.b1.shape[1], self.b2.shape[1]
        self.r11 = linalg.require_symmetric(_as_matrix(self.r11, m1, m1, "r11"))
        self.r22 = linalg.require_symmetric(_as_matrix(self.r22, m2, m2, "r22"))
        self.r12 = linalg.require_symmetric(_as_matrix(self.r12, m2, m2, "r12"))
        self.r21 = linalg.require_symmetric(_as_matrix(self.r21, m1, m1, "r21"))
        for b in self.blocks:
            if b.aq_rows.shape[1] != n:
                raise ValueError("uncertainty block aq_rows width != state dim")
        for name, m in (("q1", self.q1), ("q2", self.q2), ("r12", self.r12),
                        ("r21", self.r21)):
            if linalg.min_eigenvalue(m) < -1e-10:
                raise ValueError(f"{name} must be positive semidefinite")
        for name, m in (("r11", self.r11), ("r22", self.r22)):
            if linalg.min_eigenvalue(m) <= 0.0:
                raise ValueError(f"{name} must be positive definite")

    # -- dimensions ---------------------------------------------------------
    @property
    def state_dim(self):
        return self.a.shape[0]

    @property
    def u1_dim(self):
        return self.b1.shape[1]

    @property
    def u2_dim(self):
        return self.b2.shape[1]

    @property
    def p_dim(self):
        return sum(b.p_dim for b in self.blocks)

    @property
    def q_dim(self):
        return sum(b.q_dim for b in self.blocks)

    # -- stacked constraint data --------------------------------------------
    def q0_stacked(self):
        return block_diag(*[b.q0 for b in self.blocks])

    def s0_stacked(self):
        return block_diag(*[b.s0 for b in self.blocks])

    def r0_stacked(self):
        return block_diag(*[b.r0 for b in self.blocks])

    def g_stacked(self):
        return block_diag(*[b.g for b in self.blocks])

    def aq_stacked(self):
        return np.vstack([b.aq_rows for b in self.blocks])

    def script_s0(self):
        """S0' + R0 G, the coupling operator appearing in the certificates."""
        return self.s0_stacked().T + self.r0_stacked() @ self.g_stacked()

    def p_slices(self):
        """Per-block index ranges into the stacked p vector."""
        out, start = [], 0
        for b in self.blocks:
            out.append(slice(start, start + b.p_dim))
            start += b.p_dim
        return out

    def q_slices(self):
        out, start = [], 0
        for b in self.blocks:
            out.append(slice(start, start + b.q_dim))
            start += b.q_dim
        return out


def xi0(model):
    """Q0 + G'S0' + S0 G + G'R0 G on the stacked constraint data.

    Block-diagonal over the model's uncertainty blocks by construction.
    """
    q0 = model.q0_stacked()
    s0 = model.s0_stacked()
    r0 = model.r0_stacked()
    g = model.g_stacked()
    return linalg.symmetrize(q0 + g.T @ s0.T + s0 @ g + g.T @ r0 @ g)


def xi0_block(block):
    """Same formula restricted to a single uncertainty block."""
    return linalg.symmetrize(
        block.q0 + block.g.T @ block.s0.T + block.s0 @ block.g
        + block.g.T @ block.r0 @ block.g
    )


@dataclass
class AssumptionReport:
    passed: bool
    failures: list = field(default_factory=list)  # human-readable reasons

    def __bool__(self):
        return self.passed


def check_assumption1(model):
    """R0 blocks PSD and the stacked Xi_0 negative definite."""
    failures = []
    for j, b in enumerate(model.blocks):
        lo = linalg.min_eigenvalue(b.r0)
        if lo < -1e-10:
            failures.append(f"block {j}: R0 has eigenvalue {lo:.3e} < 0")
        hi = linalg.max_eigenvalue(xi0_block(b))
        if hi >= 0.0:
            failures.append(f"block {j}: Xi_0 has eigenvalue {hi:.3e} >= 0")
    return AssumptionReport(passed=not failures, failures=failures)


def _numerical_rank(m):
    sv = np.linalg.svd(m, compute_uv=False)
    if sv.size == 0 or sv[0] == 0.0:
        return 0
    return int(np.sum(sv > _RANK_RTOL * sv[0]))


def _detectability_factor(q_sum):
    """Rows C with C'C = Q1+Q2, from the eigendecomposition square root."""
    w, v = linalg.sym_eigendecompose(q_sum)
    keep = w > _SQRT_EIG_FLOOR
    if not np.any(keep):
        return np.zeros((0, q_sum.shape[0]))
    return (np.sqrt(w[keep])[:, None] * v[:, keep].T)


def check_assumption2(model):
    """PBH stabilizability of (A, [B1 B2]) and detectability of (A, Q1+Q2)."""
    n = model.state_dim
    b_all = np.hstack([model.b1, model.b2])
    c = _detectability_factor(linalg.symmetrize(model.q1 + model.q2))
    failures = []
    for lam in np.linalg.eigvals(model.a):
        if abs(lam) < 1.0 - _UNIT_CIRCLE_SLACK:
            continue
        pbh_ctrl = np.hstack([model.a - lam * np.eye(n), b_all.astype(complex)])
        if _numerical_rank(pbh_ctrl) < n:
            failures.append(
                f"(A,[B1 B2]) not stabilizable: PBH rank deficient at "
                f"eigenvalue {lam:.6g}"
            )
        pbh_det = np.vstack([model.a - lam * np.eye(n), c.astype(complex)])
        if _numerical_rank(pbh_det) < n:
            failures.append(
                f"(A, Q1+Q2) not detectable: PBH rank deficient at "
                f"eigenvalue {lam:.6g}"
            )
    return AssumptionReport(passed=not failures, failures=failures)


def omega_membership(block, p, q, tol=1e-12):
    """True iff [p; q] satisfies the block's quadratic constraint.

    The constraint is an inequality >= 0; membership is granted down to -tol
    so that boundary points survive roundoff.
    """
    p = np.atleast_1d(np.asarray(p, dtype=float))
    q = np.atleast_1d(np.asarray(q, dtype=float))
    if p.size != block.p_dim or q.size != block.q_dim:
        raise ValueError("vector dimensions do not match the block")
    v = np.concatenate([p, q])
    return float(v @ block.constraint_matrix() @ v) >= -tol


# -- JSON round trip ---------------------------------------------------------
#
# Schema: a flat object with named matrices, each stored as
# {"rows": r, "cols": c, "data": [[...], ...]}, plus a "blocks" array of
# objects with keys q0, s0, r0, aq_rows, g in the same matrix encoding.

def _mat_to_doc(m):
    m = np.atleast_2d(np.asarray(m, dtype=float))
    return {"rows": m.shape[0], "cols": m.shape[1], "data": m.tolist()}


def _mat_from_doc(doc, name):
    m = np.asarray(doc["data"], dtype=float)
    if m.shape != (doc["rows"], doc["cols"]):
        raise ValueError(f"{name}: declared shape does not match data")
    return m


def model_to_json(model, indent=2):
    doc = {
        "a": _mat_to_doc(model.a),
        "b1": _mat_to_doc(model.b1),
        "b2": _mat_to_doc(model.b2),
        "h": _mat_to_doc(model.h),
        "q1": _mat_to_doc(model.q1),
        "q2": _mat_to_doc(model.q2),
        "r11": _mat_to_doc(model.r11),
        "r22": _mat_to_doc(model.r22),
        "r12": _mat_to_doc(model.r12),
        "r21": _mat_to_doc(model.r21),
        "blocks": [
            {
                "q0": _mat_to_doc(b.q0),
                "s0": _mat_to_doc(b.s0),
                "r0": _mat_to_doc(b.r0),
                "aq_rows": _mat_to_doc(b.aq_rows),
                "g": _mat_to_doc(b.g),
            }
            for b in model.blocks
        ],
    }
    return json.dumps(doc, indent=indent, sort_keys=True)


def model_from_json(text):
    doc = json.loads(text)
    blocks = [
        UncertaintyBlock(
            q0=_mat_from_doc(bd["q0"], "q0"),
            s0=_mat_from_doc(bd["s0"], "s0"),
            r0=_mat_from_doc(bd["r0"], "r0"),
            aq_rows=_mat_from_doc(bd["aq_rows"], "aq_rows"),
            g=_mat_from_doc(bd["g"], "g"),
        )
        for bd in doc["blocks"]
    ]
    return GameModel(
        a=_mat_from_doc(doc["a"], "a"),
        b1=_mat_from_doc(doc["b1"], "b1"),
        b2=_mat_from_doc(doc["b2"], "b2"),
        h=_mat_from_doc(doc["h"], "h"),
        blocks=blocks,
        q1=_mat_from_doc(doc["q1"], "q1"),
        q2=_mat_from_doc(doc["q2"], "q2"),
        r11=_mat_from_doc(doc["r11"], "r11"),
        r22=_mat_from_doc(doc["r22"], "r22"),
        r12=_mat_from_doc(doc["r12"], "r12"),
        r21=_mat_from_doc(doc["r21"], "r21"),
    )


def model_hash(model):
    """Stable hex digest of the model's matrices, for config/solution pairing."""
    import hashlib

    return hashlib.sha256(model_to_json(model, indent=None).encode()).hexdigest()
