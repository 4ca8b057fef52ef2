"""Fiscal-monetary interaction model and its canonical game form.

State is x = [z, pi_tilde] where z is the relative GDP deviation from the
planned nominal path and pi_tilde the inflation deviation from the (constant)
target.  Player 1 is fiscal policy controlling the relative budget-balance
deviation g, player 2 is monetary policy controlling the interest-rate
deviation i_tilde.  Expectation errors enter as two scalar cone-bounded
disturbances p1 (growth expectations) and p2 (inflation expectations).

All rates are dimensionless fractions per year (0.04 means 4%).
"""

import warnings
from dataclasses import dataclass

import numpy as np

from .game import GameModel, UncertaintyBlock
from .uncertainty import ConeSpec

__all__ = ["MacroParams", "MacroState", "build_canonical", "canonical_cones",
           "step_dynamics", "expectations"]


@dataclass
class MacroParams:
    """Coefficients of the two dynamic equations and the objective weights.

    Defaults are the values estimated for the Hungarian economy on 20-year
    annual series with the 2008-2009 and 2020-2021 crisis windows excluded.
    """

    alpha1: float = 0.16    # output response to the real interest rate
    alpha2: float = 0.19    # output response to the budget balance
    beta1: float = 0.699    # inflation response to expected output deviation
    beta2: float = 0.433    # inflation response to the interest-rate deviation
    gamma1: float = 0.2     # fiscal weight on z^2
    gamma2: float = 0.075   # fiscal weight on g^2
    rho1: float = 0.2       # monetary weight on pi_tilde^2
    rho2: float = 0.01      # monetary weight on i_tilde^2
    delta1: float = 0.0     # y1 = delta1*z + delta2*pi_tilde
    delta2: float = 0.1
    delta3: float = 0.15    # y2 = delta3*z + delta4*pi_tilde
    delta4: float = 0.15
    pi_star: float = 0.03   # inflation target (fraction/year)
    i_star: float = 0.03    # reference interest rate; must equal pi_star

    def __post_init__(self):
        vals = [
            self.alpha1, self.alpha2, self.beta1, self.beta2, self.gamma1,
            self.gamma2, self.rho1, self.rho2, self.delta1, self.delta2,
            self.delta3, self.delta4, self.pi_star, self.i_star,
        ]
        if not all(np.isfinite(v) for v in vals):
            raise ValueError("macro parameters must be finite")
        if self.gamma2 <= 0 or self.rho2 <= 0:
            raise ValueError("control weights gamma2 and rho2 must be positive")
        if self.gamma1 < 0 or self.rho1 < 0:
            raise ValueError("state weights gamma1 and rho1 must be nonnegative")
        if abs(self.pi_star - self.i_star) > 1e-12:
            raise ValueError("the model identifies pi_star with i_star")
        # Estimation sign conventions; violating them is suspicious but the
        # game-theoretic assumptions decide whether synthesis can proceed.
        for name in ("alpha1", "alpha2", "beta1", "beta2"):
            if getattr(self, name) <= 0:
                warnings.warn(
                    f"{name} <= 0 breaks the estimated sign convention",
                    stacklevel=2,
                )


@dataclass
class MacroState:
    z: float = 0.0
    pi_tilde: float = 0.0

    def as_vector(self):
        return np.array([self.z, self.pi_tilde])


def build_canonical(p):
    """Map macro parameters to the canonical two-player uncertain game.

    The two scalar uncertainty blocks encode the expectation cones: block 1
    (growth expectations) is the symmetric cone, block 2 (inflation
    expectations) the one-sided cone, both written as quadratic constraints
    on (p_j, q_j) with q_j = y_j - p_j.
    """
    a = np.array([[0.0, p.alpha1], [p.beta1, 1.0]])
    b1 = np.array([[-p.alpha2], [0.0]])
    b2 = np.array([[-p.alpha1], [p.beta2]])
    h = np.array([[0.0, p.alpha1], [p.beta1, 1.0]])
    block1 = UncertaintyBlock(
        q0=[[-1.0]], s0=[[1.0]], r0=[[1.0]],
        aq_rows=[[p.delta1, p.delta2]], g=[[-1.0]],
    )
    block2 = UncertaintyBlock(
        q0=[[0.0]], s0=[[1.0]], r0=[[0.0]],
        aq_rows=[[p.delta3, p.delta4]], g=[[-1.0]],
    )
    return GameModel(
        a=a, b1=b1, b2=b2, h=h,
        blocks=[block1, block2],
        q1=np.diag([p.gamma1, 0.0]),
        q2=np.diag([0.0, p.rho1]),
        r11=[[p.gamma2]],
        r22=[[p.rho2]],
        r12=[[0.0]],
        r21=[[0.0]],
    )


def canonical_cones(p):
    """The two expectation cones, in the same order as the game blocks."""
    return [
        ConeSpec(kind="symmetric", output_row=[p.delta1, p.delta2],
                 scale=1.0 / np.sqrt(2.0)),
        ConeSpec(kind="one-sided", output_row=[p.delta3, p.delta4], scale=0.5),
    ]


def step_dynamics(p, s, g, i_tilde, p1, p2):
    """One-year update of the macro state under controls and disturbances.

    Identical (to machine precision) with the matrix form
    A x + B1 g + B2 i_tilde + H [p1; p2] of the canonical game.
    """
    z_next = p.alpha1 * s.pi_tilde - p.alpha1 * i_tilde - p.alpha2 * g \
        + p.alpha1 * p2
    pi_next = p.beta1 * s.z + s.pi_tilde + p.beta2 * i_tilde \
        + p.beta1 * p1 + p2
    return MacroState(z=z_next, pi_tilde=pi_next)


def expectations(p, s, p1, p2):
    """Expected next-year GDP deviation and inflation level.

    The expectation base is the current measurement; the cone-bounded
    disturbances p1, p2 are the deviations from that base.
    """
    ez_next = s.z + p1
    epi_next = (s.pi_tilde + p.pi_star) + p2
    return ez_next, epi_next
