"""Admissible-uncertainty machinery: cones, realizations, samplers.

Two cone shapes cover the expectation model.  With y the scalar uncertain
output of a block:

  symmetric:  -scale*|y| <= p <= scale*|y|          (scale = 1/sqrt(2))
  one-sided:  scale*(y - |y|) <= p <= scale*(y + |y|)   (scale = 1/2),
              i.e. p lies between 0 and y inclusive.

Realizations are concrete admissible disturbance functions used in
simulation: the oscillatory sine forms, time-varying linear coefficients,
uniform random draws from the cone interval, or identically zero.  Random
realizations are deterministic for a given seed.
"""

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "ConeSpec",
    "Realization",
    "cone_interval",
    "verify_cone",
    "sample_admissible",
    "eval_p1_sin",
    "eval_p2_sin",
    "make_disturbance",
]

REALIZATION_KINDS = ("zero", "sin", "linear", "random")


@dataclass
class ConeSpec:
    """A scalar cone constraint bound to one uncertain-output row."""

    kind: str  # "symmetric" | "one-sided"
    output_row: np.ndarray
    scale: float

    def __post_init__(self):
        if self.kind not in ("symmetric", "one-sided"):
            raise ValueError(f"unknown cone kind {self.kind!r}")
        if self.scale <= 0:
            raise ValueError("cone scale must be positive")
        self.output_row = np.atleast_1d(np.asarray(self.output_row, dtype=float))

    def output(self, x):
        return float(self.output_row @ np.asarray(x, dtype=float))


def cone_interval(cone, y):
    """Admissible [lo, hi] for p at uncertain output y."""
    if cone.kind == "symmetric":
        half = cone.scale * abs(y)
        return -half, half
    lo = cone.scale * (y - abs(y))
    hi = cone.scale * (y + abs(y))
    return lo, hi


def verify_cone(cone, x, p, tol=1e-12):
    """Cone membership of disturbance value p at state x."""
    lo, hi = cone_interval(cone, cone.output(x))
    return lo - tol <= float(p) <= hi + tol


def sample_admissible(cone, x, rng):
    """Uniform draw from the cone's interval at the output of state x.

    ``rng`` is a ``numpy.random.Generator`` or a seed for one; draws are
    deterministic per seed.
    """
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    lo, hi = cone_interval(cone, cone.output(x))
    if hi == lo:
        return lo
    return float(rng.uniform(lo, hi))


def eval_p1_sin(y1):
    """Oscillatory realization for the symmetric cone: (|y|/sqrt 2) sin(1/y)."""
    if y1 == 0.0:
        return 0.0
    return abs(y1) / np.sqrt(2.0) * np.sin(1.0 / y1)


def eval_p2_sin(y2):
    """Oscillatory realization for the one-sided cone: y/2 + (|y|/2) sin(1/y).

    The affine y/2 term re-centers the oscillation so the value stays between
    0 and y for every y.
    """
    if y2 == 0.0:
        return 0.0
    return y2 / 2.0 + abs(y2) / 2.0 * np.sin(1.0 / y2)


_SIN_EVALS = {"symmetric": eval_p1_sin, "one-sided": eval_p2_sin}


@dataclass
class Realization:
    """A named admissible disturbance family.

    kind "zero" and "sin" are deterministic; "linear" draws a fresh
    in-range coefficient c_t each step and returns c_t * y; "random" draws
    uniformly from the cone interval each step.
    """

    kind: str = "zero"
    seed: int = 0
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in REALIZATION_KINDS:
            raise ValueError(
                f"unknown realization kind {self.kind!r}; "
                f"expected one of {REALIZATION_KINDS}"
            )


def _linear_coefficient_range(cone):
    # p = c*y stays in the cone iff c is in this interval, for every y.
    if cone.kind == "symmetric":
        return -cone.scale, cone.scale
    return 0.0, 1.0


def make_disturbance(realization, cones):
    """Build a callable p(t, x) -> stacked disturbance vector.

    The callable is deterministic given the realization's seed; calling the
    factory again replays the same sequence.
    """
    if realization.kind == "zero":
        def disturbance(t, x):
            return np.zeros(len(cones))
        return disturbance

    if realization.kind == "sin":
        def disturbance(t, x):
            return np.array(
                [_SIN_EVALS[c.kind](c.output(x)) for c in cones]
            )
        return disturbance

    rng = np.random.default_rng(realization.seed)
    if realization.kind == "linear":
        def disturbance(t, x):
            out = np.empty(len(cones))
            for j, c in enumerate(cones):
                lo, hi = _linear_coefficient_range(c)
                out[j] = rng.uniform(lo, hi) * c.output(x)
            return out
        return disturbance

    # "random": uniform over the admissible interval at the current state
    def disturbance(t, x):
        out = np.empty(len(cones))
        for j, c in enumerate(cones):
            lo, hi = cone_interval(c, c.output(x))
            out[j] = lo if hi == lo else rng.uniform(lo, hi)
        return out
    return disturbance
