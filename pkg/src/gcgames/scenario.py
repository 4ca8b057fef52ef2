"""Catch-up scenario construction, closed-loop simulation and debt bookkeeping.

A scenario couples a reference nominal-GDP growth path with a target
budget-balance path, simulates the closed-loop macro state under a chosen
admissible disturbance realization, reconstructs nominal aggregates from the
relative deviations, and tracks the debt-to-GDP proxy

    d_t = D_t / xi_t,      D_{t+1} = D_t - gbar_t.

Balances are signed: a deficit is a negative ratio, so running deficits grow
the debt stock.  Nine named scenarios arise from three growth variants
(1 moderate, 2 average, 3 strong) crossed with three deficit variants
(A tight, B loose, C populist).
"""

import csv
from dataclasses import dataclass, field, replace

import numpy as np

from .fimo import MacroState, canonical_cones, step_dynamics
from .uncertainty import Realization, make_disturbance

__all__ = [
    "GROWTH_RATES",
    "GrowthPath",
    "DeficitPath",
    "ScenarioSpec",
    "ScenarioResult",
    "build_reference_paths",
    "simulate_closed_loop",
    "run_all_nine",
    "compare_scenarios",
    "inflation_settling_year",
    "write_scenario_csv",
    "write_comparison_csv",
    "plot_debt_ratios",
]

GROWTH_RATES = {"moderate": 0.02575, "average": 0.03605, "strong": 0.0515}

_GROWTH_CODES = {"1": "moderate", "2": "average", "3": "strong"}
_DEFICIT_CODES = {"A": "tight", "B": "loose", "C": "populist"}


@dataclass
class GrowthPath:
    """Reference nominal GDP path: xi*_{t+1} = xi*_t * (1 + rate)."""

    variant: str
    xi0_star: float
    horizon: int = 20

    def __post_init__(self):
        if self.variant not in GROWTH_RATES:
            raise ValueError(f"unknown growth variant {self.variant!r}")
        if self.xi0_star <= 0:
            raise ValueError("initial reference GDP must be positive")
        if self.horizon < 1:
            raise ValueError("horizon must be at least one year")

    @property
    def rate(self):
        return GROWTH_RATES[self.variant]


@dataclass
class DeficitPath:
    """Target budget-balance ratios g*_t / xi*_t (negative = deficit).

    tight:    -3% in the starting year, then half a percentage point better
              per year, 0% once balanced.
    loose:    -6.7%, -4.8%, -3.5%, then -3% throughout.
    populist: loose, except -4.5% in election years (every fourth calendar
              year from the anchor).
    """

    variant: str
    election_anchor: int = 2026

    def __post_init__(self):
        if self.variant not in ("tight", "loose", "populist"):
            raise ValueError(f"unknown deficit variant {self.variant!r}")

    def ratios(self, start_year, horizon):
        out = []
        for t in range(horizon):
            if self.variant == "tight":
                out.append(min(-0.03 + 0.005 * t, 0.0))
                continue
            if t == 0:
                r = -0.067
            elif t == 1:
                r = -0.048
            elif t == 2:
                r = -0.035
            else:
                r = -0.03
            if self.variant == "populist":
                year = start_year + t
                if year >= self.election_anchor \
                        and (year - self.election_anchor) % 4 == 0:
                    r = -0.045
            out.append(r)
        return np.array(out)


@dataclass
class ScenarioSpec:
    growth: GrowthPath
    deficit: DeficitPath
    d0_debt: float
    x0: MacroState = field(default_factory=MacroState)
    realization: Realization = field(default_factory=Realization)
    start_year: int = 2023
    label: str = ""

    def __post_init__(self):
        if self.d0_debt <= 0:
            raise ValueError("initial debt must be positive")


@dataclass
class ScenarioResult:
    """Per-year records of one simulated scenario (arrays share one length)."""

    label: str
    years: np.ndarray
    z: np.ndarray
    pi_tilde: np.ndarray
    g: np.ndarray            # relative balance deviation (player-1 control)
    i_tilde: np.ndarray      # interest-rate deviation (player-2 control)
    xi_star: np.ndarray      # reference nominal GDP
    xi: np.ndarray           # actual nominal GDP
    g_bar: np.ndarray        # actual nominal balance
    debt: np.ndarray         # debt stock D_t
    d_ratio: np.ndarray      # debt-to-GDP proxy d_t
    cost_fiscal: np.ndarray  # running fiscal cost
    cost_monetary: np.ndarray

    COLUMNS = ("year", "z", "pi_tilde", "g", "i_tilde", "xi_star", "xi",
               "g_bar", "debt", "d_ratio", "cost_fiscal", "cost_monetary")

    def rows(self):
        for t in range(self.years.size):
            yield (int(self.years[t]), float(self.z[t]),
                   float(self.pi_tilde[t]), float(self.g[t]),
                   float(self.i_tilde[t]), float(self.xi_star[t]),
                   float(self.xi[t]), float(self.g_bar[t]),
                   float(self.debt[t]), float(self.d_ratio[t]),
                   float(self.cost_fiscal[t]), float(self.cost_monetary[t]))


def build_reference_paths(spec):
    """Reference GDP levels and nominal balance targets over the horizon."""
    horizon = spec.growth.horizon
    xi_star = spec.growth.xi0_star * (1.0 + spec.growth.rate) ** np.arange(horizon)
    ratios = spec.deficit.ratios(spec.start_year, horizon)
    return xi_star, ratios * xi_star


def simulate_closed_loop(spec, solution, params):
    """Simulate one scenario under the synthesized feedback pair.

    Controls are g_t = K1 x_t and i_tilde_t = K2 x_t; disturbances come from
    the scenario's realization evaluated at the model's uncertain outputs.
    All bookkeeping identities (nominal reconstruction, debt recursion) are
    exact.
    """
    horizon = spec.growth.horizon
    xi_star, g_star = build_reference_paths(spec)
    cones = canonical_cones(params)
    disturbance = make_disturbance(spec.realization, cones)

    cols = {name: np.zeros(horizon) for name in ScenarioResult.COLUMNS[1:]}
    state = MacroState(z=spec.x0.z, pi_tilde=spec.x0.pi_tilde)
    debt = spec.d0_debt
    jf = jm = 0.0
    for t in range(horizon):
        x = state.as_vector()
        g = float((solution.k1 @ x)[0])
        i_tilde = float((solution.k2 @ x)[0])
        xi = xi_star[t] * (1.0 + state.z)
        g_bar = g_star[t] + g * xi_star[t]
        jf += params.gamma1 * state.z ** 2 + params.gamma2 * g ** 2
        jm += params.rho1 * state.pi_tilde ** 2 + params.rho2 * i_tilde ** 2

        cols["z"][t] = state.z
        cols["pi_tilde"][t] = state.pi_tilde
        cols["g"][t] = g
        cols["i_tilde"][t] = i_tilde
        cols["xi_star"][t] = xi_star[t]
        cols["xi"][t] = xi
        cols["g_bar"][t] = g_bar
        cols["debt"][t] = debt
        cols["d_ratio"][t] = debt / xi
        cols["cost_fiscal"][t] = jf
        cols["cost_monetary"][t] = jm

        p = disturbance(t, x)
        state = step_dynamics(params, state, g, i_tilde, float(p[0]), float(p[1]))
        debt = debt - g_bar

    return ScenarioResult(
        label=spec.label or f"{spec.growth.variant}/{spec.deficit.variant}",
        years=np.arange(spec.start_year, spec.start_year + horizon),
        **cols,
    )


def run_all_nine(base, solution, params):
    """All nine scenarios (growth x deficit) sharing x0, realization, seed.

    Returns an ordered dict-like mapping of label ("1A" ... "3C") to result.
    """
    results = {}
    for gcode, gvariant in _GROWTH_CODES.items():
        for dcode, dvariant in _DEFICIT_CODES.items():
            label = gcode + dcode
            spec = replace(
                base,
                growth=replace(base.growth, variant=gvariant),
                deficit=replace(base.deficit, variant=dvariant),
                label=label,
            )
            results[label] = simulate_closed_loop(spec, solution, params)
    return results


def _classify_trend(d, dead_band=1e-3, window=5):
    diffs = np.diff(d)
    if diffs.size == 0:
        return "stabilizing"
    mean = float(np.mean(diffs[-window:]))
    if mean > dead_band:
        return "increasing"
    if mean < -dead_band:
        return "decreasing"
    return "stabilizing"


def _crossing_year(years, d, threshold=0.5):
    start_side = d[0] >= threshold
    for t in range(1, d.size):
        if (d[t] >= threshold) != start_side:
            return int(years[t])
    return None


def compare_scenarios(results):
    """Summary table over two or more scenario results.

    Per scenario: min/max/final debt ratio, the year the ratio first crosses
    0.50 (if any), and a trend label from the mean of the last five annual
    differences with a 1e-3 dead band.
    """
    if len(results) < 2:
        raise ValueError("need at least two scenarios to compare")
    items = results.items() if isinstance(results, dict) else \
        ((r.label, r) for r in results)
    rows = []
    for label, res in items:
        d = res.d_ratio
        rows.append({
            "label": label,
            "d_min": float(d.min()),
            "d_max": float(d.max()),
            "d_final": float(d[-1]),
            "crosses_half_in": _crossing_year(res.years, d),
            "trend": _classify_trend(d),
        })
    return rows


def inflation_settling_year(result, band=0.01):
    """First year from which |pi_tilde| stays inside the target band."""
    inside = np.abs(result.pi_tilde) <= band
    for t in range(inside.size):
        if inside[t:].all():
            return int(result.years[t])
    return None


# -- file outputs -------------------------------------------------------------

def _write_metadata(handle, metadata):
    for key in sorted(metadata or {}):
        handle.write(f"# {key}={metadata[key]}\n")


def write_scenario_csv(result, path, metadata=None):
    with open(path, "w", newline="") as handle:
        _write_metadata(handle, metadata)
        writer = csv.writer(handle)
        writer.writerow(ScenarioResult.COLUMNS)
        for row in result.rows():
            writer.writerow([row[0]] + [repr(v) for v in row[1:]])


def write_comparison_csv(rows, path, metadata=None):
    with open(path, "w", newline="") as handle:
        _write_metadata(handle, metadata)
        writer = csv.writer(handle)
        writer.writerow(["label", "d_min", "d_max", "d_final",
                         "crosses_half_in", "trend"])
        for row in rows:
            writer.writerow([
                row["label"], repr(row["d_min"]), repr(row["d_max"]),
                repr(row["d_final"]),
                "" if row["crosses_half_in"] is None else row["crosses_half_in"],
                row["trend"],
            ])


def plot_debt_ratios(results, path, title="Debt-to-GDP proxy"):
    """One SVG line chart of d_t for the given scenario results."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(7, 4.2))
    for label, res in (results.items() if isinstance(results, dict)
                       else ((r.label, r) for r in results)):
        ax.plot(res.years, res.d_ratio, marker="o", markersize=3, label=label)
    ax.axhline(0.5, color="gray", linewidth=0.8, linestyle="--")
    ax.set_xlabel("year")
    ax.set_ylabel("d_t")
    ax.set_title(title)
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
