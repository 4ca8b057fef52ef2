"""OLS estimation of the dynamic-equation coefficients from annual series.

The two structural regressions, with expectations proxied by the previous
measurement (the adaptive base of the expectation model):

  real sphere:  z_{t+1} = -alpha1*(i_t - pi_t) - alpha2*g_t
  monetary:     pi_{t+1} - pi_t = beta1*z_t + beta2*(i_t - i_star)

Neither has an intercept; an intercept can be enabled for diagnostics.
Crisis windows (by default 2008-2009 and 2020-2021) are excluded before the
transitions are formed, so a year adjacent to an excluded one contributes no
observation.
"""

import csv
from dataclasses import dataclass

import numpy as np

from . import linalg

__all__ = [
    "DEFAULT_EXCLUSIONS",
    "TimeSeriesTable",
    "OlsFit",
    "load_table",
    "exclude_years",
    "fit_real_sphere",
    "fit_monetary",
    "fit_report",
]

DEFAULT_EXCLUSIONS = ((2008, 2009), (2020, 2021))

# default column names; callers can remap any of them per fit
DEFAULT_COLUMNS = {
    "z": "output_gap",
    "i": "lending_rate",
    "pi": "inflation",
    "g": "balance_ratio",
}


@dataclass
class TimeSeriesTable:
    """Annual table: strictly increasing years plus named float columns.

    Missing cells are NaN.
    """

    years: np.ndarray
    columns: dict

    def __post_init__(self):
        self.years = np.asarray(self.years, dtype=int)
        if self.years.size and np.any(np.diff(self.years) <= 0):
            raise ValueError("years must be strictly increasing")
        for name, col in self.columns.items():
            col = np.asarray(col, dtype=float)
            if col.shape != self.years.shape:
                raise ValueError(f"column {name!r} length mismatch")
            self.columns[name] = col

    def __len__(self):
        return self.years.size

    def column(self, name):
        if name not in self.columns:
            raise KeyError(f"no column named {name!r}; "
                           f"have {sorted(self.columns)}")
        return self.columns[name]


@dataclass
class OlsFit:
    names: list
    coefficients: np.ndarray
    standard_errors: np.ndarray
    r_squared: float
    residuals: np.ndarray
    rows_used: int
    rows_excluded: int
    intercept: float | None = None

    def summary(self):
        lines = []
        for name, coef, se in zip(self.names, self.coefficients,
                                  self.standard_errors):
            lines.append(f"{name:>10s} = {coef: .6f}  (se {se:.6f})")
        if self.intercept is not None:
            lines.append(f"{'intercept':>10s} = {self.intercept: .6f}")
        lines.append(f"R^2 = {self.r_squared:.6f}   "
                     f"rows used/excluded = {self.rows_used}/{self.rows_excluded}")
        return "\n".join(lines)


class EstimationError(Exception):
    pass


def load_table(path, year_column="year"):
    """Read an annual CSV into a table; non-numeric cells become missing."""
    with open(path, newline="") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise EstimationError(f"{path}: empty file, expected a header row")
        header = [h.strip() for h in header]
        if year_column not in header:
            raise EstimationError(
                f"{path}: no {year_column!r} column in header {header}"
            )
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != len(header):
                raise EstimationError(
                    f"{path}:{lineno}: expected {len(header)} cells, "
                    f"got {len(row)}"
                )
            rows.append(row)

    year_idx = header.index(year_column)
    years = []
    for lineno, row in enumerate(rows, start=2):
        try:
            years.append(int(float(row[year_idx])))
        except ValueError:
            raise EstimationError(
                f"{path}:{lineno}: year cell {row[year_idx]!r} is not numeric"
            )

    columns = {}
    for j, name in enumerate(header):
        if j == year_idx:
            continue
        col = np.full(len(rows), np.nan)
        for i, row in enumerate(rows):
            try:
                col[i] = float(row[j])
            except ValueError:
                pass  # missing
        columns[name] = col
    return TimeSeriesTable(years=np.array(years, dtype=int), columns=columns)


def exclude_years(table, ranges=DEFAULT_EXCLUSIONS):
    """Drop rows whose year falls in any inclusive (from, to) range."""
    keep = np.ones(len(table), dtype=bool)
    for lo, hi in ranges:
        if lo > hi:
            raise ValueError(f"bad exclusion range ({lo}, {hi})")
        keep &= ~((table.years >= lo) & (table.years <= hi))
    return TimeSeriesTable(
        years=table.years[keep],
        columns={k: v[keep] for k, v in table.columns.items()},
    )


def _transition_pairs(table, needed_now, needed_next):
    """Indices (t, t+1) of consecutive-year rows with all needed cells."""
    pairs = []
    for t in range(len(table) - 1):
        if table.years[t + 1] != table.years[t] + 1:
            continue
        now_ok = all(np.isfinite(table.column(c)[t]) for c in needed_now)
        next_ok = all(np.isfinite(table.column(c)[t + 1]) for c in needed_next)
        if now_ok and next_ok:
            pairs.append(t)
    return pairs


def _ols(design, response, names, rows_excluded, intercept=False):
    y = np.asarray(response, dtype=float)
    X = np.column_stack(design)
    if intercept:
        X = np.column_stack([X, np.ones(y.size)])
    n, k = X.shape
    if n < k + 2:
        raise EstimationError(
            f"need at least {k + 2} observations for {k} regressors, have {n}"
        )
    gram = X.T @ X
    sv = np.linalg.svd(gram, compute_uv=False)
    if sv[-1] <= 1e-12 * sv[0]:
        raise EstimationError("design matrix is collinear to tolerance")
    coef = linalg.solve_linear(gram, X.T @ y)
    resid = y - X @ coef
    dof = n - k
    sigma2 = float(resid @ resid) / dof if dof > 0 else np.nan
    cov = sigma2 * linalg.invert_spd(gram)
    ses = np.sqrt(np.diag(cov))
    ss_tot = float(y @ y)  # uncentered: the structural equations have no mean
    r2 = 1.0 - float(resid @ resid) / ss_tot if ss_tot > 0 else 1.0
    icpt = float(coef[-1]) if intercept else None
    ncoef = k - 1 if intercept else k
    return OlsFit(
        names=list(names),
        coefficients=coef[:ncoef],
        standard_errors=ses[:ncoef],
        r_squared=r2,
        residuals=resid,
        rows_used=n,
        rows_excluded=rows_excluded,
        intercept=icpt,
    )


def fit_real_sphere(table, columns=None, intercept=False):
    """Estimate (alpha1, alpha2) from the output-gap equation.

    Regresses z_{t+1} on (i_t - pi_t) and g_t without intercept; the signs
    of the structural equation are pulled out so the reported coefficients
    are the positive alphas.
    """
    cols = dict(DEFAULT_COLUMNS, **(columns or {}))
    z, i, pi, g = (table.column(cols[c]) for c in ("z", "i", "pi", "g"))
    pairs = _transition_pairs(table, needed_now=[cols["z"], cols["i"],
                                                 cols["pi"], cols["g"]],
                              needed_next=[cols["z"]])
    complete = _count_complete(table, [cols["z"], cols["i"], cols["pi"],
                                       cols["g"]])
    t = np.array(pairs, dtype=int)
    if t.size == 0:
        raise EstimationError("no consecutive-year observations available")
    fit = _ols(
        design=[-(i[t] - pi[t]), -g[t]],
        response=z[t + 1],
        names=["alpha1", "alpha2"],
        rows_excluded=complete - t.size,
        intercept=intercept,
    )
    return fit


def fit_monetary(table, columns=None, i_star=0.03, intercept=False):
    """Estimate (beta1, beta2) from the inflation equation."""
    cols = dict(DEFAULT_COLUMNS, **(columns or {}))
    z, i, pi = (table.column(cols[c]) for c in ("z", "i", "pi"))
    pairs = _transition_pairs(table, needed_now=[cols["z"], cols["i"],
                                                 cols["pi"]],
                              needed_next=[cols["pi"]])
    complete = _count_complete(table, [cols["z"], cols["i"], cols["pi"]])
    t = np.array(pairs, dtype=int)
    if t.size == 0:
        raise EstimationError("no consecutive-year observations available")
    return _ols(
        design=[z[t], i[t] - i_star],
        response=pi[t + 1] - pi[t],
        names=["beta1", "beta2"],
        rows_excluded=complete - t.size,
        intercept=intercept,
    )


def _count_complete(table, needed):
    ok = np.ones(len(table), dtype=bool)
    for c in needed:
        ok &= np.isfinite(table.column(c))
    return int(ok.sum())


def fit_report(real_fit, monetary_fit, excluded_ranges=DEFAULT_EXCLUSIONS):
    """Machine-readable report combining both fits."""
    def as_doc(fit):
        return {
            "coefficients": {n: float(c) for n, c in
                             zip(fit.names, fit.coefficients)},
            "standard_errors": {n: float(s) for n, s in
                                zip(fit.names, fit.standard_errors)},
            "r_squared": fit.r_squared,
            "rows_used": fit.rows_used,
            "rows_excluded": fit.rows_excluded,
            "intercept": fit.intercept,
        }

    return {
        "excluded_years": [list(r) for r in excluded_ranges],
        "real_sphere": as_doc(real_fit),
        "monetary": as_doc(monetary_fit),
    }
