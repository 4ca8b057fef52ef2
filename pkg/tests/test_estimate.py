import numpy as np
import pytest

from gcgames.estimate import (
    DEFAULT_EXCLUSIONS,
    EstimationError,
    TimeSeriesTable,
    exclude_years,
    fit_monetary,
    fit_real_sphere,
    fit_report,
    load_table,
)

I_STAR = 0.03


def synthesize_series(alpha1=0.16, alpha2=0.19, beta1=0.699, beta2=0.433,
                      years=None, noise=0.0, seed=0):
    """Generate series exactly satisfying the two structural equations."""
    rng = np.random.default_rng(seed)
    years = np.asarray(years if years is not None else np.arange(2000, 2024))
    n = years.size
    i = I_STAR + rng.uniform(-0.05, 0.08, size=n)     # lending rate
    g = rng.uniform(-0.06, 0.02, size=n)              # balance ratio
    z = np.zeros(n)
    pi = np.zeros(n)
    z[0] = -0.02
    pi[0] = 0.06
    for t in range(n - 1):
        z[t + 1] = -alpha1 * (i[t] - pi[t]) - alpha2 * g[t] \
            + noise * rng.normal()
        pi[t + 1] = pi[t] + beta1 * z[t] + beta2 * (i[t] - I_STAR) \
            + noise * rng.normal()
    return TimeSeriesTable(
        years=years,
        columns={"output_gap": z, "lending_rate": i, "inflation": pi,
                 "balance_ratio": g},
    )


def write_csv(path, table, mangle=None):
    lines = ["year,output_gap,lending_rate,inflation,balance_ratio"]
    for t in range(len(table)):
        cells = [str(table.years[t])] + [
            repr(float(table.columns[c][t]))
            for c in ("output_gap", "lending_rate", "inflation",
                      "balance_ratio")
        ]
        lines.append(",".join(cells))
    if mangle:
        lines = mangle(lines)
    path.write_text("\n".join(lines) + "\n")


class TestLoadTable:
    def test_well_formed(self, tmp_path):
        table = synthesize_series(years=np.arange(2000, 2003))
        path = tmp_path / "data.csv"
        write_csv(path, table)
        loaded = load_table(path)
        assert len(loaded) == 3
        assert np.allclose(loaded.column("inflation"),
                           table.column("inflation"))

    def test_blank_cell_becomes_missing(self, tmp_path):
        table = synthesize_series(years=np.arange(2000, 2004))
        path = tmp_path / "data.csv"

        def blank_one(lines):
            cells = lines[2].split(",")
            cells[1] = ""
            lines[2] = ",".join(cells)
            return lines

        write_csv(path, table, mangle=blank_one)
        loaded = load_table(path)
        assert len(loaded) == 4  # row retained
        assert np.isnan(loaded.column("output_gap")[1])

    def test_header_only_gives_empty_table(self, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text("year,output_gap,lending_rate,inflation,balance_ratio\n")
        loaded = load_table(path)
        assert len(loaded) == 0
        with pytest.raises(EstimationError):
            fit_real_sphere(loaded)

    def test_ragged_row_reports_line(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("year,a\n2000,1.0\n2001,1.0,extra\n")
        with pytest.raises(EstimationError, match="3"):
            load_table(path)

    def test_missing_year_column(self, tmp_path):
        path = tmp_path / "noyear.csv"
        path.write_text("a,b\n1,2\n")
        with pytest.raises(EstimationError, match="year"):
            load_table(path)


class TestExcludeYears:
    def test_default_crisis_windows(self):
        table = synthesize_series(years=np.arange(2005, 2024))
        trimmed = exclude_years(table)
        assert len(trimmed) == 15  # 19 - 2 - 2
        for year in (2008, 2009, 2020, 2021):
            assert year not in trimmed.years

    def test_empty_ranges_identity(self):
        table = synthesize_series(years=np.arange(2005, 2010))
        trimmed = exclude_years(table, ())
        assert np.array_equal(trimmed.years, table.years)

    def test_full_cover_empties_table(self):
        table = synthesize_series(years=np.arange(2005, 2010))
        trimmed = exclude_years(table, ((2000, 2030),))
        assert len(trimmed) == 0

    def test_idempotent(self):
        table = synthesize_series(years=np.arange(2000, 2024))
        once = exclude_years(table)
        twice = exclude_years(once)
        assert np.array_equal(once.years, twice.years)
        for name in once.columns:
            assert np.array_equal(once.columns[name], twice.columns[name])


class TestFits:
    def test_noiseless_recovery_to_1e10(self):
        table = synthesize_series(years=np.arange(1990, 2024))
        real = fit_real_sphere(table)
        assert np.allclose(real.coefficients, [0.16, 0.19], atol=1e-10)
        mon = fit_monetary(table, i_star=I_STAR)
        assert np.allclose(mon.coefficients, [0.699, 0.433], atol=1e-10)

    def test_recovery_skips_excluded_transitions(self):
        table = exclude_years(synthesize_series(years=np.arange(1995, 2024)))
        real = fit_real_sphere(table)
        # transitions across the crisis gaps drop out, values still exact
        assert np.allclose(real.coefficients, [0.16, 0.19], atol=1e-10)
        assert real.rows_used + real.rows_excluded == len(table)

    def test_noisy_recovery_within_three_sigma(self):
        hits = 0
        trials = 60
        for seed in range(trials):
            table = synthesize_series(years=np.arange(1974, 2024),
                                      noise=0.001, seed=seed)
            real = fit_real_sphere(table)
            mon = fit_monetary(table, i_star=I_STAR)
            ok = (
                abs(real.coefficients[0] - 0.16) <= 3 * real.standard_errors[0]
                and abs(real.coefficients[1] - 0.19) <= 3 * real.standard_errors[1]
                and abs(mon.coefficients[0] - 0.699) <= 3 * mon.standard_errors[0]
                and abs(mon.coefficients[1] - 0.433) <= 3 * mon.standard_errors[1]
            )
            hits += ok
        assert hits >= 0.9 * trials

    def test_normal_equations_hold(self):
        table = synthesize_series(years=np.arange(1990, 2024), noise=0.002,
                                  seed=3)
        real = fit_real_sphere(table)
        # residuals orthogonal to the (negated) regressors
        z = table.column("output_gap")
        i = table.column("lending_rate")
        pi = table.column("inflation")
        g = table.column("balance_ratio")
        t = np.arange(len(table) - 1)
        design = np.column_stack([-(i[t] - pi[t]), -g[t]])
        dots = design.T @ real.residuals
        scale = np.linalg.norm(design, axis=0) * np.linalg.norm(real.residuals)
        assert np.all(np.abs(dots) <= 1e-10 * (1 + scale))

    def test_r_squared_near_one_for_low_noise(self):
        table = synthesize_series(years=np.arange(1990, 2024), noise=1e-5,
                                  seed=7)
        assert fit_real_sphere(table).r_squared > 0.999

    def test_collinear_design_raises(self):
        years = np.arange(2000, 2020)
        n = years.size
        const_i = np.full(n, I_STAR)  # i - i_star identically zero
        table = TimeSeriesTable(
            years=years,
            columns={"output_gap": np.zeros(n), "lending_rate": const_i,
                     "inflation": np.linspace(0, 0.1, n),
                     "balance_ratio": np.zeros(n)},
        )
        with pytest.raises(EstimationError):
            fit_monetary(table, i_star=I_STAR)

    def test_too_few_rows(self):
        table = synthesize_series(years=np.arange(2000, 2003))
        with pytest.raises(EstimationError):
            fit_real_sphere(table)

    def test_intercept_flag(self):
        table = synthesize_series(years=np.arange(1990, 2024))
        fit = fit_real_sphere(table, intercept=True)
        assert fit.intercept is not None
        assert abs(fit.intercept) < 1e-8  # generator has no constant term
        assert np.allclose(fit.coefficients, [0.16, 0.19], atol=1e-8)

    def test_custom_column_names(self):
        table = synthesize_series(years=np.arange(1990, 2024))
        renamed = TimeSeriesTable(
            years=table.years,
            columns={"gap": table.column("output_gap"),
                     "rate": table.column("lending_rate"),
                     "cpi": table.column("inflation"),
                     "bal": table.column("balance_ratio")},
        )
        fit = fit_real_sphere(renamed, columns={"z": "gap", "i": "rate",
                                                "pi": "cpi", "g": "bal"})
        assert np.allclose(fit.coefficients, [0.16, 0.19], atol=1e-10)


class TestReport:
    def test_report_structure(self):
        table = synthesize_series(years=np.arange(1990, 2024))
        report = fit_report(fit_real_sphere(table),
                            fit_monetary(table, i_star=I_STAR))
        assert report["excluded_years"] == [list(r) for r in
                                            DEFAULT_EXCLUSIONS]
        assert np.isclose(report["real_sphere"]["coefficients"]["alpha1"],
                          0.16)
        assert np.isclose(report["monetary"]["coefficients"]["beta2"], 0.433)
        assert "standard_errors" in report["real_sphere"]
