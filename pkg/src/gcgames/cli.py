"""Command-line interface: synthesize, scenarios, estimate, check.

Every run is driven by a JSON config (see ``default_config``) plus a few
overriding flags; the config hash and the realization seed are embedded in
all outputs so results are reproducible artifacts.  Solutions are paired with
the model that produced them through a digest of the canonical matrices;
``scenarios`` refuses a stale solution file.
"""

import argparse
import hashlib
import json
import sys
from pathlib import Path

import numpy as np

from . import estimate, fimo, scenario, synthesis
from .game import check_assumption1, check_assumption2, model_hash
from .uncertainty import REALIZATION_KINDS, Realization

__all__ = ["default_config", "load_config", "main"]

_MACRO_FIELDS = ("alpha1", "alpha2", "beta1", "beta2", "gamma1", "gamma2",
                 "rho1", "rho2", "delta1", "delta2", "delta3", "delta4",
                 "pi_star", "i_star")


def default_config():
    """The built-in configuration: estimated coefficients and defaults."""
    macro = fimo.MacroParams()
    return {
        "macro": {name: getattr(macro, name) for name in _MACRO_FIELDS},
        "x0": [-0.04, 0.175],
        "debt": {"d0": 41250.0, "xi0_star": 75000.0},
        "start_year": 2023,
        "horizon": 20,
        "realization": {"kind": "sin", "seed": 0},
        "synthesis": {
            "certificate_rule": "reference",
            "mu_mode": "tau-over-nu",
            "strictness": 1e-8,
            "max_iterations": 200,
        },
        "out_dir": "out",
    }


def _type_error(path, expected, value):
    return SystemExit(f"config error at {path}: expected {expected}, "
                      f"got {value!r}")


def _require_number(doc, path):
    if not isinstance(doc, (int, float)) or isinstance(doc, bool):
        raise _type_error(path, "a number", doc)
    return float(doc)


def load_config(path=None, overrides=None):
    """Merge a config file (if any) over the defaults and validate it."""
    config = default_config()
    if path is not None:
        try:
            with open(path) as handle:
                user = json.load(handle)
        except FileNotFoundError:
            raise SystemExit(f"config file not found: {path}")
        except json.JSONDecodeError as exc:
            raise SystemExit(f"config file {path} is not valid JSON: {exc}")
        if not isinstance(user, dict):
            raise SystemExit(f"config file {path} must hold a JSON object")
        for key, value in user.items():
            if key not in config:
                raise SystemExit(f"config error: unknown key {key!r}")
            if isinstance(config[key], dict):
                if not isinstance(value, dict):
                    raise _type_error(key, "an object", value)
                for sub, subval in value.items():
                    if sub not in config[key]:
                        raise SystemExit(
                            f"config error: unknown key {key}.{sub}"
                        )
                    config[key][sub] = subval
            else:
                config[key] = value

    for name, value in (overrides or {}).items():
        section, _, sub = name.partition(".")
        if sub:
            config[section][sub] = value
        else:
            config[section] = value

    # validation
    for name in _MACRO_FIELDS:
        _require_number(config["macro"][name], f"macro.{name}")
    x0 = config["x0"]
    if (not isinstance(x0, (list, tuple)) or len(x0) != 2):
        raise _type_error("x0", "a 2-element array", x0)
    [_require_number(v, "x0[]") for v in x0]
    for key in ("d0", "xi0_star"):
        if _require_number(config["debt"][key], f"debt.{key}") <= 0:
            raise SystemExit(f"config error: debt.{key} must be positive")
    horizon = config["horizon"]
    if not isinstance(horizon, int) or horizon < 1:
        raise _type_error("horizon", "a positive integer", horizon)
    if not isinstance(config["start_year"], int):
        raise _type_error("start_year", "an integer", config["start_year"])
    kind = config["realization"]["kind"]
    if kind not in REALIZATION_KINDS:
        raise SystemExit(f"config error: realization.kind must be one of "
                         f"{REALIZATION_KINDS}, got {kind!r}")
    if not isinstance(config["realization"]["seed"], int):
        raise _type_error("realization.seed", "an integer",
                          config["realization"]["seed"])
    rule = config["synthesis"]["certificate_rule"]
    if rule not in ("reference", "tight"):
        raise SystemExit("config error: synthesis.certificate_rule must be "
                         "'reference' or 'tight'")
    return config


def config_hash(config):
    """Digest of the computation inputs; the output directory is excluded."""
    doc = {k: v for k, v in config.items() if k != "out_dir"}
    return hashlib.sha256(
        json.dumps(doc, sort_keys=True).encode()
    ).hexdigest()[:16]


def _macro_params(config):
    return fimo.MacroParams(**config["macro"])


def _synthesis_options(config):
    syn = config["synthesis"]
    return synthesis.SynthesisOptions(
        certificate_rule=syn["certificate_rule"],
        mu_mode=syn["mu_mode"],
        strictness=float(syn["strictness"]),
        max_iterations=int(syn["max_iterations"]),
    )


def _print_assumptions(model):
    rep1 = check_assumption1(model)
    rep2 = check_assumption2(model)
    print(f"constraint-data assumption: {'pass' if rep1 else 'FAIL'}")
    for reason in rep1.failures:
        print(f"  - {reason}")
    print(f"stabilizability/detectability assumption: "
          f"{'pass' if rep2 else 'FAIL'}")
    for reason in rep2.failures:
        print(f"  - {reason}")
    return rep1.passed and rep2.passed


def cmd_check(config, args):
    params = _macro_params(config)
    model = fimo.build_canonical(params)
    return 0 if _print_assumptions(model) else 2


def cmd_synthesize(config, args):
    params = _macro_params(config)
    model = fimo.build_canonical(params)
    if args.check_only:
        return 0 if _print_assumptions(model) else 2
    x0 = np.asarray(config["x0"], dtype=float)
    try:
        sol = synthesis.synthesize(model, x0, _synthesis_options(config))
    except synthesis.SynthesisError as exc:
        print(f"synthesis failed: {exc}", file=sys.stderr)
        return 2

    out_dir = Path(config["out_dir"])
    out_dir.mkdir(parents=True, exist_ok=True)
    doc = json.loads(synthesis.solution_to_json(sol))
    doc["config_hash"] = config_hash(config)
    doc["x0"] = x0.tolist()
    doc["costs"] = {"fiscal": sol.cost(1, x0), "monetary": sol.cost(2, x0)}
    path = out_dir / "solution.json"
    path.write_text(json.dumps(doc, indent=2, sort_keys=True))

    print(f"guaranteed cost, fiscal   V1(x0) = {sol.cost(1, x0):.6f}")
    print(f"guaranteed cost, monetary V2(x0) = {sol.cost(2, x0):.6f}")
    print(f"K1 = {sol.k1.ravel().tolist()}")
    print(f"K2 = {sol.k2.ravel().tolist()}")
    print(f"closed-loop spectral radius = {sol.closed_loop_radius:.6f}")
    print(f"certificate margins: "
          f"player 1 {sol.margins['player1']['certificate']:.3e}, "
          f"player 2 {sol.margins['player2']['certificate']:.3e}")
    print(f"solution written to {path}")
    return 0


def _load_solution(path, model):
    try:
        text = Path(path).read_text()
    except FileNotFoundError:
        raise SystemExit(f"solution file not found: {path}")
    doc = json.loads(text)
    sol = synthesis.solution_from_json(text)
    digest = model_hash(model)
    if sol.model_digest != digest:
        raise SystemExit(
            "solution file was produced for a different model "
            f"(digest {sol.model_digest[:12]}... vs {digest[:12]}...); "
            "re-run 'synthesize' with the current config"
        )
    return sol, doc


def cmd_scenarios(config, args):
    params = _macro_params(config)
    model = fimo.build_canonical(params)
    out_dir = Path(config["out_dir"])
    solution_path = args.solution or (out_dir / "solution.json")
    sol, _ = _load_solution(solution_path, model)

    x0 = config["x0"]
    base = scenario.ScenarioSpec(
        growth=scenario.GrowthPath(
            variant="moderate",
            xi0_star=float(config["debt"]["xi0_star"]),
            horizon=int(config["horizon"]),
        ),
        deficit=scenario.DeficitPath(variant="tight"),
        d0_debt=float(config["debt"]["d0"]),
        x0=fimo.MacroState(z=float(x0[0]), pi_tilde=float(x0[1])),
        realization=Realization(kind=config["realization"]["kind"],
                                seed=int(config["realization"]["seed"])),
        start_year=int(config["start_year"]),
    )
    results = scenario.run_all_nine(base, sol, params)

    out_dir.mkdir(parents=True, exist_ok=True)
    metadata = {
        "config_hash": config_hash(config),
        "seed": config["realization"]["seed"],
        "realization": config["realization"]["kind"],
    }
    for label, result in results.items():
        scenario.write_scenario_csv(result, out_dir / f"{label}.csv", metadata)
    rows = scenario.compare_scenarios(results)
    scenario.write_comparison_csv(rows, out_dir / "compare.csv", metadata)
    print(f"wrote {len(results)} scenario CSVs and compare.csv to {out_dir}")

    if args.charts:
        for code, name in (("A", "tight"), ("B", "loose"), ("C", "populist")):
            family = {lb: res for lb, res in results.items()
                      if lb.endswith(code)}
            path = out_dir / f"debt_{name}.svg"
            scenario.plot_debt_ratios(
                family, path, title=f"Debt-to-GDP proxy, {name} fiscal path"
            )
        print(f"wrote 3 charts to {out_dir}")

    for row in rows:
        cross = row["crosses_half_in"]
        print(f"  {row['label']}: final d = {row['d_final']:.4f}, "
              f"trend {row['trend']}"
              + (f", crosses 0.5 in {cross}" if cross else ""))
    return 0


def _parse_exclusions(text):
    ranges = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            lo, hi = part.split("-")
            ranges.append((int(lo), int(hi)))
        except ValueError:
            raise SystemExit(
                f"bad exclusion {part!r}; expected e.g. 2008-2009"
            )
    return tuple(ranges)


def cmd_estimate(config, args):
    try:
        table = estimate.load_table(args.csv)
    except (OSError, estimate.EstimationError) as exc:
        print(f"cannot load {args.csv}: {exc}", file=sys.stderr)
        return 1
    ranges = _parse_exclusions(args.exclude)
    trimmed = estimate.exclude_years(table, ranges)
    try:
        real_fit = estimate.fit_real_sphere(trimmed)
        mon_fit = estimate.fit_monetary(trimmed, i_star=args.i_star)
    except estimate.EstimationError as exc:
        print(f"estimation failed: {exc}", file=sys.stderr)
        return 2

    report = estimate.fit_report(real_fit, mon_fit, ranges)
    report["config_hash"] = config_hash(config)
    out_dir = Path(config["out_dir"])
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / "estimates.json"
    path.write_text(json.dumps(report, indent=2, sort_keys=True))

    excluded = ", ".join(f"{lo}-{hi}" for lo, hi in ranges) or "none"
    print(f"excluded crisis years: {excluded}")
    print("real-sphere equation:")
    print("  " + real_fit.summary().replace("\n", "\n  "))
    print("monetary equation:")
    print("  " + mon_fit.summary().replace("\n", "\n  "))
    print(f"report written to {path}")
    return 0


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="gcgames",
        description="Guaranteed-cost strategies for the fiscal-monetary "
                    "game and catch-up scenario analysis.",
    )
    parser.add_argument("--print-default-config", action="store_true",
                        help="emit the default JSON config and exit")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="path to a JSON config file")
    common.add_argument("--seed", type=int, help="override realization seed")
    common.add_argument("--out", help="override output directory")
    common.add_argument("--horizon", type=int, help="override horizon (years)")
    common.add_argument("--realization", choices=("zero", "sin", "random"),
                        help="override realization kind")

    sub = parser.add_subparsers(dest="command")
    p_syn = sub.add_parser("synthesize", parents=[common],
                           help="compute gains and guaranteed costs")
    p_syn.add_argument("--check-only", action="store_true",
                       help="run the standing assumptions and exit")
    sub.add_parser("check", parents=[common],
                   help="run the standing assumption checks")
    p_sc = sub.add_parser("scenarios", parents=[common],
                          help="simulate the nine catch-up scenarios")
    p_sc.add_argument("--solution", help="solution JSON (default: OUT/solution.json)")
    p_sc.add_argument("--charts", action="store_true",
                      help="also write SVG debt-ratio charts")
    p_est = sub.add_parser("estimate", parents=[common],
                           help="estimate equation coefficients from a CSV")
    p_est.add_argument("csv", help="annual time-series CSV")
    p_est.add_argument("--exclude", default="2008-2009,2020-2021",
                       help="year ranges to drop (default crisis windows)")
    p_est.add_argument("--i-star", type=float, default=0.03,
                       help="reference interest rate for the monetary fit")

    args = parser.parse_args(argv)
    if args.print_default_config:
        print(json.dumps(default_config(), indent=2, sort_keys=True))
        return 0
    if args.command is None:
        parser.print_help()
        return 1

    overrides = {}
    if args.seed is not None:
        overrides["realization.seed"] = args.seed
    if args.out is not None:
        overrides["out_dir"] = args.out
    if getattr(args, "horizon", None) is not None:
        overrides["horizon"] = args.horizon
    if getattr(args, "realization", None) is not None:
        overrides["realization.kind"] = args.realization
    config = load_config(args.config, overrides)

    handler = {
        "check": cmd_check,
        "synthesize": cmd_synthesize,
        "scenarios": cmd_scenarios,
        "estimate": cmd_estimate,
    }[args.command]
    return handler(config, args)


if __name__ == "__main__":
    sys.exit(main())
