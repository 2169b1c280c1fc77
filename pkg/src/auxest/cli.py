"""Command-line interface: ``auxest summarize | theory | simulate | oracle``.

Exit codes: 0 on success, 2 for invalid input or configuration, 3 when a
computation fails on valid input (for instance an estimator undefined on
every draw, or ``policy=abort`` meeting an undefined draw).

Configuration files are INI files read with :mod:`configparser`.  Keys in the
``[run]``, ``[input]`` and ``[design]`` sections are the long option names
(``n-prime`` or ``n_prime`` both work); ``[scalars]`` and ``[synthesize]``
hold ``name = value`` pairs equivalent to ``--scalars`` and
``--synthesize``; ``[estimators]`` has a ``list`` key.  Command-line options
override the file.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import io
import json
import sys
from dataclasses import asdict, fields
from pathlib import Path
from typing import Optional, Sequence

from . import tables
from .errors import AuxEstError, ConfigError, EstimationError, MissingScalar
from .montecarlo import SimulationConfig, Tolerance, compare_theory_empirical, exact_moments_enumeration, run_simulation
from .naming import parse_estimator_list, split_list
from .population import (DesignConstants, PopulationSummary, SynthesisTarget, load_population_csv,
                         summarize, synthesize_population)
from .sampling import DEFAULT_ENUMERATION_CAP
from .theory import TheoryMoments, min_mse_mean, min_mse_variance, pre, theory

__all__ = ["main", "build_parser", "EXIT_OK", "EXIT_CONFIG", "EXIT_RUNTIME"]

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME = 0, 2, 3

SYMBOLS = {
    "N": "N", "Ybar": "Ȳ", "Xbar": "X̄", "P": "P", "Sy2": "S_y²", "Sx2": "S_x²", "Sphi2": "S_φ²",
    "Syx": "S_yx", "Syphi": "S_yφ", "Cy": "C_y", "Cx": "C_x", "Cp": "C_p", "rho": "ρ",
    "rho_pb": "ρ_pb", "beta2y": "β₂(y)", "beta2x": "β₂(x)", "beta2phi": "β₂(φ)", "h": "h",
    "C": "C", "K": "K", "Kp": "K_p", "Bphi": "B_φ",
}

# option dest -> type used when the value comes from a config file
_CONFIG_KEYS = {
    "input": str, "y": str, "x": str, "phi": str, "seed": int, "output": str, "format": str,
    "N": int, "n": int, "n_prime": int, "fpc": "bool", "estimators": str, "table": str,
    "replications": int, "policy": str, "workers": int, "block": int, "bias_form": str,
    "mse_tol": float, "bias_tol": float, "cap": int, "scalars": str, "synthesize": str,
}


# ---------------------------------------------------------------------------
# rendering

def _fmt(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "pass" if v else "FAIL"
    if isinstance(v, float):
        return f"{v:.6g}"
    if isinstance(v, (tuple, list)):
        return "; ".join(map(str, v))
    return str(v)


def render_table(rows: list[dict], columns: Sequence[str]) -> str:
    """Fixed-width text table; numbers rounded to 6 significant digits for display."""
    cells = [[_fmt(r.get(c)) for c in columns] for r in rows]
    widths = [max([len(c)] + [len(row[i]) for row in cells]) for i, c in enumerate(columns)]
    line = lambda vals: "  ".join(v.ljust(w) for v, w in zip(vals, widths)).rstrip()
    out = [line(columns), line(["-" * w for w in widths])] + [line(r) for r in cells]
    return "\n".join(out) + "\n"


def _csv_cell(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (tuple, list)):
        return "; ".join(map(str, v))
    return str(v)


def render_csv(rows: list[dict], columns: Sequence[str]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_csv_cell(r.get(c)) for c in columns])
    return buf.getvalue()


def render_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=False, ensure_ascii=False) + "\n"


def _render(rows, columns, fmt, payload=None, header=None):
    if fmt == "json":
        return render_json(payload if payload is not None else rows)
    if fmt == "csv":
        return render_csv(rows, columns)
    text = render_table(rows, columns)
    return (header + "\n" + text) if header else text


# ---------------------------------------------------------------------------
# configuration

def _parse_pairs(text: str, what: str) -> dict:
    out = {}
    for part in split_list(text):
        if "=" not in part:
            raise ConfigError(f"{what}: {part!r} is not name=value")
        k, v = (t.strip() for t in part.split("=", 1))
        out[k] = v
    return out


def _to_float(key, v, what):
    try:
        return float(v)
    except ValueError:
        raise ConfigError(f"{what}: {key}={v!r} is not a number") from None


def _coerce(key, value, kind):
    if kind == "bool":
        low = str(value).strip().lower()
        if low in ("1", "true", "yes", "on"):
            return True
        if low in ("0", "false", "no", "off"):
            return False
        raise ConfigError(f"config key {key}: expected a boolean, got {value!r}")
    try:
        return kind(value)
    except ValueError:
        raise ConfigError(f"config key {key}: cannot read {value!r}") from None


def load_config(path) -> dict:
    """Flatten an INI file into option values keyed like the argparse destinations."""
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str
    try:
        with open(path, encoding="utf-8") as fh:
            cp.read_file(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    except configparser.Error as exc:
        raise ConfigError(f"malformed config {path}: {exc}") from None
    out: dict = {}
    for section in cp.sections():
        items = dict(cp.items(section))
        if section in ("scalars", "synthesize"):
            out[section] = ",".join(f"{k}={v}" for k, v in items.items())
            continue
        if section == "estimators":
            extra = set(items) - {"list"}
            if extra:
                raise ConfigError(f"[estimators] accepts only 'list', not {sorted(extra)}")
            if "list" in items:
                out["estimators"] = items["list"]
            continue
        if section not in ("run", "input", "design"):
            raise ConfigError(f"unknown config section [{section}]")
        for k, v in items.items():
            dest = k.replace("-", "_")
            if dest not in _CONFIG_KEYS:
                raise ConfigError(f"unknown config key {k!r} in [{section}]")
            out[dest] = _coerce(k, v, _CONFIG_KEYS[dest])
    return out


def _load_population(opts):
    sources = [s for s in ("input", "synthesize") if opts.get(s)]
    if len(sources) != 1:
        raise ConfigError("give exactly one population source: --input or --synthesize")
    if opts.get("input"):
        return load_population_csv(opts["input"], y=opts.get("y") or "y", x=opts.get("x"),
                                   phi=opts.get("phi"))
    pairs = _parse_pairs(opts["synthesize"], "--synthesize")
    names = {f.name for f in fields(SynthesisTarget)}
    unknown = set(pairs) - names
    if unknown:
        raise ConfigError(f"--synthesize: unknown targets {sorted(unknown)}")
    values = {k: (v if k == "x_distribution" else _to_float(k, v, "--synthesize"))
              for k, v in pairs.items()}
    for k in ("N", "Ybar", "Cy"):
        if k not in values:
            raise ConfigError(f"--synthesize needs {k}")
    values["N"] = int(values["N"])
    seed = opts.get("seed")
    return synthesize_population(SynthesisTarget(**values), 0 if seed is None else seed)


def _summary_from_scalars(text: str) -> PopulationSummary:
    pairs = _parse_pairs(text, "--scalars")
    unknown = set(pairs) - set(PopulationSummary.field_names())
    if unknown:
        raise MissingScalar(f"--scalars: unknown names {sorted(unknown)}; "
                            f"known: {', '.join(PopulationSummary.field_names())}")
    return PopulationSummary.from_scalars(**{k: _to_float(k, v, "--scalars") for k, v in pairs.items()})


def _design(opts, N_default: Optional[int]) -> DesignConstants:
    N = opts.get("N") or N_default
    if N is None:
        raise MissingScalar("population size N is needed (give --N or N in --scalars)")
    if opts.get("n") is None:
        raise ConfigError("sample size --n is needed")
    return DesignConstants(int(N), opts["n"], opts.get("n_prime"), ignore_fpc=not opts.get("fpc", False))


def _estimators(opts, summary, default=None):
    text = opts.get("estimators") or default
    if not text:
        raise ConfigError("no estimators given (--estimators)")
    return parse_estimator_list(text, summary)


# ---------------------------------------------------------------------------
# commands

def cmd_summarize(opts) -> str:
    pop = _load_population(opts)
    summary = summarize(pop)
    rows = [{"name": k, "symbol": SYMBOLS.get(k, k), "value": v} for k, v in summary.as_dict().items()]
    header = f"population of N = {pop.N} units (fingerprint {pop.fingerprint()[:12]}); '-' marks an unset field"
    return _render(rows, ["name", "symbol", "value"], opts["format"], summary.as_dict(), header)


_TABLE_COLUMNS = ["population", "row", "printed", "computed", "rel_delta", "abs_delta", "tolerance",
                  "status", "note"]


def _cmd_table(opts) -> str:
    rows = tables.build_table(opts["table"])
    dicts = [asdict(r) for r in rows]
    if opts["format"] == "csv":
        return tables.rows_to_csv(rows)
    title = tables.TABLES[opts["table"]].title
    payload = {"table": opts["table"], "title": title, "rows": dicts}
    return _render(dicts, _TABLE_COLUMNS, opts["format"], payload, f"{opts['table']}: {title}")


def _bound_row(kind, summary, design, base_mse):
    try:
        if kind == "mean":
            mode = "two_phase" if design.two_phase else "single"
            mse = min_mse_mean(summary, design, mode=mode)
            label = "optimum bound (regression)"
        else:
            mse = min_mse_variance(summary, design)
            label = "optimum bound (variance family)"
    except AuxEstError:
        return None
    return {"estimator": label, "kind": kind, "bias": None, "mse": mse,
            "pre": None if base_mse is None else pre(base_mse, mse)}


def cmd_theory(opts) -> str:
    if opts.get("table"):
        return _cmd_table(opts)
    if opts.get("scalars"):
        if opts.get("input") or opts.get("synthesize"):
            raise ConfigError("give --scalars or a population, not both")
        summary = _summary_from_scalars(opts["scalars"])
    else:
        summary = summarize(_load_population(opts))
    design = _design(opts, summary.N)
    specs = _estimators(opts, summary)
    bias_form = opts.get("bias_form") or "printed"
    baselines = {}
    rows = []
    for kind, base in (("mean", "ybar"), ("variance", "s2")):
        if any(s.kind == kind for s in specs):
            (b,) = parse_estimator_list(base)
            baselines[kind] = theory(b, summary, design, bias_form).mse
    for s in specs:
        tm = theory(s, summary, design, bias_form)
        rows.append({"estimator": s.label, "kind": s.kind, "bias": tm.bias, "mse": tm.mse,
                     "pre": pre(baselines[s.kind], tm.mse)})
    for kind in baselines:
        row = _bound_row(kind, summary, design, baselines[kind])
        if row:
            rows.append(row)
    header = (f"first-order theory, N={design.N}, n={design.n}"
              + (f", n'={design.n_prime}" if design.two_phase else "")
              + f", bias form {bias_form}; PRE against ybar (means) or s2 (variances)")
    return _render(rows, ["estimator", "kind", "bias", "mse", "pre"], opts["format"],
                   {"design": {"N": design.N, "n": design.n, "n_prime": design.n_prime},
                    "bias_form": bias_form, "rows": rows}, header)


_SIM_COLUMNS = ["label", "truth", "mean", "bias", "se_bias", "mse", "se_mse", "pre",
                "theory_bias", "theory_mse", "delta_mse", "defined", "undefined", "mse_pass", "bias_pass"]


def cmd_simulate(opts) -> str:
    pop = _load_population(opts)
    design = _design(opts, pop.N)
    if design.N != pop.N:
        raise ConfigError(f"--N={design.N} disagrees with the population size {pop.N}")
    specs = _estimators(opts, summarize(pop))
    if opts.get("seed") is None:
        raise ConfigError("simulate needs --seed")
    cfg = SimulationConfig(
        replications=opts.get("replications") or 10_000, seed=opts["seed"], design=design,
        estimators=specs, policy=opts.get("policy") or "skip", bias_form=opts.get("bias_form") or "printed",
        workers=opts.get("workers") or 1, block=opts.get("block") or 2000)
    report = run_simulation(pop, cfg)
    tol = Tolerance(mse_rel=opts.get("mse_tol") if opts.get("mse_tol") is not None else 0.10,
                    bias_abs=opts.get("bias_tol"))
    theory_map = {r.label: TheoryMoments(r.theory_bias, r.theory_mse) for r in report.results}
    verdicts = compare_theory_empirical(report, theory_map, tol)
    passes = {(v.label, v.quantity): v.passed for v in verdicts}
    rows = []
    for r in report.results:
        d = asdict(r)
        d["mse_pass"] = passes.get((r.label, "mse"))
        d["bias_pass"] = passes.get((r.label, "bias"))
        rows.append(d)
    if opts["format"] == "csv":
        cols = list(report.to_csv().splitlines()[0].split(",")) + ["mse_pass", "bias_pass"]
        return render_csv(rows, cols)
    payload = report.to_dict()
    payload["verdicts"] = [asdict(v) for v in verdicts]
    header = (f"{report.replications} replications, seed {report.seed}, N={report.N}, n={report.n}"
              + (f", n'={report.n_prime}" if report.n_prime else "")
              + f", policy {report.policy}; mse tolerance rel {tol.mse_rel:g}")
    return _render(rows, _SIM_COLUMNS, opts["format"], payload, header)


_ORACLE_COLUMNS = ["label", "kind", "truth", "expectation", "bias", "mse", "defined", "undefined"]


def cmd_oracle(opts) -> str:
    pop = _load_population(opts)
    if opts.get("n") is None:
        raise ConfigError("oracle needs --n")
    if opts.get("n_prime") is not None:
        raise ConfigError("oracle enumerates single-phase samples only")
    specs = _estimators(opts, summarize(pop))
    cap = opts.get("cap") or DEFAULT_ENUMERATION_CAP
    report = exact_moments_enumeration(pop, opts["n"], specs, cap=cap, policy=opts.get("policy") or "skip")
    if opts["format"] == "csv":
        return report.to_csv()
    if opts["format"] == "json":
        return report.to_json()
    rows = [asdict(r) for r in report.results]
    header = f"exact moments over all {report.sample_space_size} samples of size {report.n} from N={report.N}"
    return _render(rows, _ORACLE_COLUMNS, "table", header=header)


COMMANDS = {"summarize": cmd_summarize, "theory": cmd_theory, "simulate": cmd_simulate, "oracle": cmd_oracle}


# ---------------------------------------------------------------------------
# argument parsing

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _common(p):
    g = p.add_argument_group("common")
    g.add_argument("--config", help="INI configuration file; command-line options override it")
    g.add_argument("--input", help="population CSV with a header row")
    g.add_argument("--y", help="study-variable column (default y)")
    g.add_argument("--x", help="auxiliary column (default x, when present)")
    g.add_argument("--phi", help="attribute column (default phi, when present)")
    g.add_argument("--synthesize", help="synthesize a population instead: 'N=..,Ybar=..,Cy=..,Cx=..,rho=..'")
    g.add_argument("--seed", type=int, help="random seed (simulation and synthesis)")
    g.add_argument("--output", help="write to this file instead of standard output")
    g.add_argument("--format", choices=("table", "csv", "json"), help="output format (default table)")


def _design_args(p, sizes=True):
    g = p.add_argument_group("design")
    if sizes:
        g.add_argument("--N", type=int, help="population size (default from the population)")
    g.add_argument("--n", type=int, help="(second-phase) sample size")
    if sizes:
        g.add_argument("--n-prime", dest="n_prime", type=int, help="first-phase sample size")
        g.add_argument("--fpc", action="store_true", default=None,
                       help="use 1/n - 1/N instead of 1/n in the variance-estimator theory")
    g.add_argument("--estimators", help="comma-separated estimator names, e.g. 'ybar, exp_ratio_aux(a=1,b=0)'")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="auxest", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("summarize", help="population parameters")
    _common(p)

    p = sub.add_parser("theory", help="first-order bias, MSE and PRE, or a published table")
    _common(p)
    _design_args(p)
    p.add_argument("--scalars", help="summary parameters as 'Ybar=3.36,Cy=0.604,...'")
    p.add_argument("--table", help=f"recompute a published table: {', '.join(tables.table_ids())}")
    p.add_argument("--bias-form", dest="bias_form", choices=("printed", "expanded"))

    p = sub.add_parser("simulate", help="Monte Carlo moments against theory")
    _common(p)
    _design_args(p)
    p.add_argument("--replications", type=int)
    p.add_argument("--policy", choices=("skip", "abort"))
    p.add_argument("--workers", type=int)
    p.add_argument("--block", type=int)
    p.add_argument("--bias-form", dest="bias_form", choices=("printed", "expanded"))
    p.add_argument("--mse-tol", dest="mse_tol", type=float, help="relative MSE tolerance (default 0.10)")
    p.add_argument("--bias-tol", dest="bias_tol", type=float, help="absolute bias tolerance (default: not checked)")

    p = sub.add_parser("oracle", help="exact moments by enumerating every sample")
    _common(p)
    _design_args(p, sizes=False)
    p.add_argument("--n-prime", dest="n_prime", type=int, help=argparse.SUPPRESS)
    p.add_argument("--cap", type=int, help=f"largest sample space to enumerate (default {DEFAULT_ENUMERATION_CAP})")
    p.add_argument("--policy", choices=("skip", "abort"))
    return parser


def _options(ns: argparse.Namespace) -> dict:
    opts = {}
    if ns.config:
        opts.update(load_config(ns.config))
    for k, v in vars(ns).items():
        if v is not None and k not in ("config", "command"):
            opts[k] = v
    opts.setdefault("format", "table")
    if opts["format"] not in ("table", "csv", "json"):
        raise ConfigError(f"format must be table, csv or json, not {opts['format']!r}")
    return opts


def main(argv: Optional[Sequence[str]] = None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        opts = _options(ns)
        text = COMMANDS[ns.command](opts)
        if opts.get("output"):
            Path(opts["output"]).write_text(text, encoding="utf-8")
        else:
            sys.stdout.write(text)
    except ConfigError as exc:
        print(f"auxest: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except EstimationError as exc:
        print(f"auxest: computation failed: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except OSError as exc:
        print(f"auxest: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
