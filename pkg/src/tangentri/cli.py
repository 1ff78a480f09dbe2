"""Command-line front end.

Every command writes one report (JSON by default, or CSV rows with the
columns ``experiment, instance_id, param_json, lhs, rhs, ratio, pass``).
Output goes to ``--out``, else to ``$TANGENTRI_OUT_DIR/<name>.<format>``,
else to stdout. Exit status is 0 when every check passes, 1 on a usage or
configuration error and 2 when a check fails; failing instances are written
into the report (and next to a CSV report as ``<out>.replay.json``).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys

import numpy as np

from . import __version__
from .experiments import (BISECTION, EXACT, GRID_UPPER, PROP23_CASES, SUITES,
                          CorpusSpec, counterexample_prop23, labelled,
                          monte_carlo_label, record, sequence_to_dict,
                          suite_harness)
from .lorentz import DEFAULT_T_GRID, DENSE_T_GRID, k_functional, lorentz_norm
from .measure import DiscreteRandomVariable, SizingError, p_norm
from .orlicz import hinge, orlicz_norm_info, phi_t, power

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

OUT_DIR_ENV = "TANGENTRI_OUT_DIR"
CSV_COLUMNS = ("experiment", "instance_id", "param_json", "lhs", "rhs", "ratio", "pass")
COMMANDS = ("norm", "kfunc", "decouple", "verify", "counterexample", "sweep")
RANDOMIZED = {"decouple", "sweep"}
VERIFY_TARGETS = tuple(SUITES) + ("all",)
EXIT_OK, EXIT_USAGE, EXIT_FAIL = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _common(p, sub=True):
    # subcommand copies must not clobber flags given before the subcommand
    kw = {"default": argparse.SUPPRESS} if sub else {}
    p.add_argument("--config", help="TOML scenario file", **kw)
    p.add_argument("--seed", type=int, help="64-bit unsigned seed for randomized corpora", **kw)
    p.add_argument("--out", help="output file (default: $%s or stdout)" % OUT_DIR_ENV, **kw)
    p.add_argument("--format", choices=("json", "csv"), **kw)
    p.add_argument("--threads", type=int, **kw)
    p.add_argument("--grid", help="t-grid: default, dense, or a file of numbers", **kw)


def build_parser():
    parser = _Parser(prog="tangentri", description="Exact decoupling and interpolation checks.")
    parser.add_argument("--version", action="version", version=f"tangentri {__version__}")
    _common(parser, sub=False)
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("norm", help="Orlicz, Lorentz or L_p norm of a finite law")
    _common(p)
    p.add_argument("--atoms", help="comma list of value:prob pairs")
    p.add_argument("--kind", choices=("orlicz", "lorentz", "p"))
    p.add_argument("--phi", help="power:P | phi_t:P,Q,T | hinge:A")
    p.add_argument("--p", type=float)
    p.add_argument("--q", type=float)

    p = sub.add_parser("kfunc", help="K-functional of a finite law on a t-grid")
    _common(p)
    p.add_argument("--atoms")
    p.add_argument("--p", type=float)
    p.add_argument("--q", type=float)
    p.add_argument("--plot", help="write (t, K) series as CSV")

    p = sub.add_parser("decouple", help="decouple one seeded adapted sequence")
    _common(p)
    p.add_argument("--depth", type=int)
    p.add_argument("--kind", choices=("rademacher", "predictable-multiplier", "random-adapted"))
    p.add_argument("--lo", type=int)
    p.add_argument("--hi", type=int)
    p.add_argument("--mc", type=int, help="also report Monte Carlo E|S| with this many samples")

    p = sub.add_parser("verify", help="run a seeded verification suite")
    _common(p)
    p.add_argument("target", nargs="?", choices=VERIFY_TARGETS)
    p.add_argument("--p", type=float)
    p.add_argument("--q", type=float)
    p.add_argument("--count", type=int)

    p = sub.add_parser("counterexample", help="exact ratio for the hinge counterexample")
    _common(p)
    p.add_argument("--k", type=int)
    p.add_argument("--n1", type=int)

    p = sub.add_parser("sweep", help="empirical decoupling constants over seeded corpora")
    _common(p)
    p.add_argument("--count", type=int)
    p.add_argument("--depth-max", type=int, dest="depth_max")
    return parser


def load_config(path):
    try:
        with open(path, "rb") as fh:
            cfg = tomllib.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read config {path!r}: {exc.strerror}")
    except tomllib.TOMLDecodeError as exc:
        raise UsageError(f"malformed config {path!r}: {exc}")
    if "command" in cfg and cfg["command"] not in COMMANDS:
        raise UsageError(f"config command must be one of {COMMANDS}")
    return cfg


def resolve(args):
    """Merge CLI flags over the config file; returns ``(command, options)``."""
    cfg = load_config(args.config) if args.config else {}
    command = args.command or cfg.get("command")
    if command is None:
        raise UsageError("no command given (pass one or set 'command' in the config)")
    opts = {}
    for key, val in cfg.items():
        if not isinstance(val, dict) and key != "command":
            opts[key] = val
    section = cfg.get(command, {})
    if not isinstance(section, dict):
        raise UsageError(f"config section [{command}] must be a table")
    opts.update(section)
    for key, val in vars(args).items():
        if val is not None and key not in ("config", "command"):
            opts[key] = val
    return command, opts


def parse_grid(spec):
    if spec is None:
        return None
    if spec == "default":
        return DEFAULT_T_GRID
    if spec == "dense":
        return DENSE_T_GRID
    if isinstance(spec, list):
        vals = spec
    else:
        try:
            with open(spec, encoding="utf-8") as fh:
                text = fh.read()
        except OSError:
            raise UsageError(f"--grid must be 'default', 'dense' or a readable file, got {spec!r}")
        text = text.strip()
        try:
            vals = json.loads(text) if text.startswith("[") else text.replace(",", " ").split()
        except json.JSONDecodeError as exc:
            raise UsageError(f"grid file {spec!r} is not valid JSON: {exc}")
    try:
        grid = np.array([float(v) for v in vals], dtype=np.float64)
    except (TypeError, ValueError):
        raise UsageError("grid entries must be numbers")
    if grid.size == 0 or not np.all(np.isfinite(grid)) or np.any(grid < 0):
        raise UsageError("grid must be a nonempty list of finite t >= 0")
    return np.unique(grid)


def parse_atoms(spec):
    if spec is None:
        raise UsageError("--atoms is required (value:prob,...)")
    if isinstance(spec, list):
        pairs = [tuple(x) for x in spec]
    else:
        try:
            pairs = [tuple(float(x) for x in item.split(":")) for item in spec.split(",")]
        except ValueError:
            raise UsageError("--atoms must look like 1:0.5,-1:0.5")
    if any(len(x) != 2 for x in pairs):
        raise UsageError("each atom needs exactly value:prob")
    return DiscreteRandomVariable.from_atoms(pairs)


def parse_phi(spec):
    if spec is None:
        raise UsageError("--phi is required for an Orlicz norm")
    name, _, rest = spec.partition(":")
    try:
        args = [float(x) for x in rest.split(",")] if rest else []
    except ValueError:
        raise UsageError(f"bad Orlicz parameters in {spec!r}")
    table = {"power": (power, 1), "phi_t": (phi_t, 3), "hinge": (hinge, 1)}
    if name not in table or len(args) != table[name][1]:
        raise UsageError("--phi must be power:P, phi_t:P,Q,T or hinge:A")
    return table[name][0](*args)


def _pw(x):
    return x if math.isfinite(x) else "inf"


def _need(opts, key, cast=float):
    if opts.get(key) is None:
        raise UsageError(f"--{key} is required")
    try:
        return cast(opts[key])
    except (TypeError, ValueError):
        raise UsageError(f"--{key} must be a {cast.__name__}")


def _seed(opts, command):
    seed = opts.get("seed")
    if seed is None:
        if command in RANDOMIZED or command == "verify":
            raise UsageError("--seed is required for randomized corpora")
        return None
    if not 0 <= int(seed) < 2 ** 64:
        raise UsageError("--seed must be a 64-bit unsigned integer")
    return int(seed)


def _finish(name, params, records, passed, extra=None, failures=None):
    return {"name": name, "params": params, "records": records, "pass": bool(passed),
            "results": extra or {}, "failures": failures or []}


def cmd_norm(opts):
    x = parse_atoms(opts.get("atoms"))
    kind = opts.get("kind", "orlicz")
    if kind == "orlicz":
        phi = parse_phi(opts.get("phi"))
        info = orlicz_norm_info(x, phi)
        prov = "exact" if info.provenance == "exact" else BISECTION
        val = labelled(info.value, prov)
        params = {"kind": kind, "phi": phi.name, "degenerate": info.degenerate,
                  "iterations": info.iterations}
    elif kind == "lorentz":
        p, q = _need(opts, "p"), _need(opts, "q")
        val = labelled(lorentz_norm(x, p, q), EXACT)
        params = {"kind": kind, "p": p, "q": _pw(q)}
    else:
        p = _need(opts, "p")
        val = labelled(p_norm(x, p), EXACT)
        params = {"kind": kind, "p": p}
    rec = {"experiment": "norm", "instance_id": 0, "params": params, "lhs": val,
           "rhs": labelled(None, EXACT), "ratio": labelled(None, EXACT), "pass": True}
    return _finish("norm", params, [rec], True, {"norm": val})


def cmd_kfunc(opts):
    x = parse_atoms(opts.get("atoms"))
    p, q = _need(opts, "p"), _need(opts, "q")
    ts = parse_grid(opts.get("grid")) if opts.get("grid") is not None else DEFAULT_T_GRID
    ks = k_functional(x, p=p, q=q, t=ts)
    recs = [{"experiment": "kfunc", "instance_id": i, "params": {"p": p, "q": _pw(q), "t": float(t)},
             "lhs": labelled(k, GRID_UPPER), "rhs": labelled(None, EXACT),
             "ratio": labelled(None, EXACT), "pass": True}
            for i, (t, k) in enumerate(zip(ts.tolist(), ks.tolist()))]
    if opts.get("plot"):
        write_series(opts["plot"], ts, ks, ("t", "k"))
    return _finish("kfunc", {"p": p, "q": _pw(q), "grid_points": int(ts.size)}, recs, True)


def write_series(path, xs, ys, header=("x", "y")):
    """Plot data as a two-column CSV; rendering is left to external tools."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for x, y in zip(xs, ys):
            w.writerow([repr(float(x)), repr(float(y))])


def cmd_decouple(opts):
    from .tangent import (check_ci, check_tangent, decouple, monte_carlo,
                          sum_distribution)
    seed = _seed(opts, "decouple")
    depth = int(opts.get("depth", 4))
    kind = opts.get("kind", "predictable-multiplier")
    corpus = CorpusSpec(1, depth, depth, kind, (int(opts.get("lo", -3)), int(opts.get("hi", 3))), seed)
    seq = corpus.generate()[0]
    pair = decouple(seq, check=False)
    tan = check_tangent(seq, pair.marginal)
    ci = check_ci(pair).passed if depth <= 8 else None
    a, b = sum_distribution(seq), sum_distribution(pair)
    results = {"sequence": sequence_to_dict(seq), "tangent": tan, "ci": ci,
               "sum_law": [[labelled(v, EXACT), labelled(pr, EXACT)] for v, pr in a.atoms],
               "decoupled_sum_law": [[labelled(v, EXACT), labelled(pr, EXACT)] for v, pr in b.atoms]}
    ea = float(np.dot(a.probs, np.abs(a.values)))
    eb = float(np.dot(b.probs, np.abs(b.values)))
    recs = [record("decouple", 0, dict(corpus.params(), tangent=tan, ci=ci), ea, eb,
                   ea / eb if eb > 0 else None, tan and ci is not False)]
    if opts.get("mc"):
        n = int(opts["mc"])
        ma = monte_carlo(seq, np.abs, n, seed)
        mb = monte_carlo(pair, np.abs, n, seed + 1 if seed + 1 < 2 ** 64 else 0)
        results["monte_carlo"] = {"e_abs_sum": labelled(ma.mean, monte_carlo_label(n, ma.stderr)),
                                  "e_abs_decoupled_sum": labelled(mb.mean, monte_carlo_label(n, mb.stderr))}
    failures = [] if recs[0]["pass"] else [{"sequence": sequence_to_dict(seq)}]
    return _finish("decouple", corpus.params(), recs, recs[0]["pass"], results, failures)


def _suite_kwargs(target, opts):
    kw = {"threads": int(opts.get("threads", 1))}
    if opts.get("grid") is not None:
        kw["grid"] = parse_grid(opts["grid"])
    if opts.get("count") is not None:
        kw["count"] = int(opts["count"])
    if target in ("lemma32", "lemma33", "theorem13") and (opts.get("p") is not None
                                                           or opts.get("q") is not None):
        kw["pq"] = ((_need(opts, "p"), _need(opts, "q")),)
    return kw


def cmd_verify(opts):
    target = opts.get("target")
    if target is None:
        raise UsageError(f"verify needs a target: one of {VERIFY_TARGETS}")
    if target not in VERIFY_TARGETS:
        raise UsageError(f"unknown verify target {target!r}")
    seed = _seed(opts, "verify")
    targets = list(SUITES) if target == "all" else [target]
    suites, recs, fails = {}, [], []
    for name in targets:
        kw = _suite_kwargs(name, opts) if target != "all" else {"threads": int(opts.get("threads", 1))}
        if name == "counterexample":
            kw = {}
        res = SUITES[name](seed=seed, **kw)
        suites[name] = {"pass": res.passed, "params": res.params, "summary": res.summary}
        recs += res.records
        fails += [dict(f, experiment=name) for f in res.failures]
    passed = all(s["pass"] for s in suites.values())
    return _finish(f"verify-{target}", {"target": target, "seed": seed}, recs, passed,
                   {"suites": suites}, fails)


def cmd_counterexample(opts):
    if opts.get("k") is None and opts.get("n1") is None:
        cases = PROP23_CASES
    else:
        cases = ((_need(opts, "k", int), _need(opts, "n1", int)),)
    recs, reports, fails = [], [], []
    for i, (k, n1) in enumerate(cases):
        rep = counterexample_prop23(k, n1)
        d = rep.to_dict()
        reports.append(d)
        recs.append(record("counterexample", i, {"k": k, "n1": n1, "bound": d["bound"]},
                           rep.lhs, rep.rhs, rep.ratio, rep.passed))
        if not rep.passed:
            fails.append({"k": k, "n1": n1})
    extra = reports[0] if len(reports) == 1 else {"cases": reports}
    return _finish("counterexample", {"cases": [list(c) for c in cases]}, recs,
                   not fails, extra, fails)


def cmd_sweep(opts):
    seed = _seed(opts, "sweep")
    res = suite_harness(seed=seed, count=int(opts.get("count", 60)),
                        depth_max=int(opts.get("depth_max", 6)),
                        threads=int(opts.get("threads", 1)))
    return _finish("sweep", res.params, res.records, res.passed, res.summary, res.failures)


HANDLERS = {"norm": cmd_norm, "kfunc": cmd_kfunc, "decouple": cmd_decouple,
            "verify": cmd_verify, "counterexample": cmd_counterexample, "sweep": cmd_sweep}


def to_json(command, seed, report):
    doc = {"tool": "tangentri", "version": __version__, "command": command, "seed": seed,
           "name": report["name"], "params": report["params"], "pass": report["pass"],
           "results": report["results"], "records": report["records"],
           "failures": report["failures"]}
    return json.dumps(doc, sort_keys=True, indent=2, allow_nan=False) + "\n"


def _csv_value(field):
    v = field["value"]
    return "" if v is None else (repr(v) if isinstance(v, float) else str(v))


def to_csv(report):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in report["records"]:
        params = dict(r["params"], provenance={"lhs": r["lhs"]["provenance"],
                                               "rhs": r["rhs"]["provenance"],
                                               "ratio": r["ratio"]["provenance"]})
        w.writerow([r["experiment"], r["instance_id"],
                    json.dumps(params, sort_keys=True, allow_nan=False),
                    _csv_value(r["lhs"]), _csv_value(r["rhs"]), _csv_value(r["ratio"]),
                    "true" if r["pass"] else "false"])
    return buf.getvalue()


def output_path(opts, name, fmt):
    if opts.get("out"):
        return opts["out"]
    base = os.environ.get(OUT_DIR_ENV)
    if base:
        os.makedirs(base, exist_ok=True)
        return os.path.join(base, f"{name}.{fmt}")
    return None


def _write(path, text):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def run(argv=None):
    """Parse, execute and write; returns the exit code."""
    try:
        args = build_parser().parse_args(argv)
        command, opts = resolve(args)
        fmt = opts.get("format", "json")
        if fmt not in ("json", "csv"):
            raise UsageError("--format must be json or csv")
        if opts.get("threads") is not None and int(opts["threads"]) < 1:
            raise UsageError("--threads must be >= 1")
        report = HANDLERS[command](opts)
    except UsageError as exc:
        print(f"tangentri: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, SizingError, TypeError) as exc:
        print(f"tangentri: error: precondition violated: {exc}", file=sys.stderr)
        return EXIT_USAGE
    path = output_path(opts, report["name"], fmt)
    if fmt == "json":
        _write(path, to_json(command, opts.get("seed"), report))
    else:
        _write(path, to_csv(report))
        if report["failures"]:
            replay = json.dumps(report["failures"], sort_keys=True, indent=2, allow_nan=False) + "\n"
            if path is None:
                sys.stderr.write(replay)
            else:
                _write(path + ".replay.json", replay)
    if not report["pass"]:
        print(f"tangentri: {len(report['failures'])} failing instance(s)", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
