"""Command-line interface: one executable, one subcommand per task.

Every output embeds the tool version, the effective configuration and
the seed, so a result file is reproducible from its own header.  Exit
codes: 0 success, 1 usage error, 2 domain error (disconnected input,
failed generation, failed bracket search); domain errors are reported
as one JSON object on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from . import capacity as cap
from . import experiments as exp
from .errors import NetcapError
from .generators import FAMILIES, GenSpec, build
from .graphs import Graph, is_connected, load_edge_list, metrics, save_edge_list
from .routing import ALGORITHMS, EFR, SPR, build_routing
from .simulate import estimate_rc, measure_eta


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # route argparse failures to exit code 1
        raise UsageError(message)


def _write_output(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _payload(command: str, args: argparse.Namespace, skip=("out", "func")) -> dict:
    config = {k: v for k, v in sorted(vars(args).items())
              if k not in skip and not k.startswith("_") and v is not None
              and k != "command"}
    config.pop("func", None)
    return {
        "tool": "netcap",
        "version": __version__,
        "command": command,
        "config": config,
    }


def _dump(obj: dict) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _load_graph(path: str) -> Graph:
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    return load_edge_list(text)


def _require_connected(g: Graph) -> None:
    if not is_connected(g):
        from .errors import DisconnectedGraphError
        raise DisconnectedGraphError("graph not connected")


def _build_design(g: Graph, routing: str, scheme: str, allow_mismatch: bool):
    rs = build_routing(g, routing)
    if scheme == cap.BC:
        profile = rs.betweenness() if routing == SPR else build_routing(g, SPR).betweenness()
        ca = cap.assign(g, scheme, profile)
    elif scheme == cap.EBC:
        ca = cap.assign(g, scheme, rs.betweenness())
    else:
        ca = cap.assign(g, scheme)
    return rs, ca


def _cmd_generate(args) -> int:
    spec = GenSpec(
        family=args.family, n=args.n, seed=args.seed, m=args.m,
        edges=args.edges, rewire=args.rewire, rows=args.rows, cols=args.cols)
    g = build(spec)
    header = [
        f"netcap {__version__} generate",
        f"family={args.family} n={args.n} seed={args.seed}"
        + (f" m={args.m}" if args.m is not None else "")
        + (f" edges={args.edges}" if args.edges is not None else "")
        + (f" rewire={args.rewire}" if args.rewire is not None else "")
        + (f" rows={args.rows} cols={args.cols}" if args.rows is not None else ""),
        f"nodes={g.n} edges={g.m}",
    ]
    _write_output(save_edge_list(g, header), args.out)
    return 0


def _cmd_analyze(args) -> int:
    g = _load_graph(args.graph)
    _require_connected(g)
    rs = build_routing(g, args.routing)
    profile = rs.betweenness()
    payload = _payload("analyze", args)
    payload.update({
        "n": g.n,
        "m": g.m,
        "algorithm": profile.algorithm,
        "b": [float(x) for x in profile.b],
        "b_max": profile.b_max,
        "gamma_avg_len": profile.gamma_avg_len,
    })
    _write_output(_dump(payload), args.out)
    return 0


def _cmd_evaluate(args) -> int:
    g = _load_graph(args.graph)
    _require_connected(g)
    rs, ca = _build_design(g, args.routing, args.scheme, args.allow_mismatch)
    ev = cap.analytic_rc(g, rs, ca, allow_mismatch=args.allow_mismatch)
    payload = _payload("evaluate", args)
    payload.update({
        "n": g.n,
        "m": g.m,
        "scheme": ev.scheme,
        "routing": ev.routing,
        "rc_analytic": ev.rc_analytic,
        "c_max": ev.c_max,
        "argmin_node": ev.argmin_node,
    })
    combo = (args.scheme, args.routing)
    if combo in cap.CLOSED_FORM_RC_COMBOS:
        cf = cap.closed_form_rc(g, rs.betweenness(), combo)
        payload["closed_form_rc"] = cf.value
        payload["mean_degree"] = cf.mean_degree
        payload["mean_degree_is_four"] = cf.mean_degree_is_four
    if combo in ((cap.BC, SPR), (cap.EBC, EFR)) or args.scheme in (cap.UC, cap.DC):
        cfm = cap.closed_form_cmax(g, rs.betweenness(), combo)
        payload["closed_form_c_max"] = cfm.value
    _write_output(_dump(payload), args.out)
    return 0


def _cmd_simulate(args) -> int:
    g = _load_graph(args.graph)
    _require_connected(g)
    rs, ca = _build_design(g, args.routing, args.scheme, allow_mismatch=False)
    est = measure_eta(g, rs, ca, args.rate, warmup=args.warmup,
                      delta_t=args.window, n_windows=args.windows,
                      seed=args.seed, max_packets=args.max_packets)
    payload = _payload("simulate", args)
    payload.update({
        "eta": est.eta if np.isfinite(est.eta) else "inf",
        "windows": est.windows,
        "rate": est.rate,
        "delta_t": est.delta_t,
        "overflow": est.overflow,
        "seed": args.seed,
    })
    _write_output(_dump(payload), args.out)
    return 0


def _cmd_find_rc(args) -> int:
    g = _load_graph(args.graph)
    _require_connected(g)
    rs, ca = _build_design(g, args.routing, args.scheme, allow_mismatch=False)
    bounds = None
    if args.lo is not None or args.hi is not None:
        if args.lo is None or args.hi is None:
            raise UsageError("pass both --lo and --hi or neither")
        bounds = (args.lo, args.hi)
    res = estimate_rc(g, rs, ca, eta_threshold=args.threshold, bounds=bounds,
                      seed=args.seed, warmup=args.warmup, delta_t=args.window,
                      n_windows=args.windows, decision_seeds=args.decision_seeds,
                      max_packets=args.max_packets)
    payload = _payload("find-rc", args)
    payload.update({
        "rc_sim": res.rc,
        "bracket": list(res.bracket),
        "rc_analytic": res.analytic_rc,
        "threshold": res.threshold,
        "evaluations": res.evaluations,
        "seed": args.seed,
    })
    _write_output(_dump(payload), args.out)
    return 0


def _cmd_reproduce(args) -> int:
    tables = {t.strip() for t in args.tables.split(",") if t.strip()}
    if not tables <= {"2", "3", "4"}:
        raise UsageError(f"--tables must be a subset of 2,3,4, got {args.tables!r}")
    families = [f.strip() for f in args.families.split(",") if f.strip()]
    include_sim = "3" in tables
    result = exp.reproduce_tables(
        families=families, n_instances=args.instances, seed=args.seed,
        include_simulation=include_sim, threads=args.threads)
    if args.format == "csv":
        header = (f"# netcap {__version__} reproduce tables={args.tables} "
                  f"families={','.join(families)} instances={args.instances} "
                  f"seed={args.seed} schema={result.schema_version}\n")
        _write_output(header + result.to_csv(), args.out)
    else:
        payload = _payload("reproduce", args)
        payload["schema_version"] = result.schema_version
        payload["rows"] = [vars(r) for r in result.rows]
        payload["means"] = {
            "/".join(key): value for key, value in sorted(result.means().items())}
        _write_output(_dump(payload), args.out)
    return 0


def _cmd_sweep(args) -> int:
    sizes = [int(s) for s in args.sizes.split(",") if s.strip()]
    fit = exp.scaling_sweep(args.family, sizes, args.quantity,
                            n_instances=args.instances, seed=args.seed,
                            threads=args.threads)
    payload = _payload("sweep", args)
    payload.update({
        "schema_version": exp.SCHEMA_VERSION,
        "exponent": fit.exponent,
        "intercept": fit.intercept,
        "r_squared": fit.r_squared,
        "points": [list(p) for p in fit.points],
    })
    _write_output(_dump(payload), args.out)
    return 0


def _build_parser() -> _Parser:
    parser = _Parser(prog="netcap", description=__doc__)
    parser.add_argument("--version", action="version", version=f"netcap {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate a topology as an edge list")
    p.add_argument("--family", required=True, choices=FAMILIES)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--m", type=int, help="ba: edges per new node; er: edge count")
    p.add_argument("--edges", type=int, help="pa/hot: total edge target")
    p.add_argument("--rewire", type=float, help="ws rewiring fraction")
    p.add_argument("--rows", type=int)
    p.add_argument("--cols", type=int)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("analyze", help="per-node effective betweenness profile")
    p.add_argument("--graph", required=True)
    p.add_argument("--routing", required=True, choices=ALGORITHMS)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("evaluate", help="analytic critical rate and cost proxy")
    p.add_argument("--graph", required=True)
    p.add_argument("--routing", required=True, choices=ALGORITHMS)
    p.add_argument("--scheme", required=True, choices=cap.SCHEMES)
    p.add_argument("--allow-mismatch", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("simulate", help="order parameter at one injection rate")
    p.add_argument("--graph", required=True)
    p.add_argument("--routing", required=True, choices=ALGORITHMS)
    p.add_argument("--scheme", required=True, choices=cap.SCHEMES)
    p.add_argument("--rate", "--R", dest="rate", type=float, required=True)
    p.add_argument("--warmup", type=int, default=1000)
    p.add_argument("--window", type=int, default=100)
    p.add_argument("--windows", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-packets", type=int, default=10_000_000)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("find-rc", help="bisect the simulated critical rate")
    p.add_argument("--graph", required=True)
    p.add_argument("--routing", required=True, choices=ALGORITHMS)
    p.add_argument("--scheme", required=True, choices=cap.SCHEMES)
    p.add_argument("--threshold", type=float, default=0.01)
    p.add_argument("--lo", type=float)
    p.add_argument("--hi", type=float)
    p.add_argument("--warmup", type=int, default=1000)
    p.add_argument("--window", type=int, default=100)
    p.add_argument("--windows", type=int, default=10)
    p.add_argument("--decision-seeds", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-packets", type=int, default=10_000_000)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_find_rc)

    p = sub.add_parser("reproduce", help="instance-averaged tables per family")
    p.add_argument("--tables", default="2,4",
                   help="2: analytic rates, 3: add simulation, 4: cost proxies")
    p.add_argument("--families", default=",".join(FAMILIES))
    p.add_argument("--instances", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_reproduce)

    p = sub.add_parser("sweep", help="size-scaling power-law fit of a quantity")
    p.add_argument("--family", required=True, choices=FAMILIES)
    p.add_argument("--quantity", required=True,
                   help="b_max_spr|b_max_efr|l_spr|l_efr|n|rc:scheme,routing|c_max:scheme,routing")
    p.add_argument("--sizes", default="400,800,1600,3200")
    p.add_argument("--instances", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_sweep)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return 1
    except NetcapError as exc:
        sys.stderr.write(json.dumps({"error": str(exc), "type": type(exc).__name__}) + "\n")
        return 2
    except ValueError as exc:
        sys.stderr.write(json.dumps({"error": str(exc), "type": type(exc).__name__}) + "\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
