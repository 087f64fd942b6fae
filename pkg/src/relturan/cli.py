"""Command line interface.

Exit codes: 0 success, 2 input error, 3 resource guard or budget refusal,
4 certificate violation. Every structured output carries a ``meta`` block
with the resolved configuration, seed and package version.
"""

from __future__ import annotations

import argparse
import ast
import csv
import io
import json
import operator
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from datetime import datetime, timezone
from itertools import product

import numpy as np

from . import __version__
from . import constructions as C
from .errors import CertificateViolation, GuardError, InputError
from .extraction import (
    ExtractionReport, build_target, ceil_root_power, check_certificate, codegree_split_extract, exact_recurse,
    first_moment_deletion, random_hom_extract, recursive_extract, tight_cycle_extract,
    verify_free,
)
from .hypergraph import Hypergraph, derive_seed, random_r_partite_subgraph, sample_random_hypergraph
from .oracle import (
    BUDGET_COPIES, BUDGET_EDGES, BUDGET_NODES, exact_relative_turan, exponent_fit, exponents,
    supersaturation_check,
)
from .patterns import count_copies, find_violation, parse_family

EXIT_INPUT, EXIT_GUARD, EXIT_VIOLATION = 2, 3, 4


# -- hosts -------------------------------------------------------------------------

def _kv(parts):
    out = {}
    for p in parts:
        if "=" not in p:
            raise InputError(f"expected key=value, got {p!r}")
        k, v = p.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def _ints(v):
    return [int(x) for x in v.split(",")]


def parse_host(spec: str, seed: int = 0) -> Hypergraph:
    """Build a host from a generator spec or load it from a JSON file.

    Generators: ``complete:n=..:r=..``, ``partite:sizes=a,b,..``,
    ``layered:n=..:s=..``, ``unbalanced:n=..:s=..``, ``pg:q=..``, ``gq:q=..``,
    ``heawood``, ``tutte-coxeter``, ``tcfree:geom=pg|gq:q=..:r=..[:m=..]``,
    ``random:n=..:r=..:p=..[:seed=..]``; ``file:<path>`` or a ``.json`` path.
    """
    spec = spec.strip()
    if spec.startswith("file:"):
        return load_hypergraph(spec[5:])
    if spec.endswith(".json") or os.path.sep in spec:
        return load_hypergraph(spec)
    name, *rest = spec.split(":")
    kv = _kv(rest)
    try:
        if name == "complete":
            return C.complete_host(int(kv["n"]), int(kv["r"]))
        if name == "partite":
            return C.complete_partite_host(_ints(kv["sizes"]))
        if name == "layered":
            return C.layered_host(int(kv["n"]), _ints(kv["s"]))
        if name == "unbalanced":
            return C.unbalanced_partite_host(int(kv["n"]), _ints(kv["s"]))
        if name == "pg":
            return C.projective_plane_incidence(int(kv["q"]))
        if name == "gq":
            return C.generalized_quadrangle_incidence(int(kv["q"]))
        if name == "heawood":
            return C.heawood_graph()
        if name == "tutte-coxeter":
            return C.tutte_coxeter_graph()
        if name == "tcfree":
            q = int(kv["q"])
            G = (C.projective_plane_incidence(q) if kv.get("geom", "pg") == "pg"
                 else C.generalized_quadrangle_incidence(q))
            m = int(kv.get("m", len(G.partition[0])))
            return C.tight_cycle_free_host(G, int(kv["r"]), m)
        if name == "random":
            sd = int(kv["seed"]) if "seed" in kv else derive_seed(seed, 0x4057)
            return sample_random_hypergraph(int(kv["n"]), int(kv["r"]), float(kv["p"]), sd)
    except KeyError as exc:
        raise InputError(f"host spec {spec!r} is missing parameter {exc}") from None
    except ValueError as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(f"bad number in host spec {spec!r}: {exc}") from None
    raise InputError(f"unknown host generator {name!r}")


def load_hypergraph(path: str) -> Hypergraph:
    """Load a hypergraph file, a report (``result``) or an exact output (``witness``)."""
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON: {exc}") from None
    for key in ("result", "witness"):
        if isinstance(data, dict) and key in data and "edges" not in data:
            data = data[key]
    return Hypergraph.from_dict(data)


# -- output ------------------------------------------------------------------------

def _meta(args, extra=None):
    cfg = {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "config")}
    meta = {"tool": "relturan", "version": __version__, "seed": getattr(args, "seed", None),
            "config": cfg}
    if extra:
        meta.update(extra)
    return meta


def _emit(args, payload):
    text = json.dumps(payload, indent=None if getattr(args, "compact", False) else 1,
                      sort_keys=False, default=str)
    _write(args, text + "\n")


def _write(args, text):
    out = getattr(args, "out", None)
    if out and out != "-":
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- subcommands -----------------------------------------------------------------

def cmd_gen(args):
    H = parse_host(args.host, args.seed)
    payload = H.to_dict()
    payload["meta"] = _meta(args, {"edges": H.e, "max_degree": H.max_degree()})
    _emit(args, payload)


def _pattern_kind(fam):
    kinds = {p.kind for p in fam}
    if kinds == {"complete_partite"} and len(fam) == 1:
        return "K", next(iter(fam)).params
    if kinds == {"tight_cycle"}:
        r = fam.r
        ks = sorted(p.params[0] for p in fam)
        ell = ks[-1] // r
        if ks == list(range(r + 1, ell * r + 1)):
            return "TC", ell
    return None, None


def run_extract(H, fam, algo, seed, trials, D=None, ell=None, base_graph=None,
                verify=True) -> ExtractionReport:
    kind, param = _pattern_kind(fam)
    if algo == "rhom":
        D = D or max(1, H.max_codegree())
        J, info = build_target(fam, D, seed, base_graph)
        rep = random_hom_extract(H, J, fam, trials, seed, verify=verify)
        rep.details["target"] = info.to_dict()
        return rep
    if algo == "recursive":
        if kind != "K":
            raise InputError("--algo recursive needs a single K:s1,...,sr pattern")
        return recursive_extract(H, param, seed, trials, verify=verify)
    if algo == "tc":
        if kind != "TC" and ell is None:
            raise InputError("--algo tc needs a tcrange:r,l family or --ell")
        return tight_cycle_extract(H, ell or param, seed, trials, base_graph, verify=verify)
    if algo == "split":
        Hp = H if H.partition is not None else random_r_partite_subgraph(H, derive_seed(seed, 1))
        if D is None:
            D = max(1, ceil_root_power(Hp.max_degree(), 1, H.r - 1))
        if kind == "K":
            def recurse(G, _f, sd):
                return recursive_extract(G, param[:-1], sd, 1, verify=False)
        elif kind == "TC":
            def recurse(G, _f, sd):
                return tight_cycle_extract(G, param, sd, 1, base_graph, verify=False)
        else:
            recurse = exact_recurse
        rep = codegree_split_extract(Hp, D, fam, recurse, seed, trials)
        if verify:
            rep.details["verified"] = verify_free(rep.result, fam)
        return rep
    if algo == "del":
        return first_moment_deletion(H, fam, seed)
    raise InputError(f"unknown algorithm {algo!r}")


def cmd_extract(args):
    H = parse_host(args.host, args.seed)
    fam = parse_family(args.pattern)
    base = load_hypergraph(args.base_graph) if args.base_graph else None
    rep = run_extract(H, fam, args.algo, args.seed, args.trials, args.D, args.ell, base)
    payload = rep.to_dict()
    payload["host_edges"] = H.e
    payload["meta"] = _meta(args, {"pattern": fam.names})
    _emit(args, payload)


def cmd_exact(args):
    H = parse_host(args.host, args.seed)
    fam = parse_family(args.pattern)
    res = exact_relative_turan(H, fam, args.budget_edges, args.budget_copies,
                               args.budget_nodes)
    payload = res.to_dict()
    payload["host_edges"] = H.e
    payload["meta"] = _meta(args, {"pattern": fam.names, "deterministic": True})
    _emit(args, payload)


def cmd_count(args):
    H = parse_host(args.host, args.seed)
    fam = parse_family(args.pattern)
    counts = {p.name: count_copies(H, p) for p in fam}
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["pattern", "copies"])
        for k, v in counts.items():
            w.writerow([k, v])
        _write(args, buf.getvalue())
    else:
        _emit(args, {"counts": counts, "total": sum(counts.values()),
                     "meta": _meta(args)})


def cmd_check(args):
    H = parse_host(args.host, args.seed)
    S = parse_host(args.sub, args.seed)
    fam = parse_family(args.pattern)
    check_certificate(H, S, fam)
    _emit(args, {"ok": True, "edges": S.e, "pattern": fam.names, "meta": _meta(args)})


def cmd_exponents(args):
    prof = exponents(_ints(args.s))
    d = prof.to_dict()
    d["float"] = {k: float(v) for k, v in zip(("alpha", "beta", "beta1", "beta2"),
                                               prof.as_tuple())}
    d["meta"] = _meta(args)
    _emit(args, d)


def _read_sweep_csv(path):
    with open(path) as fh:
        rows = [ln for ln in fh if not ln.startswith("#")]
    return list(csv.DictReader(rows))


def aggregate_points(rows, stat="mean"):
    """Group sweep rows by delta; combine extracted counts with mean or max."""
    groups = {}
    for row in rows:
        key = int(row["delta"])
        g = groups.setdefault(key, [int(row["host_edges"]), []])
        g[1].append(int(row["extracted"]))
    fn = np.mean if stat == "mean" else np.max
    return [(d, h, float(fn(xs))) for d, (h, xs) in sorted(groups.items())]


def cmd_fit(args):
    if args.csv:
        pts = aggregate_points(_read_sweep_csv(args.csv), args.stat)
    else:
        pts = [tuple(float(x) for x in p.split(",")) for p in args.point]
    res = exponent_fit(pts)
    d = res.to_dict()
    d["meta"] = _meta(args)
    _emit(args, d)


def cmd_supersat(args):
    s = _ints(args.s)
    host = C.unbalanced_partite_host(args.n, s)
    sub = load_hypergraph(args.sub) if args.sub else host
    rep = supersaturation_check(host, sub, s, args.alpha2, args.n)
    rep["meta"] = _meta(args)
    _emit(args, rep)


# -- sweep -------------------------------------------------------------------------

_OPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
        ast.Div: operator.truediv, ast.FloorDiv: operator.floordiv, ast.Pow: operator.pow}


def _arith(expr, env):
    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return node.value
        if isinstance(node, ast.Name) and node.id in env:
            return env[node.id]
        if isinstance(node, ast.BinOp) and type(node.op) in _OPS:
            return _OPS[type(node.op)](ev(node.left), ev(node.right))
        raise InputError(f"unsupported template expression {expr!r}")
    try:
        return ev(ast.parse(expr, mode="eval"))
    except SyntaxError:
        raise InputError(f"bad template expression {expr!r}") from None


def fill_template(template: str, env: dict) -> str:
    """Replace each ``{expr}`` with the arithmetic value of expr over ``env``."""
    out, i = [], 0
    while i < len(template):
        j = template.find("{", i)
        if j < 0:
            out.append(template[i:])
            break
        k = template.find("}", j)
        if k < 0:
            raise InputError("unbalanced brace in host template")
        out.append(template[i:j])
        v = _arith(template[j + 1:k], env)
        out.append(str(int(v)) if float(v).is_integer() else repr(v))
        i = k + 1
    return "".join(out)


def parse_grid(items):
    grid = []
    for it in items or []:
        if "=" not in it:
            raise InputError(f"grid entry must be name=v1,v2,..; got {it!r}")
        k, vs = it.split("=", 1)
        vals = [float(v) if any(c in v for c in ".e") else int(v) for v in vs.split(",")]
        grid.append((k.strip(), vals))
    return grid


def _sweep_point(job):
    (template, env, pattern, algo, trials, seed, budgets, D, ell) = job
    host_spec = fill_template(template, env)
    H = parse_host(host_spec, seed)
    fam = parse_family(pattern)
    rep = run_extract(H, fam, algo, seed, trials, D, ell, verify=False)
    verify_ok = find_violation(rep.result, fam) is None if rep.result.e <= 20_000 else None
    if verify_ok is False:
        raise CertificateViolation(f"sweep output at {host_spec} contains a forbidden copy")
    bound = ""
    if H.e <= budgets[0]:
        try:
            bound = exact_relative_turan(H, fam, *budgets).value
        except GuardError:
            bound = ""
    if bound == "" and rep.guarantee is not None:
        bound = f"{float(rep.guarantee):.6g}"
    return [H.max_degree(), H.e, rep.result.e, bound, seed], [int(y) for y in rep.yields]


def sweep_rows(args):
    grid = parse_grid(args.grid)
    names = [k for k, _ in grid]
    points = [dict(zip(names, vals)) for vals in product(*[v for _, v in grid])] or [{}]
    seeds = _ints(args.seeds) if args.seeds else [args.seed]
    jobs = []
    for gi, env in enumerate(points):
        for sd in seeds:
            jobs.append((args.host, env, args.pattern, args.algo, args.trials,
                         derive_seed(sd, gi),
                         (args.budget_edges, args.budget_copies, args.budget_nodes),
                         args.D, args.ell))
    workers = max(1, int(os.environ.get("RELTURAN_THREADS", "1") or 1))
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(_sweep_point, jobs))  # map keeps job order
    else:
        results = [_sweep_point(j) for j in jobs]
    return points, results


def cmd_sweep(args):
    points, results = sweep_rows(args)
    buf = io.StringIO()
    stamp = datetime.now(timezone.utc).isoformat(timespec="seconds")
    buf.write(f"# relturan sweep timestamp={stamp}\n")
    buf.write("# meta=" + json.dumps(_meta(args), sort_keys=True, default=str) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["delta", "host_edges", "extracted", "exact_or_bound", "seed"])
    rows = []
    for row, yields in results:
        if args.per_trial:
            for y in yields:
                rows.append(row[:2] + [y] + row[3:])
        else:
            rows.append(row)
    w.writerows(rows)
    _write(args, buf.getvalue())
    if args.fit:
        dict_rows = [dict(zip(["delta", "host_edges", "extracted"], r[:3])) for r in rows]
        res = exponent_fit(aggregate_points(dict_rows, args.stat))
        text = json.dumps({**res.to_dict(), "stat": args.stat, "meta": _meta(args)}, indent=1)
        if args.fit_out:
            with open(args.fit_out, "w") as fh:
                fh.write(text + "\n")
        else:
            sys.stderr.write(text + "\n")


# -- parser -------------------------------------------------------------------------

def _common(p, host=True, pattern=True):
    if host:
        p.add_argument("--host", required=True, help="generator spec or JSON file")
    if pattern:
        p.add_argument("--pattern", required=True, help="pattern or family spec")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="output path (default stdout)")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--compact", action="store_true", help="single-line JSON")


def _budgets(p):
    p.add_argument("--budget-edges", dest="budget_edges", type=int, default=BUDGET_EDGES)
    p.add_argument("--budget-copies", dest="budget_copies", type=int, default=BUDGET_COPIES)
    p.add_argument("--budget-nodes", dest="budget_nodes", type=int, default=BUDGET_NODES,
                   help="branch-and-bound node limit")


def _extract_opts(p):
    p.add_argument("--algo", choices=["rhom", "split", "recursive", "tc", "del"],
                   default="recursive")
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--D", type=int, default=None, help="codegree threshold override")
    p.add_argument("--ell", type=int, default=None, help="tight-cycle level")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="relturan", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"relturan {__version__}")
    ap.add_argument("--config", default=None, help="key=value config file; flags override")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a host hypergraph")
    _common(p, pattern=False)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("extract", help="extract an F-free subgraph")
    _common(p)
    _extract_opts(p)
    p.add_argument("--base-graph", dest="base_graph", default=None,
                   help="bipartite base graph file for tight-cycle targets")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("exact", help="exact relative Turán number")
    _common(p)
    _budgets(p)
    p.add_argument("--deterministic", action="store_true",
                   help="single-worker search (always the case)")
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("count", help="count copies of each family member")
    _common(p)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("check", help="verify an F-free subgraph certificate")
    _common(p)
    p.add_argument("--sub", required=True, help="claimed F-free subgraph (file)")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("sweep", help="extraction over a parameter grid; writes CSV")
    _common(p)
    _extract_opts(p)
    _budgets(p)
    p.add_argument("--grid", action="append", help="name=v1,v2,... (repeatable)")
    p.add_argument("--seeds", default=None, help="comma-separated seeds")
    p.add_argument("--per-trial", dest="per_trial", action="store_true",
                   help="one row per trial instead of the best trial")
    p.add_argument("--fit", action="store_true", help="also fit the exponent")
    p.add_argument("--fit-out", dest="fit_out", default=None)
    p.add_argument("--stat", choices=["mean", "max"], default="mean",
                   help="how extracted counts are combined per delta for --fit")
    p.set_defaults(func=cmd_sweep, format="csv")

    p = sub.add_parser("exponents", help="exponent profile of K_s")
    _common(p, host=False, pattern=False)
    p.add_argument("--s", required=True, help="size vector, e.g. 2,2,2")
    p.set_defaults(func=cmd_exponents)

    p = sub.add_parser("fit", help="fit log(e(H)/yield) against log(delta)")
    _common(p, host=False, pattern=False)
    p.add_argument("--csv", default=None, help="sweep CSV")
    p.add_argument("--point", action="append", default=[], help="delta,host_edges,extracted")
    p.add_argument("--stat", choices=["mean", "max"], default="mean")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("supersat", help="supersaturation count on the unbalanced host")
    _common(p, host=False, pattern=False)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--s", required=True)
    p.add_argument("--sub", default=None, help="subgraph file (default: full host)")
    p.add_argument("--alpha2", default="1", help="base constant (illustrative)")
    p.set_defaults(func=cmd_supersat)
    return ap


def read_config(path) -> dict:
    """``key = value`` lines; ``#`` starts a comment. Keys use flag names."""
    cfg = {}
    try:
        with open(path) as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise InputError(f"cannot read config {path}: {exc}") from None
    for n, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InputError(f"{path}:{n}: expected key = value")
        k, v = line.split("=", 1)
        cfg[k.strip().lstrip("-").replace("-", "_")] = v.strip()
    return cfg


def _apply_config(ap, argv, cfg):
    sub = next(a for a in ap._actions if isinstance(a, argparse._SubParsersAction))
    cmd = next((a for a in argv if a in sub.choices), cfg.pop("command", None))
    if cmd is None or cmd not in sub.choices:
        raise InputError("no subcommand given")
    if cmd not in argv:
        # the top-level --config must stay ahead of the inserted subcommand
        lead, rest, i = [], [], 0
        while i < len(argv):
            a = argv[i]
            if a == "--config":
                lead += argv[i:i + 2]
                i += 2
                continue
            (lead if a.startswith("--config=") else rest).append(a)
            i += 1
        argv = lead + [cmd] + rest
    sp = sub.choices[cmd]
    known = {a.dest: a for a in sp._actions}
    defaults = {}
    for k, v in cfg.items():
        if k not in known:
            raise InputError(f"config key {k!r} is not an option of {cmd!r}")
        act = known[k]
        if isinstance(act, argparse._StoreTrueAction):
            defaults[k] = v.lower() in ("1", "true", "yes", "on")
        elif isinstance(act, argparse._AppendAction):
            defaults[k] = [x.strip() for x in v.split(";") if x.strip()]
        else:
            defaults[k] = act.type(v) if act.type else v
        act.required = False
    sp.set_defaults(**defaults)
    return argv


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    ap = build_parser()
    try:
        pre = argparse.ArgumentParser(add_help=False)
        pre.add_argument("--config", default=None)
        known, _ = pre.parse_known_args(argv)
        if known.config:
            argv = _apply_config(ap, argv, read_config(known.config))
        args = ap.parse_args(argv)
        args.func(args)
        return 0
    except CertificateViolation as exc:
        sys.stderr.write(f"violation: {exc}\n")
        if exc.witness is not None:
            sys.stderr.write(f"witness: {json.dumps({str(k): v for k, v in exc.witness.items()})}\n"
                             if isinstance(exc.witness, dict) else f"witness: {exc.witness}\n")
        return EXIT_VIOLATION
    except GuardError as exc:
        sys.stderr.write(f"refused: {exc}\n")
        lo, hi = getattr(exc, "lower", None), getattr(exc, "upper", None)
        if lo is not None or hi is not None:
            sys.stderr.write(f"bounds: lower={lo} upper={hi}\n")
        return EXIT_GUARD
    except InputError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
