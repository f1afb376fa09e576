"""Command-line front end.

Exit codes: 0 all checks passed, 1 a check failed (counterexample written),
2 usage or input error.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import colourings, extremal, geodesics, hamilton, lemma
from .reporting import Table, emit

THREADS_ENV = "QNCHROMA_THREADS"
LAYERED_NOTE = "layered: red iff the distance from x0 to the edge's closer endpoint is even"


@dataclass(frozen=True)
class RunConfig:
    """Everything that determines a run's output."""

    subcommand: str
    options: tuple

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        opts = {k: v for k, v in vars(args).items() if k not in ("func", "command", "threads")}
        return cls(args.command, tuple(sorted(opts.items())))

    def as_dict(self):
        return {"subcommand": self.subcommand, "options": dict(self.options)}


def _vertex(text: str) -> int:
    return int(text, 0)


def _apply_threads(requested: int | None) -> int:
    import numba

    if requested is None:
        env = os.environ.get(THREADS_ENV)
        requested = int(env) if env else numba.config.NUMBA_NUM_THREADS
    threads = max(1, min(int(requested), numba.config.NUMBA_NUM_THREADS))
    numba.set_num_threads(threads)
    return threads


def _out(args, report, config):
    emit(report, args.format, args.out, config if args.format == "json" else None)


def cmd_gen(args, config):
    n = args.n
    comments = []
    if args.layered:
        c = colourings.gen_layered(n, args.x0)
        comments = [LAYERED_NOTE, f"x0={args.x0}"]
    elif args.hamming:
        c, _ = colourings.gen_hamming(n)
        comments = ["hamming: red iff the edge touches a codeword"]
    elif args.direction:
        c = colourings.gen_direction(n, args.r)
        comments = [f"direction: dimension i gets colour i mod {args.r}"]
    elif args.antipodal:
        c = colourings.gen_antipodal_random(n, args.seed)
        comments = [f"antipodal random seed={args.seed}"]
    elif args.constant:
        c = colourings.constant(n, args.r)
    else:
        c = colourings.gen_random(n, args.r, args.seed)
        comments = [f"random seed={args.seed}"]
    if args.restrict_mask:
        c = colourings.restrict_subcube(c, args.restrict_mask, args.restrict_values)
        comments.append(f"restricted mask={args.restrict_mask} values={args.restrict_values}")
    if args.out == "-":
        sys.stdout.write(colourings.serialise(c, comments))
    else:
        colourings.save(c, args.out, comments)
    return 0


def cmd_cost(args, config):
    c = colourings.load(args.input)
    if args.profile:
        prof = geodesics.antipodal_profile(c, args.mode)
        mean = Fraction(int(prof.sum()), int(prof.size))
        values, counts = np.unique(prof, return_counts=True)
        if args.format == "csv":
            report = Table(["v", "cost"], [[v, int(p)] for v, p in enumerate(prof)])
        else:
            report = {
                "n": c.n,
                "mode": args.mode,
                "mean": mean,
                "mean_float": float(mean),
                "min": int(prof.min()),
                "max": int(prof.max()),
                "histogram": {str(int(v)): int(k) for v, k in zip(values, counts)},
                "profile": [int(p) for p in prof],
            }
    else:
        if args.x is None or args.y is None:
            raise ValueError("cost needs --x and --y, or --profile")
        fn = geodesics.min_path_cc if args.mode == "path" else geodesics.min_geodesic_cc
        res = fn(c, args.x, args.y, witness=args.witness)
        report = Table(
            ["x", "y", "mode", "cost", "witness"],
            [[res.x, res.y, args.mode, res.cost,
              " ".join(map(str, res.witness)) if res.witness is not None else ""]],
        )
        if args.format == "json":
            report = {"x": res.x, "y": res.y, "mode": args.mode, "cost": res.cost,
                      "witness": list(res.witness) if res.witness is not None else None}
    _out(args, report, config)
    return 0


def _verify_one(c, which, counterexample_dir, label):
    results = {"colouring": label, "n": c.n, "certificates": []}
    failed = False
    steps = ["step1", "step2", "step3", "chain"] if which == "all" else [which]
    for step in steps:
        if step == "chain":
            report = lemma.verify_corollary_chain(c)
            results["chain"] = report
            ok = report.holds
            detail = None if ok else vars(report.first_failure())
        else:
            cert = {"step1": lemma.verify_step1, "step2": lemma.verify_step2,
                    "step3": lemma.verify_step3}[step](c)
            results["certificates"].append(cert)
            ok = cert.holds
            detail = cert.counterexample
        if not ok:
            failed = True
            if counterexample_dir:
                out = Path(counterexample_dir)
                out.mkdir(parents=True, exist_ok=True)
                colourings.save(c, out / f"{label}_{step}.qncol", [f"failed {step}"])
                (out / f"{label}_{step}.json").write_text(json.dumps(detail, indent=2) + "\n")
    return results, failed


def cmd_verify(args, config):
    which = next(s for s in ("step1", "step2", "step3", "chain", "all") if getattr(args, s))
    if args.input:
        universe = [(Path(args.input).stem, colourings.load(args.input))]
    else:
        if args.n is None:
            raise ValueError("verify needs --in or --n")
        universe = [(f"seed{s}", colourings.gen_random(args.n, 2, s))
                    for s in range(args.seed0, args.seed0 + args.seeds)]
    results = []
    any_failed = False
    for label, c in universe:
        res, failed = _verify_one(c, which, args.counterexample_dir, label)
        results.append(res)
        any_failed |= failed
    if args.format == "csv":
        if len(results) != 1 or "chain" not in results[0]:
            raise ValueError("csv output is the chain table of a single colouring")
        report = results[0]["chain"]
    else:
        report = {"claim": which, "holds": not any_failed, "results": results}
    _out(args, report, config)
    return 1 if any_failed else 0


def cmd_bound(args, config):
    n = args.n
    total = lemma.master_bound(n, args.mode)
    rows = []
    if args.table:
        running = 0.0
        for k, term in enumerate(lemma.bound_table(n, args.mode), start=1):
            running += term
            rows.append([k, repr(term), repr(running)])
    if args.format == "csv":
        report = Table(["k", "s_bound", "cumulative"], rows)
    else:
        report = {
            "n": n,
            "mode": args.mode,
            "master_bound": total,
            "ratio_sqrt_n": total / math.sqrt(n),
            "pi_over_2": math.pi / 2,
            "floor": math.floor(total),
            "table": rows,
        }
    _out(args, report, config)
    return 0


def cmd_scan(args, config):
    if args.exhaustive:
        res = extremal.conjecture_scan(args.n, args.mode, args.symmetry, args.canonical)
    else:
        include = [colourings.gen_layered(args.n)] if args.include_layered else []
        res = extremal.sampled_scan(args.n, args.count, args.seed, args.mode, include, args.results)
    if args.format == "csv":
        report = Table(["min_cost", "colourings"], [[k, v] for k, v in sorted(res.histogram.items())])
    else:
        report = res
    _out(args, report, config)
    return 1 if res.worst_min_cost >= extremal.REFUTING_COST else 0


def cmd_climb(args, config):
    if args.start:
        start = colourings.load(args.start)
    elif args.start_layered:
        start = colourings.gen_layered(args.n)
    else:
        start = None
    res = extremal.adversary_climb(args.n, args.objective, args.budget, args.seed, start)
    if args.save:
        colourings.save(res.colouring, args.save, [f"climb seed={args.seed} value={res.value}"])
    if args.format == "csv":
        report = Table(["step", "best"], [[i, str(v)] for i, v in enumerate(res.trace)])
    else:
        report = res
    _out(args, report, config)
    return 0


def cmd_hamilton(args, config):
    failed = False
    if args.hamming_bound:
        report = hamilton.hamming_component_bound(args.n, args.trials, args.seed)
        failed = bool(report["violations"])
    else:
        if not args.input:
            raise ValueError("hamilton needs --in unless --hamming-bound is given")
        c = colourings.load(args.input)
        if args.exact:
            cost, order = hamilton.hamilton_min_cc(c)
            report = {"n": c.n, "cost": cost, "witness": order}
        elif args.gray:
            report = {"n": c.n, "cost": hamilton.gray_code_cc(c)}
        else:
            counts = [hamilton.mono_components(c, hamilton.random_spanning_tree(c.n, args.seed + t))
                      for t in range(args.trials)]
            report = {"n": c.n, "trials": args.trials, "components": counts,
                      "minComponents": min(counts) if counts else None}
    if args.format == "csv":
        report = Table(sorted(k for k in report if not isinstance(report[k], list)),
                       [[report[k] for k in sorted(report) if not isinstance(report[k], list)]])
    _out(args, report, config)
    return 1 if failed else 0


def cmd_moments(args, config):
    mean, var = lemma.hypergeom_moments(args.n, args.k, args.r, args.mode)
    report = {"n": args.n, "k": args.k, "r": args.r, "mode": args.mode,
              "mean": mean, "variance": var}
    failed = False
    if args.enumerate:
        emean, evar = lemma.hypergeom_enumerated(args.n, args.k, args.r)
        report.update(enumerated_mean=emean, enumerated_variance=evar)
        failed = emean != mean or (args.mode == "exact" and evar != var)
    if args.format == "csv":
        report = Table(list(report), [list(report.values())])
    _out(args, report, config)
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qnchroma", description=__doc__.splitlines()[0])
    p.add_argument("--threads", type=int, default=None,
                   help=f"worker threads (default ${THREADS_ENV} or all cores)")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--format", choices=("json", "csv"), default="json")
        sp.add_argument("--out", default=None, help="output path (default stdout)")

    g = sub.add_parser("gen", help="build a colouring file")
    kind = g.add_mutually_exclusive_group(required=True)
    for flag in ("layered", "hamming", "direction", "random", "antipodal", "constant"):
        kind.add_argument(f"--{flag}", action="store_true")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--r", type=int, default=2)
    g.add_argument("--x0", type=_vertex, default=0)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--restrict-mask", type=_vertex, default=0)
    g.add_argument("--restrict-values", type=_vertex, default=0)
    g.add_argument("--out", required=True, help="output .qncol path, or - for stdout")
    g.set_defaults(func=cmd_gen)

    c = sub.add_parser("cost", help="colour-change cost of a pair or antipodal profile")
    c.add_argument("--in", dest="input", required=True)
    c.add_argument("--x", type=_vertex)
    c.add_argument("--y", type=_vertex)
    c.add_argument("--profile", action="store_true")
    c.add_argument("--mode", choices=("geodesic", "path"), default="geodesic")
    c.add_argument("--witness", action="store_true")
    common(c)
    c.set_defaults(func=cmd_cost)

    v = sub.add_parser("verify", help="check the averaging claims exactly")
    which = v.add_mutually_exclusive_group(required=True)
    for flag in ("step1", "step2", "step3", "chain", "all"):
        which.add_argument(f"--{flag}", action="store_true")
    v.add_argument("--in", dest="input")
    v.add_argument("--n", type=int)
    v.add_argument("--seeds", type=int, default=1)
    v.add_argument("--seed0", type=int, default=0)
    v.add_argument("--counterexample-dir", default=None)
    common(v)
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bound", help="per-distance and total bounds")
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--mode", choices=("exact", "paper", "asymptotic"), default="exact")
    b.add_argument("--table", action="store_true")
    common(b)
    b.set_defaults(func=cmd_bound)

    s = sub.add_parser("scan", help="search colourings for a bad antipodal cost")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--exhaustive", action="store_true")
    s.add_argument("--count", type=int, default=10000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--mode", choices=("geodesic", "path"), default="path")
    s.add_argument("--symmetry", action="store_true")
    s.add_argument("--canonical", action="store_true")
    s.add_argument("--include-layered", action="store_true")
    s.add_argument("--results", default=None, help="directory for refuting candidates")
    common(s)
    s.set_defaults(func=cmd_scan)

    cl = sub.add_parser("climb", help="hill-climb the mean antipodal cost")
    cl.add_argument("--n", type=int, required=True)
    cl.add_argument("--objective", choices=("geodesic", "path"), default="path")
    cl.add_argument("--budget", type=int, default=1000)
    cl.add_argument("--seed", type=int, default=0)
    cl.add_argument("--start", default=None)
    cl.add_argument("--start-layered", action="store_true")
    cl.add_argument("--save", default=None, help="write the best colouring here")
    common(cl)
    cl.set_defaults(func=cmd_climb)

    h = sub.add_parser("hamilton", help="Hamilton paths and spanning-tree components")
    mode = h.add_mutually_exclusive_group(required=True)
    for flag in ("exact", "gray", "tree-components", "hamming-bound"):
        mode.add_argument(f"--{flag}", action="store_true")
    h.add_argument("--in", dest="input")
    h.add_argument("--n", type=int, default=3)
    h.add_argument("--trials", type=int, default=10)
    h.add_argument("--seed", type=int, default=0)
    common(h)
    h.set_defaults(func=cmd_hamilton)

    m = sub.add_parser("moments", help="hypergeometric mean and variance")
    m.add_argument("--n", type=int, required=True)
    m.add_argument("--k", type=int, required=True)
    m.add_argument("--r", type=int, required=True)
    m.add_argument("--mode", choices=("exact", "paper"), default="exact")
    m.add_argument("--enumerate", action="store_true")
    common(m)
    m.set_defaults(func=cmd_moments)
    return p


def dispatch(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        _apply_threads(args.threads)
        config = RunConfig.from_args(args)
        return args.func(args, config)
    except (ValueError, OSError) as exc:
        print(f"qnchroma {args.command}: error: {exc}", file=sys.stderr)
        return 2


def main():
    sys.exit(dispatch())
