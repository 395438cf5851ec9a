"""Command line: ``manincheck run|list|corpus``."""

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from . import __version__
from . import corpus as corpus_mod
from .exact_arith import PoleError
from .lax import parse_model
from .suites import PoleCollision, RunContext, list_suites, resolve, run_suite

EXIT_OK, EXIT_FAIL, EXIT_ERROR = 0, 1, 2


def _points(text):
    try:
        return [Fraction(x) for x in text.split(",") if x.strip()]
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"bad point list {text!r}") from None


def _counts(text):
    """``5,3`` (both sizes) or ``2:5,3;3:6,3``; ``0`` gives an empty corpus."""
    text = text.strip()
    if text == "0":
        return {}
    out = {}
    try:
        if ":" not in text:
            pos, neg = (int(x) for x in text.split(","))
            return {2: (pos, neg), 3: (pos, neg)}
        for part in text.split(";"):
            n, _, pn = part.partition(":")
            pos, neg = (int(x) for x in pn.split(","))
            out[int(n)] = (pos, neg)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad counts {text!r}") from None
    return out


def build_parser():
    ap = argparse.ArgumentParser(prog="manincheck", description="Exact checks for Manin matrix identities.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="cmd", required=True)

    r = sub.add_parser("run", help="run verification suites")
    r.add_argument("--suites", default="all", help="comma list of suite names or globs (default: all)")
    r.add_argument("--model", default="none", help="e.g. standard:n=2,sites=2 or xxx_simplest:n=2")
    r.add_argument("--trunc", type=int, default=5, help="series truncation order (default 5)")
    r.add_argument("--points", type=_points, default=None, help="evaluation points, e.g. 2,3,5,7")
    r.add_argument("--seed", type=int, default=corpus_mod.DEFAULT_SEED, help="seed for the built-in corpus")
    r.add_argument("--format", choices=("text", "json"), default="text")
    r.add_argument("--corpus", default=None, help="corpus directory or manifest.json")
    r.add_argument("--jobs", type=int, default=1, help="worker processes (default 1)")

    ls = sub.add_parser("list", help="list registered suites")
    ls.add_argument("pattern", nargs="?", default=None, help="glob filter, e.g. 'yangian.*'")
    ls.add_argument("--json", action="store_true")

    c = sub.add_parser("corpus", help="write the regression corpus")
    c.add_argument("--out", required=True, help="output directory")
    c.add_argument("--seed", type=int, default=corpus_mod.DEFAULT_SEED)
    c.add_argument("--counts", type=_counts, default=None,
                   help="positives,negatives per size, or 2:5,3;3:6,3; 0 for an empty manifest")
    return ap


def _config_dict(args, names):
    return {"suites": names, "model": args.model, "trunc": args.trunc,
            "points": None if args.points is None else [str(p) for p in args.points],
            "seed": args.seed, "corpus": args.corpus}


def _run_one(payload):
    name, ctx = payload
    result, _ = run_suite(name, ctx)
    return result


def cmd_run(args, out):
    names = resolve(args.suites)
    model = parse_model(args.model)
    entries = corpus_mod.load(args.corpus) if args.corpus else None
    ctx = RunContext(model=model, trunc=args.trunc, points=args.points, seed=args.seed, corpus=entries)
    if args.jobs > 1 and len(names) > 1:
        ctx.entries()
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_run_one, [(n, ctx) for n in names]))
    else:
        results = [_run_one((n, ctx)) for n in names]
    failed = [r for r in results if r.status == "fail"]
    if args.format == "json":
        doc = {"config": _config_dict(args, names), "results": [r.as_dict() for r in results],
               "version": __version__}
        out.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    else:
        for r in results:
            tag = r.status.upper() if r.status != "recorded" else f"RECORDED({r.outcome})"
            out.write(f"{tag:18} {r.suite:18} {r.checks_run:6d} checks  {r.wall_time:7.2f}s\n")
            if r.first_failure:
                out.write(f"    first failure: {r.first_failure}\n")
        out.write(f"{len(results)} suites, {len(failed)} failed\n")
    return EXIT_FAIL if failed else EXIT_OK


def cmd_list(args, out):
    items = list_suites(args.pattern)
    if args.json:
        out.write(json.dumps([{"name": s.name, "description": s.description, "anchor": s.anchor,
                               "recorded": s.recorded, "models": list(s.models)} for s in items],
                             indent=2) + "\n")
    else:
        for s in items:
            flag = " [recorded]" if s.recorded else ""
            out.write(f"{s.name:18} {s.description}{flag}\n    ({s.anchor})\n")
    return EXIT_OK


def cmd_corpus(args, out):
    entries = corpus_mod.generate(args.seed, args.counts)
    path = corpus_mod.write(entries, args.out, args.seed)
    npos = sum(e.manin for e in entries)
    out.write(f"wrote {len(entries)} matrices ({npos} Manin, {len(entries) - npos} not) to {path}\n")
    return EXIT_OK


def main(argv=None, out=None):
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        if args.cmd == "run":
            return cmd_run(args, out)
        if args.cmd == "list":
            return cmd_list(args, out)
        return cmd_corpus(args, out)
    except (KeyError, ValueError, PoleCollision, PoleError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"manincheck: error: {msg}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
