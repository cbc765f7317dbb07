"""Command line entry point.

Usage::

    framelab construct simplex --n 3 --out simplex3.json
    framelab analyze simplex3.json --k 1,2,3 --out report.json --csv report.csv
    framelab complement simplex3.json --out comp.json
    framelab optimize --objective vk --k 2 --m 4 --n 2 --seeds 20 --seed 0 --out-dir runs/
    framelab verify --trials 50 --seed 0 --out verify.json --junit verify.xml
    framelab gradcheck --objective ne --k 2 --m 4 --n 2 --eps 1e-2 --seed 1

Exit status is 0 on success, 1 when a verification check fails, 2 on usage
errors and the ``exit_code`` of the raised :mod:`framelab.errors` class
otherwise (3 parse, 4 shape, 5 subset cap, 6 not Parseval, 7 numerical,
8 unknown check). Unreadable input files exit with 3.
"""

import argparse
import datetime
import sys
from pathlib import Path

from . import __version__, constructors, io, measures, optimize, verify
from .errors import FramelabError, InvalidShape

CONSTRUCT_KINDS = ("onb_padded", "simplex", "harmonic", "paper42", "random_parseval",
                   "random_equal_norm")


def _ints(text):
    return tuple(int(t) for t in text.split(",") if t.strip())


def _floats(text):
    return tuple(float(t) for t in text.split(",") if t.strip())


class _Run:
    """Collects outputs and writes a manifest beside each one."""

    def __init__(self, args):
        self.args = args
        self.deterministic = args.deterministic

    def require_seed(self):
        if self.args.seed is None:
            if self.deterministic:
                print("error: --seed is required in --deterministic mode", file=sys.stderr)
                raise SystemExit(2)
            self.args.seed = 0
        return self.args.seed

    def write(self, path, text, inputs=()):
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
        params = {k: (list(v) if isinstance(v, tuple) else v) for k, v in vars(self.args).items()
                  if k not in ("func",) and not callable(v)}
        stamp = None if self.deterministic else datetime.datetime.now(datetime.timezone.utc).isoformat()
        manifest = {
            "schema": io.SCHEMA_VERSION,
            "command": self.args.command,
            "parameters": {k: (str(v) if isinstance(v, Path) else v) for k, v in params.items()},
            "seed": getattr(self.args, "seed", None),
            "version": __version__,
            "timestamp": stamp,
            "inputs": [str(p) for p in inputs],
            "output": str(path),
        }
        Path(str(path) + ".manifest.json").write_text(io.dumps(manifest))


def cmd_analyze(args, run):
    frame = io.read_frame(args.input)
    report = measures.analyze(frame, args.k, cap=args.cap)
    text = io.report_json(report)
    if args.out:
        run.write(args.out, text, [args.input])
    else:
        sys.stdout.write(text)
    if args.csv:
        run.write(args.csv, io.report_csv(report), [args.input])
    return 0


def cmd_construct(args, run):
    kind = args.kind
    if kind == "onb_padded":
        frame = constructors.onb_padded(args.m, args.n, args.field)
    elif kind == "simplex":
        frame = constructors.simplex_etf(args.n)
    elif kind == "harmonic":
        if args.rows is None:
            raise InvalidShape("harmonic needs --rows")
        frame = constructors.harmonic_frame(args.m, args.rows)
    elif kind == "paper42":
        frame = constructors.paper_4_2()
    elif kind == "random_parseval":
        frame = constructors.random_parseval(args.m, args.n, run.require_seed(), args.field)
    else:
        frame = constructors.random_equal_norm(args.m, args.n, run.require_seed(), args.field)
    text = io.dumps(io.frame_to_dict(frame))
    if args.out:
        run.write(args.out, text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_complement(args, run):
    frame = io.read_frame(args.input)
    text = io.dumps(io.frame_to_dict(constructors.naimark_complement(frame)))
    if args.out:
        run.write(args.out, text, [args.input])
    else:
        sys.stdout.write(text)
    return 0


def _objective(args, eps=1e-2):
    return optimize.Objective(args.objective, args.k, eps)


def cmd_optimize(args, run):
    base = run.require_seed()
    config = optimize.OptimizerConfig(
        manifold=args.manifold, max_iters=args.max_iters, step_init=args.step_init,
        eps_schedule=args.eps_schedule, seed=base, deterministic=run.deterministic)
    objective = _objective(args)
    seeds = [base + i for i in range(args.seeds)]
    traces = optimize.multistart(objective, args.m, args.n, seeds, config, args.field,
                                 cap=args.cap, jobs=args.jobs)
    out = Path(args.out_dir)
    runs = []
    for seed, tr in zip(seeds, traces):
        run.write(out / f"trace_seed{seed}.csv", io.trace_csv(tr))
        runs.append({"seed": seed, "status": tr.status.value, "best_true": tr.best_true})
    best_i = max(range(len(traces)), key=lambda i: traces[i].best_true)
    best = traces[best_i]
    run.write(out / "best_frame.json", io.dumps(io.frame_to_dict(best.frame)))
    summary = {
        "schema": io.SCHEMA_VERSION,
        "objective": objective.kind.value, "k": args.k, "m": args.m, "n": args.n,
        "field": args.field, "manifold": config.manifold.value,
        "eps_schedule": list(config.eps_schedule),
        "best_seed": seeds[best_i], "best_true": best.best_true,
        "bound": optimize.bound(objective, args.m, args.n)
        if config.manifold is optimize.Manifold.PARSEVAL else None,
        "runs": runs,
    }
    run.write(out / "summary.json", io.dumps(io._clean(summary)))
    print(f"best {objective.kind.value} = {best.best_true!r} (seed {seeds[best_i]})")
    return 0


def cmd_verify(args, run):
    seed = run.require_seed()
    config = verify.SuiteConfig(m_list=args.m_list, n_list=args.n_list, k_list=args.k_list,
                                trials=args.trials, seed=seed, field=args.field)
    extra = [(str(p), io.read_frame(p)) for p in args.frame]
    names = args.check or None
    if names:
        for name in names:
            if name not in verify.REGISTRY:
                raise verify.UnknownCheck(name)
    report = verify.run_suite(config, names=names, extra=extra)
    text = io.dumps(io._clean(report.to_dict()))
    if args.out:
        run.write(args.out, text, args.frame)
    else:
        sys.stdout.write(text)
    if args.junit:
        run.write(args.junit, verify.junit_xml(report) + "\n", args.frame)
    c = report.counts
    print(f"{c['passed']} passed, {c['failed']} failed, {c['skipped']} skipped", file=sys.stderr)
    return 0 if report.ok else 1


def cmd_gradcheck(args, run):
    if args.input:
        frame = io.read_frame(args.input)
    else:
        seed = run.require_seed()
        make = (constructors.random_parseval if args.manifold == "parseval"
                else constructors.random_equal_norm)
        frame = make(args.m, args.n, seed, args.field)
    err = optimize.gradcheck(frame, _objective(args, args.eps), h=args.h, cap=args.cap)
    print(repr(err))
    return 0 if args.tol is None or err < args.tol else 1


def build_parser():
    p = argparse.ArgumentParser(prog="framelab", description=__doc__.split("\n")[0])
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("--deterministic", action="store_true",
                   help="require explicit seeds and omit timestamps from manifests")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, seed=False, cap=False):
        if seed:
            sp.add_argument("--seed", type=int, default=None)
        if cap:
            sp.add_argument("--cap", type=int, default=None,
                            help="subset cap (default: FRAMELAB_SUBSET_CAP or 2000000)")

    sp = sub.add_parser("analyze", help="evaluate all measures of a frame file")
    sp.add_argument("input")
    sp.add_argument("--k", type=_ints, default=())
    sp.add_argument("--out")
    sp.add_argument("--csv")
    common(sp, cap=True)
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("construct", help="write a reference or random frame")
    sp.add_argument("kind", choices=CONSTRUCT_KINDS)
    sp.add_argument("--m", type=int)
    sp.add_argument("--n", type=int)
    sp.add_argument("--rows", type=_ints)
    sp.add_argument("--field", choices=("real", "complex"), default="real")
    sp.add_argument("--out")
    common(sp, seed=True)
    sp.set_defaults(func=cmd_construct)

    sp = sub.add_parser("complement", help="canonical Naimark complement of a Parseval frame")
    sp.add_argument("input")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_complement)

    kinds = [k.value for k in optimize.ObjectiveKind]

    sp = sub.add_parser("optimize", help="multi-start maximization of a frame functional")
    sp.add_argument("--objective", choices=kinds, required=True)
    sp.add_argument("--k", type=int)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--field", choices=("real", "complex"), default="real")
    sp.add_argument("--manifold", choices=("parseval", "equal_norm"), default="parseval")
    sp.add_argument("--seeds", type=int, default=20, help="number of random starts")
    sp.add_argument("--max-iters", type=int, default=500)
    sp.add_argument("--step-init", type=float, default=0.1)
    sp.add_argument("--eps-schedule", type=_floats, default=optimize.DEFAULT_EPS_SCHEDULE)
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--out-dir", required=True)
    common(sp, seed=True, cap=True)
    sp.set_defaults(func=cmd_optimize)

    sp = sub.add_parser("verify", help="run the numerical check suite")
    sp.add_argument("--m-list", type=_ints, default=(4, 5, 6, 7, 8))
    sp.add_argument("--n-list", type=_ints, default=(2, 3, 4))
    sp.add_argument("--k-list", type=_ints, default=(1, 2, 3))
    sp.add_argument("--trials", type=int, default=50)
    sp.add_argument("--field", choices=("real", "complex"), default="real")
    sp.add_argument("--frame", action="append", default=[], help="extra frame file (repeatable)")
    sp.add_argument("--check", action="append", default=[], help="restrict to a check (repeatable)")
    sp.add_argument("--jobs", type=int, default=1, help="accepted for interface parity; checks run in order")
    sp.add_argument("--out")
    sp.add_argument("--junit")
    common(sp, seed=True)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("gradcheck", help="compare analytic and finite-difference gradients")
    sp.add_argument("--objective", choices=kinds, required=True)
    sp.add_argument("--k", type=int)
    sp.add_argument("--eps", type=float, default=1e-2)
    sp.add_argument("--h", type=float, default=1e-6)
    sp.add_argument("--m", type=int)
    sp.add_argument("--n", type=int)
    sp.add_argument("--input")
    sp.add_argument("--field", choices=("real", "complex"), default="real")
    sp.add_argument("--manifold", choices=("parseval", "equal_norm"), default="parseval")
    sp.add_argument("--tol", type=float)
    common(sp, seed=True, cap=True)
    sp.set_defaults(func=cmd_gradcheck)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, _Run(args))
    except FramelabError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
