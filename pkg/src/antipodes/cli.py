"""Command-line entry point wiring all modules.

Every JSON artifact echoes its run configuration under the key "config" so
runs are reproducible from their outputs alone.  Exit status: 0 on success,
2 when a certificate chain reports a violated link (a loud failure), 1 on
runtime input errors such as malformed files.
"""

import argparse
import csv
import json
import math
import sys

from . import _kernels, geometry
from .counting import count_pairs_brute, count_pairs_grid
from .experiments import AnnealSchedule, SweepRow, extremal_search, fit_exponent, sweep
from .generators import FAMILIES, GeneratorSpec, make, star_metric
from .geometry import FormatError, InputError, read_pointset, write_metric, write_pointset
from .graphs import BoxGraph, common_neighbor_profile
from .lens import annuli_intersection
from .pipeline import antipodality_matrix, bound_report, convex_hull, filter_boundary_strip, partition_boxes

BOUND_COLUMNS = ("chain_ok", "k", "k_times_eps", "quad_form", "norm_sq", "lambda1", "trace_mtm")


def _dyadic_range(text):
    try:
        a, b = text.split(":")
        a, b = int(a), int(b)
    except ValueError:
        raise InputError(f"--eps-dyadic expects 'A:B', got {text!r}") from None
    if a >= b:
        raise InputError("--eps-dyadic expects A < B")
    return [2.0**-j for j in range(a, b + 1)]


def _emit_json(payload, path):
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if path:
        with open(path, "w", encoding="utf-8") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def _spec_from_args(args, eps=None):
    return GeneratorSpec(
        family=args.family,
        n=args.n,
        epsilon=eps if eps is not None else getattr(args, "eps", None),
        k=getattr(args, "k", None),
        d=getattr(args, "d", 2),
        seed=getattr(args, "seed", 0),
    )


def cmd_generate(args):
    config = {
        "subcommand": "generate",
        "family": args.family,
        "n": args.n,
        "epsilon": args.eps,
        "k": args.k,
        "d": args.d,
        "seed": args.seed,
        "out": args.out,
    }
    if args.family == "star":
        write_metric(args.out, star_metric(args.n))
    else:
        write_pointset(args.out, make(_spec_from_args(args)))
    _emit_json({"config": config, "written": args.out}, None)
    return 0


def cmd_count(args):
    config = {
        "subcommand": "count",
        "in": getattr(args, "in"),
        "epsilon": args.eps,
        "engine": args.engine,
    }
    ps = read_pointset(getattr(args, "in"))
    engine = count_pairs_grid if args.engine == "grid" else count_pairs_brute
    c = engine(ps, args.eps)
    _emit_json(
        {
            "config": config,
            "n": c.n,
            "epsilon": c.epsilon,
            "neighbors": c.neighbors_ordered,
            "antipodes": c.antipodes_ordered,
        },
        args.out,
    )
    return 0


def cmd_bound(args):
    config = {
        "subcommand": "bound",
        "in": getattr(args, "in"),
        "epsilon": args.eps,
        "emit_matrix": args.emit_matrix,
        "emit_boxes": args.emit_boxes,
    }
    ps = read_pointset(getattr(args, "in"))
    report = bound_report(ps, args.eps)
    if args.emit_matrix or args.emit_boxes:
        hull = convex_hull(ps)
        strip = filter_boundary_strip(ps, hull, args.eps)
        bp = partition_boxes(strip, args.eps)
        M = antipodality_matrix(bp, args.eps)
        if args.emit_matrix:
            upper = M.rows <= M.cols
            with open(args.emit_matrix, "w", encoding="utf-8") as f:
                for i, j in zip(M.rows[upper], M.cols[upper]):
                    f.write(f"{i} {j}\n")
        if args.emit_boxes:
            write_pointset(args.emit_boxes, geometry.PointSet(bp.centers))
    payload = report.as_dict()
    payload["config"] = config
    _emit_json(payload, args.out)
    return 0 if report.chain_ok else 2


def cmd_lens(args):
    config = {"subcommand": "lens", "d": args.d, "epsilon": args.eps}
    geo = annuli_intersection(args.d, args.eps)
    payload = geo.as_dict()
    payload["config"] = config
    _emit_json(payload, args.out)
    return 0


def cmd_profile(args):
    pairs = []
    with open(getattr(args, "in"), "r", encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            parts = line.split()
            if not parts:
                continue
            if len(parts) != 2:
                raise FormatError(lineno, f"expected 'i j', got {line.rstrip()!r}")
            try:
                pairs.append((int(parts[0]), int(parts[1])))
            except ValueError:
                raise FormatError(lineno, f"non-integer index in {line.rstrip()!r}") from None
    centers = None
    if args.boxes:
        centers = read_pointset(args.boxes).coords
        k = centers.shape[0]
    elif pairs:
        k = max(max(i, j) for i, j in pairs) + 1
    else:
        raise InputError("empty edge list and no --boxes file; graph size unknown")
    radius = args.forbidden_radius
    if radius is None:
        radius = 10.0 * math.sqrt(args.eps) if args.eps else 0.0
    g = BoxGraph.from_edges(k, pairs, centers=centers)
    prof = common_neighbor_profile(g, radius)
    out = sys.stdout if not args.out else open(args.out, "w", encoding="utf-8", newline="")
    try:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["s", "count_s"])
        for s, c in prof.rows():
            w.writerow([s, c])
    finally:
        if args.out:
            out.close()
    sys.stderr.write(
        f"k={prof.k} forbidden_radius={prof.forbidden_radius} "
        f"c_emp={prof.c_emp:.6g} c_forbidden={prof.c_forbidden:.6g}\n"
    )
    return 0


def _write_sweep_csv(rows, path, with_bounds):
    out = sys.stdout if not path else open(path, "w", encoding="utf-8", newline="")
    try:
        w = csv.writer(out, lineterminator="\n")
        header = ["epsilon", "n", "neighbors", "antipodes", "ratio"]
        if with_bounds:
            header += list(BOUND_COLUMNS)
        w.writerow(header)
        for r in rows:
            rec = [f"{r.epsilon:.17g}", r.n, r.neighbors, r.antipodes,
                   "" if r.ratio is None else f"{r.ratio:.17g}"]
            if with_bounds:
                b = r.bound.as_dict()
                rec += [b[c] for c in BOUND_COLUMNS]
            w.writerow(rec)
    finally:
        if path:
            out.close()


def cmd_sweep(args):
    if args.eps_dyadic:
        eps_list = _dyadic_range(args.eps_dyadic)
    elif args.eps:
        eps_list = [float(e) for e in args.eps]
    else:
        raise InputError("sweep needs --eps values or --eps-dyadic A:B")
    spec = _spec_from_args(args, eps=eps_list[0])
    rows = sweep(spec, eps_list, with_bounds=args.with_bounds)
    _write_sweep_csv(rows, args.out, args.with_bounds)
    if args.svg:
        from ._svg import render_loglog

        pts = [(r.epsilon, r.ratio) for r in rows if r.ratio]
        fit = fit_exponent(rows) if len(pts) >= 4 else None
        svg = render_loglog(
            pts,
            slope=fit.slope if fit else None,
            intercept=fit.intercept if fit else None,
        )
        with open(args.svg, "w", encoding="utf-8") as f:
            f.write(svg)
    if args.with_bounds and any(not r.bound.chain_ok for r in rows):
        return 2
    return 0


def _read_sweep_csv(path):
    rows = []
    with open(path, "r", encoding="utf-8", newline="") as f:
        reader = csv.DictReader(f)
        if reader.fieldnames is None or "epsilon" not in reader.fieldnames:
            raise FormatError(1, "expected a sweep CSV with an 'epsilon' column")
        for lineno, rec in enumerate(reader, start=2):
            try:
                ratio = float(rec["ratio"]) if rec.get("ratio") else None
                rows.append(
                    SweepRow(
                        epsilon=float(rec["epsilon"]),
                        n=int(rec["n"]),
                        neighbors=int(rec["neighbors"]),
                        antipodes=int(rec["antipodes"]),
                        ratio=ratio,
                    )
                )
            except (KeyError, ValueError):
                raise FormatError(lineno, f"bad sweep row {rec!r}") from None
    return rows


def cmd_fit(args):
    config = {"subcommand": "fit", "in": getattr(args, "in")}
    rows = _read_sweep_csv(getattr(args, "in"))
    fit = fit_exponent(rows)
    payload = {
        "config": config,
        "slope": fit.slope,
        "intercept": fit.intercept,
        "r_squared": fit.r_squared,
        "epsilon_range": list(fit.epsilon_range),
    }
    _emit_json(payload, args.out)
    if args.svg:
        from ._svg import render_loglog

        pts = [(r.epsilon, r.ratio) for r in rows if r.ratio]
        with open(args.svg, "w", encoding="utf-8") as f:
            f.write(render_loglog(pts, slope=fit.slope, intercept=fit.intercept))
    return 0


def cmd_search(args):
    config = {
        "subcommand": "search",
        "n": args.n,
        "epsilon": args.eps,
        "seed": args.seed,
        "proposals": args.proposals,
        "out": args.out,
        "trace": args.trace,
    }
    sched = AnnealSchedule(proposals=args.proposals)
    state = extremal_search(args.n, args.eps, seed=args.seed, schedule=sched)
    write_pointset(args.out, state.best)
    payload = {
        "config": config,
        "best_objective": state.best_objective,
        "accepted": state.accepted,
        "proposals": state.proposals,
        "note": "annealing evidence about attainable ratios, not a bound",
        "trace": [[t, o, b] for t, o, b in state.trace[:10000]],
    }
    _emit_json(payload, args.trace)
    return 0


def build_parser():
    p = argparse.ArgumentParser(prog="antipodes", description=__doc__)
    p.add_argument("--threads", type=int, default=None, help="cap worker threads")
    sub = p.add_subparsers(dest="cmd", required=True)

    g = sub.add_parser("generate", help="emit a generated configuration")
    g.add_argument("--family", required=True, choices=FAMILIES + ("star",))
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--eps", type=float, default=None)
    g.add_argument("--k", type=int, default=None, help="polygon side count (even)")
    g.add_argument("--d", type=int, default=2)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True)
    g.set_defaults(fn=cmd_generate)

    c = sub.add_parser("count", help="exact neighbor/antipode counts")
    c.add_argument("--in", required=True)
    c.add_argument("--eps", type=float, required=True)
    c.add_argument("--engine", choices=("brute", "grid"), default="grid")
    c.add_argument("--out", default=None)
    c.set_defaults(fn=cmd_count)

    b = sub.add_parser("bound", help="run the certificate chain")
    b.add_argument("--in", required=True)
    b.add_argument("--eps", type=float, required=True)
    b.add_argument("--emit-matrix", default=None, help="write the box matrix edge list")
    b.add_argument("--emit-boxes", default=None, help="write box centers as a point set")
    b.add_argument("--out", default=None)
    b.set_defaults(fn=cmd_bound)

    le = sub.add_parser("lens", help="two-annuli intersection geometry")
    le.add_argument("--d", type=float, required=True, help="anchor gap")
    le.add_argument("--eps", type=float, required=True)
    le.add_argument("--out", default=None)
    le.set_defaults(fn=cmd_lens)

    pr = sub.add_parser("profile", help="common-neighbor profile of a box graph")
    pr.add_argument("--in", required=True, help="edge list file: one 'i j' pair per line")
    pr.add_argument("--boxes", default=None, help="box centers (point-set format)")
    pr.add_argument("--eps", type=float, default=None, help="derive forbidden radius 10*sqrt(eps)")
    pr.add_argument("--forbidden-radius", type=float, default=None)
    pr.add_argument("--out", default=None)
    pr.set_defaults(fn=cmd_profile)

    s = sub.add_parser("sweep", help="counts across an epsilon sweep")
    s.add_argument("--family", required=True, choices=FAMILIES)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--eps", type=float, nargs="*", default=None)
    s.add_argument("--eps-dyadic", default=None, help="A:B expands to 2^-A .. 2^-B")
    s.add_argument("--k", type=int, default=None)
    s.add_argument("--d", type=int, default=2)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--with-bounds", action="store_true")
    s.add_argument("--svg", default=None)
    s.add_argument("--out", default=None)
    s.set_defaults(fn=cmd_sweep)

    f = sub.add_parser("fit", help="scaling exponent from a sweep CSV")
    f.add_argument("--in", required=True)
    f.add_argument("--svg", default=None)
    f.add_argument("--out", default=None)
    f.set_defaults(fn=cmd_fit)

    se = sub.add_parser("search", help="anneal toward a low neighbors/antipodes ratio")
    se.add_argument("--n", type=int, required=True)
    se.add_argument("--eps", type=float, required=True)
    se.add_argument("--seed", type=int, default=0)
    se.add_argument("--proposals", type=int, default=AnnealSchedule.proposals)
    se.add_argument("--out", required=True, help="best configuration (point-set format)")
    se.add_argument("--trace", default=None, help="JSON trace path (default stdout)")
    se.set_defaults(fn=cmd_search)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads is not None:
        _kernels.set_threads(args.threads)
    try:
        return args.fn(args)
    except (InputError, FormatError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
