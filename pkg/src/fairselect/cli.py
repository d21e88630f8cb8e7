"""Command-line surface: audit, repair, bench, export-milp, serve."""

import argparse
import json
import sys
from fractions import Fraction

from .backend import active_backend
from .errors import FairselectError
from .exact import to_fraction
from .ingest import IngestionSpec, IngestResult, ingest_csv
from .milp import build_model, export_lp_file
from .model import FairnessSpec, WeightBox, WeightVector
from .oracle import gen_random_instance
from .runner import BenchConfig, run_audit, run_bench, run_repair


def _add_data_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--data", help="CSV file (UTF-8, header row required)")
    p.add_argument("--score-cols", help="comma-separated score column names")
    p.add_argument("--group-col", help="sensitive-attribute column")
    p.add_argument("--protected", help="protected value of the group column")
    p.add_argument(
        "--derived",
        action="append",
        default=[],
        help="derived column 'name=colA-colB' (difference; date columns in days)",
    )
    p.add_argument("--snap-grid", type=int, default=6, help="decimal places for tie snapping")
    p.add_argument("--delimiter", default=",")
    p.add_argument(
        "--synthetic",
        help="synthetic dataset instead of --data: 'n=1000,d=2,grid=0.001,pg1=0.3,seed=0'",
    )


def _add_spec_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--k", required=True, help="top-k size (bench: comma list)")
    p.add_argument("--lower", type=int, required=True, help="lower protected-count bound")
    p.add_argument("--upper", type=int, required=True, help="upper protected-count bound")


def load_dataset(args) -> IngestResult:
    if args.synthetic:
        params = dict(kv.split("=", 1) for kv in args.synthetic.split(","))
        ds = gen_random_instance(
            seed=int(params.get("seed", 0)),
            n=int(params["n"]),
            d=int(params.get("d", 2)),
            grid=params.get("grid", "0.001"),
            p_g1=float(params.get("pg1", 0.3)),
        )
        return IngestResult(dataset=ds, rows_read=ds.n, rows_dropped=0,
                            column_names=tuple(f"x{i+1}" for i in range(ds.d)))
    if not (args.data and args.score_cols and args.group_col and args.protected):
        raise FairselectError(
            "need --data, --score-cols, --group-col and --protected (or --synthetic)"
        )
    spec = IngestionSpec(
        path=args.data,
        score_columns=tuple(c.strip() for c in args.score_cols.split(",")),
        group_column=args.group_col,
        protected_value=args.protected,
        derived_columns=tuple(args.derived),
        snap_decimals=args.snap_grid,
        delimiter=args.delimiter,
    )
    res = ingest_csv(spec)
    for w in res.warnings:
        print(f"warning: {w}", file=sys.stderr)
    if res.rows_dropped:
        print(f"note: dropped {res.rows_dropped} unusable rows", file=sys.stderr)
    return res


def _parse_weights(text: str) -> WeightVector:
    return WeightVector(tuple(Fraction(part.strip()) if "/" in part else to_fraction(part.strip())
                              for part in text.split(",")))


def _write_out(args, payload: dict) -> None:
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2)
        print(f"wrote {args.out}")


def cmd_audit(args) -> int:
    res = load_dataset(args)
    spec = FairnessSpec(int(args.k), args.lower, args.upper)
    report = run_audit(res.dataset, _parse_weights(args.w0), spec)
    verdict = "fair" if report.fair else "unfair"
    lo, hi = report.interval
    print(f"{verdict}: protected count in top-{spec.k} ranges [{lo}, {hi}]"
          f" vs bounds [{spec.lower}, {spec.upper}]")
    for row in report.topk_preview[:5]:
        print(f"  id={row['id']} score={row['score']:.6f} group={row['group']}")
    _write_out(args, report.to_json())
    return 0 if report.fair else 1


def cmd_repair(args) -> int:
    res = load_dataset(args)
    spec = FairnessSpec(int(args.k), args.lower, args.upper)
    report = run_repair(
        res.dataset,
        _parse_weights(args.w0),
        args.eps,
        spec,
        algorithm=args.algorithm,
        workers=args.workers,
        seed=args.seed,
        budget=args.budget,
        time_limit=args.time_limit,
    )
    print(f"verdict: {report.verdict} ({report.wall_millis:.1f} ms,"
          f" algorithm {report.algorithm}"
          + (f", backend {report.backend}" if report.backend else "") + ")")
    if report.weight is not None:
        pretty = ", ".join(f"{x:.6f}" for x in report.weight)
        print(f"weight: ({pretty})  exact: ({', '.join(report.weight_exact)})")
    for line in report.transcript:
        print(f"  {line}")
    _write_out(args, report.to_json())
    return 0 if report.verdict == "found" else 1


def cmd_bench(args) -> int:
    res = load_dataset(args)
    cfg = BenchConfig(
        k_values=tuple(int(v) for v in args.k.split(",")),
        eps_values=tuple(v.strip() for v in args.eps.split(",")),
        algorithms=tuple(v.strip() for v in args.algorithm.split(",")),
        workers_values=tuple(int(v) for v in str(args.workers).split(",")),
        samples=args.samples,
        time_limit=args.time_limit,
        seed=args.seed,
        budget=args.budget,
        lower_share=args.lower_share,
        upper_share=args.upper_share,
        dataset_label=args.data or args.synthetic or "dataset",
    )
    metrics = run_bench(res.dataset, cfg, out_path=args.out)
    for agg in metrics["aggregates"]:
        print(
            f"{agg['algorithm']:>9} k={agg['k']:<4} eps={agg['eps']:<6} "
            f"workers={agg['workers']:<3} mean={agg['meanWallMillis']:8.1f} ms "
            f"verdicts={agg['verdicts']}"
        )
    if args.out:
        print(f"wrote {args.out}")
    return 0


def cmd_export_milp(args) -> int:
    res = load_dataset(args)
    spec = FairnessSpec(int(args.k), args.lower, args.upper)
    if args.w0:
        box = WeightBox.from_epsilon_box(_parse_weights(args.w0), args.eps or 0)
    else:
        box = WeightBox.full_simplex(res.dataset.d)
    export_lp_file(build_model(res.dataset, spec, box), args.out)
    print(f"wrote {args.out}")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(load_dataset(args))
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="fairselect",
        description="Audit and repair linear scoring weights for fair top-k selection"
        f" (sweep backend: {active_backend()})",
    )
    sub = p.add_subparsers(dest="command", required=True)

    pa = sub.add_parser("audit", help="check fairness of a weight vector")
    _add_data_args(pa)
    _add_spec_args(pa)
    pa.add_argument("--w0", required=True, help="weights, e.g. 0.5,0.5")
    pa.add_argument("--out", help="write JSON report here")
    pa.set_defaults(fn=cmd_audit)

    pr = sub.add_parser("repair", help="find a nearby fair weight vector")
    _add_data_args(pr)
    _add_spec_args(pr)
    pr.add_argument("--w0", required=True)
    pr.add_argument("--eps", required=True, help="box half-width, e.g. 0.1")
    pr.add_argument("--algorithm", default="klevel-hd",
                    choices=["sweep2d", "klevel-hd", "milp", "oracle"])
    pr.add_argument("--workers", type=int, default=1)
    pr.add_argument("--seed", type=int, default=0)
    pr.add_argument("--budget", type=int)
    pr.add_argument("--time-limit", type=float)
    pr.add_argument("--out", help="write JSON report here")
    pr.set_defaults(fn=cmd_repair)

    pb = sub.add_parser("bench", help="timed repair protocol over unfair samples")
    _add_data_args(pb)
    pb.add_argument("--k", required=True, help="comma list of k values")
    pb.add_argument("--eps", required=True, help="comma list of eps values")
    pb.add_argument("--algorithm", required=True, help="comma list of algorithms")
    pb.add_argument("--workers", default="1", help="comma list of worker counts")
    pb.add_argument("--samples", type=int, default=20)
    pb.add_argument("--time-limit", type=float, default=10.0)
    pb.add_argument("--seed", type=int, default=0)
    pb.add_argument("--budget", type=int)
    pb.add_argument("--lower-share", type=float, default=0.4)
    pb.add_argument("--upper-share", type=float, default=0.6)
    pb.add_argument("--out", default="bench-metrics.json")
    pb.set_defaults(fn=cmd_bench)

    pe = sub.add_parser("export-milp", help="write the model as a CPLEX-LP file")
    _add_data_args(pe)
    _add_spec_args(pe)
    pe.add_argument("--w0", help="optional eps-box center")
    pe.add_argument("--eps", help="eps-box half-width")
    pe.add_argument("--out", required=True)
    pe.set_defaults(fn=cmd_export_milp)

    ps = sub.add_parser("serve", help="HTTP service for the explorer UI")
    _add_data_args(ps)
    ps.add_argument("--host", default="127.0.0.1")
    ps.add_argument("--port", type=int, default=8099)
    ps.set_defaults(fn=cmd_serve)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except FairselectError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
