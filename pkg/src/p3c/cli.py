"""``p3c`` command line: decompose, oracle, gen, bench, render."""
from __future__ import annotations

import argparse
import json
import logging
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import kernels
from .bcs import build_bcs, dump_bcs
from .decompose import InputError, NotLaminar, maximal_laminar_family
from .generators import FAMILIES, generate
from .planar import EmbeddingError, GraphFormatError, format_graph, parse_graph

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_VERIFY = 0, 1, 2, 3
EXHAUSTIVE_VERIFY_N = 40

log = logging.getLogger("p3c")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _read_graph(path: str):
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    return parse_graph(text)


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _dumps(obj) -> str:
    return json.dumps(obj) + "\n"


def verify_result(g, result: dict, mode: str, v: int | None, seed: int = 0):
    """Oracle verdicts for one pipeline result; exhaustive on small graphs, sampled above."""
    from . import oracle

    fam = [tuple(t) for t in result["cutsets"]]
    verdicts = {"tree": oracle.validate_tree_decomposition(g, result["tree"], fam)}
    if g.n <= EXHAUSTIVE_VERIFY_N:
        verdicts["maximal_laminar"] = oracle.is_maximal_laminar(g, fam, mode, v)
    else:
        verdicts["laminar"] = oracle.check_laminar_family(g, fam)
        verdicts["spot_maximal"] = oracle.sample_maximality(g, fam, mode, v, seed=seed)
    return verdicts


def cmd_decompose(args) -> int:
    g = _read_graph(args.graph)
    if args.mode == "nonshiftable" and args.v is None:
        raise UsageError("--mode nonshiftable needs --v")
    if args.v is not None and args.mode != "nonshiftable":
        raise UsageError("--v is only meaningful with --mode nonshiftable")
    if args.dump_bcs:
        Path(args.dump_bcs).write_text(dump_bcs(build_bcs(g)))
    res = maximal_laminar_family(g, args.mode, args.v, check_3conn=not args.skip_3conn_check)
    out = res.to_json(timing=args.timing)
    status = EXIT_OK
    if args.verify:
        verdicts = verify_result(g, out, args.mode, args.v, args.seed)
        out["verification"] = {k: vd.to_json() for k, vd in verdicts.items()}
        if not all(verdicts.values()):
            status = EXIT_VERIFY
            for k, vd in verdicts.items():
                if not vd:
                    print(f"verification failed: {k}: {vd.reason}", file=sys.stderr)
    _emit(_dumps(out), args.out)
    return status


def cmd_oracle(args) -> int:
    from . import oracle

    g = _read_graph(args.graph)
    result = None
    if args.result:
        try:
            result = json.loads(Path(args.result).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot read result {args.result}: {exc}") from exc
    v = args.v if args.v is not None else (result or {}).get("vertex_v")
    if v is not None and not 0 <= v < g.n:
        raise InputError(f"vertex {v} not in graph")
    rep = oracle.report(g, v, result, args.mode)
    _emit(_dumps(rep.to_json()), args.out)
    return EXIT_OK if all(rep.verdicts.values()) else EXIT_VERIFY


def cmd_gen(args) -> int:
    g = generate(args.family, args.size, args.seed, args.deletions)
    _emit(format_graph(g, comment=f"{args.family} size={args.size} seed={args.seed}"), args.out)
    return EXIT_OK


def loglog_slope(ns, ts) -> float:
    ns, ts = np.asarray(ns, dtype=float), np.asarray(ts, dtype=float)
    ok = (ns > 0) & (ts > 0)
    if ok.sum() < 2:
        return float("nan")
    return float(np.polyfit(np.log(ns[ok]), np.log(ts[ok]), 1)[0])


def bench_graph(family: str, n: int, seed: int = 0):
    """A graph of roughly ``n`` vertices from a benchmark family."""
    if family in ("prism", "prism_stack"):
        return generate("prism_stack", max(1, n // 3), seed)
    if family == "wheel":
        return generate("wheel", max(4, n - 1), seed)
    return generate(family, n, seed)


def run_bench(family: str, sizes, repeat: int = 1, seed: int = 0, check_3conn: bool = False):
    rows = []
    for n in sizes:
        g = bench_graph(family, n, seed)
        best = math.inf
        res = None
        for _ in range(max(1, repeat)):
            t0 = time.perf_counter()
            res = maximal_laminar_family(g, "all", None, check_3conn=check_3conn)
            best = min(best, time.perf_counter() - t0)
        rows.append({
            "family": family, "n": g.n, "m": g.m, "seconds": round(best, 6),
            "frames": res.stats["frames"], "cycles": len(res.family),
            "conflict_nodes": res.stats["conflict_nodes"], "conflict_edges": res.stats["conflict_edges"],
            "backend": kernels.backend(),
        })
    return rows


BENCH_COLUMNS = ("family", "n", "m", "seconds", "frames", "cycles", "conflict_nodes", "conflict_edges", "backend")


def cmd_bench(args) -> int:
    sizes = args.sizes if args.sizes is not None else (
        [1000, 3000, 10000, 30000, 100000] if args.family.startswith("prism") else [100, 300, 1000, 2000])
    if sizes:
        # compile kernels before timing
        maximal_laminar_family(bench_graph(args.family, 30), "all", None, check_3conn=False)
    rows = run_bench(args.family, sizes, args.repeat, args.seed)
    lines = []
    if rows:
        lines.append(",".join(BENCH_COLUMNS))
        lines.extend(",".join(str(r[c]) for c in BENCH_COLUMNS) for r in rows)
        lines.append(f"# slope {loglog_slope([r['n'] for r in rows], [r['seconds'] for r in rows]):.4f}")
    _emit("\n".join(lines) + ("\n" if lines else ""), args.out)
    return EXIT_OK


def cmd_render(args) -> int:
    from .render import render_svg

    g = _read_graph(args.graph)
    if args.result:
        try:
            family = [tuple(t) for t in json.loads(Path(args.result).read_text())["cutsets"]]
        except (OSError, json.JSONDecodeError, KeyError) as exc:
            raise InputError(f"cannot read result {args.result}: {exc}") from exc
    else:
        res = maximal_laminar_family(g, args.mode, args.v, check_3conn=not args.skip_3conn_check)
        family = [tuple(t) for t in res.family]
    drawing = render_svg(g, family)
    for w in drawing.warnings:
        print(f"warning: {w}", file=sys.stderr)
    _emit(drawing.svg, args.out)
    return EXIT_OK


def _common(p: argparse.ArgumentParser, graph: bool = True) -> None:
    if graph:
        p.add_argument("graph", help="graph file, or - for stdin")
    p.add_argument("--out", "-o", help="output path (default stdout)")
    p.add_argument("--seed", type=int, default=0)


def _mode(p: argparse.ArgumentParser) -> None:
    p.add_argument("--mode", choices=("all", "nontrivial", "nonshiftable"), default="all")
    p.add_argument("--v", type=int, help="vertex v for nonshiftable mode")
    p.add_argument("--skip-3conn-check", action="store_true", help="trust that the input is 3-connected")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="p3c", description="Maximal laminar families of 3-cutsets in 3-connected plane graphs.")
    ap.add_argument("--log-level", default="WARNING")
    sub = ap.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    p = sub.add_parser("decompose", help="compute a maximal laminar family and its tree decomposition")
    _common(p)
    _mode(p)
    p.add_argument("--verify", action="store_true", help="check the result with the brute-force oracle")
    p.add_argument("--timing", action="store_true", help="include runtime_ms in stats")
    p.add_argument("--dump-bcs", metavar="PATH", help="also write the subdivision with tag lines")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("oracle", help="brute-force cutset report, optionally judging a result")
    _common(p)
    p.add_argument("--result", help="JSON output of decompose to judge")
    p.add_argument("--mode", choices=("all", "nontrivial", "nonshiftable"), default="all")
    p.add_argument("--v", type=int)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("gen", help="write a generated graph")
    p.add_argument("family", choices=FAMILIES)
    p.add_argument("size", type=int)
    p.add_argument("--deletions", type=int)
    _common(p, graph=False)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bench", help="time the pipeline over a size schedule (CSV)")
    p.add_argument("--family", default="prism_stack", choices=("prism_stack", "wheel", "apollonian", "random_reduced"))
    p.add_argument("--sizes", type=int, nargs="*", help="vertex counts (default: family schedule)")
    p.add_argument("--repeat", type=int, default=1)
    _common(p, graph=False)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("render", help="draw G with one curve per cutset (SVG)")
    _common(p)
    _mode(p)
    p.add_argument("--result", help="JSON output of decompose (default: compute it)")
    p.set_defaults(func=cmd_render)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=getattr(logging, str(args.log_level).upper(), logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"p3c: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except GraphFormatError as exc:
        print(f"p3c: invalid graph: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (EmbeddingError, InputError) as exc:
        print(f"p3c: invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NotLaminar as exc:
        print(f"p3c: internal check failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except ValueError as exc:
        print(f"p3c: invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
