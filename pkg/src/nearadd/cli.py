"""Command-line entry point: ``nearadd <subcommand> ...``.

The level count k is the only knob for the size/stretch tradeoff (a
runtime exponent rho corresponds to k = 1/rho); there is no separate rho flag.
"""
from __future__ import annotations

import argparse
import contextlib
import json
import logging
import os
import sys
import tempfile
from pathlib import Path
from typing import IO, Iterator, Sequence

import numpy as np

from . import apsp, asp, emulator, hierarchy, spanner, verify
from .emulator import BetaVariant, beta_bound
from .errors import NoPathError, ParameterError, ParseError
from .graph import Graph, format_weight, is_connected, load_graph, write_gr

DEFAULT_SEED = 20201
log = logging.getLogger("nearadd")


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # single-line diagnostics
        self.exit(2, f"{self.prog}: error: {message}\n")


@contextlib.contextmanager
def _atomic_out(path: str | None, binary: bool = False) -> Iterator[IO]:
    """Write to ``path`` via temp file + rename; ``-`` or None means stdout."""
    if path in (None, "-"):
        yield sys.stdout.buffer if binary else sys.stdout
        return
    target = Path(path)
    fd, tmp = tempfile.mkstemp(dir=target.parent or ".", prefix=f".{target.name}.")
    try:
        with os.fdopen(fd, "wb" if binary else "w", newline=None if binary else "") as fh:
            yield fh
        os.replace(tmp, target)
    except BaseException:
        with contextlib.suppress(FileNotFoundError):
            os.unlink(tmp)
        raise


def _read_graph(path: str) -> Graph:
    if path == "-":
        return load_graph(sys.stdin)
    with open(path) as fh:
        return load_graph(fh)


def _dump_json(obj, path: str | None) -> None:
    with _atomic_out(path) as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _emit(args, summary: dict, human: str) -> None:
    if args.json:
        print(json.dumps(summary, sort_keys=True))
    else:
        print(human, file=sys.stderr if args.output in (None, "-") else sys.stdout)


# ------------------------------------------------------------------ commands

def cmd_gen(args) -> int:
    params = {k: v for k, v in dict(n=args.n, p=args.p, rows=args.rows, cols=args.cols,
                                    wmin=args.wmin, wmax=args.wmax, shortcuts=args.shortcuts).items()
              if v is not None}
    if args.model in ("er", "path", "complete", "heavy-light") and "n" not in params:
        raise ParameterError(f"--n is required for model {args.model}")
    if args.model == "grid" and not {"rows", "cols"} <= params.keys():
        raise ParameterError("--rows and --cols are required for model grid")
    g = verify.gen_graph(args.model, args.seed, **params)
    with _atomic_out(args.output) as fh:
        write_gr(fh, g.n, g.edges, comments=[f"model={args.model} seed={args.seed}"])
    connected = is_connected(g)
    _emit(args, {"model": args.model, "n": g.n, "m": g.m, "connected": connected, "seed": args.seed},
          f"generated {args.model}: n={g.n} m={g.m} connected={connected}")
    return 0


def cmd_build(args) -> int:
    g = _read_graph(args.input)
    if args.what == "emulator":
        parts = emulator.build_emulator_parts(g, args.k, args.seed)
        out = parts.overlay
        stats = hierarchy.bunch_stats(parts.hierarchy, parts.bunches)
        stats.update(kind="emulator", edges=len(out))
    else:
        rep = spanner.build_spanner(g, args.k, args.seed)
        out = rep.spanner
        stats = rep.summary()
    with _atomic_out(args.output) as fh:
        out.write_gr(fh)
    if args.stats:
        _dump_json(stats, args.stats)
    _emit(args, stats, f"built {args.what}: n={g.n} edges={len(out)} (input m={g.m})")
    return 0


def cmd_apsp(args) -> int:
    g = _read_graph(args.input)
    table = apsp.additive_apsp(g, args.k)
    if args.format == "bin":
        with _atomic_out(args.output, binary=True) as fh:
            fh.write(np.ascontiguousarray(table.delta_hat, dtype="<f8").tobytes())
    else:
        with _atomic_out(args.output) as fh:
            fh.write("u,v,estimate\n")
            d = table.delta_hat
            for u in range(g.n):
                for v in range(g.n):
                    if np.isfinite(d[u, v]):
                        fh.write(f"{u},{v},{format_weight(d[u, v])}\n")
    meta = table.metadata()
    if args.meta:
        _dump_json(meta, args.meta)
    _emit(args, meta, f"additive APSP: n={g.n} k={args.k} |D_i|={meta['D_sizes']}")
    return 0


def _read_sources(path: str) -> list[int]:
    out = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            s = line.strip()
            if not s or s.startswith("#"):
                continue
            try:
                out.append(int(s))
            except ValueError:
                raise ParseError(lineno, f"bad source id {s!r}") from None
    return out


def cmd_asp(args) -> int:
    g = _read_graph(args.input)
    sources = _read_sources(args.sources) if args.sources else list(range(g.n))
    res = asp.asp_all(g, sources, args.k, args.eps, args.seed)
    with _atomic_out(args.output) as fh:
        fh.write("source,target,estimate" + (",path" if args.paths else "") + "\n")
        for row in asp.asp_rows(res, with_paths=args.paths):
            line = f"{row[0]},{row[1]},{format_weight(row[2])}"
            if args.paths:
                line += "," + ";".join(map(str, row[3]))
            fh.write(line + "\n")
    summary = {"sources": len(res.sources), "spanner_edges": len(res.spanner.spanner),
               "k": args.k, "eps": args.eps, "beta": res.beta, "seed": args.seed}
    _emit(args, summary, f"asp: {len(res.sources)} sources, spanner edges={summary['spanner_edges']}")
    return 0


def cmd_oracle(args) -> int:
    g = _read_graph(args.input)
    if args.action == "preprocess":
        pack = asp.oracle_preprocess(g, args.k, args.eps_em, args.eps_hop, args.seed)
        outdir = Path(args.output or ".")
        outdir.mkdir(parents=True, exist_ok=True)
        with _atomic_out(str(outdir / "emulator.gr")) as fh:
            pack.emulator.write_gr(fh)
        with _atomic_out(str(outdir / "hopset.gr")) as fh:
            pack.hopset.write_gr(fh)
        _dump_json(pack.metadata(), str(outdir / "pack.json"))
        _emit(args, pack.metadata(), f"oracle pack: |G'|={len(pack.emulator)} |H'|={len(pack.hopset)} beta={pack.beta_query}")
        return 0
    pack = load_pack(args.pack)
    if not args.source:
        raise ParameterError("--source is required for query")
    rows, work = [], 0
    for u in args.source:
        if not 0 <= u < g.n:
            raise ParameterError(f"source {u} out of range for n={g.n}")
        r = asp.oracle_query(g, pack, u)
        work += r.relaxations
        rows.extend((u, v, d) for v, d in enumerate(r.dist) if d != float("inf"))
    with _atomic_out(args.output) as fh:
        fh.write("source,target,estimate\n")
        for u, v, d in rows:
            fh.write(f"{u},{v},{format_weight(d)}\n")
    _emit(args, {"queries": len(args.source), "relaxations": work, "beta_query": pack.beta_query},
          f"oracle query: {len(args.source)} sources, relaxations={work}")
    return 0


def load_pack(directory: str) -> asp.DistanceOraclePack:
    d = Path(directory)
    meta = json.loads((d / "pack.json").read_text())
    with open(d / "emulator.gr") as fh:
        em = emulator.load_overlay(fh, emulator.OverlayKind.EMULATOR)
    with open(d / "hopset.gr") as fh:
        hs = emulator.load_overlay(fh, emulator.OverlayKind.HOPSET)
    return asp.DistanceOraclePack(em, hs, int(meta["beta_query"]), meta["eps_em"],
                                  meta["eps_hop"], int(meta["k"]), int(meta["seed"]))


def cmd_verify(args) -> int:
    g = _read_graph(args.input)
    gt = verify.ground_truth(g, cap=args.cap)
    reports: list[verify.ViolationReport] = []
    if args.what == "emulator":
        variant = BetaVariant.EMU_1EPS if args.eps < 1 else BetaVariant.EMU_3EPS
        bp = beta_bound(variant, args.k, args.eps)
        h = emulator.build_emulator(g, args.k, args.seed)
        reports.append(verify.check_near_additive(g, h, bp.mult, bp.beta_exact, gt, name=f"emulator_{variant.value}"))
    elif args.what == "spanner":
        variant = BetaVariant.SPAN_1EPS if args.eps < 1 else BetaVariant.SPAN_3EPS
        bp = beta_bound(variant, args.k, args.eps)
        rep = spanner.build_spanner(g, args.k, args.seed)
        reports.append(verify.check_subgraph(g, rep.spanner))
        reports.append(verify.check_near_additive(g, rep.spanner, bp.mult, bp.beta_exact, gt, name=f"spanner_{variant.value}"))
        bad = spanner.check_intersection_lemma(g, rep.hierarchy, rep.bunches)
        reports.append(verify.ViolationReport(
            "intersection_lemma", {"k": args.k, "seed": args.seed},
            [(v.first[0], v.second[0], float(v.shared), float(v.level)) for v in bad]))
    elif args.what == "hopset":
        bp = beta_bound(BetaVariant.HOPSET_3EPS, args.k, args.eps)
        h = emulator.as_hopset(emulator.build_emulator(g, args.k, args.seed))
        reports.append(verify.check_near_additive(g, h, bp.mult, 0, gt, hops=bp.hops, name="hopset_Hopset3Eps"))
    else:
        table = apsp.additive_apsp(g, args.k)
        reports.append(verify.report_from_estimates(
            "additive_apsp", table.delta_hat, gt, 1, 2 * (args.k - 1), {"k": args.k}))
    ok = all(r.ok for r in reports)
    doc = {"ok": ok, "violations": [v for r in reports for v in r.to_json()["violations"]],
           "reports": [r.to_json() for r in reports],
           "params": {"k": args.k, "eps": args.eps, "seed": args.seed, "what": args.what}}
    _dump_json(doc, args.output)
    if not args.json and args.output not in (None, "-"):
        for r in reports:
            print(f"{r.check}: {'PASS' if r.ok else 'FAIL'} ({len(r.violations)} violations)")
    return 0 if ok else 1


def cmd_stats(args) -> int:
    g = _read_graph(args.input)
    sched = hierarchy.Schedule(args.schedule)
    h = hierarchy.sample_levels(g.n, args.k, sched, args.seed)
    piv = hierarchy.compute_pivots(g, h)
    radius = 1 if sched is hierarchy.Schedule.EMULATOR else 0.5
    b = hierarchy.compute_bunches(g, h, piv, radius)
    _dump_json(hierarchy.bunch_stats(h, b), args.output)
    return 0


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="nearadd", description=__doc__.splitlines()[0])
    p.add_argument("--json", action="store_true", help="machine-readable summary on stdout")
    p.add_argument("-v", "--verbose", action="count", default=0)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, k=True, seed=True, inp=True):
        if inp:
            sp.add_argument("-i", "--input", required=True, help=".gr graph file, or - for stdin")
        sp.add_argument("-o", "--output", default=None)
        if k:
            sp.add_argument("--k", type=int, required=True)
        if seed:
            sp.add_argument("--seed", type=int, default=DEFAULT_SEED)

    g = sub.add_parser("gen", help="generate a fixture graph")
    common(g, k=False, inp=False)
    g.add_argument("--model", choices=verify.MODELS, required=True)
    g.add_argument("--n", type=int)
    g.add_argument("--p", type=float)
    g.add_argument("--rows", type=int)
    g.add_argument("--cols", type=int)
    g.add_argument("--wmin", type=int)
    g.add_argument("--wmax", type=int)
    g.add_argument("--shortcuts", type=int)
    g.set_defaults(func=cmd_gen)

    b = sub.add_parser("build", help="build an emulator or spanner")
    b.add_argument("what", choices=("emulator", "spanner"))
    common(b)
    b.add_argument("--stats", help="write build statistics JSON here")
    b.set_defaults(func=cmd_build)

    a = sub.add_parser("apsp-additive", help="purely additive all-pairs estimates")
    common(a, seed=False)
    a.add_argument("--format", choices=("csv", "bin"), default="csv")
    a.add_argument("--meta", help="write s_i/|A_i|/|D_i|/|E_i| JSON here")
    a.set_defaults(func=cmd_apsp)

    s = sub.add_parser("asp", help="approximate shortest paths from a source set")
    common(s)
    s.add_argument("--eps", type=float, required=True)
    s.add_argument("--sources", help="file with one vertex id per line (default: all)")
    s.add_argument("--paths", action="store_true", help="add a semicolon-joined path column")
    s.set_defaults(func=cmd_asp)

    o = sub.add_parser("oracle", help="distance oracle preprocess/query")
    o.add_argument("action", choices=("preprocess", "query"))
    common(o, k=False)
    o.add_argument("--k", type=int, default=2)
    o.add_argument("--eps-em", type=float, default=0.5)
    o.add_argument("--eps-hop", type=float, default=12.0)
    o.add_argument("--pack", help="pack directory (query)")
    o.add_argument("--source", type=int, action="append", help="query vertex (repeatable)")
    o.set_defaults(func=cmd_oracle)

    v = sub.add_parser("verify", help="build and check a stretch guarantee")
    v.add_argument("what", choices=("emulator", "spanner", "hopset", "apsp"))
    common(v)
    v.add_argument("--eps", type=float, default=0.5)
    v.add_argument("--cap", type=int, default=verify.DEFAULT_CAP, help="max n for exact ground truth")
    v.set_defaults(func=cmd_verify)

    st = sub.add_parser("stats", help="hierarchy and bunch statistics")
    common(st)
    st.add_argument("--schedule", choices=[s.value for s in hierarchy.Schedule], default="emulator")
    st.set_defaults(func=cmd_stats)
    return p


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * args.verbose, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (ParameterError, ParseError, NoPathError, OSError, KeyError, ValueError) as exc:
        msg = str(exc).replace("\n", " ")
        print(f"nearadd: error: {msg}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
