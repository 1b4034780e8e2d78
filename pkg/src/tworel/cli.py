"""Command-line interface.

Subcommands: compute, roots, family, substitute, attractor, connectivity,
stability, density, sweep, census. Exit status is 0 on success, 1 on a domain
error (bad graph, unreadable file, failed search) and 2 on a usage error.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import networkx as nx

from .cache import CacheFormatError, DiskCache
from .dynamics import DEFAULT_BUDGET, DEFAULT_DEPTH, DEFAULT_MAX_ITER, attractor, connectivity
from .graphio import (
    ROOTS_HEADER,
    graph_to_json,
    iter_pairs,
    load_graph,
    nx_to_multigraph,
    read_graph6,
    render_svg,
    write_cloud_csv,
)
from .multigraph import FamilySpec, GraphError, Multigraph, family_graph, substitute_gadget
from .polynomial import Polynomial, format_polynomial
from .reliability import ReliabilityEngine, SearchExhausted, find_root_near_disk0, lift_roots_disk1, trel_family
from .rootfinder import RootFindingError, RootSet, all_roots
from .stability import cycle_left_halfplane_witness, hermite_biehler, real_root_census

__all__ = ["main", "build_parser", "sweep_graph6", "SweepSummary"]

log = logging.getLogger("tworel")


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# helpers


def _engine(args) -> ReliabilityEngine:
    cache = DiskCache(args.cache) if getattr(args, "cache", None) else None
    return ReliabilityEngine(cache)


def _family_spec(args) -> FamilySpec:
    return FamilySpec(args.family, n=args.n or 0, k=args.k or 0, l=args.l or 0, m=args.m or 0)


def _input(args, engine: ReliabilityEngine) -> tuple[str, Multigraph | None, Polynomial]:
    """(label, graph or None, reliability polynomial) from --graph or --family."""
    if args.graph and args.family:
        raise UsageError("give either --graph or --family, not both")
    if args.graph:
        g = load_graph(args.graph, args.s, args.t, getattr(args, "index", 0))
        return args.graph, g, engine.trel(g)
    if args.family:
        spec = _family_spec(args)
        return spec.label, family_graph(spec), trel_family(spec)
    raise UsageError("one of --graph or --family is required")


def _coeffs(f: Polynomial) -> list[str]:
    return [str(c) for c in f.coeffs]


def _emit(args, text: str, payload: dict) -> None:
    if args.format == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text)


def _root_rows(graph_id, s, t, rs: RootSet) -> list[list]:
    rows = []
    if rs.zero_multiplicity:
        rows.append([graph_id, s, t, "0.0", "0.0", "0.0", rs.zero_multiplicity])
    for r in rs.roots:
        for _ in range(r.multiplicity):
            rows.append([graph_id, s, t, repr(r.value.real), repr(r.value.imag), f"{r.residual:.3e}", 0])
    return rows


def _cplx(z: complex) -> list[float]:
    return [z.real, z.imag]


# ---------------------------------------------------------------------------
# subcommands


def cmd_compute(args) -> int:
    engine = _engine(args)
    label, _, f = _input(args, engine)
    _emit(args, format_polynomial(f, args.factored), {"input": label, "polynomial": format_polynomial(f), "coefficients": _coeffs(f)})
    return 0


def cmd_roots(args) -> int:
    engine = _engine(args)
    label, g, f = _input(args, engine)
    if f.is_zero():
        raise GraphError("terminals are disconnected; the reliability polynomial is 0")
    rs = all_roots(f)
    s, t = (g.s, g.t) if g is not None else ("", "")
    rows = _root_rows(label, s, t, rs)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(ROOTS_HEADER)
            w.writerows(rows)
    if args.format == "json":
        _emit(args, "", {
            "polynomial": format_polynomial(f),
            "zero_multiplicity": rs.zero_multiplicity,
            "roots": [{"re": r.value.real, "im": r.value.imag, "multiplicity": r.multiplicity, "residual": r.residual} for r in rs.roots],
        })
    else:
        print(format_polynomial(f, args.factored))
        if rs.zero_multiplicity:
            print(f"0  (multiplicity {rs.zero_multiplicity})")
        for r in rs.roots:
            mult = f"  (multiplicity {r.multiplicity})" if r.multiplicity > 1 else ""
            print(f"{r.value.real:+.12f} {r.value.imag:+.12f}i  residual {r.residual:.1e}{mult}")
    if args.svg:
        render_svg(args.svg, rs.values(), label)
    return 0


def cmd_family(args) -> int:
    if not args.family:
        raise UsageError("--family is required")
    spec = _family_spec(args)
    f = trel_family(spec)
    checked = _engine(args).trel(family_graph(spec)) == f
    _emit(args, format_polynomial(f, args.factored), {"family": spec.label, "polynomial": format_polynomial(f), "coefficients": _coeffs(f), "matches_graph": checked})
    if not checked:
        log.error("closed form disagrees with the computed reliability of %s", spec.label)
        return 1
    return 0


def cmd_substitute(args) -> int:
    if not args.graph or not args.gadget:
        raise UsageError("substitute needs --graph and --gadget")
    engine = _engine(args)
    g = load_graph(args.graph, args.s, args.t)
    h = load_graph(args.gadget)
    gh = substitute_gadget(g, h, flip=args.flip)
    direct = engine.trel(gh)
    composed = engine.trel(g).compose(engine.trel(h))
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(graph_to_json(gh), fh)
    _emit(args, format_polynomial(direct, args.factored), {
        "polynomial": format_polynomial(direct),
        "coefficients": _coeffs(direct),
        "composition_agrees": direct == composed,
        "order": gh.order,
        "size": gh.size,
    })
    return 0 if direct == composed else 1


def cmd_attractor(args) -> int:
    engine = _engine(args)
    label, g, f = _input(args, engine)
    if g is None:
        raise UsageError("attractor needs a graph")
    rep = attractor(g, args.depth, args.budget, args.seed, f=f)
    cloud = rep.cloud
    if args.out:
        write_cloud_csv(args.out, cloud.points, cloud.depths)
    if args.svg:
        render_svg(args.svg, cloud.points, label)
    _emit(
        args,
        f"{format_polynomial(f)}\norigin: {rep.origin}\n{rep.structure}\n"
        f"points: {len(cloud)}  depth: {cloud.depth}  budget hit: {cloud.budget_hit}  dropped: {cloud.dropped}",
        {
            "polynomial": format_polynomial(f),
            "origin": rep.origin,
            "structure": rep.structure,
            "points": len(cloud),
            "depth": cloud.depth,
            "budget_hit": cloud.budget_hit,
            "dropped": cloud.dropped,
        },
    )
    return 0


def cmd_connectivity(args) -> int:
    engine = _engine(args)
    _, _, f = _input(args, engine)
    v = connectivity(f, args.max_iter)
    lines = [format_polynomial(f), v.verdict]
    for z, o in zip(v.critical, v.orbits):
        lines.append(f"  {z.real:+.9f} {z.imag:+.9f}i  {o.outcome}({o.step})  max |z| {o.max_modulus_seen:.4g}")
    _emit(args, "\n".join(lines), {
        "polynomial": format_polynomial(f),
        "verdict": v.verdict,
        "critical_points": [
            {"z": _cplx(z), "outcome": o.outcome, "step": o.step, "max_modulus_seen": o.max_modulus_seen}
            for z, o in zip(v.critical, v.orbits)
        ],
    })
    return 0


def cmd_stability(args) -> int:
    if args.family == "cycle" and not args.graph:
        w = cycle_left_halfplane_witness(args.n, args.k)
        _emit(
            args,
            f"g = {format_polynomial(w.g)}\ncase: {w.parity_case}\n{w.hb.verdict}"
            f" ({w.hb.failed_check}: {w.hb.detail})\nleft half-plane roots of g: {len(w.left_roots)}",
            {
                "g": format_polynomial(w.g),
                "f": format_polynomial(w.f),
                "case": w.parity_case,
                "verdict": w.hb.verdict,
                "failed_check": w.hb.failed_check,
                "left_roots": [_cplx(z) for z in w.left_roots],
                "numeric_agrees": w.numeric_agrees,
            },
        )
        return 0
    _, _, f = _input(args, _engine(args))
    hb = hermite_biehler(f)
    _emit(args, f"{format_polynomial(f)}\n{hb.verdict}" + (f" ({hb.failed_check}: {hb.detail})" if hb.failed_check else ""), {
        "polynomial": format_polynomial(f),
        "verdict": hb.verdict,
        "failed_check": hb.failed_check,
        "f_even": format_polynomial(hb.f_even),
        "f_odd": format_polynomial(hb.f_odd),
    })
    return 0


def cmd_census(args) -> int:
    _, _, f = _input(args, _engine(args))
    c = real_root_census(f)
    _emit(
        args,
        f"{format_polynomial(f)}\npositive {c.positive} (Descartes <= {c.positive_bound})\n"
        f"negative {c.negative} (Descartes <= {c.negative_bound})\nzero {c.zero}\n"
        f"real {c.real} of degree {c.degree}",
        {
            "polynomial": format_polynomial(f),
            "positive": c.positive,
            "negative": c.negative,
            "zero": c.zero,
            "positive_bound": c.positive_bound,
            "negative_bound": c.negative_bound,
            "degree": c.degree,
            "all_real": c.all_real,
        },
    )
    return 0


def cmd_density(args) -> int:
    if args.target is not None:
        target = complex(args.target.replace(" ", "").replace("i", "j"))
        hit = find_root_near_disk0(target, args.eps)
        z = hit.value
        _emit(
            args,
            f"theta l={hit.l} k={hit.k}: root {z.real:+.12f} {z.imag:+.12f}i\n"
            f"distance {hit.distance:.3e}  residual {hit.residual:.1e}",
            {"l": hit.l, "k": hit.k, "root": _cplx(z), "distance": hit.distance, "residual": hit.residual},
        )
        return 0
    if args.r is None or not args.m:
        raise UsageError("density needs --target, or --r with --m")
    r = complex(args.r.replace(" ", "").replace("i", "j"))
    lifted = [(complex(x.value), x.residual) for x in lift_roots_disk1(r, args.m)]
    _emit(
        args,
        "\n".join(f"{z.real:+.12f} {z.imag:+.12f}i  residual {res:.1e}" for z, res in lifted),
        {"lifted": [{"z": _cplx(z), "residual": res} for z, res in lifted]},
    )
    return 0


# ---------------------------------------------------------------------------
# sweep


@dataclass(frozen=True)
class SweepSummary:
    graphs: int
    skipped_lines: int
    tasks: int
    distinct_polynomials: int
    rows: int


def _solve_roots(f: Polynomial) -> RootSet:
    return all_roots(f)


def sweep_graph6(
    path: str,
    out: str,
    svg: str | None = None,
    s=None,
    t=None,
    jobs: int = 1,
    cache: str | None = None,
    connected_only: bool = True,
) -> SweepSummary:
    """Reliability roots of every graph and terminal pair in a graph6 file, as a roots CSV.

    Rows are ordered by (graph, s, t) regardless of ``jobs``.
    """
    entries, bad = read_graph6(path)
    engine = ReliabilityEngine(DiskCache(cache) if cache else None)
    tasks = []
    for e in entries:
        g = e.graph
        if connected_only and (g.number_of_nodes() == 0 or not nx.is_connected(g)):
            continue
        nodes = sorted(g.nodes)
        pairs = [(int(s), int(t))] if s is not None and t is not None else list(iter_pairs(nodes))
        for a, b in pairs:
            f = engine.trel(nx_to_multigraph(g, a, b))
            tasks.append((e.index, a, b, f))
    distinct = sorted({f for *_, f in tasks if not f.is_zero()}, key=lambda f: f.coeffs)
    if jobs > 1 and len(distinct) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            solved = list(pool.map(_solve_roots, distinct, chunksize=8))
    else:
        solved = [_solve_roots(f) for f in distinct]
    roots = dict(zip(distinct, solved))
    cloud = []
    n_rows = 0
    with open(out, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(ROOTS_HEADER)
        for idx, a, b, f in tasks:
            if f.is_zero():
                continue
            rs = roots[f]
            rows = _root_rows(idx, a, b, rs)
            w.writerows(rows)
            n_rows += len(rows)
            cloud.extend(rs.values())
    if svg:
        render_svg(svg, cloud, path)
    if bad:
        log.warning("%d malformed graph6 line(s) skipped", bad)
    return SweepSummary(len(entries), bad, len(tasks), len(distinct), n_rows)


def cmd_sweep(args) -> int:
    if not args.graph:
        raise UsageError("sweep needs --graph FILE (graph6)")
    if not args.out:
        raise UsageError("sweep needs --out FILE")
    summary = sweep_graph6(args.graph, args.out, args.svg, args.s, args.t, args.jobs, args.cache)
    _emit(
        args,
        f"graphs {summary.graphs}  skipped lines {summary.skipped_lines}  tasks {summary.tasks}  "
        f"distinct polynomials {summary.distinct_polynomials}  rows {summary.rows}",
        summary.__dict__,
    )
    return 0


# ---------------------------------------------------------------------------
# parser


COMMANDS = {
    "compute": cmd_compute,
    "roots": cmd_roots,
    "family": cmd_family,
    "substitute": cmd_substitute,
    "attractor": cmd_attractor,
    "connectivity": cmd_connectivity,
    "stability": cmd_stability,
    "density": cmd_density,
    "sweep": cmd_sweep,
    "census": cmd_census,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--graph", help="graph JSON file or graph6 file")
    common.add_argument("--index", type=int, default=0, help="graph index within a graph6 file")
    common.add_argument("--family", choices=["cycle", "theta", "bundle", "path"])
    for name in ("n", "k", "l", "m"):
        common.add_argument(f"--{name}", type=int)
    common.add_argument("--s", help="source terminal")
    common.add_argument("--t", help="target terminal")
    common.add_argument("--depth", type=int, default=DEFAULT_DEPTH)
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--max-iter", type=int, default=DEFAULT_MAX_ITER)
    common.add_argument("--out")
    common.add_argument("--svg")
    common.add_argument("--format", choices=["text", "json"], default="text")
    common.add_argument("--factored", action="store_true", help="print p^k*(deflated part)")
    common.add_argument("--cache", metavar="DIR", help="on-disk memo directory")
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="tworel", description="Two-terminal reliability polynomials, roots and dynamics.")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "compute": "print the reliability polynomial",
        "roots": "all complex roots, optionally as CSV",
        "family": "closed form of a named family",
        "substitute": "replace every edge of --graph by --gadget",
        "attractor": "inverse-orbit point cloud of 0",
        "connectivity": "Julia-set connectivity from critical orbits",
        "stability": "Hermite-Biehler test or the cycle half-plane witness",
        "density": "theta root near a target, or lifted roots near 1",
        "sweep": "roots of every graph and terminal pair in a graph6 file",
        "census": "exact real-root counts with Descartes bounds",
    }
    for name, text in helps.items():
        p = sub.add_parser(name, parents=[common], help=text)
        if name == "substitute":
            p.add_argument("--gadget", help="gadget graph JSON")
            p.add_argument("--flip", action="store_true", help="attach the gadget the other way round")
        if name == "density":
            p.add_argument("--target", help="complex target, e.g. 0.3+0.2j")
            p.add_argument("--eps", type=float, default=0.05)
            p.add_argument("--r", help="complex point of the unit disk about 0 to lift")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"tworel: error: {exc}", file=sys.stderr)
        return 2
    except (GraphError, CacheFormatError, ValueError, OSError, RootFindingError, SearchExhausted) as exc:
        print(f"tworel: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
