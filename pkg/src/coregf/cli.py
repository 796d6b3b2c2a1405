"""Command-line frontend.

Exit codes: 0 success, 1 usage or input error, 2 self-check failure
(two routes to the same quantity disagree, or unexpected constant flags).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from . import asymptotics as A
from . import graphs as G
from . import maps
from . import montecarlo as MC
from . import oracle
from . import series as S

FORMATS = ("table", "csv", "json", "series")
CLASSES = ("all", "planar-oracle", "user")

MAX_MAP_ORDER = 400
MAX_GRAPH_ORDER = 12


class UsageError(Exception):
    pass


class CheckFailure(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


@dataclass(frozen=True)
class RunConfig:
    command: tuple
    order: int | None
    n: int | None
    min_degree: int | None
    cls: str
    fmt: str
    seed: int | None
    threads: int | None
    pinned: str | None
    series: str | None
    extra: dict


# ---------------------------------------------------------------------------
# rendering


def _exact(v) -> str:
    if isinstance(v, int):
        return str(v)
    if isinstance(v, Fraction):
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    return str(v)


def _dec(v, digits: int = 20) -> str:
    with mpmath.workdps(A.DPS):
        return mpmath.nstr(mpmath.mpf(v) if not isinstance(v, Fraction) else mpmath.mpf(v.numerator) / v.denominator,
                           digits)


@dataclass
class Table:
    title: str
    columns: list
    rows: list  # lists of strings
    summary: str | None = None
    document: dict | None = None  # extra machine-readable payload
    series: S.ExactSeries | None = None
    csv_text: str | None = None  # full-precision CSV when the command provides one

    def render(self, fmt: str) -> str:
        if fmt == "csv" and self.csv_text is not None:
            return self.csv_text
        if fmt == "csv":
            buf = io.StringIO()
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(self.columns)
            w.writerows(self.rows)
            return buf.getvalue()
        if fmt == "json":
            doc = {"title": self.title, "columns": self.columns, "rows": self.rows}
            if self.document:
                doc.update(self.document)
            return json.dumps(doc, indent=2) + "\n"
        if fmt == "series":
            if self.series is None:
                raise UsageError("this command has no series output")
            return S.dumps(self.series) + "\n"
        widths = [max(len(str(c)), *(len(r[i]) for r in self.rows)) if self.rows else len(str(c))
                  for i, c in enumerate(self.columns)]
        lines = [f"# {self.title}"]
        lines.append("  ".join(str(c).rjust(w) for c, w in zip(self.columns, widths)))
        for r in self.rows:
            lines.append("  ".join(v.rjust(w) for v, w in zip(r, widths)))
        if self.summary:
            lines.append(self.summary)
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# commands


def _order(cfg: RunConfig, default: int, cap: int) -> int:
    n = cfg.order if cfg.order is not None else default
    if n < 1 or n > cap:
        raise UsageError(f"--order must lie in 1..{cap}")
    return n


def cmd_maps_count(cfg: RunConfig) -> Table:
    order = _order(cfg, 10, MAX_MAP_ORDER)
    md = cfg.min_degree or 1
    if md == 1:
        F = maps.map_series(order)
        name = "rooted planar maps"
    elif md == 2:
        F = maps.two_map_series(order)
        name = "rooted planar 2-maps"
    elif md == 3:
        F = maps.three_map_series(order)
        name = "rooted planar 3-maps"
    else:
        raise UsageError("--min-degree must be 1, 2 or 3 for maps")
    counts = [int(c) for c in F.coefficient_list()][1:]
    rows = [[str(n), str(c)] for n, c in enumerate(counts, start=1)]
    return Table(f"{name} by number of edges", ["n", "count"], rows,
                 summary="sequence: " + ", ".join(str(c) for c in counts), series=F)


def cmd_maps_degree_dist(cfg: RunConfig) -> Table:
    order = _order(cfg, 20, 200)
    family = cfg.extra.get("family") or "maps"
    dm, dh, dk = maps.degree_distributions(order)
    dist = {"maps": dm, "2-maps": dh, "3-maps": dk}[family]
    rows = []
    for k, c in enumerate(dist.coefficients):
        rows.append([str(k), str(c) if not isinstance(c, Fraction) else _exact(c), _dec(_to_mpf(c))])
    tail = {
        "amplitude": _dec(dist.tail.amplitude, 30),
        "growth": _dec(dist.tail.growth, 30),
        "exponent": _exact(dist.tail.exponent),
    }
    summary = (f"tail: p(k) ~ {mpmath.nstr(dist.tail.amplitude, 10)} k^(1/2) "
               f"{mpmath.nstr(dist.tail.growth, 10)}^k")
    return Table(f"root-degree distribution of {dist.name}", ["k", "exact", "decimal"], rows, summary,
                 {"tail": tail})


def _to_mpf(c):
    if isinstance(c, Fraction):
        return mpmath.mpf(c.numerator) / c.denominator
    if hasattr(c, "to_mpf"):
        return c.to_mpf()
    return mpmath.mpf(c)


def cmd_maps_core_stats(cfg: RunConfig) -> Table:
    stats = maps.quasi_stats_maps()
    rows = []
    for name, (m, v) in stats.items():
        rows.append([name, "mean", str(m), _dec(mpmath.mpf(str(m.evalf(40))), 30)])
        rows.append([name, "variance", str(v), _dec(mpmath.mpf(str(v.evalf(40))), 30)])
    doc = {}
    if cfg.n is not None:
        if cfg.n < 1 or cfg.n > MAX_MAP_ORDER:
            raise UsageError(f"--n must lie in 1..{MAX_MAP_ORDER}")
        mean = maps.mean_core_size(cfg.n)
        rows.append([f"core at n={cfg.n}", "exact mean / n", _exact(mean / cfg.n), _dec(mean / cfg.n, 30)])
    return Table("linear mean and variance constants of size parameters in random maps",
                 ["parameter", "quantity", "exact", "decimal"], rows, document=doc)


def _connected_input(cfg: RunConfig, order: int) -> G.ConnectedInput:
    if cfg.cls == "all":
        return G.all_connected_series(order)
    if cfg.cls == "planar-oracle":
        if order > oracle.MAX_VERTICES:
            raise UsageError(f"planar-oracle class limited to --order <= {oracle.MAX_VERTICES}")
        return G.oracle_planar_series(order, cfg.threads)
    if cfg.series is None:
        raise UsageError("--class user needs --series FILE")
    try:
        with open(cfg.series) as fh:
            doc = json.load(fh)
        if "format" in doc:
            C, rooted = S.from_document(doc), None
        else:
            C = S.from_document(doc["C"])
            rooted = S.from_document(doc["rooted"]) if doc.get("rooted") else None
        return G.ConnectedInput(C, rooted, G.USER)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"cannot read series file: {exc}") from exc


def cmd_graphs_count(cfg: RunConfig) -> Table:
    order = _order(cfg, 6, MAX_GRAPH_ORDER)
    C = _connected_input(cfg, order)
    order = min(order, C.order)
    md = cfg.min_degree or 0
    if md in (0, 1):
        F, name = C.univariate(), "connected graphs"
    elif md == 2:
        F, name = G.two_graph_series(C, order), "2-graphs"
    elif md == 3:
        try:
            F = G.kernel_series(C, order).specialize(y=1)
        except G.SelfCheckError as exc:
            raise CheckFailure(str(exc)) from exc
        name = "3-graphs"
    else:
        raise UsageError("--min-degree must be 0, 2 or 3 for graphs")
    counts = G.labelled_counts(F, order)[1:]
    rows = [[str(n), str(c)] for n, c in enumerate(counts, start=1)]
    return Table(f"labelled {name} ({C.provenance}) by number of vertices", ["n", "count"], rows,
                 summary="sequence: " + ", ".join(str(c) for c in counts), series=F)


def cmd_graphs_core_histogram(cfg: RunConfig) -> Table:
    n = cfg.n if cfg.n is not None else 4
    if n < 1 or n > MAX_GRAPH_ORDER:
        raise UsageError(f"--n must lie in 1..{MAX_GRAPH_ORDER}")
    C = _connected_input(cfg, n)
    F = G.core_marked_graphs(C, n)
    hist = G.labelled_table(F, n)
    doc = {"class": C.provenance}
    if cfg.cls == "all" and n <= oracle.MAX_SWEEP_VERTICES:
        sweep = oracle.core_histogram(n, cfg.threads)
        if sweep != hist:
            raise CheckFailure(f"core histogram differs from the sweep: {sweep} vs {hist}")
        doc["oracle_agrees"] = True
    rows = [[str(k), str(v)] for k, v in hist.items()]
    total = sum(hist.values())
    return Table(f"connected graphs on {n} vertices by core size", ["core_size", "count"], rows,
                 summary=f"total: {total}", document=doc, series=F)


def cmd_oracle_sweep(cfg: RunConfig) -> Table:
    n = cfg.n if cfg.n is not None else 5
    if n < 1 or n > oracle.MAX_SWEEP_VERTICES:
        raise UsageError(f"--n must lie in 1..{oracle.MAX_SWEEP_VERTICES}")
    md = cfg.min_degree or 0
    planar = True if cfg.cls == "planar-oracle" else None
    by_e = oracle.count_by_edges(n, True, md, planar, cfg.threads)
    rows = [[str(e), str(c)] for e, c in sorted(by_e.items())]
    what = "planar " if planar else ""
    return Table(f"connected {what}labelled graphs on {n} vertices, min degree >= {md}, by edges",
                 ["edges", "count"], rows, summary=f"total: {sum(by_e.values())}")


def cmd_constants_report(cfg: RunConfig) -> Table:
    try:
        table = A.planar_constants(cfg.pinned)
    except (OSError, ValueError, KeyError) as exc:
        raise UsageError(f"cannot load pinned constants: {exc}") from exc
    rep = table.report(30)
    rows = []
    for e in rep["entries"]:
        rows.append([e["name"], e["kind"], e["decimal"], e.get("reference", ""),
                     "" if e.get("consistent") is None else ("yes" if e["consistent"] else "NO"),
                     e.get("formula", e.get("source", ""))])
    for e in A.map_constants_report(30):
        rows.append([f"maps.{e['name']}", "exact", e["decimal"], e["exact"], "", ""])
    summary = "flags: " + ("; ".join(rep["flags"]) if rep["flags"] else "none")
    return Table("constants", ["name", "kind", "decimal", "reference", "consistent", "formula"], rows, summary,
                 {"planar": rep, "maps": A.map_constants_report(30)})


def _require_seed(cfg: RunConfig) -> int:
    if cfg.seed is None:
        raise UsageError("--seed is required for simulations")
    if cfg.seed < 0:
        raise UsageError("--seed must be non-negative")
    return cfg.seed


def _mc_args(cfg: RunConfig):
    seed = _require_seed(cfg)
    base = cfg.extra.get("base") or "maps"
    m = cfg.extra.get("m") or 10 ** 6
    reps = cfg.extra.get("reps") or 2000
    if m < 1 or reps < 1:
        raise UsageError("--m and --reps must be positive")
    return MC.law_for(base), m, reps, seed


def cmd_mc_largest_tree(cfg: RunConfig) -> Table:
    law, m, reps, seed = _mc_args(cfg)
    r = MC.sample_max_experiment(law, m, reps, seed, workers=cfg.threads)
    rows = [[f"{row['x']:.6f}", str(row["k"]), f"{row['empirical']:.6f}", f"{row['reference']:.6f}",
             f"{row['exact']:.6f}", f"{row['stderr']:.6f}"] for row in r.rows()]
    doc = {"gamma": repr(r.gamma), "sup_discrepancy": repr(r.sup_discrepancy),
           "sup_discrepancy_exact": repr(r.sup_discrepancy_exact), "limit_gap": repr(r.limit_gap),
           "data": [{k: (repr(v) if isinstance(v, float) else v) for k, v in row.items()} for row in r.rows()]}
    summary = (f"gamma(m) = {r.gamma:.6f}; sup |empirical - limit| = {r.sup_discrepancy:.6f}; "
               f"sup |empirical - exact finite-m| = {r.sup_discrepancy_exact:.6f}")
    return Table(f"largest attached tree, {law.base} model, m={m}, reps={reps}, seed={seed}",
                 ["x", "k", "empirical", "reference", "exact", "stderr"], rows, summary, doc,
                 csv_text=r.to_csv())


def cmd_mc_poisson(cfg: RunConfig) -> Table:
    law, m, reps, seed = _mc_args(cfg)
    rep = MC.poisson_count_check(law, m, reps, seed, workers=cfg.threads)
    rows = [[str(r.j), f"{r.lemma_mean:.6f}", f"{r.exact_mean:.6f}", f"{r.empirical_mean:.6f}",
             f"{r.tv_lemma:.6f}", f"{r.tv_exact:.6f}"] for r in rep.rows]
    doc = {"gamma": repr(rep.gamma),
           "data": [{"j": r.j, "lemma_mean": repr(r.lemma_mean), "exact_mean": repr(r.exact_mean),
                     "empirical_mean": repr(r.empirical_mean), "tv_lemma": repr(r.tv_lemma),
                     "tv_exact": repr(r.tv_exact)} for r in rep.rows],
           "correlations": [[j, repr(c)] for j, c in rep.correlations]}
    summary = f"gamma(m) = {rep.gamma:.6f}; neighbour correlations: " + ", ".join(
        f"{j}:{c:+.4f}" for j, c in rep.correlations)
    return Table(f"occupation counts near gamma(m), {law.base} model, m={m}, reps={reps}, seed={seed}",
                 ["j", "lemma_mean", "exact_mean", "empirical_mean", "tv_lemma", "tv_exact"], rows, summary, doc,
                 csv_text=rep.to_csv())


# ---------------------------------------------------------------------------
# self-check


def _checks(cfg: RunConfig) -> list:
    """(name, identity, thunk) where the thunk returns None or a failure detail."""
    w = cfg.threads

    def map_routes():
        maps.map_series(30)

    def map_oracle():
        H = maps.two_map_series(4).coefficient_list()
        K = maps.three_map_series(4).coefficient_list()
        M = maps.map_series_tutte(4).coefficient_list()
        for n in range(1, 5):
            sw = oracle.enumerate_rooted_maps(n)
            if (sw.rooted, sw.min_degree_counts[2], sw.min_degree_counts[3]) != (M[n], H[n], K[n]):
                return f"n={n}: sweep {sw.rooted, sw.min_degree_counts} vs {M[n], H[n], K[n]}"

    def map_round_trip():
        K = maps.three_map_series(12)
        H = maps.two_map_series(12)
        M = maps.map_series_tutte(12)
        if maps.two_map_from_three(K) != H or maps.map_from_two_map(H) != M:
            return "inverse substitutions do not recover the series"

    def map_root_degree():
        Hd = maps.two_map_degree(4)
        Kd = maps.three_map_degree(4)
        for n in range(1, 5):
            sw = oracle.enumerate_rooted_maps(n)
            for d, F in ((2, Hd), (3, Kd)):
                got = {k: int(v) for (m, k), v in F.items() if m == n and v}
                if got != {k: v for k, v in sw.root_degree_by_min[d].items() if v}:
                    return f"n={n}, min degree {d}: {got} vs {sw.root_degree_by_min[d]}"

    def map_constants():
        c = maps.map_constants()
        c.check()
        k2, k3 = maps.kappa_from_singular_expansion()
        if abs(k2 - c.kappa2) > 1e-20 or abs(k3 - c.kappa3) > 1e-20:
            return "kappa routes disagree"
        stats = maps.quasi_stats_maps()
        import sympy
        for name, pair in maps.STATED_FORMS.items():
            for a, b in zip(stats[name], pair):
                if sympy.simplify(a - b) != 0:
                    return f"{name}: {a} vs {b}"

    def core_equation():
        C = G.all_connected_series(5)
        H = G.two_graph_series(C, 5)
        got = G.labelled_counts(H)
        want = [0] + [oracle.count_graphs(n, True, 2, None, w) for n in range(1, 6)]
        if got != want:
            return f"{got} vs {want}"
        Hb = G.two_graph_series(C, 5, bivariate=True)
        if G.connected_from_two_graphs(Hb) != C.C:
            return "C(x,y) != H(T(x,y),y) + U(x,y)"

    def kernel_routes():
        C = G.all_connected_series(5)
        K = G.kernel_series(C, 5).specialize(y=1)
        got = G.labelled_counts(K)
        want = [0] + [oracle.count_graphs(n, True, 3, None, w) for n in range(1, 6)]
        if got != want:
            return f"{got} vs {want}"

    def multigraph_chain():
        C = G.all_connected_series(4)
        Ct = G.multigraph_lift(C, 4)
        Ht = G.multigraph_core(Ct)
        if G.multigraph_kernel(Ct) != G.multigraph_kernel_from_core(Ht):
            return "direct and core routes to the multigraph kernel differ"

    def core_histogram():
        C = G.all_connected_series(4)
        got = G.labelled_table(G.core_marked_graphs(C, 4), 4)
        if got != oracle.core_histogram(4, w):
            return f"{got}"

    def rooted_chains():
        C = G.all_connected_series(5)
        Hd = G.rooted_two_graph_degree(C, 5)
        Kd = G.rooted_kernel_degree(C, 5)
        for n in range(1, 6):
            for cls, F in (("2-graph", Hd), ("3-graph", Kd)):
                got = {k: v for k, v in G.labelled_table(F, n).items() if v}
                want = oracle.count_rooted_by_degree(n, cls, workers=w)
                if got != want:
                    return f"{cls}, n={n}: {got} vs {want}"

    def planar_constants():
        t = A.planar_constants(cfg.pinned)
        if t.unexpected_flags:
            return "; ".join(t.unexpected_flags)

    def degree_laws():
        dm, dh, dk = maps.degree_distributions(30)
        if any(dk.coefficients[i] for i in range(3)):
            return "3-map root degree has mass below 3"
        for d in (dm, dh, dk):
            if abs(d.pgf_at_one() - 1) > 1e-30:
                return f"{d.name}: pgf(1) = {d.pgf_at_one()}"

    def mc_law():
        for base in MC.BASES:
            MC.law_for(base).check()

    return [
        ("map-routes", "closed form = Tutte formula = catalytic iteration", map_routes),
        ("map-oracle", "rooted map, 2-map and 3-map counts vs rotation-system sweep", map_oracle),
        ("map-substitutions", "H = K(z/(1+z)) + ..., M from H through trees", map_round_trip),
        ("map-root-degree", "rooted degree series of 2-/3-maps vs sweep", map_root_degree),
        ("map-constants", "singular expansion vs closed kappa; quasi-powers algebraic forms", map_constants),
        ("core-equation", "C(x) = H(T(x)) + U(x) and 2-graph counts vs sweep", core_equation),
        ("kernel-routes", "closed kernel form = multigraph chain = sweep", kernel_routes),
        ("multigraph-chain", "kernel of lift = kernel from core (weighted multigraphs)", multigraph_chain),
        ("core-histogram", "u-marked core equation vs sweep", core_histogram),
        ("rooted-chains", "root-degree equations for 2-/3-graphs vs sweep", rooted_chains),
        ("planar-constants", "pinned-input propagation vs reference values", planar_constants),
        ("degree-laws", "root-degree distributions normalised, 3-maps start at degree 3", degree_laws),
        ("tree-laws", "simulation laws normalised, tail mass consistent", mc_law),
    ]


def cmd_selfcheck(cfg: RunConfig) -> Table:
    rows = []
    failed = []
    for name, identity, fn in _checks(cfg):
        try:
            detail = fn()
        except (G.SelfCheckError, maps.SelfCheckError, ArithmeticError, ValueError, AssertionError) as exc:
            detail = f"{type(exc).__name__}: {exc}"
        status = "ok" if detail is None else "FAIL"
        rows.append([status, name, identity, "" if detail is None else detail])
        if detail is not None:
            failed.append(name)
    t = Table("self-check", ["status", "check", "identity", "detail"], rows,
              summary=f"{len(rows) - len(failed)}/{len(rows)} checks passed",
              document={"failed": failed})
    if failed:
        raise CheckFailure(t)
    return t


COMMANDS = {
    ("maps", "count"): cmd_maps_count,
    ("maps", "degree-dist"): cmd_maps_degree_dist,
    ("maps", "core-stats"): cmd_maps_core_stats,
    ("graphs", "count"): cmd_graphs_count,
    ("graphs", "core-histogram"): cmd_graphs_core_histogram,
    ("oracle", "sweep"): cmd_oracle_sweep,
    ("constants", "report"): cmd_constants_report,
    ("mc", "largest-tree"): cmd_mc_largest_tree,
    ("mc", "poisson"): cmd_mc_poisson,
    ("selfcheck",): cmd_selfcheck,
}


# ---------------------------------------------------------------------------
# argument parsing


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--order", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--min-degree", type=int, dest="min_degree")
    p.add_argument("--class", choices=CLASSES, default="all", dest="cls")
    p.add_argument("--format", choices=FORMATS, default="table", dest="fmt")
    p.add_argument("--seed", type=int)
    p.add_argument("--threads", type=int, help="worker processes (default: $COREGF_THREADS or 1)")
    p.add_argument("--pinned", help="pinned-constants JSON file")
    p.add_argument("--series", help="series exchange file for --class user")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="coregf", description="Exact enumeration of cores and kernels of maps and graphs.")
    sub = parser.add_subparsers(dest="group", required=True, parser_class=_Parser)

    g = sub.add_parser("maps")
    gs = g.add_subparsers(dest="action", required=True, parser_class=_Parser)
    _common(gs.add_parser("count"))
    p = gs.add_parser("degree-dist")
    _common(p)
    p.add_argument("--family", choices=("maps", "2-maps", "3-maps"), default="maps")
    _common(gs.add_parser("core-stats"))

    g = sub.add_parser("graphs")
    gs = g.add_subparsers(dest="action", required=True, parser_class=_Parser)
    _common(gs.add_parser("count"))
    _common(gs.add_parser("core-histogram"))

    g = sub.add_parser("oracle")
    gs = g.add_subparsers(dest="action", required=True, parser_class=_Parser)
    _common(gs.add_parser("sweep"))

    g = sub.add_parser("constants")
    gs = g.add_subparsers(dest="action", required=True, parser_class=_Parser)
    _common(gs.add_parser("report"))

    g = sub.add_parser("mc")
    gs = g.add_subparsers(dest="action", required=True, parser_class=_Parser)
    for name in ("largest-tree", "poisson"):
        p = gs.add_parser(name)
        _common(p)
        p.add_argument("--base", choices=MC.BASES, default="maps")
        p.add_argument("--m", type=int)
        p.add_argument("--reps", type=int)

    _common(sub.add_parser("selfcheck"))
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    command = (ns.group,) if ns.group == "selfcheck" else (ns.group, ns.action)
    threads = ns.threads
    if threads is not None and threads < 1:
        raise UsageError("--threads must be positive")
    extra = {k: getattr(ns, k) for k in ("family", "base", "m", "reps") if hasattr(ns, k)}
    return RunConfig(command, ns.order, ns.n, ns.min_degree, ns.cls, ns.fmt, ns.seed, threads,
                     ns.pinned, ns.series, extra)


def run(cfg: RunConfig, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    try:
        table = COMMANDS[cfg.command](cfg)
        out.write(table.render(cfg.fmt))
        return 0
    except UsageError as exc:
        err.write(f"coregf: {exc}\n")
        return 1
    except (oracle.CapError, S.SeriesError) as exc:
        err.write(f"coregf: {exc}\n")
        return 1
    except CheckFailure as exc:
        payload = exc.args[0]
        if isinstance(payload, Table):
            out.write(payload.render(cfg.fmt if cfg.fmt != "series" else "table"))
        else:
            err.write(f"coregf: self-check failure: {payload}\n")
        return 2
    except (G.SelfCheckError, maps.SelfCheckError) as exc:
        err.write(f"coregf: self-check failure: {exc}\n")
        return 2


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = config_from_args(ns)
    except UsageError as exc:
        sys.stderr.write(f"coregf: {exc}\n")
        return 1
    if cfg.threads is not None:
        os.environ["COREGF_THREADS"] = str(cfg.threads)
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
