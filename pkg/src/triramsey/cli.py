"""Command-line entry point (``triramsey``).

Exit codes: 0 success, 1 a verification failed, 2 usage or input error.
Reports are JSON (or CSV where tabular) and carry the tool version and a digest
of the input, never timestamps, so identical invocations give identical bytes.
"""

from __future__ import annotations

import argparse
import hashlib
import io
import json
import sys
from pathlib import Path

from . import __version__, bounds, probcolor, sweeps
from .arrowing import UnsupportedError, arrows, ramsey_critical_reduce
from .corpus import digest_file, ensure_corpus, read_lines
from .graph import Graph6Error, GraphError, parse_graph6
from .peeling import (ModifiedWeightConfig, check_support_edge_ratio, excess_identity_check, excess_report,
                      min_triangle_support_scan, modified_weight_peel, trace_to_dict, turan_peel, verify_trace)
from .solvers import PreconditionError, chromatic_number, max_clique, max_independent_set

SUITES = ("triangle-bound", "small-graphs", "gallai", "excess", "arrowing-scan", "forest-copies", "lift", "all")


class UsageError(Exception):
    pass


# --- parser ----------------------------------------------------------------------


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--graph6", help="input graph in graph6")
    p.add_argument("--corpus", action="append", help="newline-delimited graph6 file (repeatable)")
    p.add_argument("--t", type=int, default=3, help="clique size (default 3)")
    p.add_argument("--r", type=int, help="chromatic target")
    p.add_argument("--eps", help="epsilon, as a rational such as 1/2")
    p.add_argument("--delta", help="delta, as a rational such as 1/2")
    p.add_argument("--d", type=int, help="degeneracy parameter")
    p.add_argument("--seed", type=int, help="RNG seed (required by randomised commands)")
    p.add_argument("--trials", type=int)
    p.add_argument("--jobs", type=int, default=sweeps.default_jobs())
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--budget", type=int, help="search node budget")
    p.add_argument("--pretty", action="store_true", help="indented JSON")
    p.add_argument("--config", help="flat key=value file; flags override it")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="triramsey", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"triramsey {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("color", parents=[common], help="chromatic number with an optimal colouring")
    sub.add_parser("clique", parents=[common], help="maximum clique and independent set")
    p = sub.add_parser("peel", parents=[common], help="peeling trace with per-vertex excess")
    p.add_argument("--weight-c", default="1", help="stopping constant for the modified-weight peel (with --eps)")
    p = sub.add_parser("verify", parents=[common], help="corpus-wide checks or the full acceptance suite")
    p.add_argument("--suite", choices=SUITES, required=True)
    p.add_argument("--max-n", type=int, default=9, help="corpus size when --corpus is not given")
    sub.add_parser("arrows", parents=[common], help="decide G -> (K_t, K_t)")
    sub.add_parser("reduce", parents=[common], help="delete edges while arrowing survives")
    p = sub.add_parser("prob-color", parents=[common], help="Monte Carlo over the randomised colouring")
    p.add_argument("--instance", help="graph6 file with a .json sidecar (eps, delta, d, order)")
    p.add_argument("--gamma", type=float, help="override gamma (and so d2)")
    p.add_argument("--cliques", type=int, default=4)
    p.add_argument("--clique-size", type=int, default=9)
    p = sub.add_parser("bounds", parents=[common], help="lower-bound calculators")
    p.add_argument("--name", choices=("all", "property-b", "clique-ramsey", "kk", "forest", "two-density"),
                   default="all")
    p.add_argument("--b", type=int)
    p.add_argument("--s", type=int)
    p.add_argument("--count", type=int, help="number of K_t copies, for kk")
    p.add_argument("--pattern", help="forest pattern in graph6")
    p = sub.add_parser("scan", parents=[common], help="exploratory corpus scans")
    p.add_argument("--kind", choices=("arrowing", "triangle-support", "support-ratio"), default="arrowing")
    p.add_argument("--max-triangles", type=int, default=sweeps.TRIANGLE_CAP)
    p.add_argument("--max-n", type=int, default=9)
    p = sub.add_parser("corpus", parents=[common], help="build or check cached corpora")
    p.add_argument("--max-n", type=int, default=9)
    return parser


def _apply_config(parser: argparse.ArgumentParser, argv: list[str]) -> None:
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("command", nargs="?")
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config or not known.command:
        return
    subs = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    sp = subs.choices.get(known.command)
    if sp is None:
        return
    actions = {a.dest: a for a in sp._actions if a.dest not in ("help", "config")}
    values = {}
    try:
        text = Path(known.config).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read config: {exc}") from None
    for num, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise UsageError(f"config line {num}: expected key=value")
        key, val = (x.strip() for x in line.split("=", 1))
        dest = key.replace("-", "_")
        if dest not in actions:
            raise UsageError(f"config line {num}: unknown key {key!r}")
        act = actions[dest]
        if isinstance(act, argparse._StoreTrueAction):
            values[dest] = val.lower() in ("1", "true", "yes", "on")
        elif isinstance(act, argparse._AppendAction):
            values[dest] = [v.strip() for v in val.split(",") if v.strip()]
        else:
            try:
                values[dest] = act.type(val) if act.type else val
            except (TypeError, ValueError):
                raise UsageError(f"config line {num}: bad value for {key}") from None
            if act.choices and values[dest] not in act.choices:
                raise UsageError(f"config line {num}: {key} must be one of {list(act.choices)}")
    sp.set_defaults(**values)
    # a required option satisfied by the config file
    for dest in values:
        if actions[dest].required:
            actions[dest].required = False


# --- helpers ---------------------------------------------------------------------


def _digest(*parts: bytes) -> str:
    h = hashlib.sha256()
    for p in parts:
        h.update(hashlib.sha256(p).digest())
    return h.hexdigest()


def _graph(args):
    if not args.graph6:
        raise UsageError("--graph6 is required")
    return parse_graph6(args.graph6.strip())


def _corpus_lines(args, default_max: int | None = None) -> tuple[list[bytes], str]:
    if args.corpus:
        paths = [Path(p) for p in args.corpus]
        for p in paths:
            if not p.exists():
                raise UsageError(f"corpus not found: {p}")
    elif default_max is not None:
        paths = ensure_corpus(default_max)
    else:
        raise UsageError("--corpus is required")
    lines = [ln for p in paths for ln in read_lines(p)]
    return lines, _digest(*(digest_file(p).encode() for p in paths))


def _envelope(command: str, digest: str, body: dict) -> dict:
    return {"tool": "triramsey", "version": __version__, "command": command, "input_digest": digest, **body}


def _dump(obj, args) -> str:
    if args.pretty:
        return json.dumps(obj, indent=2, sort_keys=True) + "\n"
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def _csv(header: list[str], rows) -> str:
    out = [",".join(header)]
    for row in rows:
        out.append(",".join("" if v is None else str(int(v)) if isinstance(v, bool) else str(v) for v in row))
    return "\n".join(out) + "\n"


def _frac(x):
    return str(x)


# --- commands --------------------------------------------------------------------


def cmd_color(args):
    if args.corpus:
        lines, dig = _corpus_lines(args)
        rows = []
        for ln in lines:
            g = parse_graph6(ln)
            k, _ = chromatic_number(g)
            rows.append((g.graph6, g.n, k))
        if args.format == "csv":
            return 0, _csv(["graph6", "n", "chi"], rows)
        return 0, _dump(_envelope("color", dig, {"graphs": [{"graph6": a, "n": b, "chi": c} for a, b, c in rows]}), args)
    g = _graph(args)
    k, col = chromatic_number(g)
    if not col.is_proper(g):
        return 1, _dump(_envelope("color", _digest(g.graph6.encode()), {"error": "colouring not proper"}), args)
    body = {"graph6": g.graph6, "n": g.n, "chi": k, "coloring": list(col.assignment)}
    if args.format == "csv":
        return 0, _csv(["graph6", "n", "chi"], [(g.graph6, g.n, k)])
    return 0, _dump(_envelope("color", _digest(g.graph6.encode()), body), args)


def cmd_clique(args):
    g = _graph(args)
    cl, w = max_clique(g)
    ind, a = max_independent_set(g)
    body = {"graph6": g.graph6, "omega": w, "clique": sorted(cl), "alpha": a, "independent_set": sorted(ind)}
    if args.format == "csv":
        return 0, _csv(["graph6", "omega", "alpha"], [(g.graph6, w, a)])
    return 0, _dump(_envelope("clique", _digest(g.graph6.encode()), body), args)


def cmd_peel(args):
    g = _graph(args)
    if g.n == 0:
        raise UsageError("peeling needs at least one vertex")
    if args.eps is not None:
        cfg = ModifiedWeightConfig(probcolor._rational(args.eps), probcolor._rational(args.weight_c))
        trace = modified_weight_peel(g, cfg)
        rep = excess_report(trace)
        body = trace_to_dict(trace, rep)
        body["problems"] = verify_trace(trace)
    else:
        trace = turan_peel(g)
        rep = excess_report(trace)
        chk = excess_identity_check(g, trace, rep)
        body = trace_to_dict(trace, rep)
        body["problems"] = verify_trace(trace)
        body["identities"] = {
            "edges": [_frac(chk.edges_lhs), _frac(chk.edges_rhs)],
            "triangles": [_frac(chk.triangles_lhs), _frac(chk.triangles_rhs)],
            "chain": [_frac(chk.chain_lhs), _frac(chk.chain_rhs)],
            "holds": chk.holds, "tight": chk.tight,
        }
        if not (chk.holds and rep.all_nonnegative() and rep.bounds_respected()):
            body["problems"].append("excess check failed")
    code = 1 if body["problems"] else 0
    return code, _dump(_envelope("peel", _digest(g.graph6.encode()), body), args)


_SUITE_FIELDS = {
    "triangle-bound": ("triangle_bound_violations", None),
    "small-graphs": ("small_violations", "small_applicable"),
    "gallai": ("gallai_violations", "gallai_applicable"),
    "excess": ("excess_violations", None),
    "arrowing-scan": ("low_triangle_arrowing", "arrowing_searched"),
}


def cmd_verify(args):
    if args.suite == "all":
        from . import acceptance

        ctx = acceptance.Context(max_n=args.max_n, jobs=args.jobs,
                                 budget=args.budget or sweeps.DEFAULT_BUDGET, trials=args.trials or 10_000)
        results = acceptance.run_all(ctx)
        passed = all(r.passed for r in results)
        if args.format == "csv":
            text = _csv(["criterion", "title", "passed"], [(r.number, r.title, r.passed) for r in results])
        else:
            text = _dump(_envelope("verify", "", {"suite": "all", "passed": passed,
                                                  "criteria": [r.to_dict() for r in results]}), args)
        return (0 if passed else 1), text
    if args.suite == "lift":
        return _verify_lift(args)
    lines, dig = _corpus_lines(args, args.max_n)
    if args.suite == "forest-copies":
        checked, bad = sweeps.forest_sweep(lines, 5, args.jobs)
        body = {"suite": args.suite, "graphs": len(lines), "pairs": checked, "violations": [list(b) for b in bad]}
        rows = [(args.suite, len(lines), checked, len(bad))]
    else:
        search = args.suite == "arrowing-scan"
        audits = sweeps.audit_lines(lines, args.jobs, args.budget or sweeps.DEFAULT_BUDGET, search_arrowing=search)
        s = sweeps.summarize(audits)
        if args.suite == "excess":
            bad = sorted(set(s.excess_violations + s.identity_violations + s.trace_violations))
        else:
            bad = getattr(s, _SUITE_FIELDS[args.suite][0])
        appl_field = _SUITE_FIELDS[args.suite][1]
        appl = getattr(s, appl_field) if appl_field else s.graphs
        body = {"suite": args.suite, "graphs": s.graphs, "applicable": appl, "violations": bad}
        if search:
            body["undecided"] = len(s.arrowing_undecided)
            body["arrowing_graphs"] = len(s.arrowing_graphs)
        rows = [(args.suite, s.graphs, appl, len(bad))]
    if args.format == "csv":
        text = _csv(["suite", "graphs", "applicable", "violations"], rows)
    else:
        text = _dump(_envelope("verify", dig, body), args)
    return (1 if body["violations"] else 0), text


def _verify_lift(args):
    from . import acceptance

    if args.seed is None:
        raise UsageError("--seed is required for the lift suite")
    ctx = acceptance.Context(max_n=args.max_n, jobs=args.jobs, budget=args.budget or sweeps.DEFAULT_BUDGET)
    if args.corpus:
        lines, dig = _corpus_lines(args)
        ctx._lines = [lines]
        ctx.max_n = 1
    else:
        lines = ctx.lines()
        dig = _digest(*lines)
    ok, detail = acceptance._c10(ctx, count=args.trials or 100, seed=args.seed)
    body = {"suite": "lift", "seed": args.seed, "passed": ok, **detail}
    if args.format == "csv":
        return (0 if ok else 1), _csv(["suite", "seed", "graphs", "verified"],
                                     [("lift", args.seed, detail["graphs"], detail["verified"])])
    return (0 if ok else 1), _dump(_envelope("verify", dig, body), args)


def cmd_arrows(args):
    if args.corpus:
        lines, dig = _corpus_lines(args)
        rows = []
        for ln in lines:
            g = parse_graph6(ln)
            res = arrows(g, args.t, args.budget)
            rows.append((g.graph6, res.arrows, res.nodes_explored))
        undecided = sum(1 for r in rows if r[1] is None)
        if args.format == "csv":
            return 0, _csv(["graph6", "arrows", "nodes"], rows)
        return 0, _dump(_envelope("arrows", dig, {"t": args.t, "undecided": undecided,
                                                  "graphs": [{"graph6": a, "arrows": b, "nodes": c}
                                                             for a, b, c in rows]}), args)
    g = _graph(args)
    res = arrows(g, args.t, args.budget)
    body = {"graph6": g.graph6, **res.to_dict(), "undecided": 0 if res.decided else 1}
    return 0, _dump(_envelope("arrows", _digest(g.graph6.encode(), str(args.t).encode()), body), args)


def cmd_reduce(args):
    g = _graph(args)
    red = ramsey_critical_reduce(g, args.t, args.budget)
    body = {"graph6": red.graph.graph6, "vertices": list(red.vertices), "complete": red.complete,
            "edges": red.graph.num_edges, "removed_edges": [list(e) for e in red.removed_edges]}
    return 0, _dump(_envelope("reduce", _digest(g.graph6.encode(), str(args.t).encode()), body), args)


def cmd_prob_color(args):
    if args.seed is None:
        raise UsageError("--seed is required for randomised commands")
    if args.instance:
        inst = probcolor.load_instance(args.instance)
        if args.gamma is not None:
            inst = probcolor.make_instance(inst.graph, inst.order.order, inst.params.eps, inst.params.delta,
                                           inst.params.d, args.gamma)
    else:
        inst = probcolor.clique_tail_instance(d=args.d or 40, eps=args.eps or "1/2", delta=args.delta or "1/2",
                                              cliques=args.cliques, clique_size=args.clique_size,
                                              gamma=args.gamma)
    p = inst.params
    side = json.dumps({"eps": str(p.eps), "delta": str(p.delta), "d": p.d, "gamma": p.gamma,
                       "order": list(inst.order.order)}, sort_keys=True)
    dig = _digest(inst.graph.graph6.encode(), side.encode())
    check = probcolor.check_instance(inst)
    if not check.ok:
        body = {"refused": True, "violations": [list(v) for v in check.violations]}
        return 1, _dump(_envelope("prob-color", dig, body), args)
    trials = args.trials if args.trials is not None else 1000
    mc = probcolor.monte_carlo(inst, trials, seed=args.seed, jobs=args.jobs)
    summary = mc.to_dict()
    bad = not (summary["partial_always_proper"] and summary["identities_hold"]
               and summary["final_colorings_valid"]) or summary["disjunction_failures"]
    if args.format == "csv":
        return (1 if bad else 0), mc.to_csv()
    return (1 if bad else 0), _dump(_envelope("prob-color", dig, {"seed": args.seed, **summary}), args)


def cmd_bounds(args):
    reports = []
    name = args.name
    if name in ("all", "property-b"):
        for b in ([args.b] if args.b else [1, 2, 3]):
            res = bounds.property_b_search(b, args.jobs)
            reports.append(bounds.bound_report(
                "property_b_min_edges", res.m, "least edges of a b-uniform hypergraph with no proper 2-colouring",
                {"b": b, "witness": json.loads(res.witness.to_json()), "refuted_edge_counts": list(res.refuted)}))
    if name in ("all", "clique-ramsey"):
        pairs = [(args.s, args.t)] if args.s else [(2, 2), (2, 3), (3, 3)]
        for s, t in pairs:
            r = bounds.clique_ramsey_lower_bound(s, t)
            reports.append(bounds.bound_report("clique_ramsey_lower_bound", [r.via_mb, r.via_power],
                                               "m(C(t,2))^(s/t) >= 2^(s(t-1)/2-1)", r.to_dict()))
    if name in ("all", "kk"):
        count, t, s = (args.count, args.t, args.s) if args.count is not None else (20, 3, 2)
        if s is None:
            raise UsageError("--s is required for kk")
        reports.append(bounds.bound_report("kk_clique_bound", bounds.kk_clique_bound(count, t, s),
                                           "count_t^(s/t)", {"count_t": count, "t": t, "s": s}))
    if name == "forest":
        if not args.pattern:
            raise UsageError("--pattern is required for forest")
        f = bounds.ForestPattern.of(parse_graph6(args.pattern))
        g = _graph(args) if args.graph6 else None
        inputs = {"pattern": f.graph.graph6, "aut": f.aut}
        if g is not None:
            lab, unl = bounds.count_forest_copies(f, g)
            chk = bounds.check_forest_copies(f, g)
            inputs.update({"graph6": g.graph6, "labeled": lab, "min_degree": g.min_degree(),
                           "copies_in_K_(d+1)": chk.reference, "holds": chk.holds})
            reports.append(bounds.bound_report("forest_copies", unl, "embeddings / |Aut(F)|", inputs))
        else:
            if args.d is None:
                raise UsageError("forest needs --graph6 or --d")
            reports.append(bounds.bound_report("forest_copy_lower_bound", bounds.forest_copy_lower_bound(f, args.d),
                                               "prod_{i=1}^{|F|}(d-i+2)/|Aut(F)|", {**inputs, "d": args.d}))
    if name == "two-density":
        g = _graph(args)
        reports.append(bounds.bound_report("two_density", bounds.two_density(g),
                                           "max (e(H)-1)/(|H|-2) over |H| >= 3", {"graph6": g.graph6}))
    dig = _digest(json.dumps(vars(args) | {"jobs": None, "out": None}, sort_keys=True, default=str).encode())
    return 0, _dump(_envelope("bounds", dig, {"reports": reports}), args)


def cmd_scan(args):
    lines, dig = _corpus_lines(args, args.max_n)
    if args.kind == "triangle-support":
        if args.r is None:
            raise UsageError("--r is required for triangle-support")
        need = min_triangle_support_scan((parse_graph6(ln) for ln in lines), args.r)
        body = {"kind": args.kind, "r": args.r, "graphs": len(lines), "min_support_needed": need}
        return 0, _dump(_envelope("scan", dig, body), args)
    if args.kind == "support-ratio":
        bad, applicable = [], 0
        for ln in lines:
            g = parse_graph6(ln)
            res = check_support_edge_ratio(g, args.t)
            if res is None:
                continue
            applicable += 1
            if not res:
                bad.append(g.graph6)
        body = {"kind": args.kind, "t": args.t, "graphs": len(lines), "applicable": applicable, "violations": bad}
        return (1 if bad else 0), _dump(_envelope("scan", dig, body), args)
    budget = args.budget or sweeps.DEFAULT_BUDGET
    found, undecided, searched = [], [], 0
    from .graph import triangle_count

    chosen = [ln for ln in lines if triangle_count(parse_graph6(ln)) <= args.max_triangles]
    results = sweeps.parallel_map(_arrow_chunk, [(part, args.t, budget) for part in sweeps._chunked(chosen, 2000)],
                                  args.jobs)
    for part in results:
        for g6, res in part:
            searched += 1
            if res is None:
                undecided.append(g6)
            elif res:
                found.append(g6)
    body = {"kind": "arrowing", "t": args.t, "max_triangles": args.max_triangles, "graphs": len(lines),
            "searched": searched, "arrowing": found, "undecided": len(undecided), "undecided_graphs": undecided,
            "budget": budget}
    if args.format == "csv":
        return 0, _csv(["searched", "arrowing", "undecided"], [(searched, len(found), len(undecided))])
    return 0, _dump(_envelope("scan", dig, body), args)


def _arrow_chunk(args):
    lines, t, budget = args
    out = []
    for ln in lines:
        g = parse_graph6(ln)
        out.append((g.graph6, arrows(g, t, budget).arrows))
    return out


def cmd_corpus(args):
    from .corpus import KNOWN_COUNTS

    paths = ensure_corpus(args.max_n)
    rows = []
    for n, p in enumerate(paths, 1):
        count = len(read_lines(p))
        rows.append({"n": n, "path": str(p), "graphs": count, "sha256": digest_file(p),
                     "expected": KNOWN_COUNTS.get(n)})
    bad = any(r["expected"] is not None and r["graphs"] != r["expected"] for r in rows)
    return (1 if bad else 0), _dump(_envelope("corpus", "", {"levels": rows}), args)


COMMANDS = {"color": cmd_color, "clique": cmd_clique, "peel": cmd_peel, "verify": cmd_verify,
            "arrows": cmd_arrows, "reduce": cmd_reduce, "prob-color": cmd_prob_color, "bounds": cmd_bounds,
            "scan": cmd_scan, "corpus": cmd_corpus}


def run(argv: list[str] | None = None) -> tuple[int, str, str]:
    """(exit code, report text, error text)."""
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    err = io.StringIO()
    try:
        _apply_config(parser, argv)
        stderr, sys.stderr = sys.stderr, err
        try:
            args = parser.parse_args(argv)
        finally:
            sys.stderr = stderr
    except UsageError as exc:
        return 2, "", f"triramsey: {exc}\n"
    except SystemExit as exc:
        code = exc.code if isinstance(exc.code, int) else 2
        return code, "", err.getvalue()
    if getattr(args, "jobs", 1) is not None and args.jobs < 1:
        return 2, "", "triramsey: --jobs must be at least 1\n"
    try:
        code, text = COMMANDS[args.command](args)
    except (UsageError, Graph6Error, GraphError, UnsupportedError, PreconditionError) as exc:
        return 2, "", f"triramsey: {exc}\n"
    except ValueError as exc:
        return 2, "", f"triramsey: {exc}\n"
    if args.out:
        Path(args.out).write_text(text)
        return code, "", ""
    return code, text, ""


def run_to_bytes(argv: list[str]) -> tuple[int, bytes]:
    code, text, _ = run(argv)
    return code, text.encode()


def main(argv: list[str] | None = None) -> int:
    code, text, err = run(argv)
    if text:
        sys.stdout.write(text)
    if err:
        sys.stderr.write(err)
    return code


if __name__ == "__main__":
    sys.exit(main())
