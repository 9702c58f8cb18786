"""Command line interface.

Exit codes: 0 success, 2 validation failure or negative verdict,
3 resource cap exceeded, 4 parse or usage error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import presentation as pres
from .automatic import build_multiplier, fellow_traveller_check, growth
from .coxeter import RankCapExceeded, is_word_hyperbolic, parse_matrix
from .field import FieldError, FieldSpec
from .geometry import Geometry, GeometryError, ParseError, format_geometry_header, load_geometry
from .probe import GeodesicCapExceeded, bigon_thinness, parse_graph, triangle_thinness
from .words import CapExceeded, Group, WordError

OK, NEGATIVE, CAP, PARSE = 0, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _word(text: str) -> tuple:
    text = text.strip()
    if text in ("", "e", "-"):
        return ()
    try:
        return tuple(int(t) for t in text.replace(",", " ").split())
    except ValueError:
        raise UsageError(f"cannot read word {text!r}; use comma separated ids") from None


def _fmt(word) -> str:
    return " ".join(map(str, word))


def _emit(args, obj, lines):
    if args.json:
        text = json.dumps(obj, sort_keys=True, indent=2) + "\n"
    else:
        text = "\n".join(lines) + "\n" if lines else ""
    out = getattr(args, "out", None)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _group(args) -> Group:
    return Group(pres.load(args.tp))


# Subcommands -------------------------------------------------------------

def cmd_geometry(args):
    spec = FieldSpec.of_order(args.q, tuple(args.modulus) if args.modulus else None)
    g = Geometry(args.n, spec)
    text = format_geometry_header(g, None, listing=True)
    if args.json:
        _emit(args, {"n": g.n, "q": g.q, "subspaces": [
            {"id": s.id, "dim": s.dim, "basis": [list(r) for r in s.basis]} for s in g]}, [])
    else:
        _emit(args, None, text.rstrip("\n").split("\n"))
    return OK


def cmd_tp_search(args):
    g, lam = load_geometry(Path(args.geometry).read_text())
    if args.lambda_search:
        found = pres.first_admissible(g)
        results = [found[1]] if found else []
    else:
        results = pres.search(g, lam, limit=args.limit)
    paths = []
    if args.out_dir:
        d = Path(args.out_dir)
        d.mkdir(parents=True, exist_ok=True)
        for i, tp in enumerate(results):
            p = d / f"tp_{i}.txt"
            pres.save(tp, p)
            paths.append(str(p))
    lines = [f"presentations found: {len(results)}"] + [f"wrote {p}" for p in paths]
    obs = None
    if not results and not args.lambda_search:
        obs = pres.obstruction(g, lam)
        if obs is not None:
            pair, t1, t2 = obs
            lines.append(f"obstruction: pair {pair} is forced by {t1} and by {t2}")
    if results and not args.out_dir and not args.json:
        lines.append(pres.dumps(results[0]).rstrip("\n"))
    _emit(args, {"found": len(results), "files": paths,
                 "presentations": [pres.dumps(tp) for tp in results],
                 "obstruction": None if obs is None else [list(x) if x else None for x in obs]},
          lines)
    return OK if results else NEGATIVE


def cmd_tp_verify(args):
    tp = pres.load(args.tp, check=False)
    report = pres.validate(tp)
    _emit(args, report.as_dict(), report.lines())
    return OK if report.ok else NEGATIVE


def cmd_nf(args):
    G = _group(args)
    u: tuple = ()
    steps = []
    for x in _word(args.word):
        G._check_letters((x,))
        v, trace = G.right_mult(u, x)
        steps.append({"letter": x, "result": list(v), "case": trace.case,
                      "final": trace.final, "cascade": trace.cascade,
                      "triples": [list(t) for t in trace.triples]})
        u = v
    lines = [f"nf: {_fmt(u)}".rstrip()]
    for s in steps:
        extra = f" {s['final']}" if s["final"] else ""
        lines.append(f"  * {s['letter']}: case {s['case']}{extra}, cascade {s['cascade']}"
                     f" -> {_fmt(s['result'])}".rstrip())
    _emit(args, {"nf": list(u), "trace": steps}, lines)
    return OK


def cmd_mul(args):
    G = _group(args)
    w = G.multiply(G.reduce(_word(args.g)), _word(args.h))
    _emit(args, {"nf": list(w)}, [f"nf: {_fmt(w)}".rstrip()])
    return OK


def cmd_inv(args):
    G = _group(args)
    w = G.inverse(G.reduce(_word(args.g)))
    _emit(args, {"nf": list(w)}, [f"nf: {_fmt(w)}".rstrip()])
    return OK


def cmd_dist(args):
    G = _group(args)
    d = G.dist(G.reduce(_word(args.g)), G.reduce(_word(args.h)))
    _emit(args, {"dist": d}, [f"dist: {d}"])
    return OK


def cmd_fellow_check(args):
    G = _group(args)
    rep = fellow_traveller_check(G, args.max_len)
    lines = [f"max_len: {rep.max_len}", f"pairs checked: {rep.pairs_checked}",
             f"max k: {rep.max_k}", f"violations: {len(rep.violations)}",
             f"trace mismatches: {len(rep.trace_mismatches)}"]
    if rep.nontrivial_witness:
        u, x, t, d = rep.nontrivial_witness
        lines.append(f"k=0 fails: u={_fmt(u)} x={x} t={t} difference={d}")
    for v in rep.violations:
        lines.append(f"violation: u={_fmt(v[0])} x={v[1]} t={v[2]} d={v[3]}")
    lines.extend(f"case {k}: {n}" for k, n in sorted(rep.cases.items()))
    _emit(args, rep.as_dict(), lines)
    return OK if rep.ok and rep.max_k <= 1 else NEGATIVE


def cmd_multiplier(args):
    G = _group(args)
    if args.x in ("e", "identity"):
        x = None
    else:
        try:
            x = int(args.x)
        except ValueError:
            raise UsageError(f"generator must be an id or 'e', got {args.x!r}") from None
        G._check_letters((x,))
    M = build_multiplier(G, x)
    text = M.dumps()
    _emit(args, {"x": x, "states": len(M.states),
                 "difference_states": len(M.difference_states) + 1, "automaton": text},
          text.rstrip("\n").split("\n"))
    return OK


def cmd_growth(args):
    G = _group(args)
    gs = growth(G, args.terms)
    cum = gs.cumulative()
    lines = [f"{k} {b} {c}" for k, (b, c) in enumerate(zip(gs.coefficients, cum))]
    if args.terms > 0:
        lines.append("# recurrence b_k = " + " + ".join(
            f"({c})*b_(k-{j})" for j, c in enumerate(gs.recurrence, 1))
            + f" for k >= {gs.recurrence_start}")
        lines.append("# numerator " + " ".join(map(str, gs.numerator)))
        lines.append("# denominator " + " ".join(map(str, gs.denominator)))
    _emit(args, {"coefficients": gs.coefficients, "cumulative": cum,
                 "recurrence": [str(c) for c in gs.recurrence],
                 "recurrence_start": gs.recurrence_start,
                 "numerator": [str(c) for c in gs.numerator],
                 "denominator": [str(c) for c in gs.denominator],
                 "verified": gs.verified}, lines)
    return OK if gs.verified else NEGATIVE


def cmd_ball(args):
    G = _group(args)
    B = G.ball(args.radius)
    text = B.dumps()
    _emit(args, {"vertices": len(B.vertices), "edges": [list(e) for e in B.edges],
                 "labels": [list(w) for w in B.vertices]}, text.rstrip("\n").split("\n"))
    return OK


def cmd_coxeter(args):
    cm = parse_matrix(Path(args.matrix).read_text())
    v = is_word_hyperbolic(cm)
    _emit(args, v.as_dict(), v.lines())
    return OK if v.hyperbolic else NEGATIVE


def _probe_graph(args):
    text = Path(args.source).read_text()
    first = next((ln.split() for ln in text.splitlines() if ln.split("#")[0].strip()), [""])
    if first[0] == "graph":
        return parse_graph(text), args.mode or "all", None
    G = Group(pres.loads(text))
    B = G.ball(args.radius)
    verts = B.vertices

    def dist(i, j):
        return G.dist(verts[i], verts[j])

    return B.graph(), args.mode or "anchored", dist


def cmd_probe_bigon(args):
    graph, mode, dist = _probe_graph(args)
    rep = bigon_thinness(graph, args.basepoint, args.radius, cap=args.cap, mode=mode, dist=dist)
    _emit(args, rep.as_dict(), rep.lines())
    return OK


def cmd_probe_triangle(args):
    graph, mode, dist = _probe_graph(args)
    rep = triangle_thinness(graph, args.basepoint, args.radius, sample=args.sample,
                            seed=args.seed, mode=mode, dist=dist)
    _emit(args, rep.as_dict(), rep.lines())
    return OK


# Argument parsing ----------------------------------------------------------

def _nonneg(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return v


def _positive(text):
    v = _nonneg(text)
    if v == 0:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine readable output")
    common.add_argument("--workers", type=_positive, default=1,
                        help="accepted for scripting; all work runs in one process")
    p = _Parser(prog="atilde", description="Triangle presentations, their groups and probes.")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    s = sub.add_parser("geometry", parents=[common], help="enumerate PG(n, q)")
    s.add_argument("n", type=_positive)
    s.add_argument("q", type=_positive)
    s.add_argument("--modulus", type=int, nargs="+")
    s.add_argument("--out")
    s.set_defaults(func=cmd_geometry)

    s = sub.add_parser("tp-search", parents=[common], help="search for presentations")
    s.add_argument("geometry")
    s.add_argument("--limit", type=_positive, default=1)
    s.add_argument("--lambda-search", action="store_true",
                   help="n=2: try involutions in order until one admits a presentation")
    s.add_argument("--out-dir")
    s.set_defaults(func=cmd_tp_search)

    s = sub.add_parser("tp-verify", parents=[common], help="check axioms A-F")
    s.add_argument("tp")
    s.set_defaults(func=cmd_tp_verify)

    s = sub.add_parser("nf", parents=[common], help="normal form with trace")
    s.add_argument("tp")
    s.add_argument("word")
    s.set_defaults(func=cmd_nf)

    for name, func, nargs in (("mul", cmd_mul, 2), ("inv", cmd_inv, 1), ("dist", cmd_dist, 2)):
        s = sub.add_parser(name, parents=[common])
        s.add_argument("tp")
        s.add_argument("g")
        if nargs == 2:
            s.add_argument("h")
        s.set_defaults(func=func)

    s = sub.add_parser("fellow-check", parents=[common], help="k=1 fellow travelling")
    s.add_argument("tp")
    s.add_argument("--max-len", type=_nonneg, default=4)
    s.set_defaults(func=cmd_fellow_check)

    s = sub.add_parser("multiplier", parents=[common], help="export a multiplier automaton")
    s.add_argument("tp")
    s.add_argument("x")
    s.add_argument("--out")
    s.set_defaults(func=cmd_multiplier)

    s = sub.add_parser("growth", parents=[common], help="growth series")
    s.add_argument("tp")
    s.add_argument("--terms", type=_nonneg, default=10)
    s.set_defaults(func=cmd_growth)

    s = sub.add_parser("ball", parents=[common], help="export a Cayley ball")
    s.add_argument("tp")
    s.add_argument("--radius", type=_nonneg, required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_ball)

    s = sub.add_parser("coxeter-hyp", parents=[common], help="hyperbolicity of a Coxeter system")
    s.add_argument("matrix")
    s.set_defaults(func=cmd_coxeter)

    for name, func in (("probe-bigon", cmd_probe_bigon), ("probe-triangle", cmd_probe_triangle)):
        s = sub.add_parser(name, parents=[common])
        s.add_argument("source", help="graph file or presentation file")
        s.add_argument("--radius", type=_nonneg, required=True)
        s.add_argument("--basepoint", type=_nonneg, default=0)
        s.add_argument("--mode", choices=("all", "anchored"))
        s.add_argument("--cap", type=_positive, default=10000)
        s.add_argument("--sample", type=_positive, default=2000)
        s.add_argument("--seed", type=int, default=0)
        s.set_defaults(func=func)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return PARSE
    except (ParseError, FieldError, WordError, GeometryError, FileNotFoundError) as e:
        print(f"error: {e}", file=sys.stderr)
        return PARSE
    except pres.PresentationError as e:
        print(f"invalid presentation: {e}", file=sys.stderr)
        return NEGATIVE
    except (CapExceeded, GeodesicCapExceeded, RankCapExceeded) as e:
        print(f"cap exceeded: {e}", file=sys.stderr)
        return CAP


if __name__ == "__main__":
    sys.exit(main())
