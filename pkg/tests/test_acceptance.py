"""Acceptance criteria, one test each.  Every test prints a single
``criterion N: PASS|FAIL ...`` line (visible with ``pytest -v``)."""
import os
import random
import subprocess
import sys
import time
from collections import deque
from itertools import product
from pathlib import Path

import pytest

from atilde import cli
from atilde import presentation as pres
from atilde.automatic import build_multiplier, fellow_traveller_check, growth
from atilde.coxeter import (AFFINE, FINITE, CoxeterMatrix, classify_subsystem,
                            is_word_hyperbolic)
from atilde.geometry import Geometry, format_geometry_header, perp_correlation
from atilde.presentation import TrianglePresentation, validate
from atilde.probe import bigon_thinness, parse_graph, triangle_thinness
from oracles import coset_enumeration

FIX = Path(__file__).parent / "fixtures"


def report(capsys, n, checks):
    """Print the criterion line and fail with the names of failed checks."""
    failed = [name for name, ok in checks if not ok]
    line = f"criterion {n}: " + ("PASS" if not failed else "FAIL (" + "; ".join(failed) + ")")
    with capsys.disabled():
        print("\n" + line)
    assert not failed, line


def run_cli(args, capsys):
    code = cli.main(args)
    return code, capsys.readouterr().out


def test_criterion_1_axiom_suite(tmp_path, capsys):
    t0 = time.time()
    g = Geometry(2, 2)
    gfile = tmp_path / "pg22.txt"
    gfile.write_text(format_geometry_header(g, perp_correlation(g)))
    code, out = run_cli(["tp-search", str(gfile), "--out-dir", str(tmp_path / "found")], capsys)
    found = int(out.splitlines()[0].split(":")[1])
    # the shipped fixture stands in for the search result so the
    # remaining checks still run
    tp = pres.load(FIX / "tp_n2_q2.txt")
    vcode, _ = run_cli(["tp-verify", str(FIX / "tp_n2_q2.txt")], capsys)
    rng = random.Random(1)
    mutants_fail = 0
    for _ in range(50):
        t = list(rng.choice(sorted(tp.triples)))
        old = tuple(t)
        k = rng.randrange(3)
        t[k] = rng.choice([i for i in range(len(g)) if i != t[k]])
        bad = TrianglePresentation(tp.geometry, tp.correlation,
                                   (tp.triples - {old}) | {tuple(t)})
        mutants_fail += not validate(bad).ok
    report(capsys, 1, [
        (f"tp-search with perp lambda found {found} presentations", found >= 1 and code == 0),
        ("tp-verify on fixture", vcode == 0),
        (f"{mutants_fail}/50 mutations rejected", mutants_fail == 50),
        ("runtime < 60 s", time.time() - t0 < 60),
    ])


def test_criterion_2_confluence(G2, capsys):
    G, N = G2, G2.N
    words = [w for k in range(4) for w in product(range(N), repeat=k)]
    # Since reduce is a left fold, reduce(a + b) = multiply(reduce(a), b).
    # The claim is thus equivalent to multiply(g, b) = multiply(g, reduce(b))
    # for g = reduce(a) in L and b not in L (for b in L both sides agree).
    targets = G.words(3)
    fails = 0
    pairs = 0
    for b in words:
        if G.accepts(b):
            continue
        rb = G.reduce(b)
        for gword in targets:
            u, v = gword, gword
            for x in b:
                u = G.mult(u, x)
            for x in rb:
                v = G.mult(v, x)
            pairs += 1
            fails += u != v
    # spot check of the literal statement, including non-normal a
    rng = random.Random(2)
    for _ in range(20000):
        a, b = rng.choice(words), rng.choice(words)
        fails += G.reduce(a + b) != G.reduce(G.reduce(a) + b)
    relator_fails = sum(G.reduce(r) != ()
                        for u, v, w in G.tp.triples for r in ((u, v, w), (v, w, u), (w, u, v)))
    report(capsys, 2, [(f"{fails} confluence failures over {pairs} pairs", fails == 0),
                       (f"{relator_fails} relator failures", relator_fails == 0)])


def test_criterion_3_geodesic(G2, capsys):
    B = G2.ball(4)
    adj = B.graph().adj
    dist = {0: 0}
    queue = deque([0])
    while queue:
        i = queue.popleft()
        for j in adj[i]:
            if j not in dist:
                dist[j] = dist[i] + 1
                queue.append(j)
    bad = sum(dist[i] != len(w) for i, w in enumerate(B.vertices))
    spheres = [sum(1 for i in dist if dist[i] == k) for k in range(5)]
    gs = growth(G2, 4)
    report(capsys, 3, [(f"{bad} vertices with BFS distance != |nf|", bad == 0),
                       (f"spheres {spheres} vs growth {gs.coefficients}",
                        spheres == gs.coefficients)])


def test_criterion_4_fellow_traveller(G2, capsys):
    rep = fellow_traveller_check(G2, 5)
    states_ok = True
    for u in G2.words(5)[:4000]:
        for x in range(G2.N):
            _, tr = G2.right_mult(u, x)
            states_ok &= all(d is None or 0 <= d < G2.N for d in tr.differences)
    report(capsys, 4, [
        (f"{len(rep.violations)} violations", not rep.violations),
        (f"{len(rep.trace_mismatches)} trace/dist mismatches", not rep.trace_mismatches),
        (f"max k = {rep.max_k}", rep.max_k == 1),
        ("difference states in identity and generators", states_ok),
        ("instance with a generator as difference", rep.nontrivial_witness is not None),
    ])


def test_criterion_5_multipliers(G2, capsys):
    discrepancies = 0
    W4 = G2.words(4)
    W5 = G2.words(5)
    rng = random.Random(5)
    for x in range(G2.N):
        M = build_multiplier(G2, x)
        for u in W4:
            v = G2.mult(u, x)
            if not M.accepts_pair(u, v):
                discrepancies += 1
            # exploring every second track, pruned only at the absorbing
            # failure state, finds every accepted partner of u
            partners = M.accepted_partners(u)
            if partners != [v]:
                discrepancies += 1
        for _ in range(2000):
            u, w = rng.choice(W4), rng.choice(W5)
            if M.accepts_pair(u, w) != (w == G2.mult(u, x)):
                discrepancies += 1
    report(capsys, 5, [(f"{discrepancies} discrepancies", discrepancies == 0)])


def test_criterion_6_symmetry(G2, capsys):
    lam = G2.lam
    bad = 0
    for u in G2.words(4):
        for x in range(G2.N):
            if G2.inverse(G2.mult(u, x)) != G2.reduce((lam[x],) + G2.inverse(u)):
                bad += 1
    not_closed = sum(not G2.accepts(tuple(lam[a] for a in reversed(w))) for w in G2.words(5))
    mismatch = sum(G2.accepts(w) != G2.accepts(tuple(lam[a] for a in reversed(w)))
                   for w in product(range(G2.N), repeat=4))
    report(capsys, 6, [(f"{bad} inversion failures", bad == 0),
                       (f"{not_closed + mismatch} reversal failures", not_closed + mismatch == 0)])


def test_criterion_7_coxeter(capsys):
    t0 = time.time()
    tri = CoxeterMatrix.triangle
    v333 = is_word_hyperbolic(tri(3, 3, 3))
    dinf = CoxeterMatrix([[1, 0, 2, 2], [0, 1, 2, 2], [2, 2, 1, 0], [2, 2, 0, 1]])
    vd = is_word_hyperbolic(dinf)
    checks = [
        ("(3,3,3) not hyperbolic, rank-3 affine certificate",
         not v333.hyperbolic and v333.reason == "affine"
         and v333.witness[0].classification == AFFINE and len(v333.witness[0].subset) == 3),
        ("(2,3,7) hyperbolic", is_word_hyperbolic(tri(2, 3, 7)).hyperbolic),
        ("(2,4,4) not hyperbolic", is_word_hyperbolic(tri(2, 4, 4)).reason == "affine"),
        ("(2,3,6) not hyperbolic", is_word_hyperbolic(tri(2, 3, 6)).reason == "affine"),
        ("D_inf x D_inf commuting certificate", not vd.hyperbolic and vd.reason == "commuting"),
    ]
    values = [2, 3, 4, 5, 6, 0]
    systems = [[[1]]] + [[[1, a], [a, 1]] for a in values]
    systems += [tri(p, q, r).m for p in values for q in values for r in values]
    disagree = 0
    for m in systems:
        cm = CoxeterMatrix(m)
        finite = classify_subsystem(cm, range(cm.rank)).classification == FINITE
        disagree += finite != (coset_enumeration(cm.m, 3000) is not None)
    checks.append((f"{disagree} disagreements with coset enumeration", disagree == 0))
    checks.append(("runtime < 30 s", time.time() - t0 < 30))
    report(capsys, 7, checks)


def test_criterion_8_probes(G2, capsys):
    tree = parse_graph((FIX / "tree.graph").read_text())
    z2 = parse_graph((FIX / "z2_r6.graph").read_text())
    tb = bigon_thinness(tree, 0, 4)
    tt = triangle_thinness(tree, 0, 4)
    zb = bigon_thinness(z2, 0, 6, mode="anchored")
    ks = {}
    viol = len(tb.kprime_violations) + len(zb.kprime_violations)
    for R in (4, 5):
        B = G2.ball(R)
        verts = B.vertices
        rep = bigon_thinness(B.graph(), 0, R, mode="anchored",
                             dist=lambda i, j: G2.dist(verts[i], verts[j]))
        ks[R] = rep.bigon_K
        viol += len(rep.kprime_violations)
    report(capsys, 8, [
        (f"tree K={tb.bigon_K} delta={tt.triangle_delta}",
         tb.bigon_K == 0 and tt.triangle_delta == 0),
        (f"Z^2 K={zb.bigon_K}", zb.bigon_K >= 3),
        (f"A2 ball K(4)={ks[4]} K(5)={ks[5]}", ks[5] >= ks[4] > 0),
        (f"{viol} bigons with K' > 2K", viol == 0),
    ])


ACCEPTANCE_COMMANDS = [
    ["tp-search", "{pg22}"],
    ["tp-verify", "{tp}"],
    ["nf", "{tp}", "0,0,1"],
    ["growth", "{tp}", "--terms", "4"],
    ["fellow-check", "{tp}", "--max-len", "5"],
    ["multiplier", "{tp}", "3"],
    ["ball", "{tp}", "--radius", "4"],
    ["coxeter-hyp", "{fix}/cox_333.txt"],
    ["coxeter-hyp", "{fix}/cox_237.txt"],
    ["coxeter-hyp", "{fix}/cox_dinf2.txt"],
    ["probe-bigon", "{fix}/tree.graph", "--radius", "4"],
    ["probe-triangle", "{fix}/tree.graph", "--radius", "4"],
    ["probe-bigon", "{fix}/z2_r6.graph", "--radius", "6", "--mode", "anchored"],
    ["probe-bigon", "{tp}", "--radius", "5"],
    ["probe-triangle", "{tp}", "--radius", "4", "--seed", "1", "--json"],
]


@pytest.mark.slow
def test_criterion_9_determinism(tmp_path, capsys):
    g = Geometry(2, 2)
    pg22 = tmp_path / "pg22.txt"
    pg22.write_text(format_geometry_header(g, perp_correlation(g)))
    subst = {"pg22": str(pg22), "tp": str(FIX / "tp_n2_q2.txt"), "fix": str(FIX)}

    def launch(args, seed):
        env = dict(os.environ, PYTHONHASHSEED=str(seed))
        return subprocess.Popen([sys.executable, "-m", "atilde.cli"] + args, env=env,
                                stdout=subprocess.PIPE, stderr=subprocess.PIPE)

    differ = []
    for cmd in ACCEPTANCE_COMMANDS:
        args = [a.format(**subst) for a in cmd]
        # two runs under different hash seeds, so set iteration order is exercised
        p1, p2 = launch(args, 1), launch(args, 2)
        o1, o2 = p1.communicate()[0], p2.communicate()[0]
        if o1 != o2 or p1.returncode != p2.returncode or not o1:
            differ.append(cmd[0])
    report(capsys, 9, [(f"outputs differ for {differ}", not differ)])
