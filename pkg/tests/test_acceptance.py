"""Acceptance criteria; each test prints one PASS/FAIL line before asserting."""

import subprocess
import sys
from math import factorial

from eqcalc.calculus import (
    connectivity_estimate,
    goodwillie_tree,
    identity_layer_descriptor,
    png_triviality,
    preorder_problems,
)
from eqcalc.checks import covering_suite, decomp_suite, q_partition_suite, snaith_suite, stability_suite, \
    strongly_cocartesian_suite
from eqcalc.groups import CATALOG_NAMES, catalog_group
from eqcalc.gsets import GSet, enumerate_gset_iso_classes
from eqcalc.partitions import proper_partition_nerve_homology, t_homology
from eqcalc.posets import star_category
from eqcalc.randomdiag import DEFAULT_SEED


def verdict(report, tag, ok, detail):
    report(f"{'PASS' if ok else 'FAIL'} {tag}: {detail}")
    return ok


def test_c01_star_counts(report):
    c2 = catalog_group("C2")
    j = GSet.free(c2, 3)
    a = len(star_category(j, range(6)))
    b = len(star_category(j, [0, 1, 2, 4, 6]))
    assert verdict(report, "C1 star counts", (a, b) == (10, 11), f"|St(3xZ/2)|={a}, |St((Z/2+0+0)_+)|={b}")


def test_c02_strongly_cocartesian(report):
    res = strongly_cocartesian_suite(("C2", "C3", "V4", "S3"), max_size=4)
    assert verdict(report, "C2 strong cocartesianity", res.passed,
                   f"{res.cases} G-sets, counterexample={res.counterexample}")


def test_c03_covering_lemma(report):
    res = covering_suite(DEFAULT_SEED, 50)
    shapes = res.report.get("shapes", {})
    ok = res.passed and res.cases == 50 and any(s.startswith("star") for s in shapes) \
        and {"deloop C2 k=1", "deloop C2 k=2"} <= set(shapes)
    assert verdict(report, "C3 covering lemma", ok, f"{res.cases} diagrams over {sorted(shapes)}")


def test_c04_decomposition_lemma(report):
    res = decomp_suite(DEFAULT_SEED, 100, ("C2", "V4", "S3", "D4"))
    assert verdict(report, "C4 decomposition lemma", res.passed and res.cases == 100,
                   f"{res.cases} split diagrams, counterexample={res.counterexample}")


def test_c05_partition_homology(report):
    nerve = {k: proper_partition_nerve_homology(k) for k in range(3, 7)}
    nerve_ok = all(h == {k - 3: factorial(k - 1)} for k, h in nerve.items())
    t = {k: t_homology(k) for k in range(2, 6)}
    single = all(len(h) == 1 and list(h.values())[0] == factorial(k - 1) for k, h in t.items())
    degs = {k: next(iter(h)) for k, h in t.items()} if single else {}
    slope = degs[3] - degs[2] if single else None
    linear = single and all(degs[k] == degs[2] + slope * (k - 2) for k in degs)
    ranks = [nerve[k].get(k - 3) for k in range(3, 7)]
    assert verdict(report, "C5 partition homology", nerve_ok and linear,
                   f"nerve ranks {ranks}; T_k degrees {degs} ranks {[t[k] for k in t]}")


def test_c06_family_partition(report):
    res = q_partition_suite(6, CATALOG_NAMES)
    assert verdict(report, "C6 family partition", res.passed,
                   f"{res.cases} (group, k) pairs, counterexample={res.counterexample}")


def test_c07_identity_layers(report):
    c2 = catalog_group("C2")
    one = identity_layer_descriptor(c2, 1)
    two = identity_layer_descriptor(c2, 2)
    whole = c2.class_id(c2.whole)
    idx = two.entry(2).index[whole]
    auts = sorted(a for _, a in idx)
    ok = (one.nonempty() == [1] and all(e.empty for e in one.entries if e.k >= 2)
          and two.nonempty() == [2] and len(idx) == 2 and auts == [2, 2])
    assert verdict(report, "C7 identity layers", ok,
                   f"n=1 nonempty k={one.nonempty()}; n=2 nonempty k={two.nonempty()}, H=Z/2 Aut orders {auts}")


def test_c08_triviality_vs_connectivity(report):
    cases, bad = 0, []
    for name in CATALOG_NAMES:
        g = catalog_group(name)
        for k in enumerate_gset_iso_classes(g, 4):
            if not k.size:
                continue
            for n in range(1, 5):
                cases += 1
                if png_triviality(g, k, g.whole, n) != (connectivity_estimate(g, k, n) >= 1):
                    bad.append((name, k.key_label(), n))
    assert verdict(report, "C8 triviality vs connectivity", not bad, f"{cases} cases, mismatches={bad[:3]}")


def test_c09_snaith(report):
    res = snaith_suite(12)
    assert verdict(report, "C9 Snaith indexing", res.passed, f"k <= 12, counts at 12 = {res.report.get('counts')}")


def test_c10_tree(report):
    c2 = catalog_group("C2")
    tree = goodwillie_tree(c2, None, 4)
    probs = preorder_problems(tree)
    idx = [tree.index_of(GSet.trivial(c2, k).iso_key()) for k in range(1, 5)]
    chain = all(tree.leq[a][b] == (i <= j) for i, a in enumerate(idx) for j, b in enumerate(idx))
    dot = tree.to_dot()
    code = ("import sys; from eqcalc.calculus import goodwillie_tree; from eqcalc.groups import catalog_group; "
            "sys.stdout.write(goodwillie_tree(catalog_group('C2'), None, 4).to_dot())")
    other = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, check=True).stdout
    stable = dot == goodwillie_tree(c2, None, 4).to_dot() == other
    assert verdict(report, "C10 tree order", not probs and chain and stable,
                   f"{len(tree.nodes)} classes, {len(tree.edges)} covers, preorder problems={len(probs)}, "
                   f"chain embeds={chain}, DOT stable={stable}")


def test_c11_stability(report):
    res = stability_suite(DEFAULT_SEED, 100)
    ok = res.passed and res.cases == 100
    assert verdict(report, "C11 stability surrogate", ok, f"{res.cases} cubes, {res.report}")
