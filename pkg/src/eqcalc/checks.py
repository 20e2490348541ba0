"""Verifier suites behind ``eqcalc check``.

Each suite returns a :class:`SuiteResult`; randomized suites draw case ``i``
from ``random.Random(seed + i)`` so a reported counterexample can be rebuilt
from its case number alone.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations

from .chains import ChainComplex
from .diagrams import (
    is_cartesian,
    is_cocartesian,
    is_strongly_cocartesian,
    lambda_cube,
    strongly_cocartesian_failures,
    subcube,
    verify_covering_lemma,
    verify_decomp,
    verify_iterated_pushout,
)
from .families import family_F, family_Q
from .groups import CATALOG_NAMES, catalog_group, normal_subgroups
from .gsets import GSet, enumerate_gset_iso_classes
from .partitions import (
    build_T,
    expected_rank,
    fixed_subcomplex,
    proper_partition_nerve_homology,
    snaith_index_count,
    t_homology,
)
from .posets import GPoset, delooping_cover, fixed_poset_comparison, star_orbit_cover
from .randomdiag import (
    DEFAULT_SEED,
    cube_of_cubes,
    random_cube,
    random_diagram,
    random_equivariant_diagram,
    random_split_diagram,
)


@dataclass
class SuiteResult:
    name: str
    passed: bool
    cases: int
    counterexample: dict | None = None
    report: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "suite": self.name,
            "passed": self.passed,
            "cases": self.cases,
            "counterexample": self.counterexample,
            "report": self.report,
        }

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        out = f"{status} {self.name}: {self.cases} cases"
        if self.counterexample:
            out += f"; counterexample {self.counterexample}"
        return out


def _finish(name: str, cases: int, bad: dict | None, report: dict | None = None) -> SuiteResult:
    return SuiteResult(name, bad is None, cases, bad, report or {})


# ---------------------------------------------------------------------------


def strongly_cocartesian_suite(groups=("C2", "C3", "V4", "S3"), max_size: int = 4,
                               c: ChainComplex | None = None, pushouts: bool = True) -> SuiteResult:
    """Λ cubes of every small G-set are strongly cocartesian (and iterated pushouts)."""
    c = c or ChainComplex({0: 1})
    cases = 0
    for name in groups:
        g = catalog_group(name)
        for j in enumerate_gset_iso_classes(g, max_size):
            cases += 1
            cube = lambda_cube(j, c)
            if not is_strongly_cocartesian(cube, j):
                bad = strongly_cocartesian_failures(cube, j, first_only=True)
                return _finish("strongly-cocartesian", cases,
                               {"group": name, "gset": j.key_label(), "subset": sorted(map(str, bad[0]))})
            if pushouts and verify_iterated_pushout(cube, j):
                return _finish("strongly-cocartesian", cases,
                               {"group": name, "gset": j.key_label(), "iterated_pushout": False})
    return _finish("strongly-cocartesian", cases, None)


def _covering_shapes():
    c2 = catalog_group("C2")
    c3 = catalog_group("C3")
    free = GSet.free(c2)
    out = [
        ("star 2xC2", star_orbit_cover(GSet.free(c2, 2))),
        ("star C2+pt", star_orbit_cover(GSet.from_orbits(c2, [c2.trivial_subgroup, c2.whole]))),
        ("star C3", star_orbit_cover(GSet.free(c3))),
        ("deloop C2 k=1", delooping_cover(free, 0, 1)),
        ("deloop C2 k=2", delooping_cover(free, 0, 2)),
    ]
    return out


def covering_suite(seed: int = DEFAULT_SEED, count: int = 50) -> SuiteResult:
    """Holim over a covered poset agrees with the cube of holims over the pieces."""
    shapes = _covering_shapes()
    tally: dict[str, int] = {}
    for i in range(count):
        rng = random.Random(seed + i)
        label, cover = shapes[i % len(shapes)]
        if i % 2:
            d = random_equivariant_diagram(rng, cover.poset)
        else:
            d = random_diagram(rng, cover.poset, pieces=1, ambient=2)
        tally[label] = tally.get(label, 0) + 1
        if not verify_covering_lemma(d, cover):
            return _finish("covering", i + 1, {"case": i, "shape": label, "seed": seed})
    return _finish("covering", count, None, {"shapes": tally})


def normal_subgroup_poset(name: str) -> GPoset:
    g = catalog_group(name)
    return GPoset(normal_subgroups(g), lambda a, b: a.members <= b.members)


def decomp_suite(seed: int = DEFAULT_SEED, count: int = 100,
                 groups=("C2", "V4", "S3", "D4")) -> SuiteResult:
    """Split diagrams: homology of the initial value is the sum over fibers."""
    shapes = [(name, normal_subgroup_poset(name)) for name in groups]
    for i in range(count):
        rng = random.Random(seed + i)
        name, shape = shapes[i % len(shapes)]
        d, secs = random_split_diagram(rng, shape)
        ok, rep = verify_decomp(d, secs)
        if not ok:
            return _finish("decomp", i + 1, {"case": i, "group": name, "seed": seed,
                                             "initial": rep["initial"], "sum": rep["sum"]})
    return _finish("decomp", count, None)


def q_partition_suite(k_max: int = 6, groups=CATALOG_NAMES) -> SuiteResult:
    """``F_k`` is the disjoint union of the ``Q_{k,H}`` over normal ``H``."""
    cases = 0
    for name in groups:
        g = catalog_group(name)
        for k in range(0, k_max + 1):
            cases += 1
            whole = family_F(g, k)
            parts = [family_Q(g, k, h) for h in normal_subgroups(g)]
            seen = set()
            total = 0
            for p in parts:
                total += len(p)
                seen.update(m.sort_key() for m in p)
            if total != len(seen) or seen != {m.sort_key() for m in whole}:
                return _finish("q-partition", cases, {"group": name, "k": k, "F": len(whole),
                                                      "sum_Q": total, "distinct": len(seen)})
    return _finish("q-partition", cases, None)


def snaith_suite(k_max: int = 12) -> SuiteResult:
    """Multiset-sum count equals the integer-partition count for every ``k <= k_max``."""
    last = None
    for k in range(1, k_max + 1):
        last = snaith_index_count(k)
        if last[0] != last[1]:
            return _finish("snaith", k, {"k": k, "counts": list(last)})
    return _finish("snaith", k_max, None, {"k": k_max, "counts": list(last) if last else []})


def fixedposet_suite(groups=CATALOG_NAMES, max_size: int = 6) -> SuiteResult:
    """``P(J)^H ≅ P(J/H)`` for normal ``H``."""
    cases = 0
    for name in groups:
        g = catalog_group(name)
        for j in enumerate_gset_iso_classes(g, max_size):
            for h in normal_subgroups(g):
                cases += 1
                if not fixed_poset_comparison(j, h):
                    return _finish("fixedposet", cases, {"group": name, "gset": j.key_label(),
                                                         "subgroup": h.describe()})
    return _finish("fixedposet", cases, None)


def stability_suite(seed: int = DEFAULT_SEED, count: int = 100) -> SuiteResult:
    """Random chain cubes are cartesian exactly when they are cocartesian."""
    cart = 0
    for i in range(count):
        rng = random.Random(seed + i)
        cube = random_cube(rng, rng.randint(1, 3))
        a, b = is_cartesian(cube), is_cocartesian(cube)
        if a != b:
            return _finish("stability", i + 1, {"case": i, "seed": seed, "cartesian": a, "cocartesian": b})
        cart += a
    return _finish("stability", count, None, {"cartesian": cart, "not_cartesian": count - cart})


def random_cube_of_cubes(rng: random.Random):
    """A random ``(I ⊔ J)``-cube of cubes and its ``I``-face, with ``|I|, |J| <= 2``."""
    ni, nj, nk = rng.randint(1, 2), rng.randint(1, 2), rng.randint(1, 2)
    a = random_cube(rng, ni + nk)
    i_pts = list(range(ni))
    k_pts = list(range(ni, ni + nk))
    j_pts = list(range(ni + nk, ni + nk + nj))
    # psi(U) = union of images of points: monotone by construction
    img = {x: frozenset(y for y in k_pts if rng.random() < 0.5) for x in j_pts}
    psi = {}
    for r in range(1, nj + 1):
        for u in combinations(j_pts, r):
            psi[frozenset(u)] = frozenset().union(*(img[x] for x in u))
    x = cube_of_cubes(rng, a, i_pts, j_pts, psi)
    return x, subcube(x, i_pts)


def cube_of_cubes_suite(seed: int = DEFAULT_SEED, count: int = 30) -> SuiteResult:
    """With constant faces over nonempty ``U``, the cube is cartesian iff its ``I``-face is."""
    cart = 0
    for i in range(count):
        rng = random.Random(seed + i)
        x, base = random_cube_of_cubes(rng)
        a, b = is_cartesian(x), is_cartesian(base)
        if a != b:
            return _finish("cube-of-cubes", i + 1, {"case": i, "seed": seed, "whole": a, "face": b})
        cart += a
    return _finish("cube-of-cubes", count, None, {"cartesian": cart, "not_cartesian": count - cart})


def partition_suite(k_max: int = 5, nerve_max: int = 6) -> SuiteResult:
    """Simplicial identities of ``T_k`` and the ranks of its homology."""
    cases = 0
    for k in range(1, min(k_max, 4) + 1):
        cases += 1
        build_T(k).validate(2)
    c2 = catalog_group("C2")
    t = build_T(GSet.free(c2, 2))
    t.validate(2)
    fixed_subcomplex(t, c2.whole).validate(2)
    cases += 1
    for k in range(2, k_max + 1):
        cases += 1
        h = t_homology(k)
        if h != {k - 1: expected_rank(k)}:
            return _finish("partition", cases, {"k": k, "t_homology": h})
    for k in range(3, nerve_max + 1):
        cases += 1
        h = proper_partition_nerve_homology(k)
        if h != {k - 3: expected_rank(k)}:
            return _finish("partition", cases, {"k": k, "nerve_homology": h})
    return _finish("partition", cases, None)


SUITES = {
    "strongly-cocartesian": strongly_cocartesian_suite,
    "covering": covering_suite,
    "decomp": decomp_suite,
    "q-partition": q_partition_suite,
    "snaith": snaith_suite,
    "fixedposet": fixedposet_suite,
    "stability": stability_suite,
    "cube-of-cubes": cube_of_cubes_suite,
    "partition": partition_suite,
}
