"""Command-line front end.

Exit status: 0 on success, 1 when a verifier finds a counterexample, 2 on
invalid input (including exceeded size bounds).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import calculus, checks
from .errors import EqcalcError, SizeBoundError
from .families import enumerate_hom_classes, family_F, family_Fk_n
from .groups import conjugacy_classes_of_subgroups, enumerate_subgroups, load_group, normal_subgroups
from .gsets import GSet, parse_gset, parse_subgroup
from .partitions import MAX_POINTS, build_T, nondegenerate_counts, proper_partition_nerve_homology, t_homology
from .posets import lambda_classify, outside_star, star_category
from .randomdiag import DEFAULT_SEED

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# input helpers


def _group(args):
    if not args.group:
        raise UsageError("--group is required")
    return load_group(args.group)


def _gset(args, g) -> GSet:
    if not args.gset:
        raise UsageError("--gset is required")
    text = args.gset
    p = Path(text)
    if not text.lstrip().startswith("{") and p.is_file():
        text = p.read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"G-set input is not valid JSON: {exc.msg}") from exc
    return parse_gset(g, data)


def _subset(args, j: GSet) -> list[int]:
    """Parse ``--subset 0,2,+``; ``+`` is the added basepoint."""
    if args.subset is None:
        return list(range(j.size + 1))
    out = []
    for tok in args.subset.split(","):
        tok = tok.strip()
        if not tok:
            continue
        if tok == "+":
            out.append(j.size)
            continue
        try:
            x = int(tok)
        except ValueError as exc:
            raise UsageError(f"bad point {tok!r}") from exc
        if not 0 <= x < j.size:
            raise UsageError(f"point {x} outside 0..{j.size - 1}")
        out.append(x)
    return sorted(set(out))


def _need(value, flag: str):
    if value is None:
        raise UsageError(f"{flag} is required")
    return value


def _hom(h: dict[int, int]) -> dict[str, int]:
    return {str(d): r for d, r in sorted(h.items())}


# ---------------------------------------------------------------------------
# commands (each returns (payload, exit status))


def cmd_group_info(args):
    g = _group(args)
    classes = conjugacy_classes_of_subgroups(g)
    normals = {h.members for h in normal_subgroups(g)}
    return {
        "group": g.name,
        "order": g.order,
        "abelian": g.is_abelian,
        "subgroups": len(enumerate_subgroups(g)),
        "classes": len(classes),
        "normal": len(normals),
        "subgroup_classes": [
            {"class": i, "representative": cls[0].describe(), "order": len(cls[0]),
             "conjugates": len(cls), "normal": cls[0].members in normals}
            for i, cls in enumerate(classes)
        ],
    }, EXIT_OK


def cmd_gset_orbits(args):
    g = _group(args)
    j = _gset(args, g)
    return {
        "group": g.name,
        "size": j.size,
        "key": list(j.iso_key()),
        "label": j.key_label(),
        "orbits": [
            {"points": list(o), "stabilizer": j.stabilizer(o[0]).describe(),
             "class": g.class_id(j.stabilizer(o[0]))}
            for o in j.orbits
        ],
    }, EXIT_OK


def cmd_tree_hasse(args):
    g = _group(args)
    tree = calculus.goodwillie_tree(g, args.max_orbits, _need(args.max_size, "--max-size"))
    if args.format == "dot":
        return tree.to_dot(), EXIT_OK
    return tree.to_json(), EXIT_OK


def cmd_star_count(args):
    g = _group(args)
    j = _gset(args, g)
    u = _subset(args, j)
    st = star_category(j, u if args.subset is not None else None)
    return {
        "group": g.name,
        "gset": j.key_label(),
        "subset": u,
        "objects": len(st),
        "outside_star": len(outside_star(j)),
    }, EXIT_OK


def cmd_lambda_classify(args):
    g = _group(args)
    j = _gset(args, g)
    u = _subset(args, j)
    expr = lambda_classify(j, u)
    return {"gset": j.key_label(), "subset": u, "type": expr.to_json(),
            "homology": _hom(expr.predicted_homology({0: 1}))}, EXIT_OK


def cmd_families_enum(args):
    g = _group(args)
    k = _need(args.k, "--k")
    if args.subgroup:
        h = parse_subgroup(g, args.subgroup)
        members = enumerate_hom_classes(h, k)
        data = [m.to_json() for m in members]
        label = f"hom({h.describe()}, S_{k})"
    elif args.n is not None:
        fam = family_Fk_n(g, k, args.n)
        data, label = fam.to_json(), f"F_{k}({args.n})"
    else:
        fam = family_F(g, k)
        data, label = fam.to_json(), f"F_{k}"
    return {"group": g.name, "family": label, "count": len(data), "members": data}, EXIT_OK


def cmd_partition_homology(args):
    if args.gset:
        g = _group(args)
        kset = _gset(args, g)
    else:
        kset = _need(args.k, "--k")
    fixed = None
    if args.subgroup:
        if not args.gset:
            raise UsageError("--subgroup needs --gset")
        fixed = parse_subgroup(kset.group, args.subgroup)
    k = kset if isinstance(kset, int) else kset.size
    if k < 1:
        raise UsageError("need at least one point")
    if k > MAX_POINTS:
        raise SizeBoundError(f"partition complexes are limited to {MAX_POINTS} points")
    t = build_T(kset)
    out = {"k": k, "t_homology": _hom(t_homology(kset, fixed)),
           "nondegenerate": [nondegenerate_counts(t, m) for m in range(k + 1)]}
    if fixed is None and k >= 2:
        out["nerve_homology"] = _hom(proper_partition_nerve_homology(k))
    return out, EXIT_OK


def cmd_tomdieck(args):
    g = _group(args)
    return calculus.tomdieck_summands(g, args.mode).to_json(), EXIT_OK


def cmd_higher_tomdieck(args):
    g = _group(args)
    return calculus.higher_tomdieck_summands(g, _need(args.n, "--n")).to_json(), EXIT_OK


def cmd_identity_layers(args):
    g = _group(args)
    # --k lowers the size bound; entries past it are reported as partial output
    bound = MAX_POINTS if args.k is None else args.k
    return calculus.identity_layer_descriptor(g, _need(args.n, "--n"), max_k=bound).to_json(), EXIT_OK


def cmd_check(args):
    name = args.lemma
    kw = {}
    if name in ("covering", "decomp", "stability", "cube-of-cubes"):
        kw["seed"] = args.seed
        if args.count is not None:
            kw["count"] = args.count
    if args.k is not None:
        if name in ("snaith", "q-partition", "partition"):
            kw["k_max"] = args.k
        elif name in ("strongly-cocartesian", "fixedposet"):
            kw["max_size"] = args.k
    if args.group and name in ("strongly-cocartesian", "fixedposet", "q-partition"):
        kw["groups"] = (args.group,)
    res = checks.SUITES[name](**kw)
    return res, EXIT_OK if res.passed else EXIT_FAIL


# ---------------------------------------------------------------------------
# output


def _table(data) -> str:
    if isinstance(data, str):
        return data
    lines = []

    def emit(key, value, indent):
        pad = "  " * indent
        if isinstance(value, dict):
            lines.append(f"{pad}{key}:")
            for k, v in value.items():
                emit(k, v, indent + 1)
        elif isinstance(value, list) and value and all(isinstance(v, dict) for v in value):
            lines.append(f"{pad}{key}:")
            cols = list(value[0])
            rows = [[json.dumps(v.get(c)) if not isinstance(v.get(c), str) else v.get(c) for c in cols]
                    for v in value]
            widths = [max(len(c), *(len(r[i]) for r in rows)) for i, c in enumerate(cols)]
            lines.append(pad + "  " + "  ".join(c.ljust(w) for c, w in zip(cols, widths)))
            for r in rows:
                lines.append(pad + "  " + "  ".join(x.ljust(w) for x, w in zip(r, widths)))
        else:
            shown = value if isinstance(value, str) else json.dumps(value)
            lines.append(f"{pad}{key}: {shown}")

    for k, v in data.items():
        emit(k, v, 0)
    return "\n".join(lines)


def render(payload, fmt: str) -> str:
    if isinstance(payload, checks.SuiteResult):
        if fmt == "json":
            return json.dumps(payload.to_json(), indent=2) + "\n"
        out = payload.line()
        if payload.report:
            out += "\n" + _table(payload.report)
        return out + "\n"
    if isinstance(payload, str):
        if fmt != "dot":
            raise UsageError("this command only produces DOT output with --format dot")
        return payload
    if fmt == "dot":
        raise UsageError("--format dot is only available for 'tree hasse'")
    if fmt == "table":
        return _table(payload) + "\n"
    return json.dumps(payload, indent=2) + "\n"


# ---------------------------------------------------------------------------
# parser


COMMANDS = {
    ("group", "info"): cmd_group_info,
    ("gset", "orbits"): cmd_gset_orbits,
    ("tree", "hasse"): cmd_tree_hasse,
    ("star", "count"): cmd_star_count,
    ("lambda", "classify"): cmd_lambda_classify,
    ("families", "enum"): cmd_families_enum,
    ("partition", "homology"): cmd_partition_homology,
    ("tomdieck",): cmd_tomdieck,
    ("higher-tomdieck",): cmd_higher_tomdieck,
    ("identity-layers",): cmd_identity_layers,
}


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--group", help="catalog name (C1..C6, V4, S3, D4, Q8) or group file")
    p.add_argument("--gset", help="G-set as a JSON file or inline JSON")
    p.add_argument("--subset", help="comma-separated points, '+' for the basepoint")
    p.add_argument("--subgroup", help="subgroup spec: 1, G, #i or <cycles>")
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--max-size", type=int)
    p.add_argument("--max-orbits", type=int)
    p.add_argument("--format", choices=("json", "dot", "table"))
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--out", help="write output to this file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="eqcalc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for key in COMMANDS:
        if len(key) == 1:
            p = sub.add_parser(key[0])
            if key[0] == "tomdieck":
                p.add_argument("--mode", choices=("conjugacy", "abelian-normal"), default="conjugacy")
            _common(p)
            p.set_defaults(func=COMMANDS[key])
    groups: dict[str, argparse._SubParsersAction] = {}
    for key, func in COMMANDS.items():
        if len(key) != 2:
            continue
        if key[0] not in groups:
            groups[key[0]] = sub.add_parser(key[0]).add_subparsers(dest="action", required=True)
        p = groups[key[0]].add_parser(key[1])
        _common(p)
        p.set_defaults(func=func)
    p = sub.add_parser("check")
    p.add_argument("lemma", choices=sorted(checks.SUITES))
    p.add_argument("--count", type=int, help="number of random cases")
    _common(p)
    p.set_defaults(func=cmd_check)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    fmt = args.format or ("table" if args.func is cmd_check else "json")
    try:
        payload, status = args.func(args)
        text = render(payload, fmt)
    except SizeBoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        partial = getattr(exc, "partial", None)
        if partial is not None and hasattr(partial, "to_json"):
            text = json.dumps(partial.to_json(), indent=2) + "\n"
            _write(text, args.out)
        return EXIT_INPUT
    except (UsageError, EqcalcError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    _write(text, args.out)
    return status


def _write(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


if __name__ == "__main__":
    sys.exit(main())
