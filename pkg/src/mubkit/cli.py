"""Command line surface: build, verify, classify, count, and print tables.

Exit codes: 0 success, 1 verification failure, 2 invalid arguments or
malformed input, 3 guard exceeded, 4 filter unsatisfied, 5 infeasible.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import random
import sys
from concurrent.futures import ThreadPoolExecutor
from itertools import combinations

from .complement import (
    Complement,
    complement_distribution,
    distribution_json_dict,
    dumps,
    field_spread,
    from_json_dict,
    purity_census,
    search_spreads,
    to_json_dict,
    verify_spread,
)
from .errors import GuardExceededError, InfeasibleError, MubkitError
from .groups import classify_basis, group_from_generators
from .hilbert import TOL, eigenbasis, eigenvalue_deviation, mub_check, qupit_purities
from .pauli import parse_pauli
from .stoich import count_solutions, enumerate_solutions, extremize, profile_table
from .zplinalg import SystemParams

_SAMPLE_BASES = 6


def _err(msg) -> None:
    print(f"error: {msg}", file=sys.stderr)


def _workers() -> int:
    base = min(4, os.cpu_count() or 1)
    env = os.environ.get("MUBKIT_THREADS")
    if env:
        try:
            base = min(base, max(1, int(env)))
        except ValueError:
            pass
    return base


def _emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        print(text, end="" if text.endswith("\n") else "\n")


def _render_grid(header: list[str], rows: list[list]) -> str:
    cells = [header] + [[str(v) for v in row] for row in rows]
    widths = [max(len(row[c]) for row in cells) for c in range(len(header))]
    lines = []
    for i, row in enumerate(cells):
        lines.append("  ".join(v.rjust(w) if j else v.ljust(w)
                               for j, (v, w) in enumerate(zip(row, widths))))
        if i == 0:
            lines.append("-" * len(lines[0]))
    return "\n".join(lines) + "\n"


def _csv_text(rows: list[list]) -> str:
    buf = io.StringIO()
    csv.writer(buf).writerows(rows)
    return buf.getvalue()


def _parse_filter(text: str | None) -> dict[str, int] | None:
    if not text:
        return None
    out: dict[str, int] = {}
    for part in text.split(","):
        name, _, value = part.partition("=")
        name = name.strip()
        if not name or not value.strip().isdigit():
            raise ValueError(f"bad filter clause {part!r}, expected LABEL=COUNT")
        out[name] = int(value)
    return out


# ---------------------------------------------------------------------------
# complement


def cmd_complement(args) -> int:
    params = SystemParams(args.p, args.n)
    if args.method == "field":
        comp = field_spread(params)
    else:
        filt = _parse_filter(args.filter)
        if args.symmetry_breaking == "auto":
            breaking = filt is None
        else:
            breaking = args.symmetry_breaking == "on"
        comp = None
        seen = 0
        for cand in search_spreads(params, symmetry_breaking=breaking):
            seen += 1
            if filt is not None:
                counts = complement_distribution(cand).counts
                if any(counts.get(k, 0) != v for k, v in filt.items()):
                    if args.limit is not None and seen >= args.limit:
                        break
                    continue
            comp = cand
            break
        if comp is None:
            target = "any spread" if filt is None else f"filter {args.filter}"
            _err(f"search exhausted ({seen} spreads examined) without matching {target}")
            return 4
    _emit(dumps(comp), args.out)
    return 0


# ---------------------------------------------------------------------------
# verify


def _check_lines(checks) -> tuple[list[dict], bool]:
    rows = []
    ok = True
    for name, passed, detail in checks:
        rows.append({"name": name, "passed": passed, "detail": detail})
        ok = ok and passed
    return rows, ok


def _hilbert_checks(comp: Complement, max_dim: int) -> list[tuple[str, bool, str]]:
    params = comp.params
    d = params.dim
    sampled = d > max_dim
    tag = " (sampled)" if sampled else ""
    out = []
    if sampled:
        rng = random.Random(0)
        idx = sorted(rng.sample(range(len(comp.classes)),
                                min(_SAMPLE_BASES, len(comp.classes))))
        bases = {}
        worst = 0.0
        fail = ""
        for i in idx:
            bases[i] = eigenbasis(comp.classes[i], check=False)
            dev = eigenvalue_deviation(bases[i], sample=20)
            worst = max(worst, dev)
            if dev > TOL and not fail:
                fail = f"basis {i} eigenvector deviation {dev:.3e}"
        out.append((f"hilbert-eigenvectors{tag}", not fail,
                    fail or f"max deviation {worst:.3e} over {len(idx)} bases"))
        pairs = list(combinations(idx, 2))
    else:
        bases = {}
        fail = ""
        for i, cls in enumerate(comp.classes):
            try:
                bases[i] = eigenbasis(cls, check=True)
            except MubkitError as exc:
                fail = f"basis {i}: {exc}"
                break
        out.append((f"hilbert-projectors{tag}", not fail,
                    fail or f"all {len(comp.classes)} bases rank-one and idempotent"))
        if fail:
            return out
        pairs = list(combinations(range(len(comp.classes)), 2))

    def overlap(pair):
        a, b = pair
        return mub_check(bases[a], bases[b])

    workers = _workers()
    if workers > 1 and len(pairs) > 8:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            devs = list(pool.map(overlap, pairs))
    else:
        devs = [overlap(pr) for pr in pairs]
    worst = max(devs, default=0.0)
    out.append((f"hilbert-overlaps{tag}", worst <= TOL,
                f"max | |<a|b>|^2 - 1/d | = {worst:.3e} over {len(pairs)} pairs"))

    worst = 0.0
    for basis in bases.values():
        pur = qupit_purities(basis.vectors, params)
        dev = float(abs(pur - pur.round()).max())
        worst = max(worst, dev)
    out.append((f"hilbert-purities{tag}", worst <= TOL,
                f"max distance of any qupit purity from {{0,1}} = {worst:.3e}"))
    return out


def cmd_verify(args) -> int:
    with open(args.infile, "r", encoding="utf-8") as fh:
        comp = from_json_dict(json.load(fh))
    checks = [(c.name, c.passed, c.detail) for c in verify_spread(comp).checks]
    try:
        census = purity_census(comp)
        p, n = comp.params.p, comp.params.n
        checks.append(("purity-census", True,
                       f"every qupit pure {p + 1} and entangled {p ** n - p} times, "
                       f"identity tally {census.identity_tally}"))
    except MubkitError as exc:
        checks.append(("purity-census", False, str(exc)))
    structural_ok = all(passed for _, passed, _ in checks)
    if structural_ok:
        checks.extend(_hilbert_checks(comp, args.hilbert_max_dim))
    else:
        checks.append(("hilbert", False, "skipped: structural checks failed"))
    rows, ok = _check_lines(checks)
    if args.format == "json":
        print(json.dumps({"ok": ok, "checks": rows}, indent=2, sort_keys=True))
    elif args.format == "csv":
        print(_csv_text([["name", "passed", "detail"]]
                        + [[r["name"], r["passed"], r["detail"]] for r in rows]), end="")
    else:
        for r in rows:
            print(f"{'PASS' if r['passed'] else 'FAIL'}  {r['name']}: {r['detail']}")
        print(f"{'OK' if ok else 'FAILED'}  {sum(r['passed'] for r in rows)}/{len(rows)} checks")
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# classify


def cmd_classify(args) -> int:
    if args.generators:
        if args.p is None:
            raise ValueError("--generators requires --p")
        tokens = [t.strip() for t in args.generators.split(";" if ";" in args.generators else ",")]
        first = tokens[0]
        n = first.count(",") + 1 if "," in first else len(first)
        params = SystemParams(args.p, n)
        ops = [parse_pauli(t, params) for t in tokens]
        mt = classify_basis(group_from_generators(params, ops))
        payload = {"label": mt.label,
                   "variant": [[q + 1 for q in block] for block in mt.pattern],
                   "profile": list(mt.profile)}
        if args.format == "json":
            print(json.dumps(payload, indent=2, sort_keys=True))
        elif args.format == "csv":
            print(_csv_text([["label", "variant", "profile"],
                             [mt.label, payload["variant"], payload["profile"]]]), end="")
        else:
            print(f"{mt.label}  variant={payload['variant']}  profile={tuple(mt.profile)}")
        return 0
    if not args.infile:
        raise ValueError("classify needs --in FILE or --generators")
    with open(args.infile, "r", encoding="utf-8") as fh:
        comp = from_json_dict(json.load(fh))
    dist = complement_distribution(comp)
    doc = distribution_json_dict(dist)
    if args.format == "json":
        print(json.dumps(doc, indent=2, sort_keys=True))
    elif args.format == "csv":
        print(_csv_text([["label", "count"]] + [[k, v] for k, v in doc["counts"].items()]),
              end="")
    else:
        for i, entry in enumerate(doc["per_basis"]):
            print(f"basis {i}: {entry['label']}  blocks={entry['variant']}")
        print("counts: " + ", ".join(f"{k}={v}" for k, v in doc["counts"].items()))
    return 0


# ---------------------------------------------------------------------------
# stoich


def _parse_fixes(items) -> dict[str, int]:
    out = {}
    for item in items or ():
        name, _, value = item.partition("=")
        if not name or not value.strip().lstrip("-").isdigit():
            raise ValueError(f"bad fix {item!r}, expected LABEL=COUNT")
        out[name.strip()] = int(value)
    return out


def cmd_stoich(args) -> int:
    params = SystemParams(args.p, args.n)
    table = profile_table(params)
    forbid = tuple(args.forbid or ())
    fixes = _parse_fixes(args.fix)
    if args.minimize and args.maximize:
        raise ValueError("choose one of --minimize/--maximize")
    if args.minimize or args.maximize:
        label = args.minimize or args.maximize
        direction = "min" if args.minimize else "max"
        sol = extremize(table, label, direction, forbid=forbid, fixes=fixes)
        if args.format == "json":
            print(json.dumps({"objective": {label: sol[label]}, "solution": sol},
                             indent=2, sort_keys=True))
        elif args.format == "csv":
            print(_csv_text([list(sol), list(sol.values())]), end="")
        else:
            print(f"{direction} {label} = {sol[label]}")
            print("  " + ", ".join(f"{k}={v}" for k, v in sol.items()))
        return 0
    if args.count_only:
        total = count_solutions(table, forbid=forbid, fixes=fixes)
        print(json.dumps({"count": total}) if args.format == "json" else total)
        return 0
    sols = enumerate_solutions(table, forbid=forbid, fixes=fixes)
    if args.format == "json":
        print(json.dumps({"count": len(sols), "solutions": sols}, indent=2, sort_keys=True))
    elif args.format == "csv":
        labels = [l for l in table.labels if l not in forbid]
        print(_csv_text([labels] + [[s[l] for l in labels] for s in sols]), end="")
    else:
        labels = [l for l in table.labels if l not in forbid]
        print(_render_grid(["label"] + [f"#{i}" for i in range(len(sols))],
                           [[l] + [s[l] for s in sols] for l in labels]), end="")
        print(f"{len(sols)} solutions")
    return 0


# ---------------------------------------------------------------------------
# tables


def _table_rows_n3(p: int) -> list[list]:
    params = SystemParams(p, 3)
    sols = enumerate_solutions(profile_table(params))
    sols.sort(key=lambda s: -s["PI"])
    return [[lab] + [s[lab] for s in sols] for lab in ("PI", "SB", "G3")]


def _profile_grid(p: int, n: int, ncols: int | None = None) -> tuple[list[str], list[list]]:
    table = profile_table(SystemParams(p, n))
    ncols = ncols or n
    header = ["type"] + [f"{k}-body" for k in range(1, ncols + 1)]
    rows = [[lab] + list(table.rows[lab][:ncols]) for lab in table.labels]
    rows.append(["all"] + list(table.totals[:ncols]))
    return header, rows


def _table_iv_column(p: int, standard: bool) -> dict[str, int]:
    params = SystemParams(p, 4)
    table = profile_table(params)
    if standard:
        fixes = {"PI": p + 1, "S2B": 0, "SG3": 0}
    else:
        fixes = {"PI": 0, "S2B": 0, "SG3": 4 * (p + 1)}
    sols = enumerate_solutions(table, fixes=fixes)
    if not sols:
        raise InfeasibleError(f"no distribution for the p={p} column")
    return min(sols, key=lambda s: (s.get("P4", 0), s.get("G4", 0), -s.get("BB", 0)))


def cmd_tables(args) -> int:
    which = args.which.upper()
    payload: dict = {"table": which}
    blocks: list[tuple[str, list[str], list[list]]] = []
    note = ""
    if which == "I":
        p = args.p or 2
        SystemParams(p, 3)
        rows = _table_rows_n3(p)
        header = ["type"] + [f"#{i}" for i in range(len(rows[0]) - 1)]
        blocks.append((f"I p={p}, 3 qupits", header, rows))
        payload.update(p=p, rows={r[0]: r[1:] for r in rows})
    elif which == "II":
        p = args.p or 2
        sub_rows = {}
        for sub, n in (("a", 2), ("b", 3), ("c", 4)):
            header, rows = _profile_grid(p, n)
            blocks.append((f"II({sub}) p={p}, {n} qupits", header, rows))
            sub_rows[f"II({sub})"] = {r[0]: r[1:] for r in rows}
        payload.update(p=p, blocks=sub_rows)
    elif which == "III":
        if args.p not in (None, 2):
            raise ValueError("table III is the p=2 grid")
        header, rows = _profile_grid(2, 4)
        blocks.append(("III p=2, 4 qubits", header, rows))
        payload.update(p=2, rows={r[0]: r[1:] for r in rows})
    elif which == "IV":
        ps = (args.p,) if args.p else (2, 3, 5)
        if any(p not in (2, 3, 5) for p in ps):
            raise ValueError("table IV covers p in {2, 3, 5}")
        cols = []
        for p in ps:
            cols.append((f"p={p} std", _table_iv_column(p, True)))
            cols.append((f"p={p} alt", _table_iv_column(p, False)))
        header = ["type"] + [name for name, _ in cols]
        rows = [[lab] + [sol.get(lab, "--") for _, sol in cols]
                for lab in ("PI", "SG3", "BB", "C4", "P4")]
        rows.append(["all"] + [sum(sol.values()) for _, sol in cols])
        blocks.append(("IV", header, rows))
        if any(p == 3 for p in ps):
            note = ("note: the p=3 alt column is sometimes quoted as BB=0, C4=66, "
                    "which violates 4 BB + 3 G4 + C4 = 72; the valid minimum is BB=2, C4=64")
        payload.update(columns={name: sol for name, sol in cols}, note=note)
    elif which == "V":
        p = args.p or 3
        if p not in (3, 5):
            raise ValueError("table V covers p in {3, 5}")
        header, rows = _profile_grid(p, 4, ncols=3)
        blocks.append((f"V p={p}, 4 qupits", header, rows))
        payload.update(p=p, rows={r[0]: r[1:] for r in rows})
    else:
        raise ValueError(f"unknown table {args.which!r}")
    text = "\n".join(f"{title}\n{_render_grid(h, r)}" for title, h, r in blocks)
    if note:
        text += note + "\n"
    return _print_table(args, payload, text, blocks)


def _print_table(args, payload, text, blocks) -> int:
    if args.format == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
    elif args.format == "csv":
        rows = []
        for _, header, grid in blocks:
            rows.append(header)
            rows.extend(grid)
        print(_csv_text(rows), end="")
    else:
        print(text, end="" if text.endswith("\n") else "\n")
    return 0


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mubkit",
        description="Construct, verify, and classify full sets of mutually unbiased bases.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_format(sp):
        sp.add_argument("--format", choices=("text", "json", "csv"), default="text")

    sp = sub.add_parser("complement", help="build a full complement and write it as JSON")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--method", choices=("field", "search"), default="field")
    sp.add_argument("--limit", type=int, default=None,
                    help="search: maximum spreads to examine before giving up")
    sp.add_argument("--filter", default=None,
                    help="search: exact type counts, e.g. PI=0 or PI=1,SB=6")
    sp.add_argument("--symmetry-breaking", choices=("auto", "on", "off"), default="auto",
                    help="search pruning; auto = on unless a filter is given")
    sp.add_argument("--out", default=None, help="output file (default stdout)")
    sp.set_defaults(func=cmd_complement)

    sp = sub.add_parser("verify", help="run all checks on a complement file")
    sp.add_argument("--in", dest="infile", required=True)
    sp.add_argument("--hilbert-max-dim", type=int, default=81,
                    help="full matrix checks up to this dimension, sampled above")
    add_format(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("classify", help="classify a complement file or one generator set")
    sp.add_argument("--in", dest="infile", default=None)
    sp.add_argument("--generators", default=None,
                    help="comma separated operators, e.g. XZXI,ZXIX,XIXZ,IXZX")
    sp.add_argument("--p", type=int, default=None)
    add_format(sp)
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("stoich", help="enumerate or extremize distribution counts")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--forbid", action="append", default=None, metavar="LABEL")
    sp.add_argument("--fix", action="append", default=None, metavar="LABEL=K")
    sp.add_argument("--count-only", action="store_true")
    sp.add_argument("--minimize", default=None, metavar="LABEL")
    sp.add_argument("--maximize", default=None, metavar="LABEL")
    add_format(sp)
    sp.set_defaults(func=cmd_stoich)

    sp = sub.add_parser("tables", help="regenerate the reference tables")
    sp.add_argument("--which", required=True, help="one of I, II, III, IV, V")
    sp.add_argument("--p", type=int, default=None)
    add_format(sp)
    sp.set_defaults(func=cmd_tables)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except GuardExceededError as exc:
        _err(exc)
        return 3
    except InfeasibleError as exc:
        _err(exc)
        return 5
    except (MubkitError, ValueError, OSError, json.JSONDecodeError) as exc:
        _err(exc)
        return 2


if __name__ == "__main__":
    sys.exit(main())
