"""Command-line front end (``codewidth``).

Exit status: 0 on success, 1 when a verification fails, 2 on usage or input
errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import random
import sys
from dataclasses import dataclass, field
from typing import Any, Sequence

from . import codes, trellis, treedecomp, verify
from .errors import CodeFileError, InvalidParamsError, TooLargeError

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class Output:
    """One command result, renderable as json, csv or text."""

    payload: Any
    header: list[str]
    rows: list[list[Any]]
    text: str
    failed: bool = False
    timing: dict[str, float] = field(default_factory=dict)


def emit_report(out: Output, fmt: str, path: str | None = None) -> None:
    if fmt == "json":
        body = json.dumps(out.payload, sort_keys=True, indent=2) + "\n"
    elif fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(out.header)
        w.writerows(out.rows)
        body = buf.getvalue()
    elif fmt == "text":
        body = out.text if out.text.endswith("\n") else out.text + "\n"
    else:
        raise UsageError(f"unknown format {fmt!r}")
    if path is None or path == "-":
        sys.stdout.write(body)
        return
    try:
        with open(path, "w") as fh:
            fh.write(body)
    except OSError as exc:
        raise OSError(f"cannot write report to {path}: {exc.strerror}") from exc


def _compact(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


# -- code sources ---------------------------------------------------------

def _load_code(args) -> tuple[codes.LinearCode, dict[str, Any]]:
    if args.source == "rm":
        return codes.reed_muller(args.r, args.m), {"family": "rm", "r": args.r, "m": args.m}
    if args.source == "rs":
        return codes.reed_solomon(args.n, args.k, args.p), {"family": "rs", "n": args.n, "k": args.k, "p": args.p}
    try:
        return codes.load_code(args.path), {"family": "file", "path": args.path}
    except FileNotFoundError:
        raise UsageError(f"code file not found: {args.path}") from None
    except OSError as exc:
        raise UsageError(f"cannot read code file {args.path}: {exc.strerror}") from None


def _code_json(C: codes.LinearCode) -> dict[str, int]:
    return {"q": C.q, "n": C.n, "k": C.k}


def _workers(args) -> int:
    return args.threads if args.threads else (os.cpu_count() or 1)


# -- commands -------------------------------------------------------------

def cmd_widths(args) -> Output:
    C, params = _load_code(args)
    rep = treedecomp.width_report(C, workers=_workers(args), force=args.force)
    tree = treedecomp.tree_to_string(rep.witness_tree)
    order = list(rep.witness_order.perm)
    payload = {
        "code": _code_json(C), "command": "widths", "params": params,
        "result": {"treewidth": rep.treewidth, "trelliswidth": rep.trelliswidth,
                   "node_kappas": {str(v): kv for v, kv in rep.node_kappas.items()}},
        "witnesses": {"tree": tree, "order": order},
    }
    text = (f"code        (q={C.q}, n={C.n}, k={C.k})\n"
            f"treewidth   {rep.treewidth}  tree  {tree}\n"
            f"trelliswidth {rep.trelliswidth} order {' '.join(map(str, order))}")
    return Output(payload, ["treewidth", "trelliswidth", "tree", "order"],
                  [[rep.treewidth, rep.trelliswidth, tree, " ".join(map(str, order))]], text)


def _parse_order(spec: str | None, n: int) -> trellis.CoordinateOrder | None:
    if spec is None:
        return None
    try:
        perm = [int(x) for x in spec.replace(",", " ").split()]
        order = trellis.CoordinateOrder.of(perm)
    except ValueError as exc:
        raise UsageError(f"bad --order: {exc}") from None
    if order.n != n:
        raise UsageError(f"--order has {order.n} entries, code length is {n}")
    return order


def _aligned_profile(p: trellis.TrellisProfile) -> str:
    """States and branches interleaved so each branch sits between its two states."""
    cells = []
    for i, s in enumerate(p.state_dims):
        cells.append((str(s), ""))
        if i < len(p.branch_dims):
            cells.append(("", str(p.branch_dims[i])))
    width = max(len(a or b) for a, b in cells)
    top = " ".join(a.rjust(width) for a, _ in cells)
    bottom = " ".join(b.rjust(width) for _, b in cells)
    return f"state  {top.rstrip()}\nbranch {bottom.rstrip()}"


def cmd_trellis_profile(args) -> Output:
    C, params = _load_code(args)
    order = _parse_order(args.order, C.n)
    prof = trellis.trellis_profile(C, order)
    params = {**params, "order": list(prof.order.perm)}
    payload = {
        "code": _code_json(C), "command": "trellis-profile", "params": params,
        "result": {"state_dims": list(prof.state_dims), "branch_dims": list(prof.branch_dims),
                   "state_complexity": prof.state_complexity, "branch_complexity": prof.branch_complexity},
        "witnesses": {"order": list(prof.order.perm)},
    }
    rows = [[i, s, prof.branch_dims[i] if i < C.n else ""] for i, s in enumerate(prof.state_dims)]
    return Output(payload, ["depth", "state", "branch"], rows, _aligned_profile(prof))


def _profile_method(args, C) -> str:
    if args.method == "closed" and args.source == "file":
        raise UsageError("--method closed needs an rm or rs code")
    return args.method


def cmd_ghw(args) -> Output:
    C, params = _load_code(args)
    method = _profile_method(args, C)
    if method == "closed":
        prof = codes.ghw_rm_profile(args.r, args.m) if args.source == "rm" else codes.ghw_mds(args.n, args.k)
    else:
        prof = codes.ghw_bruteforce(C, force=args.force)
    params = {**params, "method": method}
    payload = {"code": _code_json(C), "command": "ghw", "params": params,
               "result": {"d": list(prof.d)}, "witnesses": {}}
    rows = [[u, d] for u, d in enumerate(prof.d, 1)]
    text = "\n".join(f"d_{u} = {d}" for u, d in rows)
    return Output(payload, ["u", "d_u"], rows, text)


def cmd_u_profile(args) -> Output:
    C, params = _load_code(args)
    method = _profile_method(args, C)
    if method == "closed":
        U = trellis.rm_u_profile(args.r, args.m) if args.source == "rm" else codes.u_mds(args.n, args.k)
    else:
        U = codes.u_profile_bruteforce(C, force=args.force)
    params = {**params, "method": method}
    payload = {"code": _code_json(C), "command": "u-profile", "params": params,
               "result": {"U": list(U.u)}, "witnesses": {}}
    rows = [[s, x] for s, x in enumerate(U.u)]
    text = "\n".join(f"U_{s} = {x}" for s, x in rows)
    return Output(payload, ["s", "U_s"], rows, text)


def _require_exhaustive(args) -> None:
    if not args.exhaustive:
        raise UsageError(f"{args.command} only has an exhaustive engine; pass --exhaustive")


def cmd_treewidth(args) -> Output:
    _require_exhaustive(args)
    C, params = _load_code(args)
    value, tree = treedecomp.treewidth_exhaustive(C, workers=_workers(args), force=args.force)
    s = treedecomp.tree_to_string(tree)
    payload = {"code": _code_json(C), "command": "treewidth", "params": params,
               "result": {"treewidth": value}, "witnesses": {"tree": s}}
    return Output(payload, ["treewidth", "tree"], [[value, s]], f"treewidth {value}  tree {s}")


def cmd_trelliswidth(args) -> Output:
    _require_exhaustive(args)
    C, params = _load_code(args)
    value, order = trellis.trelliswidth_exhaustive(C, force=args.force)
    perm = list(order.perm)
    payload = {"code": _code_json(C), "command": "trelliswidth", "params": params,
               "result": {"trelliswidth": value}, "witnesses": {"order": perm}}
    return Output(payload, ["trelliswidth", "order"], [[value, " ".join(map(str, perm))]],
                  f"trelliswidth {value}  order {' '.join(map(str, perm))}")


def cmd_separators(args) -> Output:
    if args.tree is not None:
        try:
            T = treedecomp.tree_from_string(args.tree)
        except ValueError as exc:
            raise UsageError(f"bad --tree: {exc}") from None
        params: dict[str, Any] = {"tree": args.tree}
    else:
        T = treedecomp.random_cubic_tree(args.random, random.Random(args.seed))
        params = {"random": args.random, "seed": args.seed}
    if T.num_leaves < 3:
        raise UsageError("separators need a cubic tree with at least 3 leaves")
    j = treedecomp.jordan_separator(T)
    js = treedecomp.node_split(T, j)
    result: dict[str, Any] = {"jordan": {"node": j, "counts": list(js.counts)}, "vstar": None}
    rows = [["jordan", j, *js.counts]]
    if T.num_leaves >= 4:
        v, vs = treedecomp.edge_separator_vstar(T)
        result["vstar"] = {"node": v, "counts": list(vs.counts)}
        rows.append(["vstar", v, *vs.counts])
    payload = {"command": "separators", "params": params, "result": result,
               "witnesses": {"tree": treedecomp.tree_to_string(T)}}
    text = "\n".join(f"{kind:7s} node {node}  n1,n2,n3 = {a},{b},{c}" for kind, node, a, b, c in rows)
    if result["vstar"] is None:
        text += "\nvstar   none (no qualifying node on 3 leaves)"
    return Output(payload, ["kind", "node", "n1", "n2", "n3"], rows, text)


def _report_key(r: verify.VerificationReport) -> tuple:
    nums = tuple((k, v) for k, v in sorted(r.params.items()) if isinstance(v, int))
    return r.check, nums, _compact(r.params)


def _verify_output(name: str, reports: list[verify.VerificationReport], timing: bool) -> Output:
    reports = sorted(reports, key=_report_key)
    payload = [r.to_dict(timing) for r in reports]
    header = ["check", "params", "pass", "cases", "counterexample"] + (["millis"] if timing else [])
    rows = []
    lines = []
    for r in reports:
        row = [r.check, _compact(r.params), "pass" if r.passed else "FAIL", r.cases,
               _compact(r.counterexample) if r.counterexample else ""]
        if timing:
            row.append(f"{r.millis:.3f}")
        rows.append(row)
        line = f"{'PASS' if r.passed else 'FAIL'}  {r.check:14s} {_compact(r.params)}"
        if timing:
            line += f"  {r.millis:.1f} ms"
        if r.counterexample:
            line += f"\n      counterexample: {_compact(r.counterexample)}"
        lines.append(line)
    failed = not all(r.passed for r in reports)
    return Output(payload, header, rows, "\n".join(lines), failed=failed)


def cmd_verify(args) -> Output:
    which = args.check
    w = _workers(args)
    if which == "mds":
        reports = [verify.check_mds_theorem(n, k, args.p, workers=w)
                   for n in range(1, args.max_n + 1) for k in range(1, n + 1)]
        reports += [verify.check_ghw_mds(n, k, args.p) for n in range(1, args.max_n + 1) for k in range(1, n + 1)]
    elif which == "rm":
        reports = [verify.check_rm_theorem(r, m, workers=w) for m in range(1, args.max_m + 1) for r in range(m + 1)]
        reports += [verify.check_lemma_u_ineq(r, m) for m in range(2, min(args.max_m, 4) + 1) for r in range(1, m)]
    elif which == "appendix-b":
        reports = [verify.check_appendix_b(m) for m in range(2, args.max_m + 1)]
    elif which == "appendix-c":
        reports = verify.sweep_appendix_c(args.max_m)
    elif which == "srm":
        reports = [verify.check_srm_identity(args.max_m), verify.check_tau_sigma_gap(args.max_m)]
    elif which == "prop1":
        C, params = _load_code(args)
        reports = [verify.check_prop1_hypothesis(C, force=args.force, label=params)]
    elif which == "std-order":
        reports = [verify.check_std_bit_order(r, m) for m in range(1, args.max_m + 1) for r in range(m + 1)]
    else:  # pragma: no cover - argparse restricts the choices
        raise UsageError(f"unknown check {which}")
    return _verify_output(which, reports, args.timing)


# -- parser ---------------------------------------------------------------

def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--format", choices=["json", "csv", "text"], default="json")
    p.add_argument("--output", "-o", help="write the report here instead of stdout")
    p.add_argument("--force", action="store_true", help="run past the size gates of exhaustive searches")
    p.add_argument("--threads", type=int, default=None, help="worker processes for treewidth search")
    p.add_argument("--timing", action="store_true", help="add wall-clock timings to verification reports")
    return p


def _add_code_sources(parser: argparse.ArgumentParser, parents: list[argparse.ArgumentParser]) -> None:
    src = parser.add_subparsers(dest="source", metavar="{rm,rs,file}", required=True)
    rm = src.add_parser("rm", parents=parents, help="Reed-Muller code RM(r, m) in standard bit order")
    rm.add_argument("--r", type=int, required=True)
    rm.add_argument("--m", type=int, required=True)
    rs = src.add_parser("rs", parents=parents, help="Reed-Solomon code over GF(p), points 0..n-1")
    rs.add_argument("--n", type=int, required=True)
    rs.add_argument("--k", type=int, required=True)
    rs.add_argument("--p", type=int, required=True)
    fl = src.add_parser("file", parents=parents, help="code file: 'q n k' then k rows of n symbols")
    fl.add_argument("path")


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="codewidth", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("widths", help="exhaustive treewidth and trelliswidth with witnesses")
    _add_code_sources(p, [common])
    p.set_defaults(func=cmd_widths)

    order = argparse.ArgumentParser(add_help=False)
    order.add_argument("--order", help="coordinate order, e.g. '0,2,1,3' (default: identity)")
    p = sub.add_parser("trellis-profile", help="minimal trellis state/branch dimensions for one order")
    _add_code_sources(p, [common, order])
    p.set_defaults(func=cmd_trellis_profile)

    method = argparse.ArgumentParser(add_help=False)
    method.add_argument("--method", choices=["bruteforce", "closed"], default="bruteforce")
    p = sub.add_parser("ghw", help="generalized Hamming weights d_1..d_k")
    _add_code_sources(p, [common, method])
    p.set_defaults(func=cmd_ghw)
    p = sub.add_parser("u-profile", help="largest subcode dimension per support size, U_0..U_n")
    _add_code_sources(p, [common, method])
    p.set_defaults(func=cmd_u_profile)

    exh = argparse.ArgumentParser(add_help=False)
    exh.add_argument("--exhaustive", action="store_true", help="search every tree / order (the only engine)")
    p = sub.add_parser("treewidth", help="least constraint complexity over cubic trees")
    _add_code_sources(p, [common, exh])
    p.set_defaults(func=cmd_treewidth)
    p = sub.add_parser("trelliswidth", help="least branch complexity over coordinate orders")
    _add_code_sources(p, [common, exh])
    p.set_defaults(func=cmd_trelliswidth)

    p = sub.add_parser("separators", parents=[common], help="Jordan node and edge-separator node of a cubic tree")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--tree", help="nested-parenthesis tree, e.g. '((0,1),2,3)'")
    g.add_argument("--random", type=int, metavar="N", help="uniform random cubic tree on N leaves")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_separators)

    p = sub.add_parser("verify", help="run a verification suite and report pass or fail with counterexamples")
    checks = p.add_subparsers(dest="check", required=True)
    c = checks.add_parser("mds", parents=[common], help="treewidth = trelliswidth = min{k, n-k+1} for RS codes")
    c.add_argument("--max-n", type=int, default=7)
    c.add_argument("--p", type=int, default=11)
    c = checks.add_parser("rm", parents=[common], help="treewidth = tau(r, m); closed-form consistency")
    c.add_argument("--max-m", type=int, default=3)
    c = checks.add_parser("appendix-b", parents=[common], help="weight-vector inequality, m = 2..max-m")
    c.add_argument("--max-m", type=int, default=12)
    c = checks.add_parser("appendix-c", parents=[common], help="U_alpha, U_beta closed forms and Wei hierarchy")
    c.add_argument("--max-m", type=int, default=16)
    c = checks.add_parser("srm", parents=[common], help="k - tau sum identity and tau - sigma gap")
    c.add_argument("--max-m", type=int, default=24)
    c = checks.add_parser("std-order", parents=[common], help="standard bit order attains U_s, m <= 4")
    c.add_argument("--max-m", type=int, default=4)
    c = checks.add_parser("prop1", help="separator hypothesis over all cubic trees for one code")
    _add_code_sources(c, [common])
    p.set_defaults(func=cmd_verify)
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    if getattr(args, "threads", None) is not None and args.threads < 1:
        print("codewidth: --threads must be at least 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        out = args.func(args)
        emit_report(out, args.format, args.output)
    except (UsageError, TooLargeError, InvalidParamsError, CodeFileError, OSError) as exc:
        print(f"codewidth: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if out.failed:
        for row in out.rows:
            if row[2] == "FAIL":
                print(f"codewidth: {row[0]} failed for {row[1]}: {row[4]}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def main() -> None:
    sys.exit(run())
