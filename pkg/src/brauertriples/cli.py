"""Command line front end.

Exit codes: 0 verified/computed, 2 refuted or failure report, 1 usage or resource error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np
from sympy import isprime

from .builtins import builtin, builtin_names
from .chartab import character_table, table_to_json, table_to_tsv
from .clifford import PreconditionError, make_triple, rebase, rebase_character, stabilizer_of_character
from .fakegal import (CandidateRecipe, FakeGaloisContext, FakeGaloisMap, MApproxWitness, check_m_approx,
                      orbit_stabilizer_cyclicity, verify_witness)
from .goursat import check_corollary_s4
from .groupio import GroupFormatError, load_source, resolve_subgroup
from .grp import ResourceError, StructureError
from .modrep import brauer_table_json, brauer_table_tsv, decomposition_matrix, irr_brauer

OK, USAGE, REFUTED = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(USAGE)


def _emit(args, obj, tsv: str | None = None):
    text = tsv if (args.format == "tsv" and tsv is not None) else json.dumps(obj, indent=2) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _ell(value: str) -> int:
    ell = int(value)
    if not isprime(ell):
        raise argparse.ArgumentTypeError(f"{ell} is not a prime")
    return ell


def _check_m(ms, N):
    for m in ms:
        if math.gcd(m, N.order) != 1:
            raise PreconditionError(f"the (m, |N|) = 1 hypothesis fails for m = {m} and |N| = {N.order}")


# ---------------------------------------------------------------------------
# subcommands


def cmd_classes(args):
    G = load_source(args.group).group
    rows = [{"index": c.index, "representative": [int(x) for x in G.perm(c.representative)], "size": c.size,
             "element_order": c.element_order} for c in G.classes]
    tsv = "index\trepresentative\tsize\telement_order\n" + "".join(
        f"{r['index']}\t{' '.join(map(str, r['representative']))}\t{r['size']}\t{r['element_order']}\n" for r in rows)
    _emit(args, {"group": G.name, "order": G.order, "classes": rows}, tsv)
    return OK


def cmd_chartab(args):
    G = load_source(args.group).group
    rows = character_table(G)
    _emit(args, table_to_json(G, rows), table_to_tsv(G, rows))
    return OK


def cmd_ibr(args):
    G = load_source(args.group).group
    ibr = irr_brauer(G, args.ell, args.seed)
    _emit(args, brauer_table_json(G, args.ell, ibr), brauer_table_tsv(G, args.ell, ibr))
    return OK


def cmd_decmat(args):
    G = load_source(args.group).group
    D = decomposition_matrix(G, args.ell, args.seed)
    rank = int(np.linalg.matrix_rank(D.astype(float))) if D.size else 0
    obj = {"group": G.name, "ell": args.ell, "matrix": D.tolist(), "rows": D.shape[0], "columns": D.shape[1],
           "nonnegative": bool(np.all(D >= 0)), "full_column_rank": rank == D.shape[1]}
    tsv = "\n".join("\t".join(str(int(x)) for x in row) for row in D) + "\n"
    _emit(args, obj, tsv)
    return OK


def cmd_goursat_audit(args):
    reports = []
    for a in args.a:
        rep = check_corollary_s4(a).to_json()
        rep.pop("seconds", None)
        if not args.details:
            rep.pop("subgroup_reports", None)
        reports.append(rep)
    ok = all(not r["failures"] and not r["v4_failures"] for r in reports)
    _emit(args, {"reports": reports, "all_passed": ok})
    return OK if ok else REFUTED


def _triple_pair(inst, N, ell, theta, target, seed):
    G = inst.group
    ibr = irr_brauer(N, ell, seed)
    for i in (theta, target):
        if not 0 <= i < len(ibr):
            raise UsageError(f"character index {i} out of range (IBr(N) has {len(ibr)} members)")
    Gt = stabilizer_of_character(G, ibr[theta])
    Nt = rebase(N, Gt)
    T = make_triple(Gt, Nt, rebase_character(ibr[theta], Nt))
    T2 = make_triple(Gt, Nt, rebase_character(ibr[target], Nt))
    if T2.G is not T.G:
        raise PreconditionError("the target character is not stable under the stabiliser of theta")
    return T, T2


def cmd_check_approx(args):
    inst = load_source(args.group)
    N = resolve_subgroup(inst, args.normal)
    _check_m(args.m, N)
    T, T2 = _triple_pair(inst, N, args.ell, args.theta, args.target, args.seed)
    results = []
    status = OK
    for m in args.m:
        res = check_m_approx(T, T2, m, strict=not args.lenient)
        entry = {"m": m, "status": res.status}
        if isinstance(res, MApproxWitness):
            entry.update(res.to_json())
            entry["reverified"] = verify_witness(res, T.rep, T2.rep, T.G, T.N).ok
            if not entry["reverified"]:
                status = REFUTED
        else:
            entry.update(res.to_json())
            status = REFUTED
        results.append(entry)
    _emit(args, {"group": inst.group.name, "normal": N.name, "ell": args.ell, "theta": args.theta,
                 "target": args.target, "stabilizer_order": T.G.order, "results": results})
    return status


def parse_recipe(text: str):
    if text in ("auto", "search"):
        return text
    if text in ("identity", "bar", "sigma", "bar-sigma"):
        return CandidateRecipe(text)
    if text.startswith("piecewise-r"):
        r = int(text.split(":", 1)[1]) if ":" in text else None
        return CandidateRecipe("piecewise-r", r=r)
    if text.startswith("k-pair:"):
        k1, k2 = (int(x) for x in text.split(":", 1)[1].split(","))
        return CandidateRecipe("k-pair", k=(k1, k2))
    if text.startswith("table:"):
        images = [int(x) for x in text.split(":", 1)[1].split(",")]
        return CandidateRecipe("table", table=dict(enumerate(images)))
    raise UsageError(f"unknown recipe {text!r}")


def cmd_fake_galois(args):
    inst = load_source(args.group)
    G = inst.group
    N = resolve_subgroup(inst, args.normal)
    _check_m(args.m, N)
    recipe = parse_recipe(args.recipe)
    ctx = FakeGaloisContext(G, N, args.ell, args.seed)
    from .fakegal import verify_fake_galois

    verdicts = []
    status = OK
    for m in args.m:
        res = verify_fake_galois(G, N, args.ell, m, recipe, strict=not args.lenient, jobs=args.jobs,
                                 all_theta=args.all_theta, use_shortcut=not args.no_shortcut, context=ctx)
        verdicts.append(res.to_json())
        if not isinstance(res, FakeGaloisMap):
            status = REFUTED
    _emit(args, verdicts[0] if len(verdicts) == 1 else {"verdicts": verdicts})
    return status


def cmd_stab_cyclicity(args):
    inst = load_source(args.group)
    Z = inst.group
    rep = orbit_stabilizer_cyclicity(Z, inst.automorphisms)
    obj = rep.to_json()
    tsv = "index\tvalues\ttrivial\tstabilizer_order\tcyclic\n" + "".join(
        f"{r.index}\t{','.join(map(str, r.values))}\t{int(r.trivial)}\t{r.stabilizer_order}\t{int(r.cyclic)}\n"
        for r in rep.rows)
    _emit(args, obj, tsv)
    return OK if rep.nontrivial_all_cyclic else REFUTED


def cmd_builtins(args):
    rows = [{"name": n, "order": builtin(n).group.order} for n in builtin_names()]
    _emit(args, {"builtins": rows}, "".join(f"{r['name']}\t{r['order']}\n" for r in rows))
    return OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "tsv"], default="json")
    common.add_argument("--seed", type=int, default=0, help="seed for the randomised module splitting")
    common.add_argument("--jobs", type=int, default=1, help="worker threads for per-orbit checks")
    common.add_argument("--out", help="write the report to this file instead of stdout")

    p = _Parser(prog="brauertriples", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def group_cmd(name, fn, helptext, ell=False):
        sp = sub.add_parser(name, parents=[common], help=helptext)
        sp.add_argument("--group", required=True, help="builtin:NAME or a path to a v1 group JSON file")
        if ell:
            sp.add_argument("--ell", type=_ell, required=True)
        sp.set_defaults(func=fn)
        return sp

    group_cmd("classes", cmd_classes, "conjugacy classes")
    group_cmd("chartab", cmd_chartab, "ordinary character table")
    group_cmd("ibr", cmd_ibr, "irreducible Brauer characters", ell=True)
    group_cmd("decmat", cmd_decmat, "decomposition matrix", ell=True)

    sp = sub.add_parser("goursat-audit", parents=[common], help="subgroups of S4 x Ca as semidirect products")
    sp.add_argument("--a", type=int, nargs="+", default=[1, 2, 3, 4, 5, 6])
    sp.add_argument("--details", action="store_true", help="include one row per subgroup")
    sp.set_defaults(func=cmd_goursat_audit)

    sp = group_cmd("check-approx", cmd_check_approx, "decide the (m)-relation between two triples", ell=True)
    sp.add_argument("--normal", required=True)
    sp.add_argument("--theta", type=int, required=True, help="index into IBr(N)")
    sp.add_argument("--target", type=int, help="index into IBr(N) (default: theta)")
    sp.add_argument("--m", type=int, nargs="+", required=True)
    sp.add_argument("--lenient", action="store_true", help="drop the order-coprime-to-m condition")

    sp = group_cmd("fake-galois", cmd_fake_galois, "verify a fake m-th Galois action on IBr(N)", ell=True)
    sp.add_argument("--normal", required=True)
    sp.add_argument("--m", type=int, nargs="+", required=True)
    sp.add_argument("--recipe", default="auto",
                    help="auto | search | identity | bar | sigma | bar-sigma | piecewise-r[:r] | k-pair:k1,k2 | "
                         "table:i0,i1,...")
    sp.add_argument("--lenient", action="store_true")
    sp.add_argument("--all-theta", action="store_true", help="check every theta, not one per orbit")
    sp.add_argument("--no-shortcut", action="store_true", help="always use the linear solver")

    group_cmd("stab-cyclicity", cmd_stab_cyclicity, "stabilisers of linear characters under automorphisms")

    sp = sub.add_parser("builtins", parents=[common], help="list builtin groups")
    sp.set_defaults(func=cmd_builtins)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "target", "absent") is None:
        args.target = args.theta
    try:
        return args.func(args)
    except (UsageError, GroupFormatError, StructureError, PreconditionError, FileNotFoundError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return USAGE
    except ResourceError as exc:
        sys.stderr.write(f"resource error: {exc}\n")
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
