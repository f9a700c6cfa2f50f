"""Command-line interface.

Subcommands:
    homology      module file -> homology dimensions
    hirsch-brown  complex file -> minimal twisted model JSON
    carlsson      module file -> minimal twisted model JSON
    rank-check    module file or --random r m seed -> rank report JSON
    operad-basis  n r -> path-sequence basis table
    operad-koszul n a r -> weight/arity bar-homology table (TSV)
    euler         complex file -> Euler-characteristic identity report

Exit codes: 0 success, 1 validation failure, 2 window failure,
3 internal assertion failure (a mathematically guaranteed fact failed,
i.e. an artifact bug).
"""

from __future__ import annotations

import argparse
import json
import sys

from .dgmodules import (
    DgSModule,
    euler_identity_check,
    homology_of_lambda_module,
    homology_of_s_module,
    lambda_module_from_json_dict,
)
from .errors import InternalCheckError, ValidationError, WindowError
from .gcomplex import parse_complex
from .models import carlsson_minimal, minimal_hirsch_brown
from .operads import WtildeTable, bar_homology, wtilde_basis
from .ranklab import (
    default_window,
    generate_semifree,
    rank_check,
    run_rank_batch,
)


def _dump(data, as_json):
    if as_json:
        return json.dumps(data, sort_keys=True, indent=2)
    if isinstance(data, str):
        return data
    return json.dumps(data, sort_keys=True, indent=2)


def _load_module_file(path):
    with open(path) as fh:
        data = json.load(fh)
    if "action" in data:
        return lambda_module_from_json_dict(data), "lambda"
    return DgSModule.from_json_dict(data), "s"


def cmd_homology(args):
    module, kind = _load_module_file(args.file)
    if kind == "lambda":
        hom = homology_of_lambda_module(module)
    else:
        if args.window is None:
            raise WindowError("--window LO HI is required for S-module input")
        hom = homology_of_s_module(module, args.window[0], args.window[1])
    dims = {str(n): hom.dim(n) for n in hom.degrees() if hom.dim(n)}
    out = {"kind": kind, "dims": dims, "total": hom.total_dim(),
           "parity": hom.parity_class()}
    print(_dump(out if args.json else
                "\n".join(f"H_{n} = {d}" for n, d in sorted(dims.items(), key=lambda t: int(t[0]))) or "H = 0",
                args.json))
    return 0


def cmd_hirsch_brown(args):
    x = parse_complex(args.complex)
    module, cert = x.to_lambda_module()
    cap = args.window[1] if args.window else None
    model = minimal_hirsch_brown(module, weight_cap=cap, cert=cert)
    print(model.to_json())
    return 0


def cmd_carlsson(args):
    with open(args.file) as fh:
        module = DgSModule.from_json_dict(json.load(fh))
    if args.window is None:
        lo, hi = default_window(module)
    else:
        lo, hi = args.window
    model = carlsson_minimal(module, lo, hi)
    print(model.to_json())
    return 0


def cmd_rank_check(args):
    if args.random:
        r, m, seed = args.random
        if args.count > 1:
            specs = [
                {"kind": "random", "r": r, "m": m, "seed": seed + k,
                 "spread": args.spread, "window": args.window}
                for k in range(args.count)
            ]
            results = run_rank_batch(specs, jobs=args.jobs)
            print(json.dumps(results, sort_keys=True, indent=2))
            return 0
        module = generate_semifree(r, m, args.spread, seed)
        label, seed_out = f"random-r{r}-s{seed}", seed
    else:
        if not args.file:
            raise ValidationError("need a module file or --random R M SEED")
        with open(args.file) as fh:
            module = DgSModule.from_json_dict(json.load(fh))
        label, seed_out = args.file, None
    lo, hi = args.window if args.window else default_window(module)
    report = rank_check(module, lo, hi, instance=label, seed=seed_out)
    print(json.dumps(report.to_json_dict(), sort_keys=True, indent=2))
    if report.verdict == "invalid":
        return 1
    if report.verdict == "window failure":
        return 2
    return 0


def cmd_operad_basis(args):
    basis = wtilde_basis(args.n, args.r)
    if args.json:
        print(json.dumps([str(ps) for ps in basis], indent=2))
    else:
        for ps in basis:
            print(ps)
    return 0


def cmd_operad_koszul(args):
    table = WtildeTable(args.r, max_arity=max(args.a, args.n + 1))
    rows = []
    for w in range(1, args.n + 1):
        for a in range(1, args.a + 1):
            dim_basis = sum(1 for ps in wtilde_basis(a, args.r) if ps.weight == w)
            cell = bar_homology(table, w, a)
            rows.append((w, a, dim_basis, cell.koszul_dim()))
    if args.json:
        print(json.dumps(
            [{"weight": w, "arity": a, "dim_basis": db, "dim_K": dk}
             for w, a, db, dk in rows], indent=2, sort_keys=True))
    else:
        print("weight\tarity\tdim_basis\tdim_K")
        for row in rows:
            print("\t".join(str(v) for v in row))
    return 0


def cmd_euler(args):
    x = parse_complex(args.complex)
    module, cert = x.to_lambda_module()
    report = euler_identity_check(module, cert)
    print(json.dumps(report, sort_keys=True, indent=2))
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="dgf2",
        description="GF(2) homological algebra: minimal twisted models, "
                    "equivariant complexes, rank bounds, operad calculus.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--window", type=int, nargs=2, metavar=("LO", "HI"))
        p.add_argument("--json", action="store_true", default=True)
        p.add_argument("--text", dest="json", action="store_false")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("homology", help="homology dimensions of a module file")
    p.add_argument("file")
    add_common(p)
    p.set_defaults(func=cmd_homology)

    p = sub.add_parser("hirsch-brown", help="minimal model of a free complex")
    p.add_argument("--complex", required=True)
    add_common(p)
    p.set_defaults(func=cmd_hirsch_brown)

    p = sub.add_parser("carlsson", help="minimal model of a dg-S-module")
    p.add_argument("file")
    add_common(p)
    p.set_defaults(func=cmd_carlsson)

    p = sub.add_parser("rank-check", help="rank bound report")
    p.add_argument("file", nargs="?")
    p.add_argument("--random", type=int, nargs=3, metavar=("R", "M", "SEED"))
    p.add_argument("--spread", type=int, default=2)
    p.add_argument("--count", type=int, default=1)
    add_common(p)
    p.set_defaults(func=cmd_rank_check)

    p = sub.add_parser("operad-basis", help="path-sequence basis of arity n")
    p.add_argument("n", type=int)
    p.add_argument("r", type=int)
    add_common(p)
    p.set_defaults(func=cmd_operad_basis)

    p = sub.add_parser("operad-koszul", help="bar-homology table")
    p.add_argument("n", type=int, help="max weight")
    p.add_argument("a", type=int, help="max arity")
    p.add_argument("r", type=int)
    add_common(p)
    p.set_defaults(func=cmd_operad_koszul)

    p = sub.add_parser("euler", help="Euler identity report for a free complex")
    p.add_argument("--complex", required=True)
    add_common(p)
    p.set_defaults(func=cmd_euler)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except WindowError as exc:
        print(f"window failure: {exc}", file=sys.stderr)
        return 2
    except ValidationError as exc:
        print(f"validation failure: {exc}", file=sys.stderr)
        for issue in getattr(exc, "issues", [])[:10]:
            print(f"  - {issue}", file=sys.stderr)
        return 1
    except InternalCheckError as exc:
        print(f"internal assertion failure (artifact bug): {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
