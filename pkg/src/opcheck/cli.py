"""Command-line interface.

Subcommands: ``drazin`` (index/inverse report), ``classify`` (minimal-order
scan), ``kernel`` (weight-space basis), ``example`` (seeded instance
files), ``verify`` (run verification suites).

Exit codes are a stable contract: 0 success/pass, 1 usage or parse error,
2 numerical failure (ill-conditioning), 3 suite verdict fail. The
environment variable ``OPCHECK_POLICY`` may point to a JSON file overriding
NumericPolicy fields.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from .drazin import (
    PairSelector,
    block_view,
    core_nilpotent_decompose,
    resolve_pair,
)
from .errors import (
    IllConditioned,
    InvalidOrder,
    OpcheckError,
    ParseError,
    Singular,
    ToleranceInconsistency,
    UnknownSuite,
)
from .generators import Family, InstanceSpec, generate
from .kernels import kernel, minimal_order
from .matcore import (
    DEFAULT_POLICY,
    NumericPolicy,
    eye,
    frob,
    load_matrix,
    save_matrix,
)
from .suites import SuiteConfig, available_suites, run_suite
from .transforms import TransformKind

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2
EXIT_VERDICT = 3


class _Parser(argparse.ArgumentParser):
    """argparse defaults to exit code 2 on usage errors; we reserve 2 for
    numerical failures, so usage errors are remapped to 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _load_policy() -> NumericPolicy:
    path = os.environ.get("OPCHECK_POLICY")
    if not path:
        return DEFAULT_POLICY
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
        fields = {
            k: float(doc[k])
            for k in ("atol", "rtol", "rank_rtol", "cond_max")
            if k in doc
        }
        return NumericPolicy(**fields)
    except (OSError, json.JSONDecodeError, TypeError, ValueError, KeyError) as exc:
        raise ParseError(f"bad policy file {path}: {exc}") from exc


def _fmt_matrix(m: np.ndarray) -> str:
    with np.printoptions(precision=6, suppress=True, linewidth=120):
        return str(np.round(m, 10))


def _parse_int_list(text: str) -> tuple[int, ...]:
    text = text.strip()
    if not text:
        return ()
    try:
        return tuple(int(tok) for tok in text.split(","))
    except ValueError as exc:
        raise ParseError(f"expected a comma-separated integer list, got {text!r}") from exc


def cmd_drazin(args, policy: NumericPolicy) -> int:
    a = load_matrix(args.matrix)
    if a.shape[0] != a.shape[1]:
        raise ParseError(f"drazin needs a square matrix, got {a.shape}")
    dd = core_nilpotent_decompose(a, policy)
    doc = dd.to_json(a)
    if args.json:
        print(json.dumps(doc, indent=2))
    else:
        r1, r2, r3 = dd.residuals_for(a)
        print(f"size:            {dd.n}")
        print(f"index:           {dd.p}")
        print(f"core dimension:  {dd.dim_h1}")
        print(f"nil dimension:   {dd.dim_h2}")
        print(f"axiom residuals: commutation={r1:.3e} inner-inverse={r2:.3e} index-power={r3:.3e}")
        print("drazin inverse:")
        print(_fmt_matrix(dd.a_d))
    return EXIT_OK


def cmd_classify(args, policy: NumericPolicy) -> int:
    a = load_matrix(args.matrix)
    if a.shape[0] != a.shape[1]:
        raise ParseError(f"classify needs a square matrix, got {a.shape}")
    x = load_matrix(args.weight) if args.weight else eye(a.shape[0])
    kind = TransformKind(args.transform)
    b = resolve_pair(a, PairSelector(args.pair), policy)
    result = minimal_order(kind, b, a, x, args.max_order, policy)
    if args.json:
        print(json.dumps(result.to_json(), indent=2))
    else:
        print(f"transform={kind.value} pair={args.pair} bound={args.max_order}")
        print(f"{'order':>5s} {'residual':>12s} {'threshold':>12s}  pass")
        for k, (res, thr) in enumerate(zip(result.residuals, result.thresholds), start=1):
            print(f"{k:5d} {res:12.4e} {thr:12.4e}  {'yes' if res <= thr else 'no'}")
        if result.member:
            print(f"minimal order: {result.minimal_order}")
        else:
            print(f"minimal order: none <= {args.max_order}")
    return EXIT_OK


def cmd_kernel(args, policy: NumericPolicy) -> int:
    a = load_matrix(args.matrix)
    if a.shape[0] != a.shape[1]:
        raise ParseError(f"kernel needs a square matrix, got {a.shape}")
    kind = TransformKind(args.transform)
    sel = PairSelector(args.pair)
    b = resolve_pair(a, sel, policy)
    basis = kernel(kind, b, a, args.order, policy)
    doc = basis.to_json()
    if sel in (PairSelector.DRAZIN, PairSelector.DRAZIN_ADJOINT):
        dd = core_nilpotent_decompose(a, policy)
        doc["block_norms"] = []
        for x in basis.basis:
            bv = block_view(x, dd)
            doc["block_norms"].append(
                {
                    "x11": frob(bv.x11),
                    "x12": frob(bv.x12),
                    "x21": frob(bv.x21),
                    "x22": frob(bv.x22),
                }
            )
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=2)
        print(f"kernel dimension {basis.dim} (gap {basis.gap:.3e}) -> {args.out}")
    else:
        print(json.dumps(doc, indent=2))
    return EXIT_OK


def cmd_example(args, policy: NumericPolicy) -> int:
    spec = InstanceSpec(
        family=Family(args.family),
        dims=_parse_int_list(args.dims),
        orders=_parse_int_list(args.orders),
        seed=args.seed,
    )
    inst = generate(spec, policy)
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    for name, mat in inst.matrices.items():
        save_matrix(outdir / f"{name}.json", mat)
    doc = inst.to_json()
    doc["spec"] = {
        "family": spec.family.value,
        "dims": list(spec.dims),
        "orders": list(spec.orders),
        "seed": spec.seed,
    }
    with open(outdir / "instance.json", "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2)
    print(f"family={spec.family.value} seed={spec.seed} -> {outdir}/")
    for name, residual in inst.certified:
        print(f"  certified {name}: {residual:.3e}")
    return EXIT_OK


def cmd_verify(args, policy: NumericPolicy) -> int:
    if args.suite == "all":
        names = list(available_suites())
    elif args.suite in available_suites():
        names = [args.suite]
    else:
        raise UnknownSuite(
            f"unknown suite {args.suite!r}; available: all, {', '.join(available_suites())}"
        )
    reports = []
    all_pass = True
    for name in names:
        cfg = SuiteConfig(
            suite=name,
            trials=args.trials,
            dim_max=args.dim_max,
            order_max=args.order_max,
            seed=args.seed,
            policy=policy,
        )
        rep = run_suite(cfg)
        reports.append(rep)
        all_pass &= rep.verdict == "pass"
        extra = f" anomalies={len(rep.anomalies)}" if rep.anomalies else ""
        print(
            f"{name:16s} {rep.verdict:4s}  passes={rep.passes}/{rep.trials} "
            f"skips={rep.skips} max_residual={rep.max_residual:.3e}{extra}"
        )
    if args.report:
        payload = reports[0].to_json() if len(reports) == 1 else [r.to_json() for r in reports]
        with open(args.report, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2)
        print(f"report -> {args.report}")
    return EXIT_OK if all_pass else EXIT_VERDICT


def build_parser() -> _Parser:
    parser = _Parser(prog="opcheck", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("drazin", help="index, Drazin inverse and axiom residuals")
    p.add_argument("matrix", help="matrix JSON file")
    p.add_argument("--json", action="store_true", help="emit a JSON report")
    p.set_defaults(func=cmd_drazin)

    p = sub.add_parser("classify", help="minimal-order scan for a transform/pair")
    p.add_argument("matrix", help="matrix JSON file")
    p.add_argument("--transform", choices=[k.value for k in TransformKind], required=True)
    p.add_argument("--pair", choices=[s.value for s in PairSelector], required=True)
    p.add_argument("--weight", help="weight matrix JSON file (default: identity)")
    p.add_argument("--max-order", type=int, default=6)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("kernel", help="orthonormal basis of the weight kernel")
    p.add_argument("matrix", help="matrix JSON file")
    p.add_argument("--transform", choices=[k.value for k in TransformKind], required=True)
    p.add_argument("--pair", choices=[s.value for s in PairSelector], required=True)
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--out", help="write the basis JSON here instead of stdout")
    p.set_defaults(func=cmd_kernel)

    p = sub.add_parser("example", help="generate a certified seeded instance")
    p.add_argument("--family", choices=[f.value for f in Family], required=True)
    p.add_argument("--dims", default="", help="comma-separated sizes")
    p.add_argument("--orders", default="", help="comma-separated orders")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=".", help="output directory")
    p.set_defaults(func=cmd_example)

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("--suite", default="all", help="suite name or 'all'")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--dim-max", type=int, default=6)
    p.add_argument("--order-max", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--report", help="write the report JSON here")
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    policy = None
    try:
        policy = _load_policy()
        return args.func(args, policy)
    except (ParseError, InvalidOrder, UnknownSuite) as exc:
        print(f"opcheck: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (IllConditioned, Singular, ToleranceInconsistency) as exc:
        print(f"opcheck: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OpcheckError as exc:
        print(f"opcheck: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
