"""Command-line front end: ``run``, ``verify``, ``sweep`` and ``bounds``.

Samples are labelled 1..t on the command line and in every file written here.

Exit codes: 0 success, 1 wrong identification, 2 usage or parameter error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from collections.abc import Sequence

import numpy as np

from .analysis import reference_bounds, verify_exhaustive
from .codes import random_constant_weight_code
from .errors import GroupTestingError
from .oracle import Oracle
from .strategy_generic import GenericStrategyConfig, run_generic
from .strategy_s2 import S2Params, bound_breakdown, run_s2, select_params, worst_case_bound

SWEEP_HEADER = ["t", "log2t", "bound", "bound/log2t", "info_bound", "dr82", "two_stage", "damaschke25"]
VERIFY_CSV_HEADER = ["t", "q", "n_hat", "n_prime", "w", "bound", "measured_worst", "stages"]


class UsageError(GroupTestingError):
    pass


def _fmt(x: float | None) -> str:
    return "" if x is None else f"{x:.6f}"


def _parse_int(text: str) -> int:
    text = text.strip()
    if "^" in text:
        base, exp = text.split("^", 1)
        return int(base) ** int(exp)
    return int(text)


def _parse_defects(text: str | None, t: int, s: int) -> list[int] | None:
    if text is None:
        return None
    labels = [_parse_int(x) for x in text.split(",") if x.strip()]
    if len(set(labels)) != len(labels):
        raise UsageError("repeated defect label")
    if any(not 1 <= x <= t for x in labels):
        raise UsageError(f"defect labels must lie in 1..{t}")
    if len(labels) > s:
        raise UsageError(f"{len(labels)} defects given but s={s}")
    return [x - 1 for x in labels]


def _s2_params(args: argparse.Namespace, t: int) -> S2Params:
    explicit = (args.q, args.n_hat, args.n_prime, args.inner_weight)
    if all(v is not None for v in explicit):
        return S2Params(q=args.q, n_hat=args.n_hat, n_prime=args.n_prime, inner_weight=args.inner_weight, t=t)
    return select_params(
        t,
        n_prime_max=args.n_prime_max,
        n_primes=[args.n_prime] if args.n_prime is not None else None,
        inner_weights=[args.inner_weight] if args.inner_weight is not None else None,
        qs=[args.q] if args.q is not None else None,
    )


def _generic_config(args: argparse.Namespace, seed) -> GenericStrategyConfig:
    weight = max(1, min(args.n_rows - 1, round(args.weight * args.n_rows)))
    code = random_constant_weight_code(args.n_rows, args.t, weight, seed)
    return GenericStrategyConfig(code, args.s, args.identify_all_at_stage3)


def _write(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def _csv(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _check_strategy_s(args: argparse.Namespace) -> None:
    if args.s < 1:
        raise UsageError("s must be at least 1")
    if args.strategy == "s2" and args.s > 2:
        raise UsageError("the s2 strategy handles at most two defects")


def cmd_run(args: argparse.Namespace) -> int:
    _check_strategy_s(args)
    code_seed, defect_seed = np.random.SeedSequence(args.seed).spawn(2)
    defects = _parse_defects(args.defects, args.t, args.s)
    if defects is None:
        rng = np.random.default_rng(defect_seed)
        defects = sorted(rng.choice(args.t, size=min(args.s, args.t), replace=False).tolist())
    oracle = Oracle(args.t, defects, args.s)

    report: dict = {"schema": 1, "command": "run", "strategy": args.strategy, "t": args.t, "s": args.s}
    if args.strategy == "s2":
        params = _s2_params(args, args.t)
        rep = run_s2(params, oracle)
        answer = rep.answer
        report.update(
            params=params.to_dict(),
            bound=worst_case_bound(params),
            layer_weights=rep.layer_weights,
            tests_per_stage=rep.tests_per_stage,
        )
    else:
        config = _generic_config(args, code_seed)
        answer = run_generic(config, oracle)
        report.update(n_rows=config.code.n_rows, tests_per_stage=oracle.transcript.tests_per_stage)
    correct = answer == frozenset(defects)
    report.update(
        defects=[d + 1 for d in sorted(defects)],
        answer=[a + 1 for a in sorted(answer)],
        correct=correct,
        total=sum(oracle.transcript.tests_per_stage),
        n_stages=oracle.transcript.n_stages,
    )
    if args.dump_transcript:
        _write(oracle.transcript.to_json() + "\n", args.dump_transcript)
    if args.format == "csv":
        keys = ["t", "s", "strategy", "defects", "answer", "correct", "total", "n_stages"]
        row = [" ".join(map(str, report[k])) if isinstance(report[k], list) else report[k] for k in keys]
        _write(_csv(keys, [row]), args.output)
    else:
        _write(json.dumps(report, indent=2) + "\n", args.output)
    return 0 if correct else 1


def cmd_verify(args: argparse.Namespace) -> int:
    _check_strategy_s(args)
    code_seed, _ = np.random.SeedSequence(args.seed).spawn(2)
    if args.strategy == "s2":
        params = _s2_params(args, args.t)
        strategy = params
    else:
        params = None
        strategy = _generic_config(args, code_seed)
    summary = verify_exhaustive(strategy, args.t, args.s, keep_rows=bool(args.full_dump))
    out = summary.to_dict()
    if params is not None:
        out["params"] = params.to_dict()
        out["bound_breakdown"] = bound_breakdown(params)
    else:
        out["n_rows"] = strategy.code.n_rows
        out["identify_all_at_stage3"] = strategy.identify_all_at_stage3

    if args.full_dump:
        rows = [
            [
                " ".join(str(i + 1) for i in row["defects"]),
                " ".join(str(i + 1) for i in row["answer"]),
                row["total"],
                row["stages"],
                int(row["correct"]),
            ]
            for row in summary.rows
        ]
        _write(_csv(["defects", "answer", "total", "stages", "correct"], rows), args.full_dump)
    if args.format == "csv":
        if params is not None:
            row = [args.t, params.q, params.n_hat, params.n_prime, params.relative_weight,
                   summary.bound, summary.worst_total, summary.max_stages]
        else:
            row = [args.t, "", "", "", "", "", summary.worst_total, summary.max_stages]
        _write(_csv(VERIFY_CSV_HEADER, [row]), args.output)
    else:
        _write(json.dumps(out, indent=2) + "\n", args.output)
    return 0 if summary.all_correct else 1


def sweep_rows(t_values: Sequence[int], args: argparse.Namespace) -> list[list[str]]:
    rows = []
    for t in t_values:
        params = _s2_params(args, t)
        bound = worst_case_bound(params)
        lt = math.log2(t)
        ref = reference_bounds(t, 2)
        rows.append(
            [str(t), _fmt(lt), str(bound), _fmt(bound / lt), _fmt(ref.info_bound),
             _fmt(ref.dr82_nonadaptive), _fmt(ref.two_stage), _fmt(ref.damaschke_2stage)]
        )
    return rows


def cmd_sweep(args: argparse.Namespace) -> int:
    t_values = [_parse_int(x) for x in args.t_values.split(",") if x.strip()]
    if not t_values or min(t_values) < 2:
        raise UsageError("sweep needs t values >= 2")
    _write(_csv(SWEEP_HEADER, sweep_rows(t_values, args)), args.output)
    return 0


def cmd_bounds(args: argparse.Namespace) -> int:
    ref = reference_bounds(args.t, args.s)
    if args.format == "csv":
        d = ref.to_dict()
        keys = ["t", "s", "info_bound", "dr82_nonadaptive", "two_stage", "damaschke_2stage"]
        row = [d[k] if isinstance(d[k], int) else _fmt(d[k]) for k in keys]
        _write(_csv(keys, [row]), args.output)
    else:
        _write(json.dumps(ref.to_dict(), indent=2) + "\n", args.output)
    return 0


def _add_params(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("s2 parameters (any subset restricts the optimizer)")
    g.add_argument("--q", type=int)
    g.add_argument("--n-hat", type=int)
    g.add_argument("--n-prime", type=int)
    g.add_argument("--inner-weight", type=int)
    g.add_argument("--n-prime-max", type=int, default=24)


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--t", type=_parse_int, required=True, help="population size")
    p.add_argument("--s", type=int, default=2, help="maximum number of defects")
    p.add_argument("--strategy", choices=["s2", "generic"], default="s2")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", help="write the report here instead of stdout")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    g = p.add_argument_group("generic strategy")
    g.add_argument("--n-rows", type=int, default=12, help="rows of the random first-stage code")
    g.add_argument("--weight", type=float, default=0.25, help="relative column weight of that code")
    g.add_argument("--identify-all-at-stage3", action="store_true")
    _add_params(p)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="multistage-gt", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="identify one hidden defect set")
    _add_common(p)
    p.add_argument("--defects", help='comma-separated 1-based labels; "" for none; omit for random')
    p.add_argument("--dump-transcript", metavar="PATH")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("verify", help="check every defect set of size <= s")
    _add_common(p)
    p.add_argument("--full-dump", metavar="PATH", help="CSV row per defect set")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="optimized s2 bound against reference bounds")
    p.add_argument("--t-values", required=True, help="comma-separated, e.g. 2^10,2^12,36")
    p.add_argument("--output")
    _add_params(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("bounds", help="reference bound formulas")
    p.add_argument("--t", type=_parse_int, required=True)
    p.add_argument("--s", type=int, default=2)
    p.add_argument("--output")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.set_defaults(func=cmd_bounds)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except GroupTestingError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
