"""Command-line entry point: ``heinzlab run | explain | replay``."""

from __future__ import annotations

import argparse
import json
import sys

from .campaign import CampaignConfig, format_summary, replay_witness, report_json, run_campaign, write_csv
from .checks import CHECK_IDS, explain_check
from .errors import ConfigError, ParseError, UnknownCheck
from .norms import NormKind

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


def _int_list(text: str) -> list:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise ConfigError(f"expected comma-separated integers, got {text!r}") from None


def _checks(text: str) -> list:
    if text.strip() == "all":
        return list(CHECK_IDS)
    return [c.strip() for c in text.split(",") if c.strip()]


def _norms(text: str):
    if text.strip() == "family":
        return None
    try:
        return [NormKind.parse(k) for k in text.split(",") if k.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad --norms value: {exc}") from None


def _nu_policy(items) -> dict:
    """Parse ``CHECK=lo:hi[;lo:hi...]`` entries."""
    policy = {}
    for item in items or []:
        cid, sep, spec = item.partition("=")
        if not sep:
            raise ConfigError(f"--nu expects CHECK=lo:hi[;lo:hi], got {item!r}")
        ranges = []
        for part in spec.split(";"):
            lo, sep, hi = part.partition(":")
            try:
                ranges.append((float(lo), float(hi)))
            except ValueError:
                raise ConfigError(f"bad nu range {part!r}") from None
        policy[cid.strip()] = tuple(ranges)
    return policy


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="heinzlab", description="Randomised checks of Heinz-type matrix inequalities")
    sub = ap.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run an inequality campaign")
    run.add_argument("--checks", default="all", help="comma-separated check ids, or 'all'")
    run.add_argument("--trials", type=int, default=200)
    run.add_argument("--dims", default="1,2,3,4,6")
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--tol", type=float, default=1e-8)
    run.add_argument("--format", choices=("csv", "json"), default="csv")
    run.add_argument("--out", help="report path (default: CSV/JSON on stdout)")
    run.add_argument("--dump-witnesses", metavar="DIR", help="write failing and worst-case witnesses here")
    run.add_argument("--norms", default="family", help="'family' or a list such as hs,op,kyfan:1,schatten:3")
    run.add_argument("--nu", action="append", metavar="CHECK=LO:HI[;LO:HI]", help="override nu sampling ranges")
    run.add_argument("--cond-cap", type=float, default=100.0)
    run.add_argument("--falsify-trials", type=int, default=1000)
    run.add_argument("--jobs", type=int, default=1)

    exp = sub.add_parser("explain", help="describe a check")
    exp.add_argument("check_id", help="check id, or 'all'")

    rep = sub.add_parser("replay", help="re-evaluate a witness file")
    rep.add_argument("witness")
    return ap


def _cmd_run(args) -> int:
    config = CampaignConfig(
        checks=_checks(args.checks),
        trials=args.trials,
        dims=_int_list(args.dims),
        nu_policy=_nu_policy(args.nu),
        tol=args.tol,
        seed=args.seed,
        out_path=args.out,
        format=args.format,
        norms=_norms(args.norms),
        cond_cap=args.cond_cap,
        falsify_trials=args.falsify_trials,
        dump_witnesses=args.dump_witnesses,
        jobs=args.jobs,
    )
    report = run_campaign(config)
    if not args.out:
        if args.format == "csv":
            write_csv(report, sys.stdout)
        else:
            json.dump(report_json(report), sys.stdout, indent=1)
            sys.stdout.write("\n")
    print(format_summary(report), file=sys.stderr)
    return EXIT_OK if report.ok else EXIT_FAIL


def _cmd_explain(args) -> int:
    ids = CHECK_IDS if args.check_id == "all" else [args.check_id]
    print("\n\n".join(explain_check(c) for c in ids))
    return EXIT_OK


def _cmd_replay(args) -> int:
    result = replay_witness(args.witness)
    for c in result.cases:
        flag = "holds" if c.holds else "FAILS"
        kind = f" [{c.norm_kind}]" if c.norm_kind else ""
        print(f"{c.check_id}/{c.part}{kind}: lhs={c.lhs!r} rhs={c.rhs!r} slack={c.slack!r} {flag}")
    print(f"max relative deviation from stored values: {result.max_rel_diff:.3e}")
    if not result.reproduced:
        print("stored values NOT reproduced", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK if all(c.holds for c in result.cases) else EXIT_FAIL


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handler = {"run": _cmd_run, "explain": _cmd_explain, "replay": _cmd_replay}[args.command]
    try:
        return handler(args)
    except (ConfigError, ParseError, UnknownCheck) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
