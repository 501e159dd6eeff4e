"""Seeded inequality campaigns, their CSV/JSON reports, and witness files."""

from __future__ import annotations

import csv
import io
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Optional

from . import __version__
from .checks import CHECK_IDS, DEFAULT_TOL, InequalityCase, SampleContext, Witness, get_check
from .errors import ConfigError, ParseError, SkippedHypothesis
from .matrixio import matrix_from_json, matrix_to_json
from .norms import NormKind, norm_family
from .randgen import MASK64, MAX_DIM, derive_substream

CSV_COLUMNS = (
    "check_id", "part", "dim", "trial", "seed", "nu", "s", "t",
    "norm_kind", "lhs", "rhs", "slack", "scale", "holds",
)
WITNESS_FORMAT = "heinzlab-witness"
REPLAY_RTOL = 1e-12


@dataclass
class CampaignConfig:
    checks: list = field(default_factory=lambda: list(CHECK_IDS))
    trials: int = 200
    dims: list = field(default_factory=lambda: [1, 2, 3, 4, 6])
    nu_policy: dict = field(default_factory=dict)
    tol: float = DEFAULT_TOL
    seed: int = 0
    out_path: Optional[str] = None
    format: str = "csv"
    norms: Optional[list] = None
    cond_cap: float = 100.0
    falsify_trials: int = 1000
    dump_witnesses: Optional[str] = None
    jobs: int = 1

    def validate(self) -> None:
        if not self.checks:
            raise ConfigError("no checks selected")
        for cid in self.checks:
            if cid not in CHECK_IDS:
                raise ConfigError(f"unknown check {cid!r}")
        if not isinstance(self.trials, int) or self.trials < 1:
            raise ConfigError("trials must be a positive integer")
        if not self.dims or any(not isinstance(d, int) or not 1 <= d <= MAX_DIM for d in self.dims):
            raise ConfigError(f"dims must be integers in [1, {MAX_DIM}]")
        if not self.tol > 0:
            raise ConfigError("tol must be positive")
        if not 0 <= self.seed <= MASK64:
            raise ConfigError("seed must be an unsigned 64-bit integer")
        if self.format not in ("csv", "json"):
            raise ConfigError(f"format must be csv or json, got {self.format!r}")
        if not self.cond_cap >= 1:
            raise ConfigError("cond_cap must be >= 1")
        for cid, ranges in self.nu_policy.items():
            if cid not in CHECK_IDS:
                raise ConfigError(f"nu policy for unknown check {cid!r}")
            if not ranges or any(not lo <= hi for lo, hi in ranges):
                raise ConfigError(f"bad nu ranges for {cid}: {ranges!r}")
        if self.jobs < 1:
            raise ConfigError("jobs must be >= 1")

    def echo(self) -> dict:
        d = asdict(self)
        d["norms"] = None if self.norms is None else [str(k) for k in self.norms]
        d["nu_policy"] = {k: [list(r) for r in v] for k, v in self.nu_policy.items()}
        return d


@dataclass
class TrialResult:
    check_id: str
    dim: int
    trial: int
    seed: int
    params: dict
    cases: list
    skipped: bool = False
    witness: Optional[Witness] = None
    kinds: Optional[list] = None

    @property
    def passed(self) -> bool:
        return not self.skipped and all(c.holds for c in self.cases)


@dataclass
class CheckSummary:
    runs: int = 0
    passes: int = 0
    failures: int = 0
    skips: int = 0
    cases: int = 0
    min_slack: Optional[float] = None
    min_rel_slack: Optional[float] = None
    argmin: Optional[dict] = None


@dataclass
class SuiteReport:
    config: dict
    summary: dict
    trials: list
    wall_time: float
    version: str = __version__

    @property
    def ok(self) -> bool:
        return all(s.failures == 0 for s in self.summary.values())

    def rows(self) -> list:
        out = []
        for tr in self.trials:
            for c in tr.cases:
                out.append(case_row(tr, c))
        return out

    def summary_dict(self) -> dict:
        return {cid: asdict(s) for cid, s in self.summary.items()}


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def case_row(tr: TrialResult, c: InequalityCase) -> dict:
    return {
        "check_id": c.check_id,
        "part": c.part,
        "dim": tr.dim,
        "trial": tr.trial,
        "seed": tr.seed,
        "nu": c.params.get("nu"),
        "s": c.params.get("s"),
        "t": c.params.get("t"),
        "norm_kind": c.norm_kind,
        "lhs": c.lhs,
        "rhs": c.rhs,
        "slack": c.slack,
        "scale": c.scale,
        "holds": c.holds,
    }


def trial_seed(master: int, check_id: str, dim: int, trial: int) -> int:
    """Seed of one trial; independent of which other checks or dims are selected."""
    s = derive_substream(master, CHECK_IDS.index(check_id))
    return derive_substream(derive_substream(s, dim), trial)


def run_trial(check_id: str, dim: int, trial: int, seed: int, ctx: SampleContext, kinds, tol) -> TrialResult:
    spec = get_check(check_id)
    use_kinds = (kinds if kinds is not None else norm_family(dim)) if spec.uses_norms else None
    ctx = replace(ctx, kinds=use_kinds)
    witness, params = spec.sample(seed, dim, ctx)
    try:
        cases = spec.run(witness, params, use_kinds, tol)
    except SkippedHypothesis:
        return TrialResult(check_id, dim, trial, seed, params, [], True, witness, use_kinds)
    return TrialResult(check_id, dim, trial, seed, params, cases, False, witness, use_kinds)


def _context(config: CampaignConfig, check_id: str) -> SampleContext:
    ranges = config.nu_policy.get(check_id)
    return SampleContext(
        cond_cap=config.cond_cap,
        nu_ranges=tuple(tuple(r) for r in ranges) if ranges else None,
        falsify_trials=config.falsify_trials,
    )


def _run_block(config: CampaignConfig, check_id: str, dim: int) -> list:
    ctx = _context(config, check_id)
    kinds = config.norms
    if kinds is not None:
        kinds = [k for k in kinds if k.tag != "kyfan" or k.param <= dim]
    return [
        run_trial(check_id, dim, i, trial_seed(config.seed, check_id, dim, i), ctx, kinds, config.tol)
        for i in range(config.trials)
    ]


def _summarise(trials: list) -> dict:
    summary = {}
    for tr in trials:
        s = summary.setdefault(tr.check_id, CheckSummary())
        s.runs += 1
        if tr.skipped:
            s.skips += 1
            continue
        if tr.passed:
            s.passes += 1
        else:
            s.failures += 1
        for c in tr.cases:
            s.cases += 1
            rel = c.slack / c.scale
            if s.min_slack is None or c.slack < s.min_slack:
                s.min_slack = c.slack
            if s.min_rel_slack is None or rel < s.min_rel_slack:
                s.min_rel_slack = rel
                s.argmin = {
                    "dim": tr.dim, "trial": tr.trial, "seed": tr.seed,
                    "part": c.part, "norm_kind": c.norm_kind,
                }
    return summary


def run_campaign(config: CampaignConfig) -> SuiteReport:
    """Run every selected check ``trials`` times for each dimension and write the reports.

    The returned report's ``ok`` is False when any trial failed; skips do not
    count as failures.
    """
    config.validate()
    start = time.perf_counter()
    blocks = [(cid, d) for cid in config.checks for d in config.dims]
    if config.jobs > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            parts = list(pool.map(_run_block_star, [(config, cid, d) for cid, d in blocks]))
    else:
        parts = [_run_block(config, cid, d) for cid, d in blocks]
    trials = [tr for part in parts for tr in part]
    trials.sort(key=lambda tr: (tr.check_id, tr.dim, tr.trial))
    report = SuiteReport(config.echo(), _summarise(trials), trials, time.perf_counter() - start)
    if config.out_path:
        write_report(report, config.out_path, config.format)
    _dump(report, config)
    return report


def _run_block_star(args):
    return _run_block(*args)


def write_csv(report: SuiteReport, stream) -> None:
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for row in report.rows():
        w.writerow([_fmt(row[c]) for c in CSV_COLUMNS])


def csv_text(report: SuiteReport) -> str:
    buf = io.StringIO()
    write_csv(report, buf)
    return buf.getvalue()


def report_json(report: SuiteReport, with_rows: bool = True) -> dict:
    d = {
        "version": report.version,
        "config": report.config,
        "wall_time": report.wall_time,
        "ok": report.ok,
        "summary": report.summary_dict(),
    }
    if with_rows:
        d["rows"] = report.rows()
    return d


def write_report(report: SuiteReport, path, fmt: str = "csv") -> None:
    """Write rows as CSV (plus ``<path>.summary.json``) or everything as one JSON file."""
    path = Path(path)
    if path.parent and not path.parent.exists():
        path.parent.mkdir(parents=True, exist_ok=True)
    if fmt == "csv":
        with open(path, "w", newline="") as fh:
            write_csv(report, fh)
        with open(str(path) + ".summary.json", "w") as fh:
            json.dump(report_json(report, with_rows=False), fh, indent=2)
    else:
        with open(path, "w") as fh:
            json.dump(report_json(report), fh, indent=1)


# -- witness files -------------------------------------------------------------


def witness_payload(tr: TrialResult, tol: float, kinds) -> dict:
    w = tr.witness
    return {
        "format": WITNESS_FORMAT,
        "version": __version__,
        "check_id": tr.check_id,
        "dim": tr.dim,
        "trial": tr.trial,
        "seed": tr.seed,
        "params": tr.params,
        "tol": tol,
        "norm_kinds": None if kinds is None else [str(k) for k in kinds],
        "gen": w.gen,
        "matrices": {k: matrix_to_json(v) for k, v in w.matrices.items()},
        "cases": [c.to_dict() for c in tr.cases],
    }


def dump_witness(tr: TrialResult, directory, tol: float = DEFAULT_TOL) -> Path:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / f"{tr.check_id}_d{tr.dim}_t{tr.trial}.json"
    with open(path, "w") as fh:
        json.dump(witness_payload(tr, tol, tr.kinds), fh, indent=1)
    return path


def _dump(report: SuiteReport, config: CampaignConfig) -> None:
    target = config.dump_witnesses
    failures = [tr for tr in report.trials if not tr.skipped and not tr.passed]
    if target is None and failures and config.out_path:
        target = str(config.out_path) + ".witnesses"
    if target is None:
        return
    keep = {id(tr) for tr in failures}
    if config.dump_witnesses is not None:
        # the worst case of every check, so each min_slack can be replayed
        for cid, s in report.summary.items():
            if s.argmin is None:
                continue
            for tr in report.trials:
                if (tr.check_id, tr.dim, tr.trial) == (cid, s.argmin["dim"], s.argmin["trial"]):
                    keep.add(id(tr))
    for tr in report.trials:
        if id(tr) in keep:
            dump_witness(tr, target, config.tol)


def load_witness(path) -> dict:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except ValueError as exc:
        raise ParseError(f"{path}: not valid JSON ({exc})") from None
    if not isinstance(data, dict) or data.get("format") != WITNESS_FORMAT:
        raise ParseError(f"{path}: not a {WITNESS_FORMAT} file")
    for key in ("check_id", "params", "matrices"):
        if key not in data:
            raise ParseError(f"{path}: missing {key!r}")
    if not isinstance(data["matrices"], dict):
        raise ParseError(f"{path}: 'matrices' must be an object")
    return data


@dataclass
class ReplayResult:
    cases: list
    stored: list
    max_rel_diff: float

    @property
    def reproduced(self) -> bool:
        return len(self.cases) == len(self.stored) and self.max_rel_diff <= REPLAY_RTOL


def replay_witness(path) -> ReplayResult:
    """Re-evaluate the stored check on the stored matrices and compare with the stored values."""
    data = load_witness(path)
    spec = get_check(data["check_id"])
    mats = {k: matrix_from_json(v) for k, v in data["matrices"].items()}
    witness = Witness(mats, int(data.get("seed", 0)), int(data.get("dim", 0)), data.get("gen", {}))
    kinds = data.get("norm_kinds")
    try:
        kinds = None if kinds is None else [NormKind.parse(k) for k in kinds]
    except ValueError as exc:
        raise ParseError(f"{path}: bad norm kind ({exc})") from None
    try:
        cases = spec.run(witness, data["params"], kinds, float(data.get("tol", DEFAULT_TOL)))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"{path}: witness does not fit check {spec.check_id!r} ({exc!r})") from None
    except SkippedHypothesis as exc:
        raise ParseError(f"{path}: stored matrices violate the check's hypotheses ({exc})") from None
    stored = data.get("cases", [])
    if not isinstance(stored, list):
        raise ParseError(f"{path}: 'cases' must be a list")
    worst = 0.0
    for new, old in zip(cases, stored):
        for key in ("lhs", "rhs"):
            try:
                ref = float(old[key])
            except (KeyError, TypeError, ValueError):
                raise ParseError(f"{path}: stored case lacks a numeric {key!r}") from None
            diff = abs(getattr(new, key) - ref) / max(1.0, abs(ref))
            worst = max(worst, diff)
    return ReplayResult(cases, stored, worst)


def format_summary(report: SuiteReport) -> str:
    lines = [f"{'check':18s} {'runs':>6s} {'pass':>6s} {'fail':>5s} {'skip':>5s} {'min rel slack':>14s}"]
    for cid, s in report.summary.items():
        rel = "" if s.min_rel_slack is None else f"{s.min_rel_slack:.3e}"
        lines.append(f"{cid:18s} {s.runs:6d} {s.passes:6d} {s.failures:5d} {s.skips:5d} {rel:>14s}")
    lines.append(f"{'OK' if report.ok else 'FAILED'} in {report.wall_time:.2f}s")
    return "\n".join(lines)
