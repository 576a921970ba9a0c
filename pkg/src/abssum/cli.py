"""Command-line interface.

Every command prints a JSON run report (command, resolved config, results,
checks, exit code, wall time) to stdout, or to ``--report PATH``.  Re-running
``abssum replay PATH`` re-executes the embedded config and diffs the results.

Exit codes: 0 all checks pass, 1 usage or I/O error, 2 a theorem-backed check
failed (a bug signal), 3 a conjecture-level comparison failed.
"""

from __future__ import annotations

import argparse
import csv
import io as _io
import json
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from . import inequality as ineq
from .conjecture import conjectured_constant, limit_checks
from .errors import AbssumError
from .extremal import build_family, family_ratio, optimal_overlap
from .io import MatrixFileError, read_tuple, read_matrix, write_matrix, write_tuple
from .matlin import abs_value
from .schatten import PExponent
from .search import SearchConfig, reevaluate, scan_family, search
from .suites import RUNNERS

EXIT_OK, EXIT_USAGE, EXIT_THEOREM, EXIT_CONJECTURE = 0, 1, 2, 3

TOL_CONSISTENCY = 1e-8
TOL_SEARCH_CEILING = 1e-6
TOL_WITNESS = 1e-10
NEAR_ONE_GUARD = 1e-6


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _jsonable(x):
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, PExponent):
        return str(x)
    if isinstance(x, (np.floating, float)):
        x = float(x)
        return x if math.isfinite(x) else ("inf" if x > 0 else "-inf" if x < 0 else "nan")
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    return x


def _check(name: str, passed: bool, kind: str, **detail) -> dict:
    return {"name": name, "kind": kind, "passed": bool(passed), **detail}


def _exit_code(checks: list[dict]) -> int:
    if any(not c["passed"] and c["kind"] in ("theorem", "consistency") for c in checks):
        return EXIT_THEOREM
    if any(not c["passed"] and c["kind"] == "conjecture" for c in checks):
        return EXIT_CONJECTURE
    return EXIT_OK


def _parse_p(text) -> PExponent:
    try:
        return PExponent.parse(text)
    except AbssumError as exc:
        raise UsageError(str(exc)) from None


# ---------------------------------------------------------------------------
# commands: each takes the resolved config dict and returns (results, checks)


def run_abs(cfg: dict):
    a = read_matrix(cfg["input"])
    out = abs_value(a)
    write_matrix(cfg["output"], out)
    return {"output": cfg["output"], "shape": list(out.shape)}, []


def _bound_checks(rep: ineq.RatioReport) -> list[dict]:
    checks = []
    univ = ineq.universal_bound(rep.p, rep.m) if rep.m >= 1 else math.nan
    checks.append(
        _check("universal_bound", rep.ratio <= univ + ineq.tol_ineq(univ), "theorem", bound=univ)
    )
    if not rep.p.is_inf and rep.p.value == 2.0:
        fb = ineq.frobenius_constant(rep.m)
        checks.append(_check("frobenius_sharp_bound", rep.ratio <= fb + ineq.tol_ineq(fb), "theorem", bound=fb))
    if not rep.p.is_inf and rep.p.value > 1.0 and rep.m >= 2:
        c = conjectured_constant(rep.p.value, rep.m).c
        checks.append(_check("conjectured_constant", rep.ratio <= c + ineq.tol_ineq(c), "conjecture", bound=c))
    return checks


def run_ratio(cfg: dict):
    p = _parse_p(cfg["p"])
    mats = read_tuple(cfg["files"])
    rep = ineq.ratio(mats, p)
    results = {"lhs": rep.lhs, "rhs": rep.rhs, "ratio": rep.ratio, "p": str(p), "m": rep.m}
    return results, _bound_checks(rep)


def run_extremal(cfg: dict):
    p = _parse_p(cfg["p"])
    m = int(cfg["m"])
    if cfg.get("optimal"):
        if not p.is_inf and p.value == 2.0:
            s = optimal_overlap(m)
        else:
            s, _ = scan_family(m, p)
    else:
        if cfg.get("s") is None:
            raise UsageError("give --s or --optimal")
        s = float(cfg["s"])
    fam = build_family(m, s, dim=cfg.get("dim"))
    rep = ineq.ratio(fam.tuple, p)
    closed = family_ratio(m, s, p)
    results = {"m": m, "s": s, "p": str(p), "ratio": rep.ratio, "closed_form": closed, "lhs": rep.lhs, "rhs": rep.rhs}
    agree = abs(rep.ratio - closed) <= TOL_CONSISTENCY * closed
    checks = [_check("closed_form_agreement", agree, "consistency", difference=rep.ratio - closed)]
    checks += _bound_checks(rep)
    if cfg.get("optimal") and not p.is_inf and p.value > 1.0:
        c = conjectured_constant(p.value, m).c
        results["conjectured"] = c
        checks.append(
            _check("family_attains_conjectured", abs(rep.ratio - c) <= TOL_CONSISTENCY * c, "consistency")
        )
    if cfg.get("emit_tuple"):
        results["files"] = write_tuple(cfg["emit_tuple"], fam.tuple)
    return results, checks


def _conjecture_row(p: float, m: int) -> dict:
    r = conjectured_constant(p, m)
    return {"p": r.p, "m": r.m, "x": r.x, "log_x": r.log_x, "c": r.c, "residual": r.residual, "universal": r.universal}


def _validate_conjecture_p(p: PExponent) -> float:
    if p.is_inf:
        raise UsageError("the closed form needs finite p; use a large finite p as a proxy")
    if p.value <= 1.0:
        raise UsageError(f"the closed form needs p > 1, got {p}")
    if p.value < 1.0 + NEAR_ONE_GUARD:
        raise UsageError(f"p = {p} is within {NEAR_ONE_GUARD} of 1; use --limit instead")
    return p.value


CSV_COLUMNS = ("p", "m", "x", "log_x", "c", "residual", "universal")


def run_conjecture(cfg: dict):
    if cfg.get("limit"):
        results = {}
        checks = []
        for m in cfg["m"]:
            rep = limit_checks(int(m))
            results[str(m)] = {
                "near_one": rep.near_one,
                "large_p": rep.large_p,
                "gap_near_one": rep.gap_near_one,
                "gap_large_p": rep.gap_large_p,
                "monotone_near_one": rep.monotone_near_one,
                "monotone_large_p": rep.monotone_large_p,
                "frobenius_row": rep.frobenius_row,
            }
            checks.append(
                _check(f"frobenius_row_m{m}", abs(rep.frobenius_row - rep.frobenius_expected) <= 1e-12, "consistency")
            )
        return results, checks

    ps = [_validate_conjecture_p(_parse_p(p)) for p in cfg["p"]]
    rows = [_conjecture_row(p, int(m)) for p in ps for m in cfg["m"]]
    checks = [
        _check("below_universal_bound", all(r["c"] <= r["universal"] + 1e-9 for r in rows), "theorem"),
        _check(
            "root_residual", all(r["residual"] <= 1e-10 for r in rows), "consistency"
        ),
    ]
    results = {"rows": rows}
    if cfg.get("csv"):
        buf = _io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in rows:
            w.writerow([_csv_num(r[k]) for k in CSV_COLUMNS])
        Path(cfg["csv"]).write_text(buf.getvalue())
        results["csv"] = cfg["csv"]
    return results, checks


def _csv_num(v):
    if isinstance(v, int):
        return str(v)
    v = float(v)
    return "inf" if math.isinf(v) else format(v, ".17g")


def run_check(cfg: dict):
    names = list(RUNNERS) if cfg["suite"] == "all" else [cfg["suite"]]
    results, checks = {}, []
    for name in names:
        res = RUNNERS[name](int(cfg["samples"]), seed=int(cfg["seed"]), threads=int(cfg.get("threads", 1)))
        results[name] = res.as_dict()
        checks.append(_check(name, res.passed, "theorem", failures=res.failures, checks=res.checks))
    return results, checks


def run_search(cfg: dict):
    p = _parse_p(cfg["p"])
    sc = SearchConfig(
        m=int(cfg["m"]),
        n=int(cfg["n"]),
        p=p,
        restarts=int(cfg["restarts"]),
        max_iters=int(cfg["iters"]),
        step=float(cfg["step"]),
        shrink=float(cfg["shrink"]),
        seed=int(cfg["seed"]),
        threads=int(cfg.get("threads", 1)),
    )
    rep = search(sc)
    again = reevaluate(rep)
    results = {
        "best_ratio": rep.best_ratio,
        "best_restart": rep.best_restart,
        "universal": rep.universal,
        "conjectured": rep.conjectured,
        "gap_to_universal": rep.gap_to_universal,
        "gap_to_conjecture": rep.gap_to_conjecture,
        "max_evaluated": rep.max_evaluated,
        "restarts": [{"index": t.index, "seed": t.seed, "ratio": t.ratio, "iters": t.iters} for t in rep.restarts],
    }
    checks = [
        _check("universal_ceiling", rep.max_evaluated <= rep.universal + TOL_SEARCH_CEILING, "theorem"),
        _check("witness_reevaluates", abs(again - rep.best_ratio) <= TOL_WITNESS, "consistency", reevaluated=again),
    ]
    if not p.is_inf and p.value == 2.0:
        fb = ineq.frobenius_constant(sc.m)
        checks.append(_check("frobenius_ceiling", rep.max_evaluated <= fb + 1e-9, "theorem", bound=fb))
    if rep.conjectured is not None:
        checks.append(
            _check("below_conjectured", rep.best_ratio <= rep.conjectured + 1e-9, "conjecture", bound=rep.conjectured)
        )
    if cfg.get("witness_dir"):
        results["witness_files"] = write_tuple(cfg["witness_dir"], rep.best_tuple)
    return results, checks


COMMANDS = {
    "abs": run_abs,
    "ratio": run_ratio,
    "extremal": run_extremal,
    "conjecture": run_conjecture,
    "check": run_check,
    "search": run_search,
}

def execute(command: str, cfg: dict) -> dict:
    start = time.perf_counter()
    results, checks = COMMANDS[command](cfg)
    code = _exit_code(checks)
    return _jsonable(
        {
            "command": command,
            "version": __version__,
            "config": cfg,
            "results": results,
            "checks": checks,
            "exit_code": code,
            "wall_time": time.perf_counter() - start,
        }
    )


def replay(report_path: str, threads: int | None = None) -> tuple[dict, list[str]]:
    """Re-execute a stored report; returns the new report and a list of differences."""
    old = json.loads(Path(report_path).read_text())
    cfg = dict(old["config"])
    if threads is not None:
        cfg["threads"] = threads
    # re-emitted files would overwrite the originals being compared against
    for key in ("emit_tuple", "witness_dir", "csv"):
        cfg.pop(key, None)
    new = execute(old["command"], cfg)
    diffs = _diff(old["results"], new["results"], "results", ignore={"files", "witness_files", "csv"})
    if old.get("exit_code") != new["exit_code"]:
        diffs.append(f"exit_code: {old.get('exit_code')} != {new['exit_code']}")
    return new, diffs


def _diff(a, b, path: str, ignore=frozenset()) -> list[str]:
    if isinstance(a, dict) and isinstance(b, dict):
        out = []
        for k in sorted(set(a) | set(b)):
            if k in ignore:
                continue
            if k not in a or k not in b:
                out.append(f"{path}.{k}: present in only one report")
            else:
                out.extend(_diff(a[k], b[k], f"{path}.{k}", ignore))
        return out
    if isinstance(a, list) and isinstance(b, list):
        if len(a) != len(b):
            return [f"{path}: length {len(a)} != {len(b)}"]
        out = []
        for i, (x, y) in enumerate(zip(a, b)):
            out.extend(_diff(x, y, f"{path}[{i}]", ignore))
        return out
    return [] if a == b else [f"{path}: {a!r} != {b!r}"]


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="abssum", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"abssum {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def with_report(sp):
        sp.add_argument("--report", help="write the JSON run report here instead of stdout")
        return sp

    sp = with_report(sub.add_parser("abs", help="matrix absolute value |A| of a matrix file"))
    sp.add_argument("input")
    sp.add_argument("-o", "--output", required=True)

    sp = with_report(sub.add_parser("ratio", help="norm ratio of a tuple of matrix files"))
    sp.add_argument("files", nargs="+")
    sp.add_argument("--p", default="2", help="Schatten exponent (decimal or 'inf')")

    sp = with_report(sub.add_parser("extremal", help="equiangular rank-one family"))
    sp.add_argument("--m", type=int, required=True)
    group = sp.add_mutually_exclusive_group(required=True)
    group.add_argument("--s", type=float)
    group.add_argument("--optimal", action="store_true", help="use the maximizing overlap for this p")
    sp.add_argument("--p", default="2")
    sp.add_argument("--dim", type=int, default=None, help="embedding dimension (>= m)")
    sp.add_argument("--emit-tuple", dest="emit_tuple", metavar="DIR")

    sp = with_report(sub.add_parser("conjecture", help="closed-form candidate constant"))
    sp.add_argument("--p", nargs="+", default=["2"], help="one or more exponents (a grid with --table)")
    sp.add_argument("--m", nargs="+", type=int, default=[2])
    sp.add_argument("--table", action="store_true", help="evaluate the full p x m grid")
    sp.add_argument("--csv", metavar="PATH")
    sp.add_argument("--limit", action="store_true", help="p -> 1+ and p -> inf limit sequences")

    sp = with_report(sub.add_parser("check", help="randomized inequality suites"))
    sp.add_argument("--suite", choices=[*RUNNERS, "all"], default="all")
    sp.add_argument("--samples", type=int, default=1000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--threads", type=int, default=1)

    sp = with_report(sub.add_parser("search", help="pattern search for large norm ratios"))
    defaults = SearchConfig()
    sp.add_argument("--m", type=int, default=defaults.m)
    sp.add_argument("--n", type=int, default=defaults.n)
    sp.add_argument("--p", default="2")
    sp.add_argument("--restarts", type=int, default=defaults.restarts)
    sp.add_argument("--iters", type=int, default=defaults.max_iters)
    sp.add_argument("--step", type=float, default=defaults.step)
    sp.add_argument("--shrink", type=float, default=defaults.shrink)
    sp.add_argument("--seed", type=int, default=defaults.seed)
    sp.add_argument("--threads", type=int, default=1)
    sp.add_argument("--witness-dir", dest="witness_dir", metavar="DIR")

    sp = sub.add_parser("replay", help="re-run a saved report and diff the results")
    sp.add_argument("report_file")
    sp.add_argument("--threads", type=int, default=None)
    return parser


def _emit(report: dict, dest: str | None) -> None:
    text = json.dumps(report, indent=2) + "\n"
    if dest:
        Path(dest).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "replay":
            new, diffs = replay(args.report_file, args.threads)
            new["replay_of"] = args.report_file
            new["differences"] = diffs
            _emit(new, None)
            return EXIT_THEOREM if diffs else new["exit_code"]
        cfg = {k: v for k, v in vars(args).items() if k not in ("command", "report")}
        if args.command == "conjecture" and not args.table and not args.limit:
            if len(cfg["p"]) != 1 or len(cfg["m"]) != 1:
                raise UsageError("several --p/--m values need --table")
        report = execute(args.command, cfg)
    except (UsageError, AbssumError, MatrixFileError, OSError) as exc:
        print(f"abssum {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _emit(report, args.report)
    return report["exit_code"]


if __name__ == "__main__":
    sys.exit(main())
