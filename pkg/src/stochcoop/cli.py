"""Command-line front end.

Exit codes: 0 when the analysis completed, 1 when the answer is "empty" (or
a payoff is not a member) and ``--fail-on-empty`` is set, or when a
self-test check fails, 2 on any input or validation error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from typing import Any, Optional, Sequence

from . import __version__
from . import io as sio
from . import newsvendor as nv
from .coopgame import core_nonempty, is_convex, parse_coalition
from .distributions import Uniform
from .errors import StochcoopError
from .selftest import run as run_selftest
from .ssd import compare, condition_margins, dominates_numeric
from .ssdcore import (
    DEFAULT_TOL,
    StochasticGame,
    dc_nonempty_dr_normal,
    dc_nonempty_dr_signed,
    dc_nonempty_dr_uniform,
    dc_nonempty_r,
    decide_dr_uniform,
    derive_games,
    dr_signed_condition_feasible,
    membership_report,
)

EXIT_OK, EXIT_EMPTY, EXIT_INPUT = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _global_flags(p: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--tolerance", type=float, default=d(DEFAULT_TOL), help="numeric tolerance")
    p.add_argument("--output", choices=["json", "text"], default=d("json"))
    p.add_argument("--seed", type=int, default=d(0), help="seed for randomized checks")
    p.add_argument("--fail-on-empty", action="store_true", default=d(False))


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="stochcoop", description="SSD-core analysis of stochastic cooperative games")
    parser.add_argument("--version", action="version", version=__version__)
    _global_flags(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)
    top = parser.add_subparsers(dest="group", required=True, parser_class=_Parser)

    ssd = top.add_parser("ssd").add_subparsers(dest="command", required=True, parser_class=_Parser)
    p = ssd.add_parser("compare", parents=[common], help="compare two distributions")
    p.add_argument("--left", required=True, help="JSON file or inline JSON object")
    p.add_argument("--right", required=True, help="JSON file or inline JSON object")
    p.add_argument("--numeric", action="store_true", help="also run the grid integration oracle")

    game = top.add_parser("game").add_subparsers(dest="command", required=True, parser_class=_Parser)
    p = game.add_parser("analyze", parents=[common], help="decide SSD-core nonemptiness")
    p.add_argument("--input", required=True)
    p.add_argument("--allocation-type", choices=["r", "dr", "dr-signed"], default="dr")
    p.add_argument("--report", help="also write the JSON report to this path")
    p = game.add_parser("check", parents=[common], help="check SSD-core membership of a payoff")
    p.add_argument("--input", required=True)
    p.add_argument("--allocation", required=True)

    news = top.add_parser("newsvendor").add_subparsers(dest="command", required=True, parser_class=_Parser)
    p = news.add_parser("analyze", parents=[common], help="decide cooperation without transfers")
    p.add_argument("--input", required=True)
    p = news.add_parser("export-cdf", parents=[common], help="CSV of a coalition's profit CDF")
    p.add_argument("--input", required=True)
    p.add_argument("--coalition", required=True, help='e.g. "1,2"')
    p.add_argument("--points", type=int, default=200)

    top.add_parser("selftest", parents=[common], help="run the golden examples")
    return parser


# ------------------------------------------------------------------ helpers


def _vec(x) -> Optional[list]:
    return None if x is None else [float(v) for v in x]


def _load_dist_arg(arg: str):
    text = arg.strip()
    obj = json.loads(text) if text.startswith("{") else sio.load_json(arg)
    return sio.distribution_from_dict(obj)


def _render_text(obj: Any, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and not _is_flat_list(v):
                lines.append(f"{pad}{k}:")
                lines.extend(_render_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
    elif isinstance(obj, list):
        for item in obj:
            if isinstance(item, dict):
                first = True
                for line in _render_text(item, indent + 1):
                    lines.append((pad + "- " + line.lstrip()) if first else line)
                    first = False
            else:
                lines.append(f"{pad}- {_scalar(item)}")
    return lines


def _is_flat_list(v) -> bool:
    return isinstance(v, list) and all(not isinstance(x, (dict, list)) for x in v)


def _scalar(v) -> str:
    if isinstance(v, list):
        return "[" + ", ".join(_scalar(x) for x in v) + "]"
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "true" if v else "false"
    return json.dumps(v)


def _coalition_table(rows: list[dict]) -> list[str]:
    head = f"{'coalition':<12}{'protection':>22}{'market_quality':>22}"
    out = [head, "-" * len(head)]
    for r in rows:
        out.append(f"{r['coalition']:<12}{json.dumps(r['protection']):>22}{json.dumps(r['market_quality']):>22}")
    return out


def _emit(args, report: dict, extra_text: Optional[list[str]] = None) -> None:
    if args.output == "json":
        print(sio.dumps(report))
        return
    for line in _render_text(report):
        print(line)
    for line in extra_text or []:
        print(line)


def _envelope(args, command: str, result: dict) -> dict:
    return {
        "command": command,
        "version": __version__,
        "tolerance": args.tolerance,
        "result": result,
    }


# ----------------------------------------------------------------- commands


def _cmd_ssd_compare(args) -> int:
    x, y = _load_dist_arg(args.left), _load_dist_arg(args.right)
    result = {
        "left": sio.distribution_to_dict(x),
        "right": sio.distribution_to_dict(y),
        "verdict": compare(x, y, args.tolerance).value,
        "left_over_right_margins": {k: v for k, v in condition_margins(x, y)},
        "right_over_left_margins": {k: v for k, v in condition_margins(y, x)},
    }
    if args.numeric:
        result["numeric"] = {
            "left_over_right": dominates_numeric(x, y).to_dict(),
            "right_over_left": dominates_numeric(y, x).to_dict(),
        }
    _emit(args, _envelope(args, "ssd compare", result))
    return EXIT_OK


def _structure_flags(g: StochasticGame, tol: float) -> dict:
    games = derive_games(g)
    flags = {"mean_core_nonempty": core_nonempty(games.mean, tol) is not None}
    if games.deviation is not None:
        flags["deviation_game"] = games.deviation.to_dict()["values"]
    if games.lower is not None:
        flags["lower_core_nonempty"] = core_nonempty(games.lower, tol) is not None
        flags["lower_convex"] = is_convex(games.lower)
    flags["mean_game"] = games.mean.to_dict()["values"]
    return flags


def _analyze_derived(obj, kind: str, tol: float) -> dict:
    mean, lower = sio.derived_from_dict(obj)
    if kind == "r":
        raise StochcoopError("r-type analysis needs full distributions, not derived games")
    if kind == "dr-signed":
        w = dr_signed_condition_feasible(mean, lower, tol)
        return {
            "nonempty": w is not None,
            "witness": None if w is None else {"d": _vec(w.d), "r": _vec(w.r)},
            "flags": {
                "mean_core_nonempty": core_nonempty(mean, tol) is not None,
                "lower_core_nonempty": core_nonempty(lower, tol) is not None,
            },
        }
    return _decision_dict(decide_dr_uniform(mean, lower, tol))


def _decision_dict(rep) -> dict:
    out = {
        "nonempty": rep.nonempty,
        "witness": None if rep.witness is None else {"d": _vec(rep.witness.d), "r": _vec(rep.witness.r)},
        "flags": {
            "mean_core_nonempty": rep.mean_core_nonempty,
            "lower_core_nonempty": rep.lower_core_nonempty,
            "lower_convex": rep.lower_convex,
            "theorem_consistent": rep.theorem_consistent,
        },
    }
    if rep.constructive_witness is not None:
        out["constructive_witness"] = {
            "d": _vec(rep.constructive_witness.d),
            "r": _vec(rep.constructive_witness.r),
        }
    return out


def _analyze_game(g: StochasticGame, kind: str, tol: float) -> dict:
    if kind == "r":
        w = dc_nonempty_r(g, tol)
        return {
            "nonempty": w is not None,
            "witness": None if w is None else {"r": _vec(w.r)},
            "flags": _structure_flags(g, tol),
        }
    if kind == "dr-signed":
        w = dc_nonempty_dr_signed(g, tol)
        out = {"nonempty": w is not None, "witness": None if w is None else {"d": _vec(w.d), "r": _vec(w.r)}}
    elif isinstance(g.grand, Uniform):
        out = _decision_dict(dc_nonempty_dr_uniform(g, tol))
    else:
        w = dc_nonempty_dr_normal(g, tol)
        out = {"nonempty": w is not None, "witness": None if w is None else {"d": _vec(w.d), "r": _vec(w.r)}}
    out["flags"] = {**_structure_flags(g, tol), **out.get("flags", {})}
    return out


def _cmd_game_analyze(args) -> int:
    obj = sio.load_json(args.input)
    kind = args.allocation_type
    if sio.is_derived_file(obj):
        result = {"input": "derived games", **_analyze_derived(obj, kind, args.tolerance)}
    else:
        g = sio.game_from_dict(obj)
        result = {"input": f"{g.family} game", **_analyze_game(g, kind, args.tolerance)}
    result = {"allocation_type": kind, "verdict": "nonempty" if result["nonempty"] else "empty", **result}
    report = _envelope(args, "game analyze", result)
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(sio.dumps(report) + "\n")
    _emit(args, report)
    return EXIT_EMPTY if args.fail_on_empty and not result["nonempty"] else EXIT_OK


def _cmd_game_check(args) -> int:
    g = sio.game_from_dict(sio.load_json(args.input))
    alloc = sio.allocation_from_dict(sio.load_json(args.allocation))
    rep = membership_report(g, alloc, args.tolerance)
    first = rep.first_violation
    result = {
        "allocation": sio.allocation_to_dict(alloc),
        "member": rep.member,
        "efficient": rep.efficient,
        "efficiency_failures": list(rep.efficiency_failures),
        "first_violation": None
        if first is None
        else {"coalition": first.key, "condition": first.failed, "margin": first.margin},
        "coalitions": [
            {"coalition": c.key, "holds": c.holds, "condition": c.failed, "margin": c.margin}
            for c in rep.coalitions
        ],
    }
    _emit(args, _envelope(args, "game check", result))
    return EXIT_EMPTY if args.fail_on_empty and not rep.member else EXIT_OK


def _cmd_newsvendor_analyze(args) -> int:
    prob = sio.newsvendor_from_dict(sio.load_json(args.input))
    rep = nv.cooperation_feasible(prob, args.tolerance)
    direct = nv.cooperation_feasible_direct(prob, args.tolerance)
    result = {
        "alpha": prob.alpha,
        "direct_feasible": direct.feasible,
        **rep.to_dict(),
    }
    _emit(args, _envelope(args, "newsvendor analyze", result), _coalition_table(result["coalitions"]))
    return EXIT_EMPTY if args.fail_on_empty and not rep.feasible else EXIT_OK


def _cmd_newsvendor_export(args) -> int:
    prob = sio.newsvendor_from_dict(sio.load_json(args.input))
    mask = parse_coalition(args.coalition, prob.n)
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["x", "F"])
    for x, f in nv.cdf_table(prob, mask, args.points):
        writer.writerow([repr(x), repr(f)])
    return EXIT_OK


def _cmd_selftest(args) -> int:
    results = run_selftest(args.seed)
    ok = all(r.passed for r in results)
    if args.output == "json":
        rows = [{"check": r.name, "passed": r.passed, "error": r.error} for r in results]
        print(sio.dumps(_envelope(args, "selftest", {"passed": ok, "checks": rows})))
    else:
        for r in results:
            status = "PASS" if r.passed else "FAIL"
            tail = f"  ({r.error})" if r.error else ""
            print(f"{status}  {r.name}  [{r.seconds * 1000:.1f} ms]{tail}")
        print(f"{sum(r.passed for r in results)}/{len(results)} passed")
    return EXIT_OK if ok else EXIT_EMPTY


COMMANDS = {
    ("ssd", "compare"): _cmd_ssd_compare,
    ("game", "analyze"): _cmd_game_analyze,
    ("game", "check"): _cmd_game_check,
    ("newsvendor", "analyze"): _cmd_newsvendor_analyze,
    ("newsvendor", "export-cdf"): _cmd_newsvendor_export,
    ("selftest", None): _cmd_selftest,
}


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.tolerance <= 0:
        print("error: --tolerance must be positive", file=sys.stderr)
        return EXIT_INPUT
    handler = COMMANDS[(args.group, getattr(args, "command", None))]
    try:
        return handler(args)
    except (StochcoopError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
