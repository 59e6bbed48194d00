"""Command-line front end.

Every subcommand prints one canonical JSON report (sorted keys, exact
numbers as strings, decimals only in ``*_approx`` fields) and exits with

    0  success / verified        1  negative verdict
    2  usage or parse error      3  budget exceeded
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .certify import certify_no_t_slab
from .distset import DistanceSet, parse_distance_set
from .errors import BudgetExceeded, ParseError, PropagationContradiction
from .exact import DEFAULT_RADICAND, format_quad, format_quad_csv
from .lattice import (
    DEFAULT_WINDOW_BUDGET,
    PartialColoring,
    Window,
    find_clique,
    find_linear_coloring,
    match_linear,
    point_rows,
    propagate_forced,
    window_chromatic,
    write_points_csv,
)
from .slab import chi_m_bounds, parse_slab_coloring, unit_slab_coloring, verify_slab
from .zgraph import DEFAULT_STATE_BUDGET, chi_integer

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class _Negative(Exception):
    """Internal: command finished with a negative verdict."""


def _q(x) -> str:
    return format_quad(x)


def _quad(x) -> dict:
    return {"exact": format_quad(x), "exact_approx": float(x)}


def _slab_dict(slab) -> dict:
    return {
        "mode": slab.mode,
        "colors": slab.num_colors,
        "breakpoints": [_q(b) for b in slab.breakpoints],
        "slab_colors": list(slab.colors),
        "text": slab.to_text(),
    }


def _window(args, dset=None) -> Window:
    w = Window.square(args.window)
    return w.for_distance_set(dset) if dset is not None else w


def _require_t(args) -> int:
    if args.t is None:
        raise ParseError(f"{args.command} needs --t")
    return args.t


def _canonical_seed(dset, t):
    clique = find_clique(dset, t)
    points = clique if clique else tuple((j, 0) for j in range(t))
    return clique, PartialColoring(t, {p: j for j, p in enumerate(points)})


# -- subcommands ----------------------------------------------------------------


def cmd_analyze(args, dset, report):
    report["result"] = {
        "elements": [_quad(e) for e in dset.elements],
        "rank": dset.rank,
        "commensurable": dset.commensurable,
        "basis": [_quad(b) for b in dset.basis],
        "lattice_coords": [list(c) for c in dset.lattice_coords],
        "alpha": None if dset.alpha is None else _q(dset.alpha),
        "integer_form": None if dset.integer_form is None else list(dset.integer_form),
    }
    return "ok"


def cmd_chi(args, dset, report):
    if dset.rank == 1:
        chi, pc = chi_integer(dset.integer_form, args.budget_states)
        report["result"] = {
            "chi": chi,
            "alpha": _q(dset.alpha),
            "integer_form": list(dset.integer_form),
            "periodic_witness": {"period": pc.period, "colors": list(pc.colors)},
        }
        return "exact"
    box = Window.box(0, args.chi_window)
    wc = window_chromatic(dset, box, t_max=2 * len(dset) + 1)
    upper = None
    for t in range(wc.chi, 2 * len(dset) + 2):
        lc = find_linear_coloring(dset, t)
        if lc is not None:
            upper = {"t": t, "weights": list(lc.weights)}
            break
    exact = upper is not None and upper["t"] == wc.chi
    report["params"]["chi_window"] = box.to_dict()
    report["result"] = {
        "chi": wc.chi if exact else None,
        "lower": wc.chi,
        "upper": upper["t"] if upper else None,
        "linear_coloring": upper,
    }
    if not exact:
        raise _Negative("bounds")
    return "exact"


def cmd_chi_m(args, dset, report):
    b = chi_m_bounds(dset, _window(args), budget_states=args.budget_states)
    report["result"] = {
        "lower": b.lower,
        "upper": b.upper,
        "exact": b.exact,
        "chi": b.chi,
        "upper_witness": _slab_dict(b.slab_witness),
        "literature_upper": b.literature_upper,
        "notes": list(b.notes),
    }
    report["certificates"] = [c.to_dict() for c in b.certificates]
    if not b.exact:
        raise _Negative("gap")
    return "exact"


def cmd_clique(args, dset, report):
    t = _require_t(args)
    clique = find_clique(dset, t)
    report["result"] = {
        "t": t,
        "clique": None if clique is None else [list(p) for p in clique],
        "values": None if clique is None else [_q(dset.value(p)) for p in clique],
    }
    if clique is None:
        raise _Negative("none")
    return "found"


def cmd_propagate(args, dset, report):
    t = _require_t(args)
    window = _window(args, dset)
    clique, seed = _canonical_seed(dset, t)
    prop = propagate_forced(dset, t, seed, window)
    match = match_linear(prop.coloring, dset) if prop.fully_forced else None
    report["result"] = {
        "seed": [[p[0], p[1], c] for p, c in sorted(seed.assignments.items())],
        "seed_is_clique": clique is not None,
        "forced_points": len(prop.coloring),
        "window_points": window.size,
        "fully_forced": prop.fully_forced,
        "transcript_steps": len(prop.transcript),
        "linear_match": None
        if match is None
        else {"weights": list(match[0].weights), "renaming": {str(r): c for r, c in match[1].items()}},
    }
    if args.points:
        write_points_csv(args.points, point_rows(prop.coloring, dset))
    if not prop.fully_forced:
        raise _Negative("not_fully_forced")
    return "fully_forced"


def cmd_certify(args, dset, report):
    t = _require_t(args)
    cert = certify_no_t_slab(dset, t, _window(args))
    report["result"] = {
        "certified": cert.verdict,
        "ell": cert.payload["ell"],
        "verdicts": cert.payload["verdicts"],
        "statement": cert.payload["statement"],
        "interpretation": cert.payload["interpretation"],
    }
    report["certificates"] = [cert.to_dict()]
    if not cert.verdict:
        raise _Negative("not_certified")
    return "certified"


def _load_slab(args, dset):
    if args.slab:
        return parse_slab_coloring(Path(args.slab).read_text(), dset.radicand)
    return unit_slab_coloring(dset)


def cmd_verify_slab(args, dset, report):
    slab = _load_slab(args, dset)
    violation = verify_slab(slab, dset)
    report["params"]["slab_source"] = args.slab or "unit_slab_coloring"
    report["result"] = {
        "proper": violation is None,
        "slab": _slab_dict(slab),
        "violation": None if violation is None else violation.to_dict(),
    }
    if violation is not None:
        raise _Negative("improper")
    return "proper"


def slab_rows(slab) -> list:
    """One CSV row per slab, sampled at the slab midpoint (no lattice coordinates)."""
    rows = []
    for lo, hi, c in zip(slab.breakpoints, slab.breakpoints[1:], slab.colors):
        mid = (lo + hi) / 2
        rows.append(("", "", format_quad_csv(mid), f"{float(mid):.12g}", c))
    return rows


def emit_points(source: str, dset: DistanceSet, path, t=None, window=None, slab=None) -> int:
    """Write the point dump for one coloring source; returns the row count."""
    if source == "slab":
        rows = slab_rows(slab if slab is not None else unit_slab_coloring(dset))
    elif source == "linear":
        lc = find_linear_coloring(dset, t)
        if lc is None:
            raise ValueError(f"no linear coloring with {t} colors")
        rows = point_rows(lc.on_window(window), dset)
    elif source == "forced":
        _, seed = _canonical_seed(dset, t)
        rows = point_rows(propagate_forced(dset, t, seed, window).coloring, dset)
    elif source == "empty":
        rows = []
    else:
        raise ValueError(f"unknown point source {source!r}")
    write_points_csv(path, rows)
    return len(rows)


def cmd_emit_points(args, dset, report):
    if not args.points:
        raise ParseError("emit-points needs --points <path>")
    t = args.t if args.source == "slab" else _require_t(args)
    slab = _load_slab(args, dset) if args.source == "slab" else None
    try:
        n = emit_points(args.source, dset, args.points, t, _window(args, dset), slab)
    except ValueError as exc:
        report["result"] = {"rows": 0, "error": str(exc)}
        raise _Negative("no_coloring")
    report["result"] = {"rows": n, "path": str(args.points), "source": args.source}
    return "written"


COMMANDS = {
    "analyze": cmd_analyze,
    "chi": cmd_chi,
    "chi-m": cmd_chi_m,
    "clique": cmd_clique,
    "propagate": cmd_propagate,
    "certify-no-slab": cmd_certify,
    "verify-slab": cmd_verify_slab,
    "emit-points": cmd_emit_points,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-d", "--distances", required=True, help='distance set, e.g. "1, 2, s, 2s, 1+s"')
    common.add_argument("--radicand", type=int, default=DEFAULT_RADICAND, help="m in s = sqrt(m)")
    common.add_argument("--window", type=int, default=20, help="lattice window [-W, W]^2")
    common.add_argument("--t", type=int, default=None, help="number of colors")
    common.add_argument("--budget-states", type=int, default=DEFAULT_STATE_BUDGET)
    common.add_argument("--json", type=Path, default=None, help="also write the report here")
    common.add_argument("--points", type=Path, default=None, help="CSV point dump path")

    parser = argparse.ArgumentParser(prog="slabcolor", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"slabcolor {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("analyze", parents=[common], help="rank, basis and integer form of D")
    p = sub.add_parser("chi", parents=[common], help="chromatic number of G(R, D)")
    p.add_argument("--chi-window", type=int, default=6, help="box [0, N]^2 for the rank-2 lower bound")
    sub.add_parser("chi-m", parents=[common], help="bounds on the slab chromatic number")
    sub.add_parser("clique", parents=[common], help="find a t-clique through 0")
    sub.add_parser("propagate", parents=[common], help="forced propagation from the clique seed")
    sub.add_parser("certify-no-slab", parents=[common], help="certificate that no t-slab coloring exists")
    p = sub.add_parser("verify-slab", parents=[common], help="check a slab coloring exactly")
    p.add_argument("--slab", default=None, help="slab-coloring text file (default: unit slabs)")
    p = sub.add_parser("emit-points", parents=[common], help="write a CSV point dump")
    p.add_argument("--source", choices=("linear", "forced", "slab"), default="forced")
    p.add_argument("--slab", default=None, help="slab-coloring text file for --source slab")
    return parser


def _params(args) -> dict:
    return {
        "window": args.window,
        "t": args.t,
        "budget_states": args.budget_states,
        "window_budget": DEFAULT_WINDOW_BUDGET,
    }


def run(argv=None) -> tuple:
    """Execute one invocation; returns ``(report, exit_code)`` without printing."""
    return execute(build_parser().parse_args(argv))


def execute(args) -> tuple:
    report = {
        "command": args.command,
        "input": {"distances": args.distances, "radicand": args.radicand},
        "params": _params(args),
        "result": None,
        "certificates": [],
        "version": __version__,
    }
    try:
        dset = parse_distance_set(args.distances, args.radicand)
        report["input"]["distances"] = dset.to_text()
        verdict = COMMANDS[args.command](args, dset, report)
        code = EXIT_OK
    except _Negative as neg:
        verdict, code = str(neg), EXIT_NEGATIVE
    except PropagationContradiction as exc:
        verdict, code = "contradiction", EXIT_NEGATIVE
        report["error"] = {"type": "contradiction", "message": str(exc), "point": list(exc.point)}
    except BudgetExceeded as exc:
        verdict, code = "budget_exceeded", EXIT_BUDGET
        report["error"] = {"type": "budget", "message": str(exc)}
    except (ParseError, ValueError, OSError) as exc:
        verdict, code = "error", EXIT_USAGE
        report["error"] = {
            "type": type(exc).__name__,
            "message": str(exc),
            "position": getattr(exc, "position", None),
        }
    report["verdict"] = verdict
    report["exit_code"] = code
    return report, code


def dumps(report) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    report, code = execute(args)
    text = dumps(report)
    sys.stdout.write(text)
    if args.json is not None:
        args.json.write_text(text)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
