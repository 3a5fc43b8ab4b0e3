"""Command-line front end: ``ehrhart-lab <subcommand> ...``.

Structures are printed as compact JSON and scans as CSV.  Exit status is 0 on
success, 2 when the input or flags are invalid, and 1 when a computation or a
self-check fails.
"""
from __future__ import annotations

import argparse
import os
import sys
from typing import Any, Callable, Sequence

from . import constructions as cons
from .ehrhart import (
    ehrhart_qp,
    index_sequence,
    period_sequence,
    pip_report,
    scott_admissible,
)
from .geometry import Point2, as_rational, format_rational
from .io import (
    FormatError,
    dumps,
    point_to_json,
    polygon_from_json,
    polygon_to_json,
    qp_to_json,
    read_json,
    word_from_json,
    word_to_json,
)
from .lattice import count_lattice_points, oracle_count
from .reflexive import (
    extract_word,
    polar_dual,
    reconstruct_path,
    reflexivity_report,
    twelve_sum,
    word_product,
)
from .scans import pip_scan, pip_scan_csv

THREADS_ENV = "EHRHART_LAB_THREADS"


class CommandFailed(RuntimeError):
    """A computation finished but its self-check did not pass; ``text`` is still emitted."""

    def __init__(self, message: str, text: str) -> None:
        super().__init__(message)
        self.text = text


def _positive(flag: str) -> Callable[[str], int]:
    def parse(text: str) -> int:
        try:
            value = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{flag} expects an integer, got {text!r}") from None
        if value < 1:
            raise argparse.ArgumentTypeError(f"{flag} must be >= 1, got {value}")
        return value

    return parse


def _non_negative(flag: str) -> Callable[[str], int]:
    def parse(text: str) -> int:
        try:
            value = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{flag} expects an integer, got {text!r}") from None
        if value < 0:
            raise argparse.ArgumentTypeError(f"{flag} must be >= 0, got {value}")
        return value

    return parse


def _lattice_point(text: str) -> Point2:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"--anchor expects 'x,y', got {text!r}")
    try:
        return Point2(as_rational(parts[0]), as_rational(parts[1]))
    except (TypeError, ValueError):
        raise argparse.ArgumentTypeError(f"--anchor expects rational coordinates, got {text!r}") from None


def scan_threads() -> int:
    """Parallelism cap from the environment; scans currently run on one thread."""
    raw = os.environ.get(THREADS_ENV)
    if raw is None or raw == "":
        return 1
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{THREADS_ENV} must be a positive integer, got {raw!r}") from None
    if value < 1:
        raise ValueError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    return value


def _load_polygon(path: str):
    return polygon_from_json(read_json(path))


def _construction_output(cert: cons.ConstructionCertificate) -> dict:
    out = polygon_to_json(cert.polygon)
    out["certificate"] = cert.to_json()
    return out


def _periods_json(P) -> dict:
    s = period_sequence(ehrhart_qp(P))
    return {"s": list(s.as_tuple()), "quasi_period": s.quasi_period, "j": list(index_sequence(P).as_tuple())}


# ---------------------------------------------------------------------------
# Subcommand handlers: each returns the text to emit.


def cmd_count(args: argparse.Namespace) -> str:
    P = _load_polygon(args.polygon)
    return dumps({"n": args.n, "count": count_lattice_points(P, args.n)})


def cmd_oracle_count(args: argparse.Namespace) -> str:
    P = _load_polygon(args.polygon)
    return dumps({"n": args.n, "count": oracle_count(P, args.n)})


def cmd_ehrhart(args: argparse.Namespace) -> str:
    return dumps(qp_to_json(ehrhart_qp(_load_polygon(args.polygon))))


def cmd_periods(args: argparse.Namespace) -> str:
    return dumps(_periods_json(_load_polygon(args.polygon)))


def cmd_indices(args: argparse.Namespace) -> str:
    return dumps({"j": list(index_sequence(_load_polygon(args.polygon)).as_tuple())})


def cmd_pip_report(args: argparse.Namespace) -> str:
    r = pip_report(_load_polygon(args.polygon))
    return dumps(
        {
            "is_pip": r.is_pip,
            "pick_defect": format_rational(r.pick_defect),
            "boundary_scaling_ok": r.boundary_scaling_ok,
            "interior": r.interior,
            "boundary": r.boundary,
            "s": list(r.periods.as_tuple()),
        }
    )


def _gadget_certificate(P, expected: tuple[int, int, int], extra_ok: bool) -> cons.ConstructionCertificate:
    got = period_sequence(ehrhart_qp(P)).as_tuple()
    return cons.ConstructionCertificate(P, {"period_sequence": list(expected)}, got == expected and extra_ok)


def cmd_construct(args: argparse.Namespace) -> str:
    kind = args.kind
    if kind == "scott":
        cert = cons.scott_certificate(args.I, args.b, args.bound)
    elif kind == "pip-b1":
        cert = cons.pip_b1(args.I)
    elif kind == "pip-b2":
        cert = cons.pip_b2(args.I)
    elif kind == "heptagon":
        hept = cons.heptagon_h(args.s)
        cert = _gadget_certificate(hept.polygon, (1, args.s, 1), cons.heptagon_gluing_ok(args.s))
    elif kind == "triangle-q":
        Q = cons.triangle_q(args.r, args.anchor)
        terms = 5 * args.r + 1
        series_ok = [int(c) for c in cons.q_generating_series(args.r, terms)] == cons.q_count_series(
            args.r, terms
        )
        cert = _gadget_certificate(Q, (args.r, 1, 1), series_ok)
    else:
        cert = cons.period_polygon(args.r, args.s)
    text = dumps(_construction_output(cert))
    if not cert.verified:
        raise CommandFailed("construction failed its self-check", text)
    return text


def cmd_dual(args: argparse.Namespace) -> str:
    return dumps(polygon_to_json(polar_dual(_load_polygon(args.polygon))))


def cmd_reflexive(args: argparse.Namespace) -> str:
    r = reflexivity_report(_load_polygon(args.polygon))
    return dumps(
        {
            "reflexive": r.reflexive,
            "pseudo_reflexive": r.pseudo_reflexive,
            "boundary": r.boundary,
            "dual_boundary": r.dual_boundary,
            "twelve": r.twelve,
        }
    )


def cmd_word(args: argparse.Namespace) -> str:
    if args.action == "extract":
        return dumps(word_to_json(extract_word(_load_polygon(args.input))))
    w = word_from_json(read_json(args.input))
    if args.action == "product":
        m = word_product(w)
        return dumps(
            {
                "matrix": [[format_rational(c) for c in row] for row in m.rows],
                "identity": m == m.identity(),
                "sum": format_rational(twelve_sum(w)),
            }
        )
    path = reconstruct_path(w)
    out: dict[str, Any] = {
        "vertices": [point_to_json(v) for v in path.vertices],
        "winding": path.winding,
        "closes": path.closes,
    }
    return dumps(out)


def scott_map_csv(max_I: int, max_b: int, pips: bool) -> str:
    header = ["I", "b", "realizable_integral"] + (["realizable_pip_known"] if pips else [])
    lines = [",".join(header)]
    for I in range(max_I + 1):
        for b in range(max_b + 1):
            row = [I, b, int(scott_admissible(I, b))]
            if pips:
                row.append(int(scott_admissible(I, b, allow_pip_extension=True)))
            lines.append(",".join(map(str, row)))
    return "\n".join(lines) + "\n"


def cmd_scott_map(args: argparse.Namespace) -> str:
    return scott_map_csv(args.max_I, args.max_b, args.pips)


def cmd_pip_scan(args: argparse.Namespace) -> str:
    scan_threads()
    return pip_scan_csv(pip_scan(args.max_den, args.bound, args.dilate_bound))


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ehrhart-lab", description="Exact Ehrhart quasi-polynomials of rational polygons."
    )
    parser.add_argument("-o", "--output", help="write the result to this file instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def polygon_command(name: str, handler, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("polygon", help='polygon JSON file ("-" for stdin)')
        p.set_defaults(handler=handler)
        return p

    for name, handler, help_text in (
        ("count", cmd_count, "lattice points of the n-th dilate (scanline)"),
        ("oracle-count", cmd_oracle_count, "lattice points of the n-th dilate (brute force)"),
    ):
        p = polygon_command(name, handler, help_text)
        p.add_argument("-n", "--n", type=_positive("--n"), required=True, help="dilation factor")
    polygon_command("ehrhart", cmd_ehrhart, "fitted Ehrhart quasi-polynomial")
    polygon_command("periods", cmd_periods, "period sequence, quasi-period and index sequence")
    polygon_command("indices", cmd_indices, "index sequence")
    polygon_command("pip-report", cmd_pip_report, "quasi-period-one test with Pick and scaling checks")
    polygon_command("dual", cmd_dual, "polar dual (origin must be interior)")
    polygon_command("reflexive", cmd_reflexive, "reflexivity report")

    c = sub.add_parser("construct", help="build a polygon with a certificate")
    c.set_defaults(handler=cmd_construct)
    csub = c.add_subparsers(dest="kind", required=True, metavar="KIND")
    s = csub.add_parser("scott", help="integral polygon with given (I, b)")
    s.add_argument("--I", type=_non_negative("--I"), required=True)
    s.add_argument("--b", type=_non_negative("--b"), required=True)
    s.add_argument("--bound", type=_positive("--bound"), default=None, help="largest search grid")
    for kind, help_text in (("pip-b1", "PIP with one boundary point"), ("pip-b2", "PIP with two boundary points")):
        p = csub.add_parser(kind, help=help_text)
        p.add_argument("--I", type=_positive("--I"), required=True)
    h = csub.add_parser("heptagon", help="heptagon with period sequence (1, s, 1)")
    h.add_argument("--s", type=_positive("--s"), required=True)
    q = csub.add_parser("triangle-q", help="triangle with period sequence (r, 1, 1)")
    q.add_argument("--r", type=_positive("--r"), required=True)
    q.add_argument("--anchor", type=_lattice_point, default=Point2(0, 0), help="lattice point 'x,y'")
    pp = csub.add_parser("period", help="polygon with period sequence (r, s, 1)")
    pp.add_argument("--r", type=_positive("--r"), required=True)
    pp.add_argument("--s", type=_positive("--s"), required=True)

    w = sub.add_parser("word", help="generator words of (pseudo-)reflexive polygons")
    w.add_argument("action", choices=("extract", "product", "reconstruct"))
    w.add_argument("input", help='polygon JSON (extract) or word JSON ("-" for stdin)')
    w.set_defaults(handler=cmd_word)

    m = sub.add_parser("scott-map", help="CSV of realizable (I, b) pairs")
    m.add_argument("--max-I", dest="max_I", type=_non_negative("--max-I"), required=True)
    m.add_argument("--max-b", dest="max_b", type=_non_negative("--max-b"), required=True)
    m.add_argument("--pips", action="store_true", help="add the column of pairs known for PIPs")
    m.set_defaults(handler=cmd_scott_map)

    ps = sub.add_parser("pip-scan", help="CSV of PIP triangles on rational grids")
    ps.add_argument("--max-den", dest="max_den", type=_non_negative("--max-den"), required=True)
    ps.add_argument("--bound", type=_non_negative("--bound"), required=True, help="coordinate bound")
    ps.add_argument(
        "--dilate-bound",
        dest="dilate_bound",
        type=_positive("--dilate-bound"),
        default=None,
        help="check counts up to this dilation (default 3 * denominator, which is exact)",
    )
    ps.set_defaults(handler=cmd_pip_scan)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    status = 0
    try:
        text = args.handler(args)
    except CommandFailed as exc:
        print(f"ehrhart-lab: failure: {exc}", file=sys.stderr)
        text, status = exc.text, 1
    except (ValueError, OSError, FormatError) as exc:
        print(f"ehrhart-lab: error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - reported as an internal failure
        print(f"ehrhart-lab: failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    if not text.endswith("\n"):
        text += "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
