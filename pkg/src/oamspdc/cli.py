"""Command-line front end: regenerates the amplitude, conversion and
efficiency tables and the joint detection ratios.

Exit status is 0 on success, 2 for bad arguments or inputs outside a
model's domain, 3 when a quadrature fails to converge.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Sequence

from . import serialize
from .detection import DetectionConfig, ElementModel, compare_experiment, detection_report
from .errors import ConvergenceError, DomainError
from .fiber import FiberSpec, q_vector_rows, relative_q_vector
from .hologram import conversion_table
from .numerics import DEFAULT_QUADRATURE, QuadratureSpec
from .spdc import PumpSpec, amplitude_closed_form, amplitude_quadrature, build_state_table

EXIT_USAGE = 2
EXIT_CONVERGENCE = 3

#: closed form vs quadrature agreement demanded by ``amplitudes --verify``
VERIFY_TOLERANCE = 1e-8


class UsageError(Exception):
    pass


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _quadrature(args) -> QuadratureSpec:
    return QuadratureSpec(base_node_count=args.nodes, relative_tolerance=args.tol,
                          max_doublings=args.max_doublings)


def _render(args, rows, columns, meta, **extra) -> str:
    rows = list(rows)
    if args.format == "json":
        return serialize.to_json(meta, rows, **extra)
    return serialize.to_csv(rows, columns)


def cmd_amplitudes(args) -> str:
    pump = PumpSpec(l0=args.l0)
    table = build_state_table(pump, args.lmax, args.pmax)
    if args.verify:
        quad = _quadrature(args)
        for (l1, p1, l2, p2), c in table.entries.items():
            q = amplitude_quadrature(l1, p1, l2, p2, pump, quad)
            scale = abs(c) if abs(c) > 1e-12 else 1.0
            if abs(q - c) > VERIFY_TOLERANCE * scale:
                raise ConvergenceError(f"C({l1},{p1};{l2},{p2}) closed form {c!r} "
                                       f"vs quadrature {q!r}")
    fig1 = [{"p1": p1, "p2": p2, "amplitude": amplitude_closed_form(0, p1, pump.l0, p2, pump.l0)}
            for p1 in range(args.fig_pmax + 1) for p2 in range(args.fig_pmax + 1)]
    fig2 = [{"l": l, "amplitude": amplitude_closed_form(l, 0, pump.l0 - l, 0, pump.l0)}
            for l in range(args.fig_lmax + 1)]
    if args.dataset == "fig1":
        rows, columns = fig1, ("p1", "p2", "amplitude")
    elif args.dataset == "fig2":
        rows, columns = fig2, ("l", "amplitude")
    else:
        rows, columns = list(table.rows()), table.columns
    meta = dict(table.meta(), dataset=args.dataset)
    extra = {"figures": {"fig1": fig1, "fig2": fig2}} if args.dataset == "table" else {}
    return _render(args, rows, columns, meta, **extra)


def cmd_hologram(args) -> str:
    table = conversion_table(args.delta_l, args.pin_max, args.pout_max,
                             waist_w0=args.waist, quadrature=_quadrature(args))
    meta = {"delta_l": args.delta_l, "p_in_max": args.pin_max, "p_out_max": args.pout_max}
    return _render(args, table.records(), table.columns, meta)


def cmd_fiber(args) -> str:
    q = relative_q_vector(args.pmax, FiberSpec(args.mfd), _quadrature(args))
    meta = {"p_max": args.pmax, "mfd": args.mfd}
    return _render(args, q_vector_rows(q), ("p", "q", "q_display"), meta)


def _detection_setup(args) -> tuple[DetectionConfig, ElementModel]:
    config = DetectionConfig(p_pair_max=args.p_pair_max, p_out_cap=args.p_out_cap,
                             restrict_p_to_zero=args.p_zero,
                             ideal_elements=args.ideal_elements)
    return config, ElementModel(config, FiberSpec(args.mfd), quadrature=_quadrature(args))


def cmd_joint(args) -> str:
    config, model = _detection_setup(args)
    report = detection_report(range(args.lmax + 1), config, model)
    if args.format == "json":
        return report.to_json()
    return report.to_csv()


def parse_state(text: str) -> list[tuple[int, float]]:
    """Parse ``"0:0.65,1:0.60,-1:0.47"`` into ``[(0, 0.65), ...]``."""
    pairs = []
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        try:
            l, amp = item.split(":")
            pairs.append((int(l), float(amp)))
        except ValueError:
            raise UsageError(f"bad state term {item!r}, expected L:AMPLITUDE") from None
    return pairs


def cmd_compare(args) -> str:
    if args.state is None:
        raise UsageError("--state is required")
    state = parse_state(args.state)
    config, model = _detection_setup(args)
    report = compare_experiment(state, config, model)
    if args.format == "json":
        return report.to_json()
    return report.to_csv()


def cmd_tables(args) -> str:
    quad = _quadrature(args)
    columns = ("table", "l1", "p1", "l2", "p2", "delta_l", "p_in", "p_out", "value")
    blank = dict.fromkeys(columns, "")
    rows = []
    for r in build_state_table(PumpSpec(), args.lmax, args.pmax).rows():
        if r["l1"] < 0:
            continue
        rows.append({**blank, "table": "table1", "l1": r["l1"], "p1": r["p1"],
                     "l2": r["l2"], "p2": r["p2"], "value": r["amplitude"]})
    for name, dl in (("table2", 1), ("table3", 2)):
        for r in conversion_table(dl, args.pin_max, args.pout_max, quadrature=quad).records():
            rows.append({**blank, "table": name, "delta_l": dl, "p_in": r["p_in"],
                         "p_out": r["p_out"], "value": r["weight"]})
    if args.format == "json":
        json_rows = [{k: v for k, v in r.items() if v != ""} for r in rows]
        meta = {"l_max": args.lmax, "p_max": args.pmax,
                "p_in_max": args.pin_max, "p_out_max": args.pout_max}
        return serialize.to_json(meta, json_rows)
    return serialize.to_csv(rows, columns)


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", metavar="PATH", default=None,
                        help="output file (default: standard output)")
    common.add_argument("--tol", type=float, default=DEFAULT_QUADRATURE.relative_tolerance,
                        help="quadrature relative tolerance")
    common.add_argument("--nodes", type=int, default=DEFAULT_QUADRATURE.base_node_count,
                        help="quadrature base node count")
    common.add_argument("--max-doublings", type=int, default=DEFAULT_QUADRATURE.max_doublings)
    common.add_argument("--config", metavar="PATH", default=None,
                        help="flat key = value file; command-line flags take precedence")
    return common


def _detection_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--p-pair-max", type=int, default=2)
    p.add_argument("--p-out-cap", type=int, default=None)
    p.add_argument("--p-zero", action="store_true", help="keep only p1 = p2 = 0")
    p.add_argument("--ideal-elements", action="store_true",
                   help="no hologram or fiber losses (P = identity, Q = 1)")
    p.add_argument("--mfd", type=float, default=2.0, help="fiber mode field diameter")


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(
        prog="oamspdc",
        description="OAM mode amplitudes of down-converted photon pairs and "
                    "their hologram/fiber detection ratios.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("amplitudes", parents=[common], help="relative pair amplitudes C")
    p.add_argument("--l0", type=int, default=0, help="pump winding number")
    p.add_argument("--lmax", type=int, default=2)
    p.add_argument("--pmax", type=int, default=2)
    p.add_argument("--dataset", choices=("table", "fig1", "fig2"), default="table")
    p.add_argument("--fig-pmax", type=int, default=4)
    p.add_argument("--fig-lmax", type=int, default=4)
    p.add_argument("--verify", action="store_true",
                   help="check every entry against the overlap quadrature")
    p.set_defaults(func=cmd_amplitudes)

    p = sub.add_parser("hologram", parents=[common], help="conversion weights P")
    p.add_argument("--delta-l", type=int, default=1)
    p.add_argument("--pin-max", type=int, default=2)
    p.add_argument("--pout-max", type=int, default=3)
    p.add_argument("--waist", type=float, default=1.0)
    p.set_defaults(func=cmd_hologram)

    p = sub.add_parser("fiber", parents=[common], help="relative fiber efficiencies Q")
    p.add_argument("--pmax", type=int, default=3)
    p.add_argument("--mfd", type=float, default=2.0)
    p.set_defaults(func=cmd_fiber)

    p = sub.add_parser("joint", parents=[common], help="joint detection ratios R_l / R_0")
    p.add_argument("--lmax", type=int, default=2)
    _detection_flags(p)
    p.set_defaults(func=cmd_joint)

    p = sub.add_parser("compare", parents=[common],
                       help="measured state ratios beside the model")
    p.add_argument("--state", default=None, metavar="L:AMP,...",
                   help="measured amplitudes, e.g. 0:0.65,1:0.60,-1:0.47")
    _detection_flags(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("tables", parents=[common], help="amplitude and conversion tables")
    p.add_argument("--lmax", type=int, default=2)
    p.add_argument("--pmax", type=int, default=2)
    p.add_argument("--pin-max", type=int, default=2)
    p.add_argument("--pout-max", type=int, default=3)
    p.set_defaults(func=cmd_tables)
    return parser


def read_config(path: str) -> dict[str, str]:
    """Read ``key = value`` lines; ``#`` starts a comment."""
    values = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        values[key.lstrip("-").replace("-", "_")] = value
    return values


_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


def _config_defaults(subparser: argparse.ArgumentParser, values: dict[str, str]) -> dict:
    actions = {a.dest: a for a in subparser._actions}
    defaults = {}
    for key, raw in values.items():
        action = actions.get(key)
        if action is None or key in ("config", "help", "func"):
            raise UsageError(f"unknown config key {key!r}")
        if action.nargs == 0:
            low = raw.lower()
            if low not in _TRUE | _FALSE:
                raise UsageError(f"config key {key!r} expects a boolean, got {raw!r}")
            defaults[key] = low in _TRUE
        else:
            try:
                defaults[key] = action.type(raw) if action.type else raw
            except ValueError:
                raise UsageError(f"config key {key!r}: bad value {raw!r}") from None
            if action.choices and defaults[key] not in action.choices:
                raise UsageError(f"config key {key!r}: {raw!r} not one of {action.choices}")
    return defaults


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    args = parser.parse_args(argv)
    try:
        if args.config:
            subparser = parser._subparsers._group_actions[0].choices[args.command]
            subparser.set_defaults(**_config_defaults(subparser, read_config(args.config)))
            args = parser.parse_args(argv)
        text = args.func(args)
    except (UsageError, DomainError, OSError) as exc:
        print(f"oamspdc {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConvergenceError as exc:
        print(f"oamspdc {args.command}: numerical failure: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    _emit(text, args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
