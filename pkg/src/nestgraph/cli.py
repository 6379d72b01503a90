"""Command-line interface.

Exit codes: 0 on success, 1 when the input is at fault (unreadable or
invalid documents, unknown algorithms, bad options), 2 on internal errors.
"""

from __future__ import annotations

import argparse
import os
import sys

from .graphml import GraphMLError, parse_graphml, write_graphml
from .layout.base import LayoutError, run_layout
from .model import ModelError
from .registry import UnknownAlgorithmError, build_options, describe_all, resolve
from .service import serve
from .svg import render_svg


class InputError(Exception):
    """Anything the caller can fix: files, names, option values."""


def _read_document(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return handle.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _write_text(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(text)


def _parse_opt_pairs(pairs: list[str]) -> dict[str, float]:
    out: dict[str, float] = {}
    for pair in pairs:
        key, separator, value = pair.partition("=")
        if not separator or not key:
            raise InputError(f"--opt expects key=value, got {pair!r}")
        try:
            out[key] = float(value)
        except ValueError:
            raise InputError(f"option {key!r} must be a number, got {value!r}") from None
    return out


def _cmd_layout(args: argparse.Namespace) -> int:
    try:
        entry = resolve(args.algorithm)
    except UnknownAlgorithmError as exc:
        raise InputError(str(exc)) from None
    opts = build_options(_parse_opt_pairs(args.opt), seed=args.seed)
    model = parse_graphml(_read_document(args.infile))
    report = run_layout(model, entry.factory(), opts)
    _write_text(args.outfile, write_graphml(model))
    if args.svg:
        _write_text(args.svg, render_svg(model))
    print(
        f"{entry.name}: {report.iterations_used} iterations, "
        f"final displacement {report.final_total_displacement:.3f}, "
        f"{report.wall_time:.3f}s",
        file=sys.stderr,
    )
    return 0


def _cmd_validate(args: argparse.Namespace) -> int:
    model = parse_graphml(_read_document(args.infile))
    violations = model.validate()
    for violation in violations:
        print(f"{violation.object_id}\t{violation.rule}\t{violation.message}")
    if violations:
        return 1
    print("valid")
    return 0


def _cmd_render(args: argparse.Namespace) -> int:
    model = parse_graphml(_read_document(args.infile))
    _write_text(args.svg, render_svg(model, scale=args.scale))
    return 0


def _cmd_algorithms(_: argparse.Namespace) -> int:
    for info in describe_all():
        print(f"{info['name']}: {info['description']}")
        for option in info["options"]:
            print(f"  --opt {option['name']}=<{option['type']}> (default {option['default']}): {option['description']}")
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    port = args.port
    env_port = os.environ.get("CHISIO_PORT")
    if env_port is not None:
        try:
            port = int(env_port)
        except ValueError:
            raise InputError(f"CHISIO_PORT must be an integer, got {env_port!r}") from None
    serve(port, args.bind)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nestgraph", description="compound graph layout tools")
    commands = parser.add_subparsers(dest="command", required=True)

    layout = commands.add_parser("layout", help="run a layout algorithm over a document")
    layout.add_argument("--algorithm", required=True)
    layout.add_argument("--in", dest="infile", required=True)
    layout.add_argument("--out", dest="outfile", required=True)
    layout.add_argument("--svg", help="also export the result as SVG")
    layout.add_argument("--seed", type=int, default=1)
    layout.add_argument("--opt", action="append", default=[], metavar="KEY=VALUE")
    layout.set_defaults(handler=_cmd_layout)

    validate = commands.add_parser("validate", help="check a document against the model rules")
    validate.add_argument("--in", dest="infile", required=True)
    validate.set_defaults(handler=_cmd_validate)

    render = commands.add_parser("render", help="export a document as SVG")
    render.add_argument("--in", dest="infile", required=True)
    render.add_argument("--svg", required=True)
    render.add_argument("--scale", type=float, default=1.0)
    render.set_defaults(handler=_cmd_render)

    algorithms = commands.add_parser("algorithms", help="list algorithms and their options")
    algorithms.set_defaults(handler=_cmd_algorithms)

    server = commands.add_parser("serve", help="start the HTTP service")
    server.add_argument("--port", type=int, default=8732)
    server.add_argument("--bind", default="127.0.0.1")
    server.set_defaults(handler=_cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except (InputError, GraphMLError, ModelError, LayoutError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # anything else is our bug, not the caller's
        print(f"internal error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
