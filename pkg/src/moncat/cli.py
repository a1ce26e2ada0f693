"""Command-line interface: check, replay, render, extract, serve.

Exit codes for ``check``: 0 Equal, 1 NotEqual, 2 Unknown, 3 errors.
``replay`` exits 0 on Ok and prints the failing step otherwise.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .diagram import diagram_of_term, extract_expr, layout
from .normalize import Verdict, decide_equal
from .parser import ParseError, parse_goal
from .rewrite import Ok, parse_script, replay
from .svg import render_svg
from .terms import print_term
from .typecheck import TypecheckError, TypedGoal, substitute, typecheck

DEFAULT_PORT = int(os.environ.get("MONCAT_PORT", "8765"))

EXIT_EQUAL = 0
EXIT_NOT_EQUAL = 1
EXIT_UNKNOWN = 2
EXIT_ERROR = 3

_VERDICT_EXIT = {
    Verdict.EQUAL: EXIT_EQUAL,
    Verdict.NOT_EQUAL: EXIT_NOT_EQUAL,
    Verdict.UNKNOWN: EXIT_UNKNOWN,
}


def _load_goal(path: str) -> TypedGoal:
    text = Path(path).read_text(encoding="utf-8")
    return typecheck(parse_goal(text))


def _unfold_all(tg: TypedGoal, term):
    for name, body in tg.definitions.items():
        term = substitute(term, name, body)
    return term


def cmd_check(args: argparse.Namespace) -> int:
    tg = _load_goal(args.goal)
    for name, eq in tg.hypotheses.items():
        v = decide_equal(tg.env, _unfold_all(tg, eq.lhs), _unfold_all(tg, eq.rhs))
        print(f"hypothesis {name}: {v.value}")
    if tg.conclusion is None:
        print("no conclusion")
        return EXIT_ERROR
    lhs = _unfold_all(tg, tg.conclusion.lhs)
    rhs = _unfold_all(tg, tg.conclusion.rhs)
    verdict = decide_equal(tg.env, lhs, rhs)
    print(f"conclusion: {verdict.value}")
    return _VERDICT_EXIT[verdict]


def cmd_replay(args: argparse.Namespace) -> int:
    text = Path(args.goal).read_text(encoding="utf-8")
    goal = parse_goal(text)
    steps = parse_script(Path(args.script).read_text(encoding="utf-8"))
    result = replay(goal, steps)
    if isinstance(result, Ok):
        print("Ok")
        return EXIT_EQUAL
    print(f"failed at step {result.step}: {result.reason}")
    return EXIT_NOT_EQUAL


def cmd_render(args: argparse.Namespace) -> int:
    tg = _load_goal(args.goal)
    out_dir = Path(args.out or ".")
    out_dir.mkdir(parents=True, exist_ok=True)
    styles = {
        name: decl.style for name, decl in tg.goal.signature.generators.items()
    }
    count = 0
    pairs = [(h, tg.hypotheses[h]) for h in tg.hypotheses]
    if tg.conclusion is not None:
        pairs.append(("conclusion", tg.conclusion))
    for name, eq in pairs:
        for side, term in (("lhs", eq.lhs), ("rhs", eq.rhs)):
            d = diagram_of_term(_unfold_all(tg, term), tg.env, styles)
            svg = render_svg(layout(d))
            path = out_dir / f"{name}-{side}.svg"
            path.write_text(svg, encoding="utf-8")
            print(path)
            count += 1
    return EXIT_EQUAL if count else EXIT_ERROR


def cmd_extract(args: argparse.Namespace) -> int:
    tg = _load_goal(args.goal)
    if tg.conclusion is None:
        print("no conclusion", file=sys.stderr)
        return EXIT_ERROR
    for side, term in (("lhs", tg.conclusion.lhs), ("rhs", tg.conclusion.rhs)):
        d = diagram_of_term(_unfold_all(tg, term), tg.env)
        print(f"{side}: {print_term(extract_expr(d))}")
    return EXIT_EQUAL


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .server import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port, log_level="warning")
    return EXIT_EQUAL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="moncat", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="decide the conclusion of a goal file")
    c.add_argument("--goal", required=True)
    c.set_defaults(func=cmd_check)

    r = sub.add_parser("replay", help="validate a proof script against a goal")
    r.add_argument("--goal", required=True)
    r.add_argument("--script", required=True)
    r.add_argument("--format", choices=["neutral", "rocq"], default=None,
                   help="script dialect (auto-detected when omitted)")
    r.set_defaults(func=cmd_replay)

    d = sub.add_parser("render", help="render every equation side as SVG")
    d.add_argument("--goal", required=True)
    d.add_argument("--out", default=".")
    d.set_defaults(func=cmd_render)

    e = sub.add_parser("extract", help="print canonical expressions of the conclusion")
    e.add_argument("--goal", required=True)
    e.set_defaults(func=cmd_extract)

    s = sub.add_parser("serve", help="run the JSON-over-HTTP session service")
    s.add_argument("--port", type=int, default=DEFAULT_PORT)
    s.add_argument("--host", default="127.0.0.1")
    s.set_defaults(func=cmd_serve)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, TypecheckError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
