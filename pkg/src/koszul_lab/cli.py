"""Thin command-line client.

``koszul-lab run script.ks`` executes a script through the same code path
as the service's POST /run (in-process by default, against a remote
instance with --server) and writes the JSON report and DOT files where the
flags say.  ``koszul-lab serve`` starts the HTTP service.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__
from .runner import EXIT_USAGE, report_to_bytes


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="koszul-lab",
        description="Exact Koszulity computations for quadratic algebras over F_p",
    )
    parser.add_argument("--version", action="version", version=f"koszul-lab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="execute a script and report verdicts")
    run.add_argument("script", help="path to the script file ('-' for stdin)")
    run.add_argument("--degree", type=int, default=None,
                     help="default truncation degree for all checks")
    run.add_argument("--threads", type=int, default=1,
                     help="worker cap for parallel kernels (output independent)")
    run.add_argument("--json", dest="json_out", default=None,
                     help="write the canonical JSON report to this path")
    run.add_argument("--dot", dest="dot_dir", default=None,
                     help="directory for emitted DOT files")
    run.add_argument("--budget", type=int, default=None,
                     help="enumeration budget (fallback: KOSZUL_LAB_BUDGET)")
    run.add_argument("--server", default=None,
                     help="base URL of a running service; default runs in-process")
    run.add_argument("--quiet", action="store_true", help="suppress the summary lines")

    serve = sub.add_parser("serve", help="start the HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8471)
    return parser


def _execute(args, text: str) -> tuple[int, dict, dict[str, str], str | None, str | None]:
    payload = {
        "script": text,
        "degree": args.degree,
        "threads": args.threads,
        "budget": args.budget,
    }
    if args.server:
        import httpx

        response = httpx.post(f"{args.server.rstrip('/')}/run",
                              json=payload, timeout=None)
        response.raise_for_status()
        body = response.json()
        return (body["exit_code"], body["report"], body.get("dot_files", {}),
                body.get("dot_dir_hint"), body.get("json_path_hint"))

    from .service import execute_run
    from .service.schemas import RunRequest

    result = execute_run(RunRequest(**payload))
    return (result.exit_code, result.report, result.dot_files,
            result.dot_dir_hint, result.json_path_hint)


def _summarize(report: dict, stream) -> None:
    error = report.get("error")
    if error:
        loc = ""
        if "line" in error:
            loc = f" at {error['line']}:{error.get('col', 0)}"
        print(f"error [{error['code']}]{loc}: {error['message']}", file=stream)
    for check in report.get("checks", []):
        target = check["target"] or "-"
        qualifier = ""
        if check["status"] == "holds_up_to" and check["up_to"] is not None:
            qualifier = f" (up to degree {check['up_to']})"
        print(f"[{check['status']}]{qualifier} {check['check']} {target}", file=stream)
    summary = report.get("summary", {})
    print(
        f"{summary.get('total_checks', 0)} checks, "
        f"{summary.get('failed_checks', 0)} failed, "
        f"exit {summary.get('exit_code', '?')}",
        file=stream,
    )


def cmd_run(args) -> int:
    if args.script == "-":
        text = sys.stdin.read()
    else:
        path = Path(args.script)
        if not path.exists():
            print(f"koszul-lab: script not found: {path}", file=sys.stderr)
            return EXIT_USAGE
        text = path.read_text(encoding="utf-8")
    exit_code, report, dot_files, dot_dir_hint, json_path_hint = _execute(args, text)

    json_out = args.json_out or json_path_hint
    if json_out:
        Path(json_out).parent.mkdir(parents=True, exist_ok=True)
        Path(json_out).write_bytes(report_to_bytes(report))

    if dot_files:
        dot_dir = args.dot_dir or dot_dir_hint or "dot"
        os.makedirs(dot_dir, exist_ok=True)
        for fname, content in sorted(dot_files.items()):
            Path(dot_dir, fname).write_text(content, encoding="utf-8")

    if not args.quiet:
        _summarize(report, sys.stdout)
    return exit_code


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port)
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return cmd_run(args)
        if args.command == "serve":
            return cmd_serve(args)
    except OSError as exc:
        print(f"koszul-lab: io error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
