"""Command line front end.

    arm exec "move to 100 100 0"     run one command (exit 0/2/3, see below)
    arm repl                         interactive transcript
    arm trace --out DIR CMD [CMD..]  run commands, export trace files
    arm serve --config FILE --port N HTTP API + stream
    arm validate                     check dictionary/scripts/calibration

Exit codes for exec: 0 settled, 2 command not recognized, 3 target
unreachable, 1 any other failure.  ARM_CONFIG points at a config file
when --config is not given.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path

from armctl.service import ArmService, CommandOutcome, load_config

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_NOT_RECOGNIZED = 2
EXIT_UNREACHABLE = 3


def exit_code_for(outcome: CommandOutcome) -> int:
    if outcome.error_kind is None:
        return EXIT_OK
    if outcome.error_kind in ("not_recognized", "empty_input"):
        return EXIT_NOT_RECOGNIZED
    if outcome.error_kind == "unreachable":
        return EXIT_UNREACHABLE
    return EXIT_FAILURE


def _slug(text: str) -> str:
    return re.sub(r"[^a-z0-9]+", "_", text.lower()).strip("_") or "cmd"


def write_trace_files(service: ArmService, outcome: CommandOutcome, out_dir: Path) -> list[Path]:
    out_dir.mkdir(parents=True, exist_ok=True)
    trace = service.traces[outcome.trace_id]
    stem = f"{outcome.request_id:03d}_{_slug(outcome.text)}"
    frames_path = out_dir / f"{stem}.frames.log"
    csv_path = out_dir / f"{stem}.trajectory.csv"
    frames_path.write_text(trace.frames_log(), encoding="ascii")
    csv_path.write_text(trace.trajectory_csv(), encoding="ascii")
    return [frames_path, csv_path]


def cmd_exec(args) -> int:
    service = ArmService(load_config(args.config))
    outcome = service.process_command(" ".join(args.text))
    print(outcome.response)
    if args.out:
        for path in write_trace_files(service, outcome, Path(args.out)):
            print(f"wrote {path}", file=sys.stderr)
    if args.json:
        print(json.dumps(outcome.to_dict(), indent=2))
    return exit_code_for(outcome)


def cmd_repl(args) -> int:
    service = ArmService(load_config(args.config))
    print("arm ready; type commands, 'exit' to leave", file=sys.stderr)
    while True:
        try:
            line = input("you> " if sys.stdin.isatty() else "")
        except EOFError:
            return EXIT_OK
        if line.strip().lower() in ("exit", "quit"):
            return EXIT_OK
        if not sys.stdin.isatty():
            print(f"you> {line}")
        outcome = service.process_command(line)
        print(f"arm> {outcome.response}")


def cmd_trace(args) -> int:
    service = ArmService(load_config(args.config))
    out_dir = Path(args.out)
    worst = EXIT_OK
    for text in args.commands:
        outcome = service.process_command(text)
        for path in write_trace_files(service, outcome, out_dir):
            print(f"wrote {path}")
        worst = max(worst, exit_code_for(outcome))
    return worst


def cmd_serve(args) -> int:
    from armctl.server import serve

    serve(load_config(args.config), host=args.host, port=args.port,
          console_dir=args.console)
    return EXIT_OK


def cmd_validate(args) -> int:
    try:
        service = ArmService(load_config(args.config))
    except Exception as exc:
        print(f"INVALID: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    report = service.validation_report()
    print(f"dictionary: {report['dictionary']['entries']} entries "
          f"({report['dictionary']['path']})")
    print(f"scripts: {', '.join(report['scripts']['names'])} "
          f"({report['scripts']['path']})")
    print(f"calibration: {report['calibration']['channels']} channels "
          f"({report['calibration']['path']})")
    print(f"geometry: l1={report['geometry']['l1']} mm, l2={report['geometry']['l2']} mm")
    print("OK")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="arm", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("exec", help="run a single text command")
    p.add_argument("text", nargs="+", help="operator command text")
    p.add_argument("--config", default=None)
    p.add_argument("--out", default=None, help="directory for trace files")
    p.add_argument("--json", action="store_true", help="print the full outcome as JSON")
    p.set_defaults(func=cmd_exec)

    p = sub.add_parser("repl", help="interactive command transcript")
    p.add_argument("--config", default=None)
    p.set_defaults(func=cmd_repl)

    p = sub.add_parser("trace", help="run commands and export their traces")
    p.add_argument("commands", nargs="+", help="command texts to run in order")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--config", default=None)
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("serve", help="run the HTTP API")
    p.add_argument("--config", default=None)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--console", default=None,
                   help="directory with the built operator console to host at /")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("validate", help="check config and data files")
    p.add_argument("--config", default=None)
    p.set_defaults(func=cmd_validate)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
