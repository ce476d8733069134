"""Command line entry point: ``padic-radii run|check <doc.json>``."""
from __future__ import annotations

import argparse
import sys
from datetime import datetime, timezone
from pathlib import Path
from typing import List, Optional, Sequence

from .document import OK, Report, execute, load_document
from .plfun import PLFun
from .wire import WireError

EXIT_OK, EXIT_TASKS_FAILED, EXIT_BAD_INPUT = 0, 1, 2


def render_svg(funcs: List[PLFun], width: int = 480, height: int = 320) -> str:
    """Polyline plot of PLFuns; coordinates are floats, for viewing only."""
    pts = [(float(x), float(y)) for f in funcs for x, y in f.knots]
    x0, x1 = min(p[0] for p in pts), max(p[0] for p in pts)
    y0, y1 = min(p[1] for p in pts), max(p[1] for p in pts)
    sx = (width - 20) / ((x1 - x0) or 1)
    sy = (height - 20) / ((y1 - y0) or 1)
    lines = []
    for f in funcs:
        coords = " ".join(
            f"{10 + (float(x) - x0) * sx:.3f},{height - 10 - (float(y) - y0) * sy:.3f}" for x, y in f.knots
        )
        lines.append(f'  <polyline fill="none" stroke="black" points="{coords}"/>')
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {width} {height}">\n'
        + "\n".join(lines)
        + "\n</svg>\n"
    )


def _write_side_files(report: Report, csv_dir: Optional[str], svg_dir: Optional[str]):
    for i, (kind, res) in enumerate(zip(report.kinds, report.results)):
        if csv_dir:
            for name, text in res.csv.items():
                d = Path(csv_dir)
                d.mkdir(parents=True, exist_ok=True)
                (d / f"task{i:02d}_{kind}_{name}.csv").write_text(text)
        if svg_dir:
            for name, funcs in res.plots.items():
                if funcs:
                    d = Path(svg_dir)
                    d.mkdir(parents=True, exist_ok=True)
                    (d / f"task{i:02d}_{kind}_{name}.svg").write_text(render_svg(funcs))


def _load(path: str):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        print(f"error: cannot read {path}: {exc}", file=sys.stderr)
        return None
    try:
        return load_document(text)
    except WireError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return None


def cmd_run(args) -> int:
    doc = _load(args.document)
    if doc is None:
        return EXIT_BAD_INPUT
    report = execute(doc)
    stamp = None if args.reproducible else datetime.now(timezone.utc).isoformat()
    text = report.to_json(stamp)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    _write_side_files(report, args.csv_dir, args.svg_dir)
    return EXIT_OK if report.all_ok else EXIT_TASKS_FAILED


def cmd_check(args) -> int:
    doc = _load(args.document)
    if doc is None:
        return EXIT_BAD_INPUT
    report = execute(doc)
    for i, (kind, res) in enumerate(zip(report.kinds, report.results)):
        line = f"tasks[{i}] {kind}: {res.status}"
        if res.status != OK and res.diagnostics:
            line += f" ({res.diagnostics[0]})"
        print(line)
    return EXIT_OK if report.all_ok else EXIT_TASKS_FAILED


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="padic-radii", description="Exact radius profiles and related invariants.")
    sub = ap.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="execute a problem document and write a report")
    run.add_argument("document")
    run.add_argument("--out", help="report path (default: stdout)")
    run.add_argument("--csv-dir", help="write breakpoint tables here")
    run.add_argument("--svg-dir", help="write plots here")
    run.add_argument("--reproducible", action="store_true", help="omit the timestamp")
    run.set_defaults(func=cmd_run)
    chk = sub.add_parser("check", help="validate and run, printing one status line per task")
    chk.add_argument("document")
    chk.set_defaults(func=cmd_check)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
