#!/usr/bin/env python3
"""Summarize one or more fracmono report.json files.

Directories are searched recursively for files named report.json. The exit
code is 0 when every report finished with exit_code 0 and all checks passed,
which makes the script usable as a batch gate:

    python3 tools/summarize_report.py out/ --checks
"""

import argparse
import json
import sys
from pathlib import Path


def collect(paths):
    for raw in paths:
        p = Path(raw)
        if p.is_dir():
            yield from sorted(p.rglob("report.json"))
        else:
            yield p


def load(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh), None
    except (OSError, json.JSONDecodeError) as exc:
        return None, str(exc)


def summarize(path, report, show_checks):
    checks = report.get("checks", [])
    failed = [c for c in checks if not c.get("pass", False)]
    status = "ok" if report.get("exit_code") == 0 and not failed else "FAIL"
    print(
        f"{status:4} {report.get('command', '?'):15} "
        f"{Path(report.get('scenario', '?')).name:28} "
        f"checks {len(checks) - len(failed)}/{len(checks)} "
        f"simd={report.get('simd', '?')} wall={report.get('wall_ms', '?')}ms "
        f"({path})"
    )
    if "error" in report:
        print(f"     error: {report['error']}")
    shown = checks if show_checks else failed
    for c in shown:
        mark = "pass" if c.get("pass") else "FAIL"
        print(f"     [{mark}] {c.get('name')}: {c.get('detail', '')}")
    for w in report.get("warnings", []):
        print(f"     warning: {w}")
    return status == "ok"


def main(argv):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("paths", nargs="+", help="report.json files or directories")
    ap.add_argument("--checks", action="store_true", help="list every check, not only failures")
    args = ap.parse_args(argv)

    found = list(collect(args.paths))
    if not found:
        print("no report.json found", file=sys.stderr)
        return 2

    ok = True
    for path in found:
        report, err = load(path)
        if report is None:
            print(f"FAIL {path}: {err}")
            ok = False
            continue
        ok = summarize(path, report, args.checks) and ok
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
