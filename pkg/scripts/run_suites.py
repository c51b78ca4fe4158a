"""Run every registered property suite at its default size and count.

Usage: python scripts/run_suites.py [--seed N] [--scale F] [--report out.json]
"""
import argparse
import json
import sys

from sepsys.suites import SUITES, SuiteConfig, run_suite


def main() -> int:
    parser = argparse.ArgumentParser()
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--scale", type=float, default=1.0, help="multiply every default count")
    parser.add_argument("--report")
    args = parser.parse_args()
    reports = []
    for name, suite in sorted(SUITES.items()):
        count = max(1, round(suite.default_count * args.scale))
        rep = run_suite(name, SuiteConfig(args.seed, count, None))
        print(f"{rep.summary()} [{rep.seconds:.1f}s]")
        reports.append(rep.to_dict())
    if args.report:
        with open(args.report, "w") as fh:
            json.dump(reports, fh, indent=2, sort_keys=True)
    return 0 if all(r["ok"] for r in reports) else 1


if __name__ == "__main__":
    sys.exit(main())
