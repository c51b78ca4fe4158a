"""Print the certificate checks and normality verdicts for every registered example."""
import sys

from sepsys.examples import NAMES, certify
from sepsys.normality import normality_certificate

DEPTHS = {"trivialproj": 12, "splittingnotclosed": 10, "splittingnotclosed2": 10, "ray": 10}


def main() -> int:
    failures = 0
    for name in NAMES:
        params = {"depth": DEPTHS[name]} if name in DEPTHS else {}
        print(f"{name} {params}")
        for c in certify(name, **params):
            failures += not c.ok
            print(f"  [{'ok' if c.ok else 'FAIL'}] {c.name}" + (f": {c.detail}" if c.detail else ""))
        if name in DEPTHS:
            cert = normality_certificate(name, 6)
            print(f"  normality at depth 6: {cert.verdict}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
