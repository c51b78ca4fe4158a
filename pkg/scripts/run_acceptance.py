"""Run the acceptance criteria without pytest; exit 1 if any fails."""
import importlib.util
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def load_criteria():
    spec = importlib.util.spec_from_file_location("acceptance", ROOT / "tests" / "test_acceptance.py")
    mod = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(mod)
    return mod


def main() -> int:
    mod = load_criteria()
    wanted = {int(a) for a in sys.argv[1:]}
    failures = 0
    for number, title, fn in mod.CRITERIA:
        if wanted and number not in wanted:
            continue
        ok, _ = mod.evaluate(number, title, fn)
        failures += not ok
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
