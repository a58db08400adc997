"""Run the acceptance suite and print only the criterion summary."""

import subprocess
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]


def main():
    proc = subprocess.run(
        [sys.executable, "-m", "pytest", str(ROOT / "tests" / "test_acceptance.py"), "-q", "-p", "no:cacheprovider"],
        capture_output=True, text=True, cwd=ROOT,
    )
    lines = proc.stdout.splitlines()
    start = next((i for i, line in enumerate(lines) if "acceptance criteria" in line), None)
    print("\n".join(lines[start:] if start is not None else lines))
    return proc.returncode


if __name__ == "__main__":
    sys.exit(main())
