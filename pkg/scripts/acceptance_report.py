"""Run the acceptance suite and print only its PASS/FAIL lines."""

import subprocess
import sys
from pathlib import Path

root = Path(__file__).resolve().parents[1]
proc = subprocess.run(
    [sys.executable, "-m", "pytest", str(root / "tests" / "test_acceptance.py"), "-q"],
    capture_output=True, text=True, cwd=root,
)
for line in proc.stdout.splitlines():
    if line.startswith("[criterion"):
        print(line)
print(proc.stdout.strip().splitlines()[-1] if proc.stdout.strip() else proc.stderr)
sys.exit(proc.returncode)
