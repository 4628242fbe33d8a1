#!/usr/bin/env python3
"""Run the bundled verification suite and leave verdicts.json in ./out/verify."""

import sys
from pathlib import Path

from winfree_sphere.cli import main

ROOT = Path(__file__).resolve().parent.parent

if __name__ == "__main__":
    out = ROOT / "out" / "verify"
    code = main(["verify", str(ROOT / "configs" / "verify_default.json"), "--out", str(out)])
    print(f"verdicts written to {out}/verdicts.json (exit {code})")
    sys.exit(code)
