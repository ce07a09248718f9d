"""Regenerate tests/golden/ from the built-in presets.

Run after an intentional change to numerics or output format, then review
the diff before committing.
"""

import os
import shutil
import sys
from pathlib import Path

from fluctoptics.cli import main
from fluctoptics.presets import PRESET_SUBCOMMANDS

GOLDEN = Path(__file__).resolve().parent.parent / "tests" / "golden"


def regenerate(root: Path = GOLDEN) -> None:
    os.environ.pop("FLUCTOPTICS_PRECISION", None)
    if root.exists():
        shutil.rmtree(root)
    for preset, subs in PRESET_SUBCOMMANDS.items():
        for sub in subs:
            out = root / preset / sub
            code = main([sub, "--preset", preset, "--out", str(out), "--format", "both"])
            if code != 0:
                sys.exit(f"{preset} {sub} exited with {code}")


if __name__ == "__main__":
    regenerate()
    for p in sorted(GOLDEN.rglob("*")):
        if p.is_file():
            print(p.relative_to(GOLDEN), p.stat().st_size)
