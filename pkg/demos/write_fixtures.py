"""
Writing the bundled test images
===============================

Saves the synthetic fixtures as 8-bit PGM files next to ``bench.cfg`` so the
command line tools have something to work on.
"""

from pathlib import Path

from ibpsr import save
from ibpsr.fixtures import FIXTURES

here = Path(__file__).parent
for name, make in FIXTURES.items():
    save(make(256), here / f"{name}.pgm")
    print(here / f"{name}.pgm")
