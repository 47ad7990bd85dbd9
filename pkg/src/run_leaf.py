"""
Launcher for the leaf command line when the package is not installed.

    python src/run_leaf.py sweep --config run.cfg --seed 7
"""

import sys

from dotenv import load_dotenv

from leaf.harness.cli import main

load_dotenv()

if __name__ == "__main__":
    sys.exit(main())
