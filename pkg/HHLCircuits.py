"""
HHLCircuits - state-vector simulation of the HHL quantum linear-system algorithm.

Usage:
    python HHLCircuits.py solve --matrix A.json --rhs b.json --clock 2 --c 1.0
    python HHLCircuits.py example --r 4
    python HHLCircuits.py sweep --r-min 2 --r-max 8 --steps 25 --out fig3.csv
    python HHLCircuits.py dump --r 4
"""

import sys

from src.cli import main


if __name__ == "__main__":
    sys.exit(main())
