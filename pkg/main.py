#!/usr/bin/env python3
"""
PoisonSnek 🐍🧪
Property inference attacks boosted by data poisoning.

An adversary contributes a small poisoned share of a victim's training
set, then tells two candidate frequencies of a property apart using only
the labels the trained model returns.

Key Features:
- Exact Bayes-optimal analysis of the poisoned distribution
- Concrete label-only attack with shadow models
- Game harness with confidence intervals and parameter sweeps
- Synthetic and CSV data sources

Usage:
    python main.py verify-theory                  # Closed-form checks
    python main.py game --config config.json      # One experiment
    python main.py sweep --param poison_rate --values 0,0.05,0.1,0.2
    python main.py --help                         # Show help
"""

import os
import sys

# Add current directory to path
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from data_io import run_cli  # noqa: E402


def main() -> int:
    return run_cli(sys.argv[1:])


if __name__ == "__main__":
    sys.exit(main())
