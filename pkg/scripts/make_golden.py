#!/usr/bin/env python3
"""
Golden Fit Generation Script
Refits the bundled example dataset and rewrites data/example/golden_fit.json

Run after any change that is expected to move the example fit.
"""

import os
import sys

# Add parent directory to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from plse.commands.fit import FitRequest, fit_payload
from plse.storage.files import write_json

EXAMPLE_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "data", "example")


def make_golden() -> None:
    """Fit the example and keep the fields the golden test compares"""
    print("=" * 50)
    print("SortedPLSE - Golden Fit")
    print("=" * 50)

    payload = fit_payload(
        FitRequest(
            x_path=os.path.join(EXAMPLE_DIR, "X.csv"),
            y_path=os.path.join(EXAMPLE_DIR, "y.csv"),
            penalty_path=os.path.join(EXAMPLE_DIR, "penalty.json"),
            solver_path=os.path.join(EXAMPLE_DIR, "solver.json"),
        )
    )
    if not payload["converged"]:
        print("Fit did not converge; golden file left unchanged")
        sys.exit(2)

    golden = {
        "beta": [round(value, 12) for value in payload["beta"]],
        "active_set": payload["active_set"],
        "converged": payload["converged"],
    }
    write_json(golden, os.path.join(EXAMPLE_DIR, "golden_fit.json"))
    print(f"beta = {golden['beta']}")
    print(f"kkt_inf = {payload['kkt_inf']:.3e}")


if __name__ == "__main__":
    make_golden()
