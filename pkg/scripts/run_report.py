"""Connectivity reports for every extended class with d symbols.

    python3 scripts/run_report.py --d 4 --eps 1/2 [--samples 17] [--jobs N]
"""

import argparse
import json
from fractions import Fraction
from pathlib import Path

from rauzy_ends.boundary import connectivity_report
from rauzy_ends.classes import census


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--d", type=int, default=4)
    ap.add_argument("--eps", type=Fraction, default=Fraction(1, 2))
    ap.add_argument("--samples", type=int, default=17)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--out", default=None)
    args = ap.parse_args()
    reports = []
    for c in census(args.d, jobs=args.jobs, all_nodes=False).classes:
        r = connectivity_report(c, args.eps, args.samples, args.jobs).as_json()
        reports.append(r)
        print(f"{r['stratum']}: nodes={len(r['nodes'])} verified={r['verified_edges']} "
              f"unverified={r['unverified_edges']} connected={r['connected']} "
              f"witness_connected={r['witness_connected']} replay_failures={r['replay_failures']}")
    out = Path(args.out or f"results/report_d{args.d}.json")
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(reports, indent=2, sort_keys=True) + "\n")


if __name__ == "__main__":
    main()
