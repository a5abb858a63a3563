"""Census of extended Rauzy classes for d = 2..D, written as JSON.

    python3 scripts/run_census.py --max-d 5 [--jobs N] [--out results/census.json]
"""

import argparse
import json
import time
from pathlib import Path

from rauzy_ends.classes import census


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-d", type=int, default=5)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--out", default="results/census.json")
    args = ap.parse_args()
    rows = []
    for d in range(2, args.max_d + 1):
        t0 = time.time()
        res = census(d, jobs=args.jobs)
        rows.append(res.as_json())
        print(f"d={d}: {len(res.classes)} extended classes, {res.irreducible} irreducible tables, "
              f"nonconstant={len(res.nonconstant)} ({time.time() - t0:.1f} s)")
        for label, info in rows[-1]["strata"].items():
            print(f"  {label}: {info['classes']}")
    Path(args.out).parent.mkdir(parents=True, exist_ok=True)
    Path(args.out).write_text(json.dumps(rows, indent=2, sort_keys=True) + "\n")


if __name__ == "__main__":
    main()
