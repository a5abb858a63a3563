"""Count the extended Rauzy classes of Q(-1,9) (seven symbols).

Only tables with two glued vertices and non-abelian shape are searched;
every other candidate cannot lie in this stratum.

    python3 scripts/stretch_q9.py [--jobs N] [--out results/q9.json]
"""

import argparse
import json
import time
from pathlib import Path

from rauzy_ends.classes import census
from rauzy_ends.surface import parse_stratum


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--out", default="results/q9.json")
    args = ap.parse_args()
    t0 = time.time()
    res = census(7, jobs=args.jobs, strata=[parse_stratum("Q(-1,9)")], all_nodes=False)
    payload = res.as_json()
    payload["seconds"] = round(time.time() - t0, 1)
    Path(args.out).parent.mkdir(parents=True, exist_ok=True)
    Path(args.out).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    print(f"Q(-1,9): {res.count('Q(-1,9)')} extended classes ({payload['seconds']} s)")


if __name__ == "__main__":
    main()
