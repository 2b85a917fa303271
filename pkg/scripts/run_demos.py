#!/usr/bin/env python3
"""Run every built-in demo and print one summary line per demo.

Exit status is 0 only if every demo reports ok. Use --json for the full
reports instead of the one-line summaries.
"""

import argparse
import json
import sys
import time

from kummer.demos import DEMOS


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--only", choices=sorted(DEMOS), default=None,
                        help="run a single demo")
    parser.add_argument("--seed", type=int, default=0,
                        help="seed for the randomized demos")
    parser.add_argument("--json", action="store_true",
                        help="print full JSON reports")
    args = parser.parse_args(argv)

    names = [args.only] if args.only else sorted(DEMOS)
    all_ok = True
    for name in names:
        kwargs = {"seed": args.seed} if name in ("main-lemma",
                                                 "dual-lemma") else {}
        start = time.monotonic()
        ok, report = DEMOS[name](**kwargs)
        elapsed = time.monotonic() - start
        all_ok = all_ok and ok
        if args.json:
            print(json.dumps({"demo": name, "ok": ok, "report": report},
                             indent=2, sort_keys=True))
        else:
            print(f"{'ok ' if ok else 'FAIL'} {name:16s} {elapsed:6.2f}s")
    return 0 if all_ok else 1


if __name__ == "__main__":
    sys.exit(main())
