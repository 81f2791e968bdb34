"""Soundness fuzz at acceptance scale, with timing."""

import argparse
import sys
import time

from jstit.harness import soundness_fuzz


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--models", type=int, default=200)
    ap.add_argument("--instances", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    start = time.perf_counter()
    report = soundness_fuzz(args.models, args.instances, args.seed)
    print(report.text(), end="")
    print(f"elapsed: {time.perf_counter() - start:.1f}s")
    return 0 if report.ok else 1


if __name__ == "__main__":
    sys.exit(main())
