"""Run the dense-time countermodel, the finite-model demo and the
validator mutation suite, printing their reports."""

import sys

from jstit.harness import fmp_demo, mutation_suite, prop1_demo


def main():
    ok = True
    prop1 = prop1_demo()
    print("\n".join(prop1.lines))
    ok &= prop1.ok
    print()
    fmp = fmp_demo(100, 0)
    print("\n".join(fmp.lines()))
    ok &= fmp.ok
    print()
    for result in mutation_suite():
        print(result.line())
        ok &= result.ok
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
