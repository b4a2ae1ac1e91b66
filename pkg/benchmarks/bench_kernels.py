"""Time the compiled kernels against the pure-Python fallback.

Run from the repository root after building the extension::

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import timeit

from dwcaustic import _kernels_py

try:
    from dwcaustic import _ckernels
except ImportError:  # extension not built
    _ckernels = None

CASES = {
    "carlson_rf": lambda k: k.carlson_rf(0.3, 0.7, 1.1),
    "sncndn": lambda k: k.sncndn(1.3, 0.4, 0.6),
    "q0_of_qt real": lambda k: k.q0_of_qt(0.7, 5.0),
    "q0_of_qt complex": lambda k: k.q0_of_qt(-0.6 + 0.3j, 5.0),
    "action_excess real": lambda k: k.action_excess(0.7, 5.0),
    "action_excess complex": lambda k: k.action_excess(-0.6 + 0.3j, 5.0),
}


def per_call(fn, kernels, repeat):
    timer = timeit.Timer(lambda: fn(kernels))
    number, _ = timer.autorange()
    return min(timer.repeat(repeat, number)) / number


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    print(f"{'kernel':<24}{'python [us]':>14}{'cython [us]':>14}{'speedup':>10}")
    for name, fn in CASES.items():
        py = per_call(fn, _kernels_py, args.repeat) * 1e6
        if _ckernels is None:
            print(f"{name:<24}{py:>14.2f}{'n/a':>14}{'':>10}")
            continue
        cy = per_call(fn, _ckernels, args.repeat) * 1e6
        print(f"{name:<24}{py:>14.2f}{cy:>14.2f}{py / cy:>9.1f}x")


if __name__ == "__main__":
    main()
