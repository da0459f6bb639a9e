"""Compare the compiled and numpy kernel backends.

    python benchmarks/bench_kernels.py [--repeat 5]

Times each kernel at simulation sizes, then a full DD trial with each backend
swapped in.  Prints the best-of-``repeat`` time per call in milliseconds.
"""
import argparse
import contextlib
import timeit

import numpy as np

from hmct import kernels
from hmct.harness import SimConfig, run_trial

NAMES = ("sos_gains", "tdl_apply", "fold_product")


@contextlib.contextmanager
def use_backend(module):
    saved = {name: getattr(kernels, name) for name in NAMES}
    try:
        for name in NAMES:
            setattr(kernels, name, getattr(module, name))
        yield
    finally:
        for name, fn in saved.items():
            setattr(kernels, name, fn)


def best_ms(fn, repeat: int) -> float:
    timer = timeit.Timer(fn)
    number, _ = timer.autorange()
    return min(timer.repeat(repeat, number)) / number * 1e3


def cases(rng):
    length = 700
    amps = (rng.standard_normal((8, 32)) + 1j * rng.standard_normal((8, 32))) / 16
    nus = 0.01 * np.cos(rng.uniform(0, 2 * np.pi, (8, 32)))
    x = rng.standard_normal(length) + 1j * rng.standard_normal(length)
    gains = rng.standard_normal((8, length)) + 1j * rng.standard_normal((8, length))
    delays = np.arange(8, dtype=np.int64)
    segment = x[:600].copy()
    weights = np.exp(-np.linspace(-3, 3, 600) ** 2).astype(complex)
    return {
        "sos_gains (8x32, 700)": lambda k: k.sos_gains(amps, nus, length),
        "tdl_apply (8 taps, 700)": lambda k: k.tdl_apply(x, gains, delays),
        "fold_product (600 -> 40)": lambda k: k.fold_product(segment, weights, 40),
    }


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)

    backends = kernels.BACKENDS
    if "cython" not in backends:
        print("compiled backend unavailable (not built, or HMCT_PURE_PYTHON set); timing numpy only")
    names = sorted(backends)
    print(f"{'case':28s}" + "".join(f"{n:>12s}" for n in names) + ("     speedup" if len(names) == 2 else ""))

    rows = {label: [best_ms(lambda: fn(backends[n]), args.repeat) for n in names]
            for label, fn in cases(np.random.default_rng(0)).items()}

    cfg = SimConfig(channel="dd", eps_mode="uniform")
    run_trial(cfg, 20.0, 0)  # warm the transmitter cache
    trial = []
    for n in names:
        with use_backend(backends[n]):
            trial.append(best_ms(lambda: run_trial(cfg, 20.0, 1), args.repeat))
    rows["run_trial (dd, 20 dB)"] = trial

    for label, times in rows.items():
        line = f"{label:28s}" + "".join(f"{t:12.4f}" for t in times)
        if len(times) == 2:
            # names sorted: cython, python
            line += f"{times[1] / times[0]:11.1f}x"
        print(line)
    print(f"active backend: {kernels.BACKEND}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
