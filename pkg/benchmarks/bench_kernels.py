"""Compiled vs pure-Python kernels.

Run with ``python benchmarks/bench_kernels.py``. Each row reports the best of
several repeats for both backends, their ratio, and the largest difference
between their results (the two must agree to round-off).
"""

import argparse
import timeit

import numpy as np
from scipy import integrate

from nmgauss import _kernels
from nmgauss.gaussian import random_physical_state, twb_state
from nmgauss.markers import DiscordOptions, gaussian_discord
from nmgauss.propagation import propagate
from nmgauss.spectral import BathSpec


def _best(fn, repeat, number):
    return min(timeit.repeat(fn, repeat=repeat, number=number)) / number


def cases(backend, sigma, p, q):
    be = _kernels.get_backend(backend)
    noise = be.integrand("ohmic_noise_bose", 100.0)

    def fourier():
        # unwrap inside the call: ``noise`` owns the compiled kernel's parameter buffer
        return integrate.quad(_kernels.quad_func(noise), 0.0, 50.0, weight="cos", wvar=1.3, epsabs=1e-12, limit=400)[0]

    opts = DiscordOptions(backend=backend)
    return {
        "conditional_det (scalar x1000)": lambda: [be.conditional_det(sigma, 0.3, -0.2) for _ in range(1000)],
        "conditional_det_grid (600 pts)": lambda: be.conditional_det_grid(sigma, p, q),
        "bose noise Fourier integral": fourier,
        "gaussian_discord (damped TWB)": lambda: gaussian_discord(sigma, opts).discord,
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--number", type=int, default=3)
    args = ap.parse_args(argv)
    if _kernels.COMPILED is None:
        raise SystemExit("compiled kernels are not built; run `pip install -e . --no-build-isolation`")

    rng = np.random.default_rng(7)
    bath = BathSpec(10.0, 0.1, 100.0)
    sigma = np.ascontiguousarray(propagate(twb_state(1.0, 0.5), 1.0, bath, "independent"))
    rad = np.tanh(2 * rng.uniform(0, 3, 600))
    ang = rng.uniform(0, 2 * np.pi, 600)
    p, q = rad * np.cos(ang), rad * np.sin(ang)

    py, cy = cases("python", sigma, p, q), cases("cython", sigma, p, q)
    print(f"{'kernel':34s} {'python [ms]':>12s} {'cython [ms]':>12s} {'speedup':>8s} {'max |diff|':>11s}")
    for name in py:
        t_py = _best(py[name], args.repeat, args.number) * 1e3
        t_cy = _best(cy[name], args.repeat, args.number) * 1e3
        diff = float(np.max(np.abs(np.asarray(py[name](), dtype=float) - np.asarray(cy[name](), dtype=float))))
        print(f"{name:34s} {t_py:12.3f} {t_cy:12.3f} {t_py / t_cy:8.1f} {diff:11.2e}")

    # sanity: random states through both grid kernels
    worst = 0.0
    for _ in range(20):
        s = np.ascontiguousarray(random_physical_state(rng))
        a = _kernels.PYTHON.conditional_det_grid(s, p, q)
        b = _kernels.COMPILED.conditional_det_grid(s, p, q)
        worst = max(worst, float(np.max(np.abs(np.asarray(a) - np.asarray(b)) / np.maximum(1, np.abs(a)))))
    print(f"grid kernel agreement on 20 random states: {worst:.2e}")


if __name__ == "__main__":
    main()
