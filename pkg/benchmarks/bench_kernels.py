"""Time the compiled kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 5] [--json out.json]

Each case reports the best-of-N wall time per backend and the speedup.
"""

import argparse
import json
import sys
import timeit

import numpy as np

from oetr import _pykernels, kernels


def cases(rng):
    x = rng.normal(size=(16, 32, 32, 32)).astype(np.float32)
    cols = np.ascontiguousarray(_pykernels.im2col(x, 3, 2, 1))
    K = np.array([[120.0, 0, 64], [0, 120.0, 48], [0, 0, 1]])
    depth = rng.uniform(2, 4, (96, 128))
    valid = np.ones_like(depth, bool)
    R, t = np.eye(3), np.array([0.2, 0.0, 0.05])
    return {
        "im2col 16x32x32x32 k3 s2": lambda b: b.im2col(x, 3, 2, 1),
        "im2col 16x32x32x32 k16 s2": lambda b: b.im2col(x, 16, 2, 7),
        "col2im 16x32x32x32 k3 s2": lambda b: b.col2im(cols, 32, 32, 32, 3, 2, 1),
        "warp_depth 96x128": lambda b: b.warp_depth(depth, valid, K, K, R, t, depth, valid, 0.005),
    }


def bench_model_step(backend, repeat):
    from oetr.loss import total_loss
    from oetr.model import ModelConfig, OETRModel
    from oetr.synth import SynthConfig, collate, generate_pair

    kernels.set_backend(backend)
    model = OETRModel(ModelConfig(), seed=0)
    batch = collate([generate_pair(SynthConfig(), i) for i in range(8)])

    def step():
        pa, pb = model(batch["image_a"], batch["image_b"])
        total_loss(pa, pb, batch["target_a"], batch["target_b"]).total.backward()
        model.zero_grad()

    return min(timeit.repeat(step, number=1, repeat=repeat))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--json", help="also write results here")
    args = ap.parse_args(argv)
    if kernels.compiled_backend is None:
        print("compiled kernels are not built; only the fallback can be timed", file=sys.stderr)
        return 1
    rng = np.random.default_rng(0)
    rows = []
    for name, fn in cases(rng).items():
        t = {label: min(timeit.repeat(lambda: fn(mod), number=1, repeat=args.repeat))
             for label, mod in (("cython", kernels.compiled_backend), ("python", _pykernels))}
        rows.append({"case": name, **t})
    active = kernels.BACKEND
    try:
        t = {b: bench_model_step(b, max(2, args.repeat // 2)) for b in ("cython", "python")}
    finally:
        kernels.set_backend(active)
    rows.append({"case": "train step, default model, batch 8", **t})
    print(f"{'case':40s} {'cython ms':>10s} {'python ms':>10s} {'speedup':>8s}")
    for r in rows:
        print(f"{r['case']:40s} {r['cython'] * 1e3:10.2f} {r['python'] * 1e3:10.2f} "
              f"{r['python'] / r['cython']:8.2f}")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=2)
    return 0


if __name__ == "__main__":
    sys.exit(main())
