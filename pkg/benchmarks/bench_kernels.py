"""Benchmark the compiled kernels against the pure-python fallback.

Times the two hot operations (nearest-centroid scan, population fitness
scan) and an end-to-end detection batch under each backend.

    python3 benchmarks/bench_kernels.py [--chromosomes 500] [--records 200]
"""

import argparse
import time

import numpy as np

from gaids import _kernels_py
from gaids.engine import GaParams, detect, record_rng
from gaids.ingest import ATTACK_CATEGORIES, ConnectionRecord, NormalizationStats
from gaids.model import Chromosome, ChromosomeGroup, ChromosomeModel

try:
    from gaids import _kernels as _kernels_c
except ImportError:
    _kernels_c = None


def timeit(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def build_model(rng, num_chromosomes, num_features):
    pool = sorted(ATTACK_CATEGORIES)
    groups = {}
    order = []
    for i in range(num_chromosomes):
        label = pool[i % len(pool)]
        if label not in groups:
            groups[label] = ChromosomeGroup(
                label=label, category=ATTACK_CATEGORIES[label], chromosomes=[]
            )
            order.append(label)
        groups[label].chromosomes.append(
            Chromosome(
                centroid=rng.random(num_features),
                member_count=1,
                spread=float(rng.random() * 0.1),
                group_label=label,
            )
        )
    return ChromosomeModel(
        groups=[groups[lb] for lb in order],
        normalization=NormalizationStats.identity(num_features),
        range_used=0.125,
        training_size=num_chromosomes,
    )


def bench_kernel_ops(args, rng):
    centroids = rng.random((args.chromosomes, args.features))
    spreads = rng.random(args.chromosomes) * 0.1
    genes = rng.random((args.population, args.features))
    x = np.ascontiguousarray(genes[0])

    backends = [("python", _kernels_py)]
    if _kernels_c is not None:
        backends.append(("compiled", _kernels_c))

    results = {}
    for name, mod in backends:
        t_nearest = timeit(
            lambda: [mod.nearest_centroid(x, centroids) for _ in range(args.calls)],
            args.repeats,
        )
        t_fitness = timeit(
            lambda: [mod.batch_fitness(genes, centroids, spreads, 1e-6) for _ in range(args.calls)],
            args.repeats,
        )
        results[name] = (t_nearest, t_fitness)
        print(
            f"{name:>9}: nearest_centroid {1e6 * t_nearest / args.calls:9.1f} us/call"
            f"   batch_fitness {1e6 * t_fitness / args.calls:9.1f} us/call"
        )
    if len(results) == 2:
        py, cc = results["python"], results["compiled"]
        print(f"{'speedup':>9}: nearest_centroid {py[0] / cc[0]:8.1f}x        batch_fitness {py[1] / cc[1]:8.1f}x")
    return results


def bench_detect(args, rng):
    model = build_model(rng, args.chromosomes, args.features)
    model.flatten()
    params = GaParams(seed=1)
    records = [
        ConnectionRecord(features=rng.random(args.features), attack_name=None, category=None)
        for _ in range(args.records)
    ]

    import gaids.kernels as kernels

    backends = [("python", _kernels_py)]
    if _kernels_c is not None:
        backends.append(("compiled", _kernels_c))
    saved = (kernels.distance, kernels.nearest_centroid, kernels.batch_fitness)
    try:
        for name, mod in backends:
            kernels.distance = mod.distance
            kernels.nearest_centroid = mod.nearest_centroid
            kernels.batch_fitness = mod.batch_fitness
            start = time.perf_counter()
            for i, rec in enumerate(records):
                detect(rec, model, params, record_rng(params.seed, i))
            elapsed = time.perf_counter() - start
            print(f"{name:>9}: detect {1e3 * elapsed / args.records:9.2f} ms/record "
                  f"({args.records / elapsed:7.0f} records/s)")
    finally:
        kernels.distance, kernels.nearest_centroid, kernels.batch_fitness = saved


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--chromosomes", type=int, default=500)
    parser.add_argument("--features", type=int, default=38)
    parser.add_argument("--population", type=int, default=32)
    parser.add_argument("--records", type=int, default=200)
    parser.add_argument("--calls", type=int, default=200)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    rng = np.random.Generator(np.random.PCG64(12345))
    if _kernels_c is None:
        print("compiled kernels not built; timing the pure-python backend only")
    print(f"model: {args.chromosomes} chromosomes x {args.features} features, "
          f"population {args.population}")
    bench_kernel_ops(args, rng)
    bench_detect(args, rng)


if __name__ == "__main__":
    main()
