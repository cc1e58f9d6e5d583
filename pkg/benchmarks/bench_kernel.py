#!/usr/bin/env python3
"""Benchmark the compiled enumeration kernel against the pure-Python one.

The kernel enumerates answer sets of plain programs from rule masks; it
sits on the hot path of the brute-force oracle and of base-case
verification inside the nested dynamic programming engine.

Usage: python3 benchmarks/bench_kernel.py [--atoms N] [--rules M] [--repeat K]
"""

import argparse
import random
import statistics
import time

from wvcount import _kernel_py, kernel


def random_instance(seed, atoms, rules):
    rng = random.Random(seed)
    full = (1 << atoms) - 1
    heads, bpos, bneg = [], [], []
    for _ in range(rules):
        h = rng.getrandbits(atoms) & rng.getrandbits(atoms) & full
        p = rng.getrandbits(atoms) & rng.getrandbits(atoms) & ~h & full
        n = rng.getrandbits(atoms) & rng.getrandbits(atoms) & ~h & ~p & full
        heads.append(h)
        bpos.append(p)
        bneg.append(n)
    return heads, bpos, bneg


def timed(fn, instances, repeat):
    samples = []
    result_sizes = 0
    for _ in range(repeat):
        start = time.perf_counter()
        for heads, bpos, bneg, atoms in instances:
            result_sizes += len(fn(heads, bpos, bneg, atoms))
        samples.append(time.perf_counter() - start)
    return min(samples), statistics.mean(samples), result_sizes // repeat


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--atoms", type=int, default=14)
    parser.add_argument("--rules", type=int, default=16)
    parser.add_argument("--instances", type=int, default=20)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    instances = [
        random_instance(seed, args.atoms, args.rules) + (args.atoms,)
        for seed in range(args.instances)
    ]

    print(
        "answer-set enumeration: %d instances, %d atoms, %d rules, best of %d"
        % (args.instances, args.atoms, args.rules, args.repeat)
    )
    pure_best, pure_mean, pure_sets = timed(
        _kernel_py.answer_sets_masks, instances, args.repeat
    )
    print("  pure python : best %.3fs  mean %.3fs  (%d answer sets)"
          % (pure_best, pure_mean, pure_sets))
    if kernel.kernel_name() == "cython":
        from wvcount import _kernel

        cy_best, cy_mean, cy_sets = timed(
            _kernel.answer_sets_masks, instances, args.repeat
        )
        assert cy_sets == pure_sets, "kernels disagree"
        print("  cython      : best %.3fs  mean %.3fs  (%d answer sets)"
              % (cy_best, cy_mean, cy_sets))
        print("  speedup     : %.1fx" % (pure_best / cy_best))
    else:
        print("  cython      : extension not built (pure fallback active)")


if __name__ == "__main__":
    main()
