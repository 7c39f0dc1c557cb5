#!/usr/bin/env python3
"""Compare the compiled kernels against the numpy fallback.

Two views: raw kernel micro-benchmarks (the elimination sweep and the
selected-row XOR that dominate model building), and the end-to-end
picture pipeline on solid blocks and a ring-complement.

    python benchmarks/bench_backends.py [--side N] [--repeat K]
"""

import argparse
import random
import time

from voxring import kernels as kn
from voxring.atmodel import boundary_atmodel, extend_atmodel, face_reduction
from voxring.cubical import boundary_subcomplex, complex_from_voxels, solid_box
from voxring.fixtures import linked_rings, picture_from_voxels
from voxring.pipeline import analyze_picture


def bench_sweep(rows=4000, nbits=4000, kills=300):
    rng = random.Random(7)
    F = kn.zero_matrix(rows, nbits)
    P = kn.zero_matrix(rows, nbits)
    for i in range(rows):
        for j in rng.sample(range(nbits), 40):
            kn.set_bit(F[i], j)
    fupd = kn.zero_row(nbits)
    pupd = kn.zero_row(nbits)
    for j in rng.sample(range(nbits), 60):
        kn.set_bit(fupd, j)
        kn.set_bit(pupd, j)
    t0 = time.perf_counter()
    for k in range(kills):
        kn.sweep_pair(F, P, (k * 13) % nbits, fupd, pupd)
    return time.perf_counter() - t0


def bench_gather(rows=4000, nbits=4000, reps=2000):
    rng = random.Random(8)
    M = kn.zero_matrix(rows, nbits)
    for i in range(rows):
        for j in rng.sample(range(nbits), 30):
            kn.set_bit(M[i], j)
    sel = kn.zero_row(rows)
    for i in rng.sample(range(rows), 200):
        kn.set_bit(sel, i)
    out = kn.zero_row(nbits)
    t0 = time.perf_counter()
    for _ in range(reps):
        kn.gather_xor(M, sel, out)
    return time.perf_counter() - t0


def bench_pipeline(side):
    vox = solid_box(side, side, side)
    t0 = time.perf_counter()
    Q = complex_from_voxels(vox)
    dQ = boundary_subcomplex(Q)
    m = boundary_atmodel(dQ)
    K = face_reduction(Q, dQ)
    extend_atmodel(m, K, verify_guard=False)
    return time.perf_counter() - t0


def bench_rings():
    pic = picture_from_voxels(linked_rings())
    t0 = time.perf_counter()
    analyze_picture(pic, complement=True, padding=1, want_cup=True)
    return time.perf_counter() - t0


_VERIFY_STATE = None


def bench_verify():
    # verification is gather-dominated: many short selected-row XORs
    global _VERIFY_STATE
    from voxring.atmodel import verify_atmodel

    if _VERIFY_STATE is None:
        pic = picture_from_voxels(linked_rings())
        _, state = analyze_picture(pic, complement=True, padding=1,
                                   want_cup=False)
        _VERIFY_STATE = (state.K, state.model)
    K, model = _VERIFY_STATE
    t0 = time.perf_counter()
    assert verify_atmodel(K, model).ok
    return time.perf_counter() - t0


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--side", type=int, default=8,
                    help="solid block side for the pipeline benchmark")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    cases = [
        ("kernel sweep_pair", bench_sweep, ()),
        ("kernel gather_xor", bench_gather, ()),
        (f"pipeline block {args.side}^3", bench_pipeline, (args.side,)),
        ("pipeline linked rings", bench_rings, ()),
        ("verify model (rings)", bench_verify, ()),
    ]
    backends = kn.available_backends()
    print(f"backends: {', '.join(backends)}")
    header = f"{'case':>26} " + " ".join(f"{b:>12}" for b in backends)
    if len(backends) == 2:
        header += f" {'speedup':>9}"
    print(header)
    for name, fn, fargs in cases:
        best = {}
        for backend in backends:
            kn.set_backend(backend)
            best[backend] = min(fn(*fargs) for _ in range(args.repeat))
        row = f"{name:>26} " + " ".join(f"{best[b] * 1000:10.1f}ms" for b in backends)
        if len(backends) == 2:
            row += f" {best['python'] / best['cython']:8.1f}x"
        print(row)
    kn.set_backend("cython" if "cython" in backends else "python")


if __name__ == "__main__":
    main()
