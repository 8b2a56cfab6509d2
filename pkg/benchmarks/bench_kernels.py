"""Compare the compiled and numpy kernels on the hot loops.

    python3 benchmarks/bench_kernels.py [--repeat 3]

Each workload is run on every available backend; results must agree
before timings are reported.
"""

import argparse
import timeit

import numpy as np

from greenberg import corpus
from greenberg.algebra import ga_build
from greenberg.kernels import CompiledPolys, available_backends, count_zeros, eval_columns, table_ring_products
from greenberg.transform import gr_transform
from greenberg.witt import witt_laws_mod_p


def workloads():
    dual = corpus.algebras(2)["F2[e]"]
    F4 = corpus.algebras(2)["F4"]

    T = gr_transform(corpus.scheme("Gm", ga_build(corpus.bases()["t^3-2"], 3))).result
    yield "count Gr_3(G_m) over t^3-2, A=F2[e]", lambda mod: count_zeros(list(T.gens), list(T.vars), dual.ring, mod=mod)[0]

    T2 = gr_transform(corpus.scheme("y^2-pi*x", ga_build(corpus.bases()["W(F2)"], 2))).result
    yield "count Gr_2(y^2-pi x) over W(F2), A=F4", lambda mod: count_zeros(list(T2.gens), list(T2.vars), F4.ring, mod=mod)[0]

    G = gr_transform(corpus.group("Gm^2", ga_build(corpus.bases()["t^2-2"], 2)).presentation).result
    yield "count Gr_2(G_m^2) over t^2-2, A=F4", lambda mod: count_zeros(list(G.gens), list(G.vars), F4.ring, mod=mod)[0]

    A3 = gr_transform(corpus.scheme("x*y-pi", ga_build(corpus.bases()["k2[[t]]"], 5))).result
    yield "count Gr_5(xy-pi) over k2[[t]], A=F2[e]", lambda mod: count_zeros(list(A3.gens), list(A3.vars), dual.ring, mod=mod)[0]

    laws = witt_laws_mod_p(2, 3)
    yield "tables of W_3(F2[e])", lambda mod: table_ring_products(
        laws.sum_polys, laws.prod_polys, laws.neg_polys, 3, dual.ring, mod=mod
    )[1].sum()

    ga = ga_build(corpus.bases()["t^2-2"], 3)
    compiled = CompiledPolys(list(ga.mul_polys), [f"x{i}" for i in range(4)] + [f"y{i}" for i in range(4)], F4.ring)
    rng = np.random.default_rng(0)
    cols = rng.integers(0, F4.size, size=(8, 200_000), dtype=np.int32)
    yield "eval R_3 mul laws (t^2-2) at 200k points of F4", lambda mod: int(eval_columns(compiled, cols, mod=mod).sum())



def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    backends = available_backends()
    if len(backends) == 1:
        print("compiled kernels not built; only the numpy backend is available")
    print(f"{'workload':50s} " + " ".join(f"{name:>10s}" for name in backends) + "   speedup")
    for label, fn in workloads():
        results = {name: fn(mod) for name, mod in backends.items()}
        assert len(set(map(repr, results.values()))) == 1, (label, results)
        times = {name: min(timeit.repeat(lambda: fn(mod), number=1, repeat=args.repeat)) for name, mod in backends.items()}
        speedup = times["python"] / times["cython"] if "cython" in times else 1.0
        print(f"{label:50s} " + " ".join(f"{t:9.4f}s" for t in times.values()) + f"   {speedup:6.1f}x")


if __name__ == "__main__":
    main()
