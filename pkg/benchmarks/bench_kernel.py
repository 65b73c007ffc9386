"""Compare the compiled propagation kernel with the pure-Python fallback.

Run with ``python benchmarks/bench_kernel.py``.  The first table times the two
kernel entry points directly on identical packed inputs; the second runs the
whole solver end to end in a subprocess per backend, using ``ASPFUN_PURE``.
"""

import argparse
import os
import random
import subprocess
import sys
import timeit

from aspfun import _kernel_py
from aspfun.solve import GroundProgram
from aspfun.terms import Atom, Rule

try:
    from aspfun import _kernel
except ImportError:
    _kernel = None

END_TO_END = """
import time
from aspfun import kernel
from aspfun.ground import ground_with_terms, herbrand_terms
from aspfun.solve import enumerate_answer_sets
from aspfun.syntax import parse_program
p = parse_program(open({path!r}).read())
g = ground_with_terms(p, herbrand_terms(p, {depth}))
t = time.perf_counter()
n = len(enumerate_answer_sets(g))
print(kernel.BACKEND, n, time.perf_counter() - t)
"""


def chain_program(n: int, seed: int) -> GroundProgram:
    """A long positive chain with random negative side conditions."""
    rng = random.Random(seed)
    atoms = [Atom(f"p{k}") for k in range(n)]
    rules = [Rule(atoms[0])]
    for k in range(1, n):
        neg = (rng.choice(atoms),) if rng.random() < 0.3 else ()
        rules.append(Rule(atoms[k], (atoms[k - 1],), neg))
        rules.append(Rule(atoms[k], (rng.choice(atoms), rng.choice(atoms))))
    return GroundProgram(rules)


def kernel_table(sizes, repeat: int) -> None:
    print(f"{'atoms':>8} {'python bounds':>14} {'cython bounds':>14} {'speedup':>8}")
    for n in sizes:
        gp = chain_program(n, n)
        args = (gp.n_atoms,) + gp.packed() + (bytearray(gp.n_atoms),)
        py = min(timeit.repeat(lambda: _kernel_py.bounds(*args), number=1, repeat=repeat))
        if _kernel is None:
            print(f"{n:>8} {py:>14.5f} {'n/a':>14} {'n/a':>8}")
            continue
        cy = min(timeit.repeat(lambda: _kernel.bounds(*args), number=1, repeat=repeat))
        print(f"{n:>8} {py:>14.5f} {cy:>14.5f} {py / cy:>7.1f}x")


def end_to_end(path: str, depth: int) -> None:
    code = END_TO_END.format(path=path, depth=depth)
    for pure in (False, True):
        env = dict(os.environ)
        env.pop("ASPFUN_PURE", None)
        if pure:
            env["ASPFUN_PURE"] = "1"
        out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True,
                             text=True, check=True).stdout.split()
        print(f"{out[0]:>8}: {out[1]} answer sets in {float(out[2]):.3f} s")


def main() -> None:
    here = os.path.dirname(os.path.abspath(__file__))
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[1000, 10000, 100000])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--program", default=os.path.join(here, "..", "corpus", "coloring.lp"))
    ap.add_argument("--depth", type=int, default=1)
    args = ap.parse_args()
    kernel_table(args.sizes, args.repeat)
    print()
    end_to_end(args.program, args.depth)


if __name__ == "__main__":
    main()
