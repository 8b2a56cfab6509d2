"""Hot loops over table rings: batch polynomial evaluation and zero counting.

Polynomials are compiled against a :class:`~greenberg.fields.FiniteRing`
into flat int32 arrays (coefficients already lifted into the ring, powers
served from per-exponent lookup rows).  Two backends consume that format:

* ``greenberg._ckernels`` -- Cython, built by ``setup.py`` when a compiler is
  available;
* ``greenberg._pykernels`` -- numpy, always available.

The compiled backend is used when importable unless ``GREENBERG_KERNEL`` is
set to ``python``.
"""

from __future__ import annotations

import os

import numpy as np

from . import _pykernels
from .errors import SizeGuard
from .poly import BITS, MASK

try:  # pragma: no cover - depends on the build
    from . import _ckernels
except ImportError:  # pragma: no cover
    _ckernels = None

DEFAULT_CANDIDATE_GUARD = 1 << 24


def _select(name):
    if name == "python" or _ckernels is None:
        return _pykernels
    return _ckernels


backend = _select(os.environ.get("GREENBERG_KERNEL", "auto"))


def backend_name(mod=None):
    mod = mod or backend
    return "cython" if mod is _ckernels and mod is not None else "python"


def available_backends():
    out = {"python": _pykernels}
    if _ckernels is not None:
        out["cython"] = _ckernels
    return out


class CompiledPolys:
    """Polynomials over ``var_names`` compiled for evaluation in ``ring``."""

    def __init__(self, polys, var_names, ring):
        self.ring = ring
        self.var_names = list(var_names)
        index = {v: i for i, v in enumerate(self.var_names)}
        poly_ptr = [0]
        mono_coeff, mono_ptr, fac_var, fac_slot = [], [0], [], []
        slots = {}
        self.max_var = []
        for f in polys:
            col = []
            for v in f.vars:
                col.append(index.get(v))
            top = -1
            for m, c in f.terms.items():
                mono_coeff.append(ring.coeff(c, f.domain))
                i = 0
                while m:
                    e = m & MASK
                    if e:
                        j = col[i]
                        if j is None:
                            raise KeyError(f"variable {f.vars[i]!r} not in compile list")
                        s = slots.setdefault(e, len(slots))
                        fac_var.append(j)
                        fac_slot.append(s)
                        top = max(top, j)
                    m >>= BITS
                    i += 1
                mono_ptr.append(len(fac_var))
            poly_ptr.append(len(mono_coeff))
            self.max_var.append(top)
        self.npolys = len(polys)
        self.poly_ptr = np.array(poly_ptr, dtype=np.int32)
        self.mono_coeff = np.array(mono_coeff, dtype=np.int32)
        self.mono_ptr = np.array(mono_ptr, dtype=np.int32)
        self.fac_var = np.array(fac_var, dtype=np.int32)
        self.fac_slot = np.array(fac_slot, dtype=np.int32)
        exps = sorted(slots, key=slots.get)
        self.pow_tab = _power_rows(ring, exps)

    def arrays(self):
        return (self.poly_ptr, self.mono_coeff, self.mono_ptr, self.fac_var, self.fac_slot, self.pow_tab)


def _power_rows(ring, exps):
    n = ring.size
    out = np.zeros((max(len(exps), 1), n), dtype=np.int32)
    if not exps:
        return out
    M = ring.mul_t
    idx = np.arange(n, dtype=np.int32)
    cache = {1: idx}

    def pw(e):
        r = cache.get(e)
        if r is None:
            h = pw(e // 2)
            r = M[h, h]
            if e % 2:
                r = M[r, idx]
            cache[e] = r
        return r

    for s, e in enumerate(exps):
        out[s] = pw(e)
    return out


def eval_columns(compiled, columns, mod=None):
    """Evaluate every compiled polynomial on each column of ``columns``.

    ``columns`` has shape ``(nvars, C)`` holding ring element indices.
    Returns an int32 array of shape ``(npolys, C)``.
    """
    mod = mod or backend
    cols = np.ascontiguousarray(columns, dtype=np.int32)
    if cols.ndim != 2 or cols.shape[0] != len(compiled.var_names):
        raise ValueError("columns must have one row per compiled variable")
    ring = compiled.ring
    return mod.eval_columns(*compiled.arrays(), ring.add_t, ring.mul_t, ring.zero, cols)


def count_zeros(polys, var_names, ring, domains=None, collect=False, guard=DEFAULT_CANDIDATE_GUARD, mod=None):
    """Common zeros of ``polys`` with variable ``i`` ranging over ``domains[i]``.

    ``domains`` defaults to the whole ring for every variable.  Search order
    is chosen greedily so that each generator is tested as soon as all its
    variables are assigned.  Returns ``(count, solutions)`` with solutions
    (when collected) sorted as tuples in ``var_names`` order.
    """
    mod = mod or backend
    nv = len(var_names)
    if domains is None:
        domains = [None] * nv
    doms = [np.arange(ring.size, dtype=np.int32) if d is None else np.asarray(d, dtype=np.int32) for d in domains]
    space = 1
    for d in doms:
        space *= len(d)
    if space > guard:
        raise SizeGuard(f"candidate space {space} exceeds guard {guard}", candidates=space)
    order = _search_order(polys, var_names, doms)
    ordered_names = [var_names[i] for i in order]
    compiled = CompiledPolys(polys, ordered_names, ring)
    checks = [[] for _ in range(nv + 1)]
    for k, top in enumerate(compiled.max_var):
        checks[top + 1].append(k)
    # constant generators are decided up front
    for k in checks[0]:
        if _pykernels.eval_scalar(compiled, k, np.zeros(0, dtype=np.int32)) != ring.zero:
            return 0, []
    chk_ptr = [0]
    chk_polys = []
    for d in range(1, nv + 1):
        chk_polys.extend(checks[d])
        chk_ptr.append(len(chk_polys))
    dom_ptr = [0]
    dom_vals = []
    for i in order:
        dom_vals.extend(doms[i].tolist())
        dom_ptr.append(len(dom_vals))
    count, sols = mod.count_solutions(
        *compiled.arrays(),
        ring.add_t,
        ring.mul_t,
        ring.zero,
        np.array(dom_ptr, dtype=np.int32),
        np.array(dom_vals, dtype=np.int32),
        np.array(chk_ptr, dtype=np.int32),
        np.array(chk_polys, dtype=np.int32),
        nv,
        bool(collect),
    )
    if not collect:
        return int(count), []
    inv = [0] * nv
    for pos, i in enumerate(order):
        inv[i] = pos
    out = sorted(tuple(int(row[inv[i]]) for i in range(nv)) for row in sols)
    return int(count), out


def _search_order(polys, var_names, doms):
    """Greedy order: repeatedly close the generator needing fewest new variables."""
    index = {v: i for i, v in enumerate(var_names)}
    supports = [sorted({index[v] for v in f.support()}) for f in polys]
    chosen, seen = [], set()
    pending = [s for s in supports if s]
    while pending:
        pending.sort(key=lambda s: (sum(1 for v in s if v not in seen), s))
        for v in pending[0]:
            if v not in seen:
                seen.add(v)
                chosen.append(v)
        pending = [s for s in pending if any(v not in seen for v in s)]
    chosen.extend(i for i in range(len(var_names)) if i not in seen)
    return chosen


def table_ring_products(add_polys, mul_polys, neg_polys, width, base_ring, mod=None, chunk=1 << 16):
    """Tables of a ring whose elements are ``width``-tuples over ``base_ring``.

    The structure polynomials use variables ``x0..x{w-1}``, ``y0..y{w-1}``.
    Element ``a`` packs coordinates ``a = sum(c_l * |base|**l)``.
    """
    b = base_ring.size
    n = b**width
    xs = [f"x{l}" for l in range(width)]
    ys = [f"y{l}" for l in range(width)]
    names = xs + ys
    cadd = CompiledPolys(add_polys, names, base_ring)
    cmul = CompiledPolys(mul_polys, names, base_ring)
    cneg = CompiledPolys(neg_polys, xs, base_ring)
    idx = np.arange(n, dtype=np.int64)
    digits = np.stack([(idx // b**l) % b for l in range(width)]).astype(np.int32)
    weights = (b ** np.arange(width, dtype=np.int64))[:, None]
    add = np.empty((n, n), dtype=np.int32)
    mul = np.empty((n, n), dtype=np.int32)
    rows_per = max(1, chunk // n)
    for start in range(0, n, rows_per):
        stop = min(n, start + rows_per)
        a = np.repeat(np.arange(start, stop), n)
        bb = np.tile(np.arange(n), stop - start)
        cols = np.concatenate([digits[:, a], digits[:, bb]])
        s = eval_columns(cadd, cols, mod)
        p = eval_columns(cmul, cols, mod)
        add[start:stop] = (s.astype(np.int64) * weights).sum(axis=0).reshape(stop - start, n)
        mul[start:stop] = (p.astype(np.int64) * weights).sum(axis=0).reshape(stop - start, n)
    ng = eval_columns(cneg, digits, mod)
    neg = (ng.astype(np.int64) * weights).sum(axis=0)
    return add, mul, neg
