"""Numpy backend for :mod:`greenberg.kernels` (same signatures as the Cython one)."""

import numpy as np


def eval_columns(poly_ptr, mono_coeff, mono_ptr, fac_var, fac_slot, pow_tab, add_t, mul_t, zero, cols):
    npolys = len(poly_ptr) - 1
    C = cols.shape[1]
    out = np.empty((npolys, C), dtype=np.int32)
    for k in range(npolys):
        acc = np.full(C, zero, dtype=np.int32)
        for mono in range(poly_ptr[k], poly_ptr[k + 1]):
            t = np.full(C, mono_coeff[mono], dtype=np.int32)
            for f in range(mono_ptr[mono], mono_ptr[mono + 1]):
                t = mul_t[t, pow_tab[fac_slot[f]][cols[fac_var[f]]]]
            acc = add_t[acc, t]
        out[k] = acc
    return out


def eval_scalar(compiled, k, assign):
    ring = compiled.ring
    acc = ring.zero
    for mono in range(compiled.poly_ptr[k], compiled.poly_ptr[k + 1]):
        t = int(compiled.mono_coeff[mono])
        for f in range(compiled.mono_ptr[mono], compiled.mono_ptr[mono + 1]):
            t = ring.mul(t, int(compiled.pow_tab[compiled.fac_slot[f], assign[compiled.fac_var[f]]]))
        acc = ring.add(acc, t)
    return acc


_CHUNK = 1 << 16


def count_solutions(
    poly_ptr,
    mono_coeff,
    mono_ptr,
    fac_var,
    fac_slot,
    pow_tab,
    add_t,
    mul_t,
    zero,
    dom_ptr,
    dom_vals,
    chk_ptr,
    chk_polys,
    nvars,
    collect,
):
    """Breadth-first extension of partial assignments in bounded chunks."""
    doms = [dom_vals[dom_ptr[d] : dom_ptr[d + 1]] for d in range(nvars)]
    found = []
    total = 0
    if nvars == 0:
        return 1, [()] if collect else []

    def check(rows, depth):
        keep = np.ones(rows.shape[1], dtype=bool)
        for k in chk_polys[chk_ptr[depth] : chk_ptr[depth + 1]]:
            acc = np.full(rows.shape[1], zero, dtype=np.int32)
            for mono in range(poly_ptr[k], poly_ptr[k + 1]):
                t = np.full(rows.shape[1], mono_coeff[mono], dtype=np.int32)
                for f in range(mono_ptr[mono], mono_ptr[mono + 1]):
                    t = mul_t[t, pow_tab[fac_slot[f]][rows[fac_var[f]]]]
                acc = add_t[acc, t]
            keep &= acc == zero
        return rows[:, keep]

    stack = [(np.zeros((0, 1), dtype=np.int32), 0)]
    while stack:
        rows, depth = stack.pop()
        dom = doms[depth]
        width = rows.shape[1]
        new = np.empty((depth + 1, width * len(dom)), dtype=np.int32)
        if depth:
            new[:depth] = np.repeat(rows, len(dom), axis=1)
        new[depth] = np.tile(dom, width)
        new = check(new, depth)
        if depth + 1 == nvars:
            total += new.shape[1]
            if collect:
                found.extend(map(tuple, new.T.tolist()))
            continue
        step = max(1, _CHUNK // max(1, len(doms[depth + 1])))
        for start in range(0, new.shape[1], step):
            stack.append((new[:, start : start + step], depth + 1))
    return total, found
