# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled backend for :mod:`greenberg.kernels`."""

import numpy as np
cimport numpy as cnp

cnp.import_array()


cdef inline int _eval_poly(int k, const int[:] poly_ptr, const int[:] mono_coeff,
                           const int[:] mono_ptr, const int[:] fac_var, const int[:] fac_slot,
                           const int[:, :] pow_tab, const int[:, :] add_t, const int[:, :] mul_t,
                           int zero, const int[:] assign) nogil:
    cdef int acc = zero
    cdef int t, mono, f
    for mono in range(poly_ptr[k], poly_ptr[k + 1]):
        t = mono_coeff[mono]
        for f in range(mono_ptr[mono], mono_ptr[mono + 1]):
            t = mul_t[t, pow_tab[fac_slot[f], assign[fac_var[f]]]]
        acc = add_t[acc, t]
    return acc


def eval_columns(const int[:] poly_ptr, const int[:] mono_coeff, const int[:] mono_ptr,
                 const int[:] fac_var, const int[:] fac_slot, const int[:, :] pow_tab,
                 const int[:, :] add_t, const int[:, :] mul_t, int zero, const int[:, :] cols):
    cdef Py_ssize_t npolys = poly_ptr.shape[0] - 1
    cdef Py_ssize_t C = cols.shape[1]
    out_arr = np.empty((npolys, C), dtype=np.int32)
    cdef int[:, :] out = out_arr
    cdef Py_ssize_t k, c
    cdef int acc, t, mono, f
    with nogil:
        for c in range(C):
            for k in range(npolys):
                acc = zero
                for mono in range(poly_ptr[k], poly_ptr[k + 1]):
                    t = mono_coeff[mono]
                    for f in range(mono_ptr[mono], mono_ptr[mono + 1]):
                        t = mul_t[t, pow_tab[fac_slot[f], cols[fac_var[f], c]]]
                    acc = add_t[acc, t]
                out[k, c] = acc
    return out_arr


def count_solutions(const int[:] poly_ptr, const int[:] mono_coeff, const int[:] mono_ptr,
                    const int[:] fac_var, const int[:] fac_slot, const int[:, :] pow_tab,
                    const int[:, :] add_t, const int[:, :] mul_t, int zero,
                    const int[:] dom_ptr, const int[:] dom_vals,
                    const int[:] chk_ptr, const int[:] chk_polys,
                    int nvars, bint collect):
    """Depth-first search; generators are tested at the depth of their last variable."""
    if nvars == 0:
        return 1, ([()] if collect else [])
    assign_arr = np.zeros(nvars, dtype=np.int32)
    pos_arr = np.zeros(nvars, dtype=np.int32)
    cdef int[:] assign = assign_arr
    cdef int[:] pos = pos_arr
    cdef long long count = 0
    cdef int d = 0
    cdef int j
    cdef bint ok
    found = []
    pos[0] = -1
    while d >= 0:
        pos[d] += 1
        if pos[d] >= dom_ptr[d + 1] - dom_ptr[d]:
            d -= 1
            continue
        assign[d] = dom_vals[dom_ptr[d] + pos[d]]
        ok = True
        for j in range(chk_ptr[d], chk_ptr[d + 1]):
            if _eval_poly(chk_polys[j], poly_ptr, mono_coeff, mono_ptr, fac_var, fac_slot,
                          pow_tab, add_t, mul_t, zero, assign) != zero:
                ok = False
                break
        if not ok:
            continue
        if d == nvars - 1:
            count += 1
            if collect:
                found.append(tuple(assign_arr.tolist()))
            continue
        d += 1
        pos[d] = -1
    return count, found
