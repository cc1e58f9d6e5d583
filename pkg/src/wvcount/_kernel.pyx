# cython: language_level=3
"""Compiled enumeration kernel for plain programs (mask-based).

Mirrors ``_kernel_py.answer_sets_masks`` for programs with at most 62
atoms; the dispatcher in ``wvcount.kernel`` falls back to the pure
version beyond that.
"""

from libc.stdlib cimport free, malloc


def answer_sets_masks(heads, bpos, bneg, int n_atoms):
    if n_atoms > 62:
        raise ValueError("compiled kernel handles at most 62 atoms")
    cdef Py_ssize_t m = len(heads)
    cdef unsigned long long *h = <unsigned long long *> malloc(m * sizeof(unsigned long long))
    cdef unsigned long long *bp = <unsigned long long *> malloc(m * sizeof(unsigned long long))
    cdef unsigned long long *bn = <unsigned long long *> malloc(m * sizeof(unsigned long long))
    if h == NULL or bp == NULL or bn == NULL:
        free(h); free(bp); free(bn)
        raise MemoryError()
    cdef Py_ssize_t k
    for k in range(m):
        h[k] = heads[k]
        bp[k] = bpos[k]
        bn[k] = bneg[k]
    cdef unsigned long long full = (<unsigned long long> 1) << n_atoms
    cdef unsigned long long i, j
    cdef bint ok, good, minimal
    out = []
    try:
        i = 0
        while i < full:
            ok = True
            for k in range(m):
                if bn[k] & i:
                    continue
                if (bp[k] & ~i) == 0 and (h[k] & i) == 0:
                    ok = False
                    break
            if ok:
                minimal = True
                if i:
                    j = (i - 1) & i
                    while True:
                        good = True
                        for k in range(m):
                            if bn[k] & i:
                                continue
                            if (bp[k] & ~j) == 0 and (h[k] & j) == 0:
                                good = False
                                break
                        if good:
                            minimal = False
                            break
                        if j == 0:
                            break
                        j = (j - 1) & i
                if minimal:
                    out.append(i)
            i += 1
    finally:
        free(h); free(bp); free(bn)
    return out
