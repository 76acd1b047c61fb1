# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled versions of the hot loops in ``_kernels_py``.

Keys are arbitrary-precision Python ints and coefficients are mpq or int,
so the gain comes from typed loop control and avoiding attribute lookups.
"""


def axpy(dict h, list items, object shift, object c):
    cdef Py_ssize_t i, n = len(items)
    cdef tuple kv
    cdef object k, v, w
    for i in range(n):
        kv = <tuple>items[i]
        k = kv[0] + shift
        v = kv[1]
        w = h.get(k)
        if w is None:
            h[k] = -c * v
        else:
            w = w - c * v
            if w:
                h[k] = w
            else:
                del h[k]


def axpy_mod(dict h, list items, object shift, object c, object p):
    cdef Py_ssize_t i, n = len(items)
    cdef tuple kv
    cdef object k, v, w
    for i in range(n):
        kv = <tuple>items[i]
        k = kv[0] + shift
        v = kv[1]
        w = h.get(k)
        if w is None:
            h[k] = (-c * v) % p
        else:
            w = (w - c * v) % p
            if w:
                h[k] = w
            else:
                del h[k]


def find_divisor(list lms, object key, object mask, object guards):
    cdef Py_ssize_t i, n = len(lms)
    cdef object b = (key & mask) | guards
    for i in range(n):
        if (b - (lms[i] & mask)) & guards == guards:
            return i
    return -1


def find_divisors(list lms, object key, object mask, object guards):
    cdef Py_ssize_t i, n = len(lms)
    cdef object b = (key & mask) | guards
    cdef list out = []
    for i in range(n):
        if (b - (lms[i] & mask)) & guards == guards:
            out.append(i)
    return out


def reduce_row(dict row, dict pivots):
    cdef object lead, piv
    while row:
        lead = min(row)
        piv = pivots.get(lead)
        if piv is None:
            return lead
        axpy(row, <list>piv, 0, row[lead])
    return -1
