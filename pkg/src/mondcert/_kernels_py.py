"""Pure-Python versions of the hot inner loops.

``_kernels.pyx`` implements the same functions; :mod:`mondcert.kernels`
picks whichever is importable.  Keep the two in step.
"""


def axpy(h, items, shift, c):
    """h -= c * (items shifted by ``shift``), in place; zero entries are dropped."""
    get = h.get
    for k, v in items:
        k += shift
        w = get(k)
        if w is None:
            h[k] = -c * v
        else:
            w -= c * v
            if w:
                h[k] = w
            else:
                del h[k]


def axpy_mod(h, items, shift, c, p):
    """Same as :func:`axpy` with coefficients in Z/p."""
    get = h.get
    for k, v in items:
        k += shift
        w = get(k)
        if w is None:
            h[k] = (-c * v) % p
        else:
            w = (w - c * v) % p
            if w:
                h[k] = w
            else:
                del h[k]


def find_divisor(lms, key, mask, guards):
    """Index of the first packed monomial in ``lms`` dividing ``key``, or -1."""
    b = (key & mask) | guards
    i = 0
    for a in lms:
        if (b - (a & mask)) & guards == guards:
            return i
        i += 1
    return -1


def find_divisors(lms, key, mask, guards):
    """Indices of all packed monomials in ``lms`` dividing ``key``."""
    b = (key & mask) | guards
    out = []
    i = 0
    for a in lms:
        if (b - (a & mask)) & guards == guards:
            out.append(i)
        i += 1
    return out


def reduce_row(row, pivots):
    """Reduce a sparse row (dict col -> value) against echelon ``pivots``.

    ``pivots`` maps a pivot column to a row whose smallest column is that
    pivot with value 1, stored as a list of (col, value).  Returns the lead
    column of the reduced row or -1 if it became zero.
    """
    while row:
        lead = min(row)
        piv = pivots.get(lead)
        if piv is None:
            return lead
        axpy(row, piv, 0, row[lead])
    return -1
