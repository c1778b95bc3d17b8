# cython: boundscheck=False, wraparound=False, cdivision=True
"""In-place row-echelon kernel over F_p, int64 storage, p an odd prime < 2**15.

Entries must already be reduced into [0, p); products then fit comfortably
in 64 bits.  Semantics match hassecheck._echelon_py exactly.
"""


cdef long long _inv_mod(long long a, long long p):
    # extended Euclid; caller guarantees a != 0 mod p
    cdef long long t = 0, newt = 1, r = p, newr = a % p, q, tmp
    while newr != 0:
        q = r / newr
        tmp = t - q * newt
        t = newt
        newt = tmp
        tmp = r - q * newr
        r = newr
        newr = tmp
    if t < 0:
        t += p
    return t


def rref(long long[:, ::1] a, long long p):
    """Reduce a to reduced row echelon form in place; return pivot columns."""
    cdef Py_ssize_t m = a.shape[0], n = a.shape[1]
    cdef Py_ssize_t row = 0, col, r, j, piv
    cdef long long inv, f, v
    pivots = []
    for col in range(n):
        if row == m:
            break
        piv = -1
        for r in range(row, m):
            if a[r, col] != 0:
                piv = r
                break
        if piv < 0:
            continue
        if piv != row:
            for j in range(n):
                v = a[row, j]
                a[row, j] = a[piv, j]
                a[piv, j] = v
        if a[row, col] != 1:
            inv = _inv_mod(a[row, col], p)
            for j in range(col, n):
                a[row, j] = a[row, j] * inv % p
        for r in range(m):
            if r == row:
                continue
            f = a[r, col]
            if f != 0:
                for j in range(col, n):
                    v = (a[r, j] - f * a[row, j]) % p
                    if v < 0:
                        v += p
                    a[r, j] = v
        pivots.append(col)
        row += 1
    return pivots
