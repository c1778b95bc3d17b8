"""Pure-numpy fallback for the compiled echelon kernel.

Pivot choice (first nonzero row per column) matches _echelon.pyx so both
backends produce bit-identical results.
"""

import numpy as np


def rref(a: np.ndarray, p: int) -> list[int]:
    """Reduce a to reduced row echelon form in place; return pivot columns."""
    m, n = a.shape
    row = 0
    pivots: list[int] = []
    for col in range(n):
        if row == m:
            break
        nz = np.nonzero(a[row:, col])[0]
        if nz.size == 0:
            continue
        piv = row + int(nz[0])
        if piv != row:
            a[[row, piv]] = a[[piv, row]]
        lead = int(a[row, col])
        if lead != 1:
            a[row, col:] = a[row, col:] * pow(lead, -1, p) % p
        factors = a[:, col].copy()
        factors[row] = 0
        hit = np.nonzero(factors)[0]
        if hit.size:
            a[np.ix_(hit, range(col, n))] = (
                a[np.ix_(hit, range(col, n))] - np.outer(factors[hit], a[row, col:])
            ) % p
        pivots.append(col)
        row += 1
    return pivots
