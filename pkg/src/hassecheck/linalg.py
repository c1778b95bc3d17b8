"""Exact dense linear algebra over the prime field F_p.

Every cocycle and invariant computation in the package bottoms out in the
row-reduction kernel here.  A compiled Cython kernel is used when available;
set HASSECHECK_PURE=1 (or call set_backend) to force the numpy fallback.
Moduli are restricted to odd primes below 2**15 so products of reduced
entries stay inside int64.
"""

from __future__ import annotations

import os
from typing import Optional

import numpy as np

from . import _echelon_py

try:
    from . import _echelon  # type: ignore[attr-defined]
except ImportError:  # pragma: no cover - depends on build environment
    _echelon = None

_MAX_PRIME = 1 << 15


def available_backends() -> tuple[str, ...]:
    return ("cython", "python") if _echelon is not None else ("python",)


_backend_name = "python"
_kernel = _echelon_py
if _echelon is not None and os.environ.get("HASSECHECK_PURE", "") != "1":
    _backend_name = "cython"
    _kernel = _echelon


def backend() -> str:
    """Name of the active echelon backend ('cython' or 'python')."""
    return _backend_name


def set_backend(name: str) -> None:
    global _backend_name, _kernel
    if name == "python":
        _backend_name, _kernel = "python", _echelon_py
    elif name == "cython":
        if _echelon is None:
            raise RuntimeError("compiled echelon kernel not available")
        _backend_name, _kernel = "cython", _echelon
    else:
        raise ValueError(f"unknown backend {name!r}")


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def check_modulus(p: int) -> int:
    p = int(p)
    if p == 2 or not is_prime(p):
        raise ValueError(f"modulus must be an odd prime, got {p}")
    if p >= _MAX_PRIME:
        raise ValueError(f"modulus {p} exceeds the 2**15 word-arithmetic bound")
    return p


def _as_matrix(a, p: int) -> np.ndarray:
    m = np.ascontiguousarray(np.asarray(a, dtype=np.int64) % p)
    if m.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    return m


def rref_inplace(a: np.ndarray, p: int) -> list[int]:
    """Reduced row echelon form in place; a must be int64, C-contiguous,
    entries already in [0, p).  Returns the pivot columns."""
    return _kernel.rref(a, p)


def rref(a, p: int) -> tuple[np.ndarray, list[int]]:
    m = _as_matrix(a, p)
    piv = rref_inplace(m, p)
    return m, piv


def rank(a, p: int) -> int:
    _, piv = rref(a, p)
    return len(piv)


def kernel_basis(a, p: int) -> np.ndarray:
    """Basis (rows) of the right null space {x : a @ x = 0 mod p}."""
    m, piv = rref(a, p)
    n = m.shape[1]
    free = [c for c in range(n) if c not in set(piv)]
    basis = np.zeros((len(free), n), dtype=np.int64)
    for i, c in enumerate(free):
        basis[i, c] = 1
        for r, pc in enumerate(piv):
            basis[i, pc] = (-m[r, c]) % p
    return basis


def solve(a, b, p: int) -> Optional[np.ndarray]:
    """One solution of a @ x = b mod p (free variables set to 0), or None."""
    m = _as_matrix(a, p)
    rhs = np.asarray(b, dtype=np.int64) % p
    if rhs.ndim != 1 or rhs.shape[0] != m.shape[0]:
        raise ValueError("right-hand side has incompatible shape")
    aug = np.ascontiguousarray(np.hstack([m, rhs[:, None]]))
    piv = rref_inplace(aug, p)
    n = m.shape[1]
    if piv and piv[-1] == n:  # pivot in the augmented column: inconsistent
        return None
    x = np.zeros(n, dtype=np.int64)
    for r, c in enumerate(piv):
        x[c] = aug[r, n]
    return x


def invert(a, p: int) -> Optional[np.ndarray]:
    """Two-sided inverse of a square matrix, or None if singular."""
    m = _as_matrix(a, p)
    n = m.shape[0]
    if m.shape[1] != n:
        raise ValueError("invert requires a square matrix")
    aug = np.ascontiguousarray(np.hstack([m, np.eye(n, dtype=np.int64)]))
    piv = rref_inplace(aug, p)
    if piv[:n] != list(range(n)) or len(piv) != n:
        return None
    return aug[:, n:].copy()


def annihilator(a, p: int) -> np.ndarray:
    """Basis (rows) of the functionals vanishing on the column span of a.

    phi is returned iff phi @ a == 0, i.e. phi kills every column; over a
    field the double annihilator recovers the span, so membership of v in
    the column span is equivalent to annihilator(a) @ v == 0.
    """
    m = _as_matrix(a, p)
    return kernel_basis(m.T, p)


class FpMatrix:
    """Dense matrix over F_p with entries stored reduced into [0, p)."""

    __slots__ = ("p", "entries")

    def __init__(self, entries, p: int):
        self.p = check_modulus(p)
        self.entries = _as_matrix(entries, self.p)

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    def rank(self) -> int:
        return rank(self.entries, self.p)

    def kernel_basis(self) -> np.ndarray:
        return kernel_basis(self.entries, self.p)

    def solve(self, b) -> Optional[np.ndarray]:
        return solve(self.entries, b, self.p)

    def invert(self) -> Optional["FpMatrix"]:
        inv = invert(self.entries, self.p)
        return None if inv is None else FpMatrix(inv, self.p)

    def __matmul__(self, other: "FpMatrix") -> "FpMatrix":
        if self.p != other.p:
            raise ValueError("modulus mismatch")
        return FpMatrix(self.entries @ other.entries % self.p, self.p)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FpMatrix)
            and self.p == other.p
            and np.array_equal(self.entries, other.entries)
        )

    def __repr__(self) -> str:
        return f"FpMatrix(p={self.p}, {self.entries.tolist()})"
