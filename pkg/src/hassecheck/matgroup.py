"""Explicit subgroups of GL2(F_p): element tables, standard families, the
Borel/SL2 dichotomy, and desk-scale subgroup-lattice enumeration.

Elements are row-major 4-tuples (a, b, c, d) for [[a, b], [c, d]], reduced
mod p.  Element tables are kept sorted by this encoding so group equality is
a sequence comparison.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from . import linalg
from .errors import HypothesisNotMet, NonInvertibleGenerator, UnsupportedParameter

Mat2 = tuple[int, int, int, int]

IDENTITY: Mat2 = (1, 0, 0, 1)


def mat_mul(x: Mat2, y: Mat2, p: int) -> Mat2:
    a, b, c, d = x
    e, f, g, h = y
    return ((a * e + b * g) % p, (a * f + b * h) % p, (c * e + d * g) % p, (c * f + d * h) % p)


def mat_det(x: Mat2, p: int) -> int:
    return (x[0] * x[3] - x[1] * x[2]) % p


def mat_inv(x: Mat2, p: int) -> Mat2:
    det = mat_det(x, p)
    if det == 0:
        raise NonInvertibleGenerator(f"matrix {x} is singular mod {p}")
    di = pow(det, -1, p)
    a, b, c, d = x
    return (d * di % p, -b * di % p, -c * di % p, a * di % p)


def mat_order(x: Mat2, p: int) -> int:
    n, y = 1, x
    while y != IDENTITY:
        y = mat_mul(y, x, p)
        n += 1
    return n


def mat_pow(x: Mat2, k: int, p: int) -> Mat2:
    y = IDENTITY
    b = x
    while k:
        if k & 1:
            y = mat_mul(y, b, p)
        b = mat_mul(b, b, p)
        k >>= 1
    return y


def gl2_order(p: int) -> int:
    return (p * p - 1) * (p * p - p)


def _mulclose(p: int, gens: Sequence[Mat2]) -> set[Mat2]:
    seen = {IDENTITY}
    frontier = [IDENTITY]
    while frontier:
        nxt = []
        for x in frontier:
            for s in gens:
                y = mat_mul(x, s, p)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


class MatGroup:
    """A finite subgroup of GL2(F_p) as a complete sorted element table."""

    __slots__ = ("p", "elements", "generators", "index", "_mul", "_inv", "_arr")

    def __init__(self, p: int, elements: Iterable[Mat2], generators: Iterable[Mat2],
                 check: bool = True):
        self.p = linalg.check_modulus(p)
        self.elements: tuple[Mat2, ...] = tuple(sorted(set(elements)))
        self.generators: tuple[Mat2, ...] = tuple(generators)
        self.index = {m: i for i, m in enumerate(self.elements)}
        self._mul: Optional[np.ndarray] = None
        self._inv: Optional[np.ndarray] = None
        self._arr: Optional[np.ndarray] = None
        if check:
            self._check_invariants()

    def _check_invariants(self) -> None:
        p = self.p
        if IDENTITY not in self.index:
            raise ValueError("element table lacks the identity")
        for m in self.elements:
            if mat_det(m, p) == 0:
                raise ValueError(f"singular element {m} in table")
        for m in self.elements:
            if mat_inv(m, p) not in self.index:
                raise ValueError(f"table not closed under inverse at {m}")
        closed = _mulclose(p, self.elements)
        if len(closed) != len(self.elements):
            raise ValueError("element table not closed under products")
        if gl2_order(p) % len(self.elements) != 0:
            raise ValueError("order does not divide |GL2(F_p)|")
        gen_closure = _mulclose(p, self.generators)
        if len(gen_closure) != len(self.elements):
            raise ValueError("generators do not generate the element table")

    @property
    def order(self) -> int:
        return len(self.elements)

    def identity_index(self) -> int:
        return self.index[IDENTITY]

    def generator_indices(self) -> list[int]:
        return [self.index[g] for g in self.generators if g != IDENTITY]

    def element_array(self) -> np.ndarray:
        """Elements as an (n, 2, 2) int64 array in table order."""
        if self._arr is None:
            self._arr = np.array(self.elements, dtype=np.int64).reshape(-1, 2, 2)
        return self._arr

    def mul_table(self) -> np.ndarray:
        """n x n table of element indices: table[i, j] = index of e_i * e_j."""
        if self._mul is None:
            p, n = self.p, self.order
            arr = self.element_array()
            codes = self._codes(arr.reshape(n, 4))
            order = np.argsort(codes)
            sorted_codes = codes[order]
            prod = np.einsum("gij,hjk->ghik", arr, arr) % p
            pc = self._codes(prod.reshape(n * n, 4))
            pos = np.searchsorted(sorted_codes, pc)
            self._mul = order[pos].reshape(n, n).astype(np.int64)
        return self._mul

    def _codes(self, flat: np.ndarray) -> np.ndarray:
        p = self.p
        return ((flat[:, 0] * p + flat[:, 1]) * p + flat[:, 2]) * p + flat[:, 3]

    def inverse_table(self) -> np.ndarray:
        if self._inv is None:
            mul = self.mul_table()
            e = self.identity_index()
            self._inv = np.argmax(mul == e, axis=1).astype(np.int64)
        return self._inv

    def element_order(self, i: int) -> int:
        return mat_order(self.elements[i], self.p)

    def contains(self, other: "MatGroup") -> bool:
        return self.p == other.p and all(m in self.index for m in other.elements)

    def subgroup_indices(self, sub: "MatGroup") -> np.ndarray:
        """Positions of sub's elements inside this group's table."""
        return np.array([self.index[m] for m in sub.elements], dtype=np.int64)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, MatGroup)
            and self.p == other.p
            and self.elements == other.elements
        )

    def __hash__(self) -> int:
        return hash((self.p, self.elements))

    def __repr__(self) -> str:
        return f"MatGroup(p={self.p}, order={self.order})"


def close_subgroup(p: int, gens: Sequence[Mat2]) -> MatGroup:
    """Smallest subgroup of GL2(F_p) containing gens, as a complete table."""
    p = linalg.check_modulus(p)
    gens = [tuple(int(v) % p for v in g) for g in gens]
    for g in gens:
        if mat_det(g, p) == 0:
            raise NonInvertibleGenerator(f"generator {g} is singular mod {p}")
    elements = _mulclose(p, gens)
    return MatGroup(p, elements, gens or [IDENTITY], check=False)


def trivial_group(p: int) -> MatGroup:
    return MatGroup(p, [IDENTITY], [IDENTITY], check=False)


def _primitive_root(p: int) -> int:
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in _prime_factors(p - 1)):
            return g
    raise ValueError(f"no primitive root mod {p}")  # unreachable for prime p


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def unipotent(p: int) -> MatGroup:
    """Upper unitriangular subgroup U, order p."""
    elems = [(1, x, 0, 1) for x in range(p)]
    return MatGroup(p, elems, [(1, 1, 0, 1)], check=False)


def split_torus(p: int) -> MatGroup:
    """Diagonal torus T, order (p-1)^2."""
    elems = [(a, 0, 0, b) for a in range(1, p) for b in range(1, p)]
    g = _primitive_root(p)
    return MatGroup(p, elems, [(g, 0, 0, 1), (1, 0, 0, g)], check=False)


def borel(p: int) -> MatGroup:
    """Upper-triangular subgroup B = U x| T, order p(p-1)^2."""
    elems = [(a, x, 0, b) for a in range(1, p) for b in range(1, p) for x in range(p)]
    g = _primitive_root(p)
    return MatGroup(p, elems, [(g, 0, 0, 1), (1, 0, 0, g), (1, 1, 0, 1)], check=False)


def nonresidue(p: int) -> int:
    """Smallest quadratic non-residue mod p."""
    for e in range(2, p):
        if pow(e, (p - 1) // 2, p) == p - 1:
            return e
    raise ValueError(f"no non-residue mod {p}")


def nonsplit_torus(p: int) -> MatGroup:
    """Image of F_{p^2}^* acting on F_{p^2} in the basis {1, sqrt(eps)}:
    matrices [[a, eps*b], [b, a]], order p^2 - 1."""
    eps = nonresidue(p)
    elems = [
        (a, eps * b % p, b, a)
        for a in range(p)
        for b in range(p)
        if (a * a - eps * b * b) % p != 0
    ]
    gen = None
    for m in sorted(elems):
        if mat_order(m, p) == p * p - 1:
            gen = m
            break
    assert gen is not None  # F_{p^2}^* is cyclic
    return MatGroup(p, elems, [gen], check=False)


def sl2(p: int) -> MatGroup:
    """SL2(F_p), generated by the two elementary unipotents."""
    return close_subgroup(p, [(1, 1, 0, 1), (1, 0, 1, 1)])


def gl2(p: int) -> MatGroup:
    g = _primitive_root(p)
    return close_subgroup(p, [(1, 1, 0, 1), (1, 0, 1, 1), (g, 0, 0, 1)])


def borel_sl2(p: int) -> MatGroup:
    """B intersected with SL2: upper triangular of determinant 1, order p(p-1)."""
    elems = [
        (a, x, 0, pow(a, -1, p)) for a in range(1, p) for x in range(p)
    ]
    g = _primitive_root(p)
    return MatGroup(p, elems, [(g, 0, 0, pow(g, -1, p)), (1, 1, 0, 1)], check=False)


# ---------------------------------------------------------------------------
# index-space subgroup machinery (used by lattice enumeration and cohomology)

def _close_indices(mul: np.ndarray, e: int, gen_idx: Iterable[int]) -> frozenset[int]:
    seen = {e}
    frontier = [e]
    gen_idx = list(gen_idx)
    while frontier:
        nxt = []
        for x in frontier:
            for s in gen_idx:
                y = int(mul[x, s])
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(seen)


def _greedy_generators(parent: MatGroup, members: frozenset[int]) -> list[int]:
    mul = parent.mul_table()
    e = parent.identity_index()
    ordered = sorted(members, key=lambda i: (-parent.element_order(i), i))
    gens: list[int] = []
    closure = frozenset([e])
    for i in ordered:
        if i not in closure:
            gens.append(i)
            closure = _close_indices(mul, e, gens)
            if len(closure) == len(members):
                break
    return gens


def subgroup_from_indices(parent: MatGroup, members: frozenset[int]) -> MatGroup:
    gens_idx = _greedy_generators(parent, members)
    elems = [parent.elements[i] for i in members]
    gens = [parent.elements[i] for i in gens_idx] or [IDENTITY]
    return MatGroup(parent.p, elems, gens, check=False)


def enumerate_cyclic_subgroups(g: MatGroup) -> list[MatGroup]:
    """Every <x> for x in g, deduplicated as element sets."""
    mul = g.mul_table()
    e = g.identity_index()
    seen: dict[frozenset[int], int] = {}
    for i in range(g.order):
        orbit = [e]
        x = i
        while x != e:
            orbit.append(x)
            x = int(mul[x, i])
        key = frozenset(orbit)
        if key not in seen:
            seen[key] = i
    out = []
    for members, gen_idx in sorted(seen.items(), key=lambda kv: (len(kv[0]), sorted(kv[0]))):
        elems = [g.elements[i] for i in members]
        out.append(MatGroup(g.p, elems, [g.elements[gen_idx]], check=False))
    return out


def sylow_p(g: MatGroup) -> MatGroup:
    """A Sylow p-subgroup for the defining prime p of g.

    Subgroups of GL2(F_p) have p-part at most p, so this is either trivial
    or cyclic of order p.
    """
    p = g.p
    if g.order % p != 0:
        return trivial_group(p)
    assert g.order % (p * p) != 0  # p-part of |GL2(F_p)| is exactly p
    for m in g.elements:
        o = mat_order(m, p)
        if o % p == 0:
            x = mat_pow(m, o // p, p)
            elems = [mat_pow(x, k, p) for k in range(p)]
            return MatGroup(p, elems, [x], check=False)
    raise AssertionError("Cauchy violated")  # unreachable


# ---------------------------------------------------------------------------
# dichotomy (Borel-conjugate vs contains SL2)

@dataclass(frozen=True)
class BorelConjugate:
    """Verdict: c @ g @ c^{-1} is upper triangular for every g."""
    witness: Mat2


@dataclass(frozen=True)
class ContainsSL2:
    """Verdict: the full SL2(F_p) table is contained in the group."""


def _lines(p: int) -> list[tuple[int, int]]:
    return [(1, t) for t in range(p)] + [(0, 1)]


def common_eigenvector(g: MatGroup) -> Optional[tuple[int, int]]:
    """A line (column vector) fixed by every generator, if one exists."""
    p = g.p
    gens = g.generators or (IDENTITY,)
    for v in _lines(p):
        ok = True
        for m in gens:
            a, b, c, d = m
            w = ((a * v[0] + b * v[1]) % p, (c * v[0] + d * v[1]) % p)
            if (w[0] * v[1] - w[1] * v[0]) % p != 0:
                ok = False
                break
        if ok:
            return v
    return None


def contains_sl2(g: MatGroup) -> bool:
    table = sl2(g.p)
    return g.contains(table)


def classify_dichotomy(g: MatGroup):
    """Serre's dichotomy for subgroups with order divisible by p: either
    conjugate into the Borel (with an explicit witness) or containing SL2."""
    p = g.p
    if g.order % p != 0:
        raise HypothesisNotMet(f"|G| = {g.order} is prime to p = {p}")
    v = common_eigenvector(g)
    if v is not None:
        # complete v to a basis; conjugation by the inverse basis matrix
        # sends v to e1, hence the group into upper triangular form
        w = (0, 1) if (v[0] * 1 - v[1] * 0) % p != 0 else (1, 0)
        basis: Mat2 = (v[0], w[0], v[1], w[1])
        return BorelConjugate(witness=mat_inv(basis, p))
    if contains_sl2(g):
        return ContainsSL2()
    raise AssertionError("dichotomy exhausted without verdict")  # unreachable


# ---------------------------------------------------------------------------
# subgroup-lattice enumeration

def all_subgroups(parent: MatGroup) -> list[MatGroup]:
    """Every subgroup of parent, by join-closure over cyclic subgroups.

    Exact but exponential-ish at desk scale; intended for ambient orders
    up to ~100 (and GL2(F_3), order 48).
    """
    mul = parent.mul_table()
    e = parent.identity_index()
    n = parent.order

    cyclics: set[frozenset[int]] = set()
    for i in range(n):
        orbit = [e]
        x = i
        while x != e:
            orbit.append(x)
            x = int(mul[x, i])
        cyclics.add(frozenset(orbit))

    gens_of: dict[frozenset[int], list[int]] = {}
    subs: set[frozenset[int]] = set()
    for c in cyclics:
        subs.add(c)
        gens_of[c] = _greedy_generators(parent, c)

    changed = True
    while changed:
        changed = False
        items = sorted(subs, key=lambda s: (len(s), sorted(s)))
        for i, a in enumerate(items):
            for b in items[i + 1:]:
                if a <= b or b <= a:
                    continue
                j = _close_indices(mul, e, gens_of[a] + gens_of[b])
                if j not in subs:
                    subs.add(j)
                    gens_of[j] = _greedy_generators(parent, j)
                    changed = True
    ordered = sorted(subs, key=lambda s: (len(s), sorted(s)))
    return [subgroup_from_indices(parent, s) for s in ordered]


def enumerate_all_subgroups(p: int = 3) -> list[MatGroup]:
    """All subgroups of GL2(F_3).  Only p = 3 is supported: the order-480
    lattice at p = 5 is unnecessary for the dichotomy-based argument."""
    if p != 3:
        raise UnsupportedParameter("exhaustive subgroup enumeration only supports p = 3")
    return all_subgroups(gl2(3))


def random_subgroup(p: int, rng) -> MatGroup:
    """Subgroup generated by two uniformly random invertible matrices."""
    gens = []
    while len(gens) < 2:
        m = tuple(rng.randrange(p) for _ in range(4))
        if mat_det(m, p) != 0:
            gens.append(m)
    return close_subgroup(p, gens)
