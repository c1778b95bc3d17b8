"""Explicit group cohomology of finite matrix groups with F_p coefficients.

H^1 and H^2 are computed on cocycles parameterized by their values on a
generating set: the cocycle identity for generator first-arguments implies
it for all arguments (induction on word length), and every returned
representative is re-verified against the full |G|^2 (resp. |G|^3) identity.
Coefficients are F_p-vector spaces; class equality is always decided by a
coboundary solve, never by representative comparison.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import linalg
from .errors import GroupTooLarge, HypothesisNotMet, UnsupportedParameter
from .matgroup import (
    MatGroup,
    borel_sl2,
    enumerate_cyclic_subgroups,
    mat_det,
    sl2,
)

H2_CAP = 24

STANDARD_MODULE_NAMES = ("trivial", "V", "sym2", "ad", "VxV")


class CosetGroup:
    """Quotient group presented as a coset multiplication table.

    Exposes the same protocol as MatGroup (order, mul_table,
    generator_indices, identity_index) so the cocycle machinery can run on
    quotients that have no faithful 2x2 model.
    """

    __slots__ = ("p", "_mul", "_gens", "_e")

    def __init__(self, p: int, mul: np.ndarray, gens: Sequence[int], identity: int):
        self.p = p
        self._mul = mul
        self._gens = [g for g in gens if g != identity]
        self._e = identity

    @property
    def order(self) -> int:
        return self._mul.shape[0]

    def mul_table(self) -> np.ndarray:
        return self._mul

    def generator_indices(self) -> list[int]:
        return list(self._gens)

    def identity_index(self) -> int:
        return self._e


class GModule:
    """A finite-dimensional F_p vector space with a group action given by an
    invertible matrix per element, table-aligned with the group."""

    __slots__ = ("group", "dim", "act", "name")

    def __init__(self, group, act, name: str = "", check: bool = True):
        self.group = group
        self.act = np.ascontiguousarray(np.asarray(act, dtype=np.int64) % group.p)
        if self.act.ndim != 3 or self.act.shape[0] != group.order \
                or self.act.shape[1] != self.act.shape[2]:
            raise ValueError("action array must have shape (|G|, dim, dim)")
        self.dim = self.act.shape[1]
        self.name = name
        if check:
            self._check_action()

    @property
    def p(self) -> int:
        return self.group.p

    def _check_action(self) -> None:
        p = self.p
        n = self.group.order
        e = self.group.identity_index()
        if not np.array_equal(self.act[e], np.eye(self.dim, dtype=np.int64)):
            raise ValueError("action at the identity is not the identity matrix")
        mul = self.group.mul_table()
        chunk = max(1, (1 << 22) // (n * self.dim * self.dim + 1))
        for lo in range(0, n, chunk):
            hi = min(n, lo + chunk)
            prod = np.einsum("gij,hjk->ghik", self.act[lo:hi], self.act) % p
            if not np.array_equal(prod, self.act[mul[lo:hi]]):
                raise ValueError("action is not a homomorphism on the full table")

    def restrict(self, h: MatGroup) -> "GModule":
        """Restriction along a subgroup inclusion (checked by membership)."""
        g = self.group
        if not isinstance(g, MatGroup) or not g.contains(h):
            raise ValueError("restriction target is not a subgroup")
        idx = g.subgroup_indices(h)
        return GModule(h, self.act[idx], name=self.name, check=False)

    def __repr__(self) -> str:
        return f"GModule({self.name or '?'}, dim={self.dim}, |G|={self.group.order})"


# ---------------------------------------------------------------------------
# module constructors

def trivial_module(group, dim: int = 1) -> GModule:
    n = group.order
    act = np.tile(np.eye(dim, dtype=np.int64), (n, 1, 1))
    return GModule(group, act, name="trivial", check=False)


def standard_module(group: MatGroup) -> GModule:
    """V = F_p^2 with the subgroup of GL2 acting by matrix multiplication."""
    return GModule(group, group.element_array(), name="V", check=False)


def sym2(m: GModule) -> GModule:
    """Symmetric square of a 2-dimensional module, basis (x^2, xy, y^2)."""
    if m.dim != 2:
        raise ValueError("sym2 is defined for 2-dimensional modules")
    p = m.p
    a, b, c, d = (m.act[:, 0, 0], m.act[:, 0, 1], m.act[:, 1, 0], m.act[:, 1, 1])
    n = m.group.order
    act = np.empty((n, 3, 3), dtype=np.int64)
    act[:, 0, 0] = a * a
    act[:, 0, 1] = a * b
    act[:, 0, 2] = b * b
    act[:, 1, 0] = 2 * a * c
    act[:, 1, 1] = a * d + b * c
    act[:, 1, 2] = 2 * b * d
    act[:, 2, 0] = c * c
    act[:, 2, 1] = c * d
    act[:, 2, 2] = d * d
    return GModule(m.group, act % p, name=f"sym2({m.name})" if m.name != "V" else "sym2")


def lambda2(m: GModule) -> GModule:
    """Alternating square of a 2-dimensional module: scalar action by det."""
    if m.dim != 2:
        raise ValueError("lambda2 is defined for 2-dimensional modules")
    det = (m.act[:, 0, 0] * m.act[:, 1, 1] - m.act[:, 0, 1] * m.act[:, 1, 0]) % m.p
    return GModule(m.group, det[:, None, None], name="lambda2", check=False)


def tensor(m1: GModule, m2: GModule) -> GModule:
    if m1.group is not m2.group and m1.group != m2.group:
        raise ValueError("tensor factors live over different groups")
    p = m1.p
    n = m1.group.order
    act = np.einsum("gij,gkl->gikjl", m1.act, m2.act).reshape(
        n, m1.dim * m2.dim, m1.dim * m2.dim
    ) % p
    name = "VxV" if (m1.name, m2.name) == ("V", "V") else f"{m1.name}(x){m2.name}"
    return GModule(m1.group, act, name=name, check=False)


def det_twist(m: GModule, k: int) -> GModule:
    """Twist by det(g)^k of the underlying matrix-group element."""
    g = m.group
    if not isinstance(g, MatGroup):
        raise ValueError("det_twist needs a matrix group")
    p = g.p
    dets = np.array([mat_det(x, p) for x in g.elements], dtype=np.int64)
    powers = np.array([pow(int(d), k % (p - 1), p) for d in dets], dtype=np.int64)
    act = m.act * powers[:, None, None] % p
    return GModule(g, act, name=f"{m.name}@det^{k}", check=False)


def ad(group: MatGroup) -> GModule:
    """sym^2(V) twisted by the inverse determinant character (Cartier dual
    of sym^2, the adjoint-type coefficient module)."""
    mod = det_twist(sym2(standard_module(group)), -1)
    mod.name = "ad"
    return mod


def standard_module_by_name(group: MatGroup, name: str) -> GModule:
    v = standard_module(group)
    if name == "trivial":
        return trivial_module(group)
    if name == "V":
        return v
    if name == "sym2":
        return sym2(v)
    if name == "ad":
        return ad(group)
    if name == "VxV":
        return tensor(v, v)
    raise UnsupportedParameter(f"unknown module name {name!r}")


def dual(m: GModule) -> GModule:
    """Contragredient: g acts by the transpose of the inverse action."""
    inv = m.group.inverse_table() if isinstance(m.group, MatGroup) else None
    if inv is None:
        raise ValueError("dual needs a matrix group")
    act = np.transpose(m.act[inv], (0, 2, 1)).copy()
    return GModule(m.group, act, name=f"{m.name}*", check=False)


def extension_module(m1: GModule, m2: GModule, rng) -> GModule:
    """A (generally non-split) extension of m2 by m1, built from a random
    1-cocycle with values in Hom(m2, m1)."""
    hom = tensor(m1, dual(m2))
    space = _H1Space(hom)
    d1, d2 = m1.dim, m2.dim
    p = m1.p
    n = m1.group.order
    if space.z_basis.shape[0]:
        coeffs = np.array(
            [rng.randrange(p) for _ in range(space.z_basis.shape[0])], dtype=np.int64
        )
        u = coeffs @ space.z_basis % p
        phi = space.values_from_u(u).reshape(n, d1, d2)
    else:
        phi = np.zeros((n, d1, d2), dtype=np.int64)
    c = np.einsum("gij,gjk->gik", phi, m2.act) % p
    act = np.zeros((n, d1 + d2, d1 + d2), dtype=np.int64)
    act[:, :d1, :d1] = m1.act
    act[:, :d1, d1:] = c
    act[:, d1:, d1:] = m2.act
    return GModule(m1.group, act, name=f"ext({m1.name},{m2.name})")


# ---------------------------------------------------------------------------
# cocycle spaces

class _H1Space:
    """Z^1/B^1 for (G, M), parameterized by cocycle values on the generators.

    A 1-cocycle is determined by its generator values via a BFS over the
    Cayley graph; imposing f(sg) = f(s) + s.f(g) for generator s and all g
    is equivalent to the full cocycle identity.
    """

    def __init__(self, m: GModule):
        g = m.group
        p = m.p
        n = g.order
        dim = m.dim
        act = m.act
        mul = g.mul_table()
        gens = g.generator_indices()
        ng = len(gens)
        k = ng * dim
        e = g.identity_index()
        eye = np.eye(dim, dtype=np.int64)

        L = np.zeros((n, dim, k), dtype=np.int64)
        blocks = np.zeros((ng, dim, k), dtype=np.int64)
        for i in range(ng):
            blocks[i, :, i * dim:(i + 1) * dim] = eye
        seen = np.zeros(n, dtype=bool)
        seen[e] = True
        frontier = [e]
        while frontier:
            nxt = []
            for x in frontier:
                for i, s in enumerate(gens):
                    t = int(mul[s, x])
                    if not seen[t]:
                        L[t] = (blocks[i] + act[s] @ L[x]) % p
                        seen[t] = True
                        nxt.append(t)
            frontier = nxt
        if not seen.all():
            raise ValueError("generators do not generate the group")

        rows = []
        for i, s in enumerate(gens):
            pred = (np.einsum("ij,njk->nik", act[s], L) + blocks[i]) % p
            rows.append(((L[mul[s]] - pred) % p).reshape(n * dim, k))
        cons = np.vstack(rows) if rows else np.zeros((0, k), dtype=np.int64)

        self.module = m
        self.k = k
        self.gens = gens
        self.L = L
        self.z_basis = linalg.kernel_basis(cons, p)
        self.cob = (
            np.vstack([(act[s] - eye) % p for s in gens])
            if gens else np.zeros((0, dim), dtype=np.int64)
        )  # u-vector of the coboundary of v is cob @ v
        b_rank = linalg.rank(self.cob, p)
        reps = []
        acc = [self.cob.T % p]
        cur = b_rank
        for z in self.z_basis:
            r = linalg.rank(np.vstack(acc + [z[None, :]]), p)
            if r > cur:
                reps.append(z)
                acc.append(z[None, :])
                cur = r
        self.rep_u = np.array(reps, dtype=np.int64).reshape(len(reps), k)
        self.dimension = self.z_basis.shape[0] - b_rank
        assert self.dimension == len(reps)

    def values_from_u(self, u: np.ndarray) -> np.ndarray:
        return np.einsum("ndk,k->nd", self.L, u) % self.module.p

    def u_of_values(self, values: np.ndarray) -> np.ndarray:
        return values[self.gens].reshape(self.k)

    def class_coords(self, values: np.ndarray) -> np.ndarray:
        """Coordinates of a cocycle's class in the chosen H^1 basis."""
        h = self.rep_u.shape[0]
        a = np.hstack([self.cob, self.rep_u.T]) if h else self.cob
        x = linalg.solve(a, self.u_of_values(values), self.module.p)
        if x is None:
            raise ValueError("values do not define a cocycle in this space")
        return x[self.cob.shape[1]:] if h else np.zeros(0, dtype=np.int64)

    def representatives(self) -> list["CohomologyClass"]:
        return [
            CohomologyClass(1, self.module, self.values_from_u(u))
            for u in self.rep_u
        ]


def _verify_cocycle1(values: np.ndarray, m: GModule) -> None:
    p = m.p
    mul = m.group.mul_table()
    lhs = values[mul]
    rhs = (values[:, None, :] + np.einsum("gij,hj->ghi", m.act, values)) % p
    if not np.array_equal(lhs, rhs):
        raise ValueError("degree-1 cocycle identity fails")


def _verify_cocycle2(values: np.ndarray, m: GModule) -> None:
    p = m.p
    mul = m.group.mul_table()
    t1 = np.einsum("gij,hkj->ghki", m.act, values) % p
    t2 = values[mul]            # f(gh, k) at [g, h, k]
    t3 = values[:, mul]         # f(g, hk) at [g, h, k]
    t4 = values[:, :, None, :]
    total = (t1 - t2 + t3 - t4) % p
    if np.any(total):
        raise ValueError("degree-2 cocycle identity fails")


class CohomologyClass:
    """A 1- or 2-cocycle with its ambient (group, module); the representative
    is stored as a full function on the element table and verified against
    the cocycle identity at construction."""

    __slots__ = ("degree", "module", "values")

    def __init__(self, degree: int, module: GModule, values, check: bool = True):
        if degree not in (1, 2):
            raise ValueError("degree must be 1 or 2")
        self.degree = degree
        self.module = module
        self.values = np.asarray(values, dtype=np.int64) % module.p
        n, d = module.group.order, module.dim
        want = (n, d) if degree == 1 else (n, n, d)
        if self.values.shape != want:
            raise ValueError(f"cocycle table has shape {self.values.shape}, want {want}")
        if check:
            if degree == 1:
                _verify_cocycle1(self.values, module)
            else:
                _verify_cocycle2(self.values, module)

    def __add__(self, other: "CohomologyClass") -> "CohomologyClass":
        self._compat(other)
        return CohomologyClass(
            self.degree, self.module, (self.values + other.values) % self.module.p,
            check=False,
        )

    def __sub__(self, other: "CohomologyClass") -> "CohomologyClass":
        self._compat(other)
        return CohomologyClass(
            self.degree, self.module, (self.values - other.values) % self.module.p,
            check=False,
        )

    def __rmul__(self, c: int) -> "CohomologyClass":
        return CohomologyClass(
            self.degree, self.module, self.values * (c % self.module.p) % self.module.p,
            check=False,
        )

    def _compat(self, other: "CohomologyClass") -> None:
        if self.degree != other.degree or self.module.group != other.module.group \
                or self.module.dim != other.module.dim:
            raise ValueError("classes live in different cohomology groups")

    def coboundary_witness(self) -> Optional[np.ndarray]:
        if self.degree == 1:
            return _coboundary1_witness(self.values, self.module)
        return _coboundary2_witness(self.values, self.module)

    def is_zero(self) -> bool:
        return self.coboundary_witness() is not None

    def __eq__(self, other) -> bool:
        if not isinstance(other, CohomologyClass):
            return NotImplemented
        return (self - other).is_zero()

    def restrict(self, h: MatGroup) -> "CohomologyClass":
        sub = self.module.restrict(h)
        idx = self.module.group.subgroup_indices(h)
        if self.degree == 1:
            vals = self.values[idx]
        else:
            vals = self.values[np.ix_(idx, idx)]
        return CohomologyClass(self.degree, sub, vals, check=False)

    def __repr__(self) -> str:
        return f"CohomologyClass(deg={self.degree}, {self.module!r})"


def _coboundary1_witness(values: np.ndarray, m: GModule) -> Optional[np.ndarray]:
    """v with f(g) = (g - 1)v for all g, or None.  Solving on the generators
    suffices for cocycle input; the result is verified on the full table."""
    p = m.p
    gens = m.group.generator_indices()
    if not gens:
        return np.zeros(m.dim, dtype=np.int64)
    eye = np.eye(m.dim, dtype=np.int64)
    d = np.vstack([(m.act[s] - eye) % p for s in gens])
    v = linalg.solve(d, values[gens].reshape(-1), p)
    if v is None:
        return None
    full = (np.einsum("gij,j->gi", m.act, v) - v) % p
    if not np.array_equal(full, values):
        return None
    return v


def _coboundary2_witness(values: np.ndarray, m: GModule) -> Optional[np.ndarray]:
    """Normalized 1-cochain c with (dc)(g,h) = g.c(h) - c(gh) + c(g) matching
    values, or None.  Requires cocycle input (so generator rows suffice)."""
    p = m.p
    g = m.group
    n, dim = g.order, m.dim
    e = g.identity_index()
    mul = g.mul_table()
    gens = g.generator_indices()
    if not gens:
        return np.zeros((n, dim), dtype=np.int64)

    pos = np.full(n, -1, dtype=np.int64)
    others = [i for i in range(n) if i != e]
    for j, i in enumerate(others):
        pos[i] = j
    nu = (n - 1) * dim

    rows = []
    rhs = []
    for s in gens:
        for h in others:
            row = np.zeros((dim, nu), dtype=np.int64)
            row[:, pos[h] * dim:(pos[h] + 1) * dim] += m.act[s]
            sh = int(mul[s, h])
            if sh != e:
                row[:, pos[sh] * dim:(pos[sh] + 1) * dim] -= np.eye(dim, dtype=np.int64)
            row[:, pos[s] * dim:(pos[s] + 1) * dim] += np.eye(dim, dtype=np.int64)
            rows.append(row % p)
            rhs.append(values[s, h])
    sol = linalg.solve(np.vstack(rows), np.concatenate(rhs), p)
    if sol is None:
        return None
    c = np.zeros((n, dim), dtype=np.int64)
    for i in others:
        c[i] = sol[pos[i] * dim:(pos[i] + 1) * dim]
    full = (np.einsum("gij,hj->ghi", m.act, c) - c[mul] + c[:, None, :]) % p
    if not np.array_equal(full, values):
        return None
    return c


# ---------------------------------------------------------------------------
# public cohomology operations

def h0(m: GModule) -> np.ndarray:
    """Basis (rows) of the invariants M^G."""
    gens = m.group.generator_indices()
    if not gens:
        return np.eye(m.dim, dtype=np.int64)
    eye = np.eye(m.dim, dtype=np.int64)
    stacked = np.vstack([(m.act[s] - eye) % m.p for s in gens])
    return linalg.kernel_basis(stacked, m.p)


def h1(m: GModule) -> tuple[int, list[CohomologyClass]]:
    """dim H^1(G, M) and representative cocycles (full functions on G)."""
    space = _H1Space(m)
    return space.dimension, space.representatives()


def h1_dimension(m: GModule) -> int:
    return _H1Space(m).dimension


def _cyclic_generator_index(c: MatGroup) -> int:
    n = c.order
    for i in range(n):
        if c.element_order(i) == n:
            return i
    raise HypothesisNotMet("group is not cyclic")


def cyclic_h1(c: MatGroup, m: GModule) -> int:
    """dim ker(N)/im(sigma - 1) by the norm formula; independent oracle."""
    if m.group != c:
        m = m.restrict(c)
    p = m.p
    a = m.act[_cyclic_generator_index(c)]
    dim = m.dim
    norm = np.zeros((dim, dim), dtype=np.int64)
    power = np.eye(dim, dtype=np.int64)
    for _ in range(c.order):
        norm = (norm + power) % p
        power = power @ a % p
    sigma1 = (a - np.eye(dim, dtype=np.int64)) % p
    return int(linalg.kernel_basis(norm, p).shape[0] - linalg.rank(sigma1, p))


def cyclic_h2(c: MatGroup, m: GModule) -> int:
    """dim M^C / N.M by the norm formula; independent oracle."""
    if m.group != c:
        m = m.restrict(c)
    p = m.p
    a = m.act[_cyclic_generator_index(c)]
    dim = m.dim
    norm = np.zeros((dim, dim), dtype=np.int64)
    power = np.eye(dim, dtype=np.int64)
    for _ in range(c.order):
        norm = (norm + power) % p
        power = power @ a % p
    sigma1 = (a - np.eye(dim, dtype=np.int64)) % p
    return int(linalg.kernel_basis(sigma1, p).shape[0] - linalg.rank(norm, p))


def restriction(cls: CohomologyClass, h: MatGroup) -> CohomologyClass:
    return cls.restrict(h)


# ---------------------------------------------------------------------------
# quotients and inflation

@dataclass
class QuotientData:
    """A surjection G -> G/N together with the N-invariants of a module."""

    group: MatGroup
    normal: MatGroup
    module: GModule
    coset_group: CosetGroup = field(repr=False)
    coset_of: np.ndarray = field(repr=False)
    fixed_basis: np.ndarray = field(repr=False)  # rows span M^N
    bar_module: GModule = field(repr=False)

    def h1(self) -> tuple[int, list[CohomologyClass]]:
        return h1(self.bar_module)

    def inflate(self, cls: CohomologyClass) -> CohomologyClass:
        if cls.module is not self.bar_module or cls.degree != 1:
            raise ValueError("can only inflate degree-1 classes over this quotient")
        lift = cls.values @ self.fixed_basis % self.module.p
        return CohomologyClass(1, self.module, lift[self.coset_of])


def quotient_by(g: MatGroup, n_sub: MatGroup, m: GModule) -> QuotientData:
    """Build G/N acting on M^N; raises if N is not normal in G."""
    p = g.p
    if not g.contains(n_sub):
        raise ValueError("N is not a subgroup of G")
    mul = g.mul_table()
    inv = g.inverse_table()
    members = g.subgroup_indices(n_sub)
    member_set = set(int(i) for i in members)
    for s in range(g.order):
        for t in members:
            if int(mul[mul[s, t], inv[s]]) not in member_set:
                raise HypothesisNotMet("subgroup is not normal")

    coset_of = np.full(g.order, -1, dtype=np.int64)
    reps = []
    for i in range(g.order):
        if coset_of[i] < 0:
            cid = len(reps)
            reps.append(i)
            coset_of[mul[i, members]] = cid
    q = len(reps)
    rep_arr = np.array(reps, dtype=np.int64)
    qmul = np.empty((q, q), dtype=np.int64)
    for a in range(q):
        qmul[a] = coset_of[mul[reps[a], rep_arr]]
    identity = int(coset_of[g.identity_index()])
    qgens = []
    for s in g.generator_indices():
        c = int(coset_of[s])
        if c != identity and c not in qgens:
            qgens.append(c)
    coset_group = CosetGroup(p, qmul, qgens, identity)

    fixed = h0(m.restrict(n_sub))  # rows span M^N
    d0 = fixed.shape[0]
    bar_act = np.zeros((q, d0, d0), dtype=np.int64)
    basis_cols = fixed.T % p  # dim x d0
    for a in range(q):
        image = m.act[reps[a]] @ basis_cols % p
        sol = np.zeros((d0, d0), dtype=np.int64)
        for j in range(d0):
            x = linalg.solve(basis_cols, image[:, j], p)
            assert x is not None  # G preserves M^N
            sol[:, j] = x
        bar_act[a] = sol
    bar = GModule(coset_group, bar_act, name=f"{m.name}^N")
    return QuotientData(g, n_sub, m, coset_group, coset_of, fixed, bar)


def inflation(qd: QuotientData, cls: CohomologyClass) -> CohomologyClass:
    return qd.inflate(cls)


# ---------------------------------------------------------------------------
# the local-global kernel

def _restriction_constraints(space: _H1Space, sub_gens_idx: Sequence[int],
                             sub_act: np.ndarray) -> np.ndarray:
    """Rows vanishing exactly on classes whose restriction to the subgroup
    generated by sub_gens_idx is a coboundary."""
    m = space.module
    p = m.p
    dim = m.dim
    h = space.rep_u.shape[0]
    if h == 0:
        return np.zeros((0, 0), dtype=np.int64)
    eye = np.eye(dim, dtype=np.int64)
    d_sub = np.vstack([(sub_act[j] - eye) % p for j in range(len(sub_gens_idx))])
    ann = linalg.annihilator(d_sub, p)
    if ann.shape[0] == 0:
        return np.zeros((0, h), dtype=np.int64)
    reps_vals = np.stack([space.values_from_u(u) for u in space.rep_u])  # (h, n, dim)
    umat = reps_vals[:, sub_gens_idx, :].reshape(h, -1).T  # (|S|dim, h)
    return ann @ umat % p


def sha1(g: MatGroup, m: GModule) -> tuple[int, list[CohomologyClass]]:
    """Kernel of H^1(G, M) -> prod_C H^1(C, M) over all cyclic subgroups C.

    A class dies in H^1(C) for C = <sigma> iff its value at sigma lies in
    the image of (sigma - 1), so one annihilator block per cyclic subgroup
    decides the whole kernel.
    """
    space = _H1Space(m)
    hdim = space.dimension
    if hdim == 0:
        return 0, []
    p = m.p
    reps_vals = np.stack([space.values_from_u(u) for u in space.rep_u])
    blocks = []
    eye = np.eye(m.dim, dtype=np.int64)
    for c in enumerate_cyclic_subgroups(g):
        sigma_elt = c.generators[0]
        si = g.index[sigma_elt]
        ann = linalg.annihilator((m.act[si] - eye) % p, p)
        if ann.shape[0] == 0:
            continue
        fmat = reps_vals[:, si, :].T  # (dim, hdim)
        blocks.append(ann @ fmat % p)
    cons = np.vstack(blocks) if blocks else np.zeros((0, hdim), dtype=np.int64)
    coeffs = linalg.kernel_basis(cons, p)
    classes = []
    for c in coeffs:
        u = c @ space.rep_u % p
        classes.append(CohomologyClass(1, m, space.values_from_u(u)))
    return coeffs.shape[0], classes


# ---------------------------------------------------------------------------
# H^2 on small groups and cup products

class _H2Space:
    """Z^2/B^2 on normalized cochains, parameterized by values f(s, h) for
    generator s; the identity for generator first-arguments propagates by
    the simplicial relation (delta of any 2-cochain's coboundary defect)."""

    def __init__(self, m: GModule):
        g = m.group
        if g.order > H2_CAP:
            raise GroupTooLarge(f"dense H^2 is capped at |G| <= {H2_CAP}")
        p = m.p
        n = g.order
        dim = m.dim
        act = m.act
        mul = g.mul_table()
        e = g.identity_index()
        gens = g.generator_indices()
        ng = len(gens)
        others = [i for i in range(n) if i != e]
        pos = np.full(n, -1, dtype=np.int64)
        for j, i in enumerate(others):
            pos[i] = j
        k2 = ng * (n - 1) * dim

        lam = np.zeros((n, n, dim, k2), dtype=np.int64)
        eye = np.eye(dim, dtype=np.int64)
        for i, s in enumerate(gens):
            for hpos, hidx in enumerate(others):
                base = (i * (n - 1) + hpos) * dim
                lam[s, hidx, :, base:base + dim] = eye
        seen = np.zeros(n, dtype=bool)
        seen[e] = True
        for s in gens:
            seen[s] = True
        frontier = [e] + gens
        while frontier:
            nxt = []
            for x in frontier:
                for s in gens:
                    t = int(mul[s, x])
                    if not seen[t]:
                        # f(sx, h) = s.f(x, h) + f(s, xh) - f(s, x)
                        arr = np.einsum("ij,hjk->hik", act[s], lam[x]) % p
                        arr = (arr + lam[s][mul[x]] - lam[s, x][None, :, :]) % p
                        arr[e] = 0  # normalization f(., e) = 0
                        lam[t] = arr
                        seen[t] = True
                        nxt.append(t)
            frontier = nxt
        assert seen.all()

        rows = []
        for s in gens:
            for x in others:
                # T(s, x, h) for all h != e
                t = np.einsum("ij,hjk->hik", act[s], lam[x]) % p
                t = (t + lam[s][mul[x]] - lam[s, x][None, :, :] - lam[mul[s, x]]) % p
                rows.append(t[others].reshape((n - 1) * dim, k2))
        cons = np.vstack(rows) if rows else np.zeros((0, k2), dtype=np.int64)

        # coboundary map into the (s, h) coordinates
        nu = (n - 1) * dim
        d2 = np.zeros((k2, nu), dtype=np.int64)
        for i, s in enumerate(gens):
            for hpos, hidx in enumerate(others):
                r = (i * (n - 1) + hpos) * dim
                d2[r:r + dim, pos[hidx] * dim:(pos[hidx] + 1) * dim] += act[s]
                sh = int(mul[s, hidx])
                if sh != e:
                    d2[r:r + dim, pos[sh] * dim:(pos[sh] + 1) * dim] -= eye
                d2[r:r + dim, pos[s] * dim:(pos[s] + 1) * dim] += eye
        d2 %= p

        self.module = m
        self.lam = lam
        self.z_basis = linalg.kernel_basis(cons, p)
        b_rank = linalg.rank(d2, p)
        reps = []
        acc = [d2.T % p]
        cur = b_rank
        for z in self.z_basis:
            r = linalg.rank(np.vstack(acc + [z[None, :]]), p)
            if r > cur:
                reps.append(z)
                acc.append(z[None, :])
                cur = r
        self.rep_u = np.array(reps, dtype=np.int64).reshape(len(reps), k2)
        self.dimension = self.z_basis.shape[0] - b_rank
        assert self.dimension == len(reps)

    def values_from_u(self, u: np.ndarray) -> np.ndarray:
        return np.einsum("ghdk,k->ghd", self.lam, u) % self.module.p

    def representatives(self) -> list[CohomologyClass]:
        return [
            CohomologyClass(2, self.module, self.values_from_u(u))
            for u in self.rep_u
        ]


def h2_small(m: GModule) -> tuple[int, list[CohomologyClass]]:
    """H^2 by dense linear algebra on normalized cochains; |G| <= 24."""
    space = _H2Space(m)
    return space.dimension, space.representatives()


def cup(a: CohomologyClass, b: CohomologyClass) -> CohomologyClass:
    """Cup product of degree-1 classes: (g, h) -> a(g) (x) g.b(h)."""
    if a.degree != 1 or b.degree != 1:
        raise ValueError("cup is implemented for degree-1 inputs")
    ma, mb = a.module, b.module
    if ma.group != mb.group:
        raise ValueError("cup factors live over different groups")
    p = ma.p
    n = ma.group.order
    target = tensor(ma, mb)
    gb = np.einsum("gij,hj->ghi", mb.act, b.values) % p
    vals = np.einsum("gi,ghj->ghij", a.values, gb).reshape(n, n, ma.dim * mb.dim) % p
    return CohomologyClass(2, target, vals)


def tensor_swap(cls: CohomologyClass, d_first: int, d_second: int) -> CohomologyClass:
    """Reindex a class over A (x) B as a class over B (x) A."""
    m = cls.module
    ashape = cls.values.shape[:-1]
    vals = cls.values.reshape(*ashape, d_first, d_second)
    vals = np.swapaxes(vals, -2, -1).reshape(*ashape, d_first * d_second)
    # the swapped module: kron factors exchanged
    n = m.group.order
    act = m.act.reshape(n, d_first, d_second, d_first, d_second)
    act = np.transpose(act, (0, 2, 1, 4, 3)).reshape(n, m.dim, m.dim)
    swapped = GModule(m.group, act, name=f"swap({m.name})", check=False)
    return CohomologyClass(cls.degree, swapped, vals, check=False)


# ---------------------------------------------------------------------------
# report-level checks

@dataclass(frozen=True)
class SerreRow:
    p: int
    module: str
    dim_h1_sl2: int
    dim_h1_borel: int
    injective: bool


def restriction_kernel_dimension(g: MatGroup, h_sub: MatGroup, m: GModule) -> int:
    """dim ker(H^1(G, M) -> H^1(H, M)), decided by coboundary solves."""
    space = _H1Space(m)
    if space.dimension == 0:
        return 0
    idx = g.subgroup_indices(h_sub)
    sub_gens_local = [i for i in h_sub.generator_indices()]
    sub_gens_parent = [int(idx[i]) for i in sub_gens_local]
    sub_act = m.act[sub_gens_parent]
    cons = _restriction_constraints(space, sub_gens_parent, sub_act)
    if cons.shape[0] == 0:
        return space.dimension
    return int(linalg.kernel_basis(cons, m.p).shape[0])


def serre_restriction_check(p: int, module_names: Sequence[str] = STANDARD_MODULE_NAMES,
                            ) -> list[SerreRow]:
    """Injectivity of H^1(SL2(F_p), M) -> H^1(B cap SL2, M) per module."""
    if p not in (3, 5):
        raise UnsupportedParameter("serre check supports p in {3, 5}")
    g = sl2(p)
    b = borel_sl2(p)
    rows = []
    for name in module_names:
        m = standard_module_by_name(g, name)
        dim_g = h1_dimension(m)
        dim_b = h1_dimension(m.restrict(b))
        ker = restriction_kernel_dimension(g, b, m)
        rows.append(SerreRow(p, name, dim_g, dim_b, ker == 0))
    return rows


@dataclass(frozen=True)
class ExactnessReport:
    dim_h1_quotient: int
    dim_h1_group: int
    dim_h1_normal: int
    inflation_injective: bool
    image_equals_kernel: bool

    @property
    def exact(self) -> bool:
        return self.inflation_injective and self.image_equals_kernel


def inf_res_exactness_check(g: MatGroup, n_sub: MatGroup, m: GModule) -> ExactnessReport:
    """Exactness of 0 -> H^1(G/N, M^N) -> H^1(G, M) -> H^1(N, M) at the
    first two slots, by explicit class coordinates."""
    p = m.p
    qd = quotient_by(g, n_sub, m)
    dim_q, q_reps = qd.h1()
    space = _H1Space(m)
    dim_g = space.dimension
    dim_n = h1_dimension(m.restrict(n_sub))

    coords = np.zeros((dim_q, dim_g), dtype=np.int64)
    for i, cls in enumerate(q_reps):
        coords[i] = space.class_coords(qd.inflate(cls).values)
    inf_injective = linalg.rank(coords, p) == dim_q if dim_q else True

    idx = g.subgroup_indices(n_sub)
    sub_gens_parent = [int(idx[i]) for i in n_sub.generator_indices()]
    cons = _restriction_constraints(space, sub_gens_parent, m.act[sub_gens_parent])
    if dim_g == 0:
        kernel = np.zeros((0, 0), dtype=np.int64)
    elif cons.shape[0] == 0:
        kernel = np.eye(dim_g, dtype=np.int64)
    else:
        kernel = linalg.kernel_basis(cons, p)

    r_img = linalg.rank(coords, p) if dim_q else 0
    r_ker = kernel.shape[0]
    joint = linalg.rank(np.vstack([coords, kernel]), p) if dim_g else 0
    image_equals_kernel = (r_img == r_ker == joint)
    return ExactnessReport(dim_q, dim_g, dim_n, inf_injective, image_equals_kernel)
