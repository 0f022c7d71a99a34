"""Group-algebra arithmetic over GF(p^k) and the radical power filtration.

An element of KG is a dense length-|G| coefficient vector of field codes.
For a p-group G over a field of the same characteristic the augmentation
ideal is the Jacobson radical and is nilpotent, so the chain of ideal
powers reaches zero; ``compute_filtration`` materializes one canonical
(reduced row-echelon) basis per power, which backs every membership,
level, congruence and dimension-subgroup query.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .fields import Field
from .groups import Group


class GroupAlgebra:
    """The group algebra KG for a built group G and field K."""

    def __init__(self, group: Group, field: Field):
        field._need_tables()
        self.group = group
        self.field = field

    def element(self, coeffs) -> "AlgebraElement":
        arr = np.asarray(coeffs, dtype=np.uint8)
        if arr.shape != (self.group.order,):
            raise ValueError(f"expected {self.group.order} coefficients")
        if arr.size and int(arr.max()) >= self.field.order:
            raise ValueError("coefficient code outside the field")
        return AlgebraElement(self, arr)

    def zero(self) -> "AlgebraElement":
        return AlgebraElement(self, np.zeros(self.group.order, dtype=np.uint8))

    def one(self) -> "AlgebraElement":
        return self.basis_element(self.group.identity)

    def basis_element(self, g: int) -> "AlgebraElement":
        c = np.zeros(self.group.order, dtype=np.uint8)
        c[g] = 1
        return AlgebraElement(self, c)

    def embed_aug(self, g: int) -> "AlgebraElement":
        """g - 1: the augmentation-zero atom for a group element."""
        c = np.zeros(self.group.order, dtype=np.uint8)
        c[g] = self.field.add(int(c[g]), 1)
        c[self.group.identity] = self.field.sub(int(c[self.group.identity]), 1)
        return AlgebraElement(self, c)

    def scalar(self, c: int) -> "AlgebraElement":
        self.field._check(c)
        out = np.zeros(self.group.order, dtype=np.uint8)
        out[self.group.identity] = c
        return AlgebraElement(self, out)

    def __eq__(self, other):
        return (isinstance(other, GroupAlgebra) and self.group == other.group
                and self.field == other.field)

    def __repr__(self):
        return f"K[{self.group!r}] over {self.field!r}"


class AlgebraElement:
    """Immutable KG element: a dense vector of field codes indexed by
    group-element index."""

    __slots__ = ("algebra", "coeffs")

    def __init__(self, algebra: GroupAlgebra, coeffs: np.ndarray):
        self.algebra = algebra
        coeffs = np.asarray(coeffs, dtype=np.uint8)
        coeffs.flags.writeable = False
        self.coeffs = coeffs

    def _same(self, other):
        if not isinstance(other, AlgebraElement) or self.algebra != other.algebra:
            raise ValueError("operands belong to different group algebras")
        return other

    def __add__(self, other):
        self._same(other)
        f = self.algebra.field
        return AlgebraElement(self.algebra, f.add_arrays(self.coeffs, other.coeffs))

    def __sub__(self, other):
        self._same(other)
        f = self.algebra.field
        return AlgebraElement(self.algebra, f.sub_arrays(self.coeffs, other.coeffs))

    def __neg__(self):
        f = self.algebra.field
        return AlgebraElement(self.algebra, f.neg_table[self.coeffs])

    def scale(self, c: int) -> "AlgebraElement":
        f = self.algebra.field
        f._check(c)
        return AlgebraElement(self.algebra, f.scale_array(c, self.coeffs))

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        self._same(other)
        f = self.algebra.field
        table = self.algebra.group.table
        out = np.zeros(len(self.coeffs), dtype=np.uint8)
        for h in np.flatnonzero(self.coeffs):
            row = table[h]
            out[row] = f.add_arrays(out[row], f.scale_array(int(self.coeffs[h]),
                                                            other.coeffs))
        return AlgebraElement(self.algebra, out)

    def __rmul__(self, c):
        if isinstance(c, int):
            return self.scale(c)
        return NotImplemented

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative powers are not defined in KG")
        out = self.algebra.one()
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def augmentation(self) -> int:
        f = self.algebra.field
        total = 0
        for c in self.coeffs[np.flatnonzero(self.coeffs)]:
            total = f.add(total, int(c))
        return total

    def is_zero(self) -> bool:
        return not self.coeffs.any()

    def support(self) -> list[int]:
        return [int(i) for i in np.flatnonzero(self.coeffs)]

    def key(self) -> bytes:
        return self.coeffs.tobytes()

    def to_json(self) -> dict:
        f = self.algebra.field
        return {
            "group": self.algebra.group.to_json()["spec"],
            "field": f.to_literal(),
            "coeffs": [f.coeffs(int(c)) for c in self.coeffs],
        }

    def __eq__(self, other):
        return (isinstance(other, AlgebraElement)
                and self.algebra == other.algebra
                and (self.coeffs == other.coeffs).all())

    def __hash__(self):
        return hash(self.coeffs.tobytes())

    def __repr__(self):
        f = self.algebra.field
        labels = self.algebra.group.labels
        terms = []
        for i in np.flatnonzero(self.coeffs):
            c = int(self.coeffs[i])
            cs = "" if c == 1 else f"{f.coeffs(c)}*"
            terms.append(f"{cs}{labels[i]}")
        return " + ".join(terms) if terms else "0"


# ---------------------------------------------------------------------------
# Radical power filtration
# ---------------------------------------------------------------------------

@dataclass
class Filtration:
    """Canonical bases of I^0 >= I^1 >= ... >= I^L with I^L = 0.

    ``levels[k]`` is the RREF basis matrix of I^k, ``pivots[k]`` its pivot
    columns, ``dims[k]`` its rank.  The final level is empty.
    """

    algebra: GroupAlgebra
    levels: list
    pivots: list
    dims: list

    @property
    def depth(self) -> int:
        """Smallest L with I^L = 0."""
        return len(self.levels) - 1

    def quotient_dims(self) -> list[int]:
        return [self.dims[k] - self.dims[k + 1] for k in range(self.depth)]

    def _vec(self, x) -> np.ndarray:
        if isinstance(x, AlgebraElement):
            if x.algebra != self.algebra:
                raise ValueError("element belongs to a different algebra")
            return x.coeffs
        return np.asarray(x, dtype=np.uint8)

    def member(self, x, k: int) -> bool:
        """x in I^k."""
        v = self._vec(x)
        if k <= 0:
            return True
        if k >= self.depth:
            return not v.any()
        return bool(linalg.in_rowspace(self.algebra.field, self.levels[k],
                                       self.pivots[k], v))

    def level(self, x) -> int | None:
        """Greatest k with x in I^k; None for x = 0 (which is in every I^k)."""
        v = self._vec(x)
        if not v.any():
            return None
        k = 0
        while k + 1 < self.depth and self.member(v, k + 1):
            k += 1
        return k

    def levels_of(self, vectors) -> list:
        """Batch version of :meth:`level` for the rows of a matrix."""
        vs = np.asarray(vectors, dtype=np.uint8)
        out = [None] * len(vs)
        alive = [i for i in range(len(vs)) if vs[i].any()]
        for i in alive:
            out[i] = 0
        for k in range(1, self.depth):
            if not alive:
                break
            sub = vs[alive]
            inside = linalg.in_rowspace(self.algebra.field, self.levels[k],
                                        self.pivots[k], sub)
            nxt = []
            for idx, ok in zip(alive, inside):
                if ok:
                    out[idx] = k
                    nxt.append(idx)
            alive = nxt
        return out

    def congruent_mod(self, x, y, k: int) -> bool:
        """x == y (mod I^k)."""
        xv, yv = self._vec(x), self._vec(y)
        diff = self.algebra.field.sub_arrays(xv, yv)
        return self.member(diff, k)

    def quotient_pivots(self, k: int) -> tuple:
        """Pivot columns of I^k that are not pivots of I^(k+1); they index
        the canonical basis of I^k / I^(k+1)."""
        if not 0 <= k < self.depth:
            raise ValueError(f"no quotient at level {k}")
        upper = set(self.pivots[k + 1])
        return tuple(p for p in self.pivots[k] if p not in upper)

    def class_coordinates(self, x, k: int) -> np.ndarray:
        """Coordinates of the class of x in I^k / I^(k+1) against the
        canonical quotient basis (echelon completion of level k+1 inside
        level k)."""
        v = self._vec(x)
        if not self.member(v, k):
            raise ValueError(f"element is not in I^{k}")
        field = self.algebra.field
        qp = self.quotient_pivots(k)
        rows_k = self.levels[k]
        reps = [rows_k[list(self.pivots[k]).index(p)] for p in qp]
        stack = (np.vstack([self.levels[k + 1]] + [r[None, :] for r in reps])
                 if len(self.levels[k + 1]) or reps else
                 np.zeros((0, self.algebra.group.order), dtype=np.uint8))
        coords = linalg.solve_linear(field, stack, v)
        if coords is None:
            raise AssertionError("filtration bases are inconsistent")
        return coords[len(self.levels[k + 1]):].copy()

    def to_json(self) -> dict:
        return {
            "dims": list(self.dims),
            "quotient_dims": self.quotient_dims(),
            "levels": [lvl.tolist() for lvl in self.levels],
        }


def compute_filtration(algebra: GroupAlgebra) -> Filtration:
    """Bases of the powers of the augmentation ideal, down to zero.

    Requires char K = p and |G| = p^a (otherwise the augmentation ideal is
    not nilpotent and the chain would never reach zero)."""
    group, field = algebra.group, algebra.field
    gp = group.prime
    if gp is not None and gp != field.p:
        raise ValueError(
            f"unsupported: field characteristic {field.p} does not match the "
            f"group prime {gp}; the augmentation ideal would not be nilpotent")
    if gp is None and group.order != 1:
        raise ValueError("unsupported: group order is not a prime power")
    n = group.order
    ident, _ = linalg.rref(field, np.eye(n, dtype=np.uint8))
    levels = [ident]
    pivots = [tuple(range(n))]
    span1 = np.vstack([algebra.embed_aug(g).coeffs for g in range(n)])
    lvl, piv = linalg.rref(field, span1)
    levels.append(lvl)
    pivots.append(piv)
    inv_perm = np.empty(n, dtype=np.int64)
    while len(levels[-1]):
        prev = levels[-1]
        spans = []
        for g in range(n):
            if g == group.identity:
                continue
            # rows (g-1)*m for every basis row m of the previous level:
            # (g*m)[i] = m[g^-1 * i], i.e. a column permutation, minus m.
            inv_perm[:] = group.table[group.inverse[g]]
            spans.append(field.sub_arrays(prev[:, inv_perm], prev))
        lvl, piv = linalg.rref(field, np.vstack(spans)) if spans else (
            np.zeros((0, n), dtype=np.uint8), ())
        levels.append(lvl)
        pivots.append(piv)
    dims = [len(l) for l in levels]
    filt = Filtration(algebra, levels, pivots, dims)
    _sanity_check(filt)
    return filt


def _sanity_check(filt: Filtration):
    dims = filt.dims
    n = filt.algebra.group.order
    if dims[0] != n or (n > 1 and dims[1] != n - 1) or dims[-1] != 0:
        raise AssertionError(f"filtration dims are inconsistent: {dims}")
    for a, b in zip(dims, dims[1:]):
        if b >= a and a != 0:
            raise AssertionError(f"filtration dims do not strictly decrease: {dims}")


# ---------------------------------------------------------------------------
# Dimension subgroups and the Jennings cross-check
# ---------------------------------------------------------------------------

@dataclass
class DimensionSubgroupReport:
    n: int
    members: list[int]

    def to_json(self) -> dict:
        return {"n": self.n, "members": list(self.members)}


def dimension_subgroup(algebra: GroupAlgebra, filt: Filtration, n: int) -> DimensionSubgroupReport:
    """All g with g - 1 in I^n."""
    if n < 1:
        raise ValueError("dimension subgroups are defined for n >= 1")
    members = [g for g in range(algebra.group.order)
               if filt.member(algebra.embed_aug(g), n)]
    return DimensionSubgroupReport(n, members)


def dimension_subgroup_chain(algebra: GroupAlgebra, filt: Filtration) -> list[DimensionSubgroupReport]:
    """The chain for n = 1 .. first n with trivial subgroup (inclusive)."""
    chain = []
    n = 1
    while True:
        rep = dimension_subgroup(algebra, filt, n)
        chain.append(rep)
        if len(rep.members) == 1:
            break
        n += 1
        if n > filt.depth + 1:
            break
    return chain


def jennings_check(algebra: GroupAlgebra, filt: Filtration):
    """Cross-check the computed quotient dims against the generating
    function prod_i (1 + x^i + ... + x^(i(p-1)))^(d_i), with the ranks d_i
    read off the dimension-subgroup chain.

    Returns (ok, expected_quotient_dims, ranks)."""
    p = algebra.field.p
    chain = dimension_subgroup_chain(algebra, filt)
    orders = [len(rep.members) for rep in chain] + [1]
    ranks = []
    for i in range(len(chain)):
        quot = orders[i] // orders[i + 1]
        d = 0
        while quot > 1:
            if quot % p:
                raise AssertionError("dimension subgroup quotient is not a p-group")
            quot //= p
            d += 1
        ranks.append(d)
    poly = [1]
    for i, d in enumerate(ranks, start=1):
        factor = [0] * (i * (p - 1) + 1)
        for j in range(p):
            factor[i * j] = 1
        for _ in range(d):
            out = [0] * (len(poly) + len(factor) - 1)
            for x, cx in enumerate(poly):
                if cx:
                    for y, cy in enumerate(factor):
                        out[x + y] += cx * cy
            poly = out
    while poly and poly[-1] == 0:
        poly.pop()
    ok = poly == filt.quotient_dims()
    return ok, poly, ranks
