"""Filtered multiplicative basis candidates: verification and construction.

A candidate is a labeled list of |G| group-algebra elements.  ``verify``
checks, in order: (a) size and linear independence, (b) multiplicative
closure (every ordered pairwise product is 0 or again a member, compared
structurally -- exact arithmetic admits no tolerance), and (c) that the
members lying in I^n form a basis of I^n for every level n of the radical
filtration.  Two further scans are informational: a pairwise congruence
audit (no two distinct members outside I^k may agree mod I^k) and the
count of generators outside I^2.  (a)-(c) decide the verdict; the audit
and generator count are consequences recorded for diagnostics.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import linalg
from .algebra import AlgebraElement, Filtration, GroupAlgebra, compute_filtration
from .fields import Field, parse_field_literal
from .groups import (Abelian, Dihedral, DirectProduct, Example16, Quaternion8,
                     build_group, parse_group_spec, spec_literal)

SCHEMA_VERSION = 1


@dataclass
class BasisCandidate:
    """A proposed filtered multiplicative basis with word labels."""

    algebra: GroupAlgebra
    elements: list
    labels: list
    params: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        if len(self.labels) != len(self.elements):
            raise ValueError("labels and elements must have equal length")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("labels must be unique")
        for e in self.elements:
            if e.algebra != self.algebra:
                raise ValueError("candidate elements belong to mixed algebras")

    def matrix(self) -> np.ndarray:
        return np.vstack([e.coeffs for e in self.elements])

    def key_set(self) -> dict:
        return {e.key(): i for i, e in enumerate(self.elements)}

    def to_json(self) -> dict:
        f = self.algebra.field
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": "basis_candidate",
            "group": spec_literal(self.algebra.group.spec),
            "field": f.to_literal(),
            "params": {k: f.coeffs(v) for k, v in self.params.items()},
            "members": [{"label": lab, "coeffs": [f.coeffs(int(c)) for c in e.coeffs]}
                        for lab, e in zip(self.labels, self.elements)],
        }

    @classmethod
    def from_json(cls, data, algebra: GroupAlgebra | None = None) -> "BasisCandidate":
        if algebra is None:
            group = build_group(parse_group_spec(data["group"]))
            fld = parse_field_literal(data["field"])
            algebra = GroupAlgebra(group, fld)
        f = algebra.field
        elements, labels = [], []
        for member in data["members"]:
            labels.append(member["label"])
            codes = [f.element(c) for c in member["coeffs"]]
            elements.append(algebra.element(codes))
        params = {k: f.element(v) for k, v in data.get("params", {}).items()}
        return cls(algebra, elements, labels, params)


@dataclass
class VerificationReport:
    verdict: bool
    checks: list
    witness: dict | None = None

    def to_json(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": "verification_report",
            "verdict": "pass" if self.verdict else "fail",
            "checks": self.checks,
            "witness": self.witness,
        }


def _left_multiplication_grid(candidate: BasisCandidate) -> list:
    """products[i] is the matrix whose row j is elements[i] * elements[j]."""
    algebra = candidate.algebra
    f = algebra.field
    group = algebra.group
    M = candidate.matrix()
    grids = []
    for e in candidate.elements:
        acc = np.zeros_like(M)
        for h in np.flatnonzero(e.coeffs):
            perm = group.table[group.inverse[h]]
            acc = f.add_arrays(acc, f.scale_array(int(e.coeffs[h]), M[:, perm]))
        grids.append(acc)
    return grids


def verify(candidate: BasisCandidate, *, filtration: Filtration | None = None) -> VerificationReport:
    """Run the full filtered-multiplicative-basis check suite."""
    algebra = candidate.algebra
    if not candidate.elements:
        raise ValueError("empty candidate")
    if filtration is None:
        filtration = compute_filtration(algebra)
    else:
        if filtration.algebra != algebra:
            raise ValueError("supplied filtration is for a different algebra")
        dims = filtration.dims
        n = algebra.group.order
        if dims[0] != n or dims[-1] != 0 or any(b >= a for a, b in zip(dims, dims[1:]) if a):
            raise ValueError("supplied filtration fails the dims cross-check")

    field = algebra.field
    n = algebra.group.order
    checks = []
    witness = None

    # (a) size and linear independence
    M = candidate.matrix()
    R, pivots = linalg.rref(field, M)
    rank = len(pivots)
    size_ok = len(candidate.elements) == n
    indep_ok = rank == len(candidate.elements)
    if not indep_ok and witness is None:
        partial_R = np.zeros((0, n), dtype=np.uint8)
        partial_p = ()
        bad = None
        for i, row in enumerate(M):
            if linalg.in_rowspace(field, partial_R, partial_p, row):
                bad = i
                break
            partial_R, partial_p = linalg.rref(field, np.vstack([partial_R, row[None, :]]))
        witness = {"kind": "dependence", "element": candidate.labels[bad]}
    if not size_ok and witness is None:
        witness = {"kind": "size", "size": len(candidate.elements), "expected": n}
    checks.append({"name": "size_and_independence", "passed": bool(size_ok and indep_ok),
                   "size": len(candidate.elements), "rank": rank, "expected": n})

    # (b) multiplicative closure, both orders (the grid covers all ordered pairs)
    keys = candidate.key_set()
    closure_ok = True
    closure_witness = None
    zero_key = algebra.zero().key()
    grids = _left_multiplication_grid(candidate)
    for i, grid in enumerate(grids):
        for j in range(len(candidate.elements)):
            k = grid[j].tobytes()
            if k != zero_key and k not in keys:
                closure_ok = False
                closure_witness = {
                    "kind": "closure",
                    "left": candidate.labels[i],
                    "right": candidate.labels[j],
                    "product_coeffs": [field.coeffs(int(c)) for c in grid[j]],
                }
                break
        if not closure_ok:
            break
    if not closure_ok and witness is None:
        witness = closure_witness
    checks.append({"name": "closure", "passed": closure_ok,
                   "products_checked": len(candidate.elements) ** 2})

    # (c) members inside I^n form a basis of I^n at every level
    levels = filtration.levels_of(M)
    level_ok = True
    level_witness = None
    per_level = []
    for k in range(1, filtration.depth + 1):
        count = sum(1 for lv in levels if lv is not None and lv >= k)
        expected = filtration.dims[k] if k < len(filtration.dims) else 0
        per_level.append({"level": k, "members": count, "dim": expected})
        if count != expected and level_ok:
            level_ok = False
            level_witness = {"kind": "level_count", "level": k,
                             "members": count, "dim": expected}
    # with (a) holding, the members inside I^k are independent, so matching
    # counts make them bases of I^k
    if not level_ok and witness is None:
        witness = level_witness
    checks.append({"name": "radical_levels", "passed": level_ok, "per_level": per_level})

    # (d) informational: pairwise congruence audit (property (II) consequence)
    violations = []
    for i in range(len(candidate.elements)):
        for j in range(i + 1, len(candidate.elements)):
            li, lj = levels[i], levels[j]
            if li is None or lj is None or li != lj:
                continue
            diff = field.sub_arrays(M[i], M[j])
            if not diff.any():
                continue
            dl = filtration.level(diff)
            if dl is not None and dl > li:
                violations.append({"left": candidate.labels[i],
                                   "right": candidate.labels[j],
                                   "congruent_mod": dl})
    checks.append({"name": "congruence_audit", "passed": not violations,
                   "informational": True, "violations": violations})

    # (e) informational: generator count outside I^2
    gen_count = sum(1 for lv in levels if lv == 1)
    expected_gens = filtration.dims[1] - (filtration.dims[2] if filtration.depth >= 2 else 0)
    checks.append({"name": "generator_count", "passed": True, "informational": True,
                   "generators_outside_radical_square": gen_count,
                   "dim_rad_mod_rad2": expected_gens})

    verdict = bool(size_ok and indep_ok and closure_ok and level_ok)
    return VerificationReport(verdict, checks, None if verdict else witness)


# ---------------------------------------------------------------------------
# Word closure of a generator tuple
# ---------------------------------------------------------------------------

def closure_candidate(algebra: GroupAlgebra, filtration: Filtration,
                      generators: list, labels: list | None = None):
    """Close a generator tuple under multiplication into a basis candidate.

    Any filtered multiplicative basis consists of 1 together with the
    multiplicative closure of its generators, so the closure either
    produces the unique candidate for this tuple or a reproducible witness
    of failure.  Returns ``(candidate_or_None, witness_or_None)``.

    Failure witnesses:
      * ``congruent_words`` -- two distinct collected words at the same
        exact radical level agree modulo a deeper power (no basis can
        contain both);
      * ``dependent_word`` -- a product is a linear combination of other
        collected words without equaling any of them;
      * ``too_many_words`` -- more than |G| - 1 independent words;
      * ``stabilized_short`` -- closure completed with fewer than |G| - 1
        words, so the span cannot be all of the augmentation ideal.
    """
    field = algebra.field
    n = algebra.group.order
    if labels is None:
        labels = [f"g{i}" for i in range(len(generators))]
    words: list[AlgebraElement] = []
    word_labels: list[str] = []
    keys: dict[bytes, int] = {}
    R = np.zeros((0, n), dtype=np.uint8)
    piv: tuple = ()
    queue: list[tuple[int, int]] = []

    def add_word(vec: AlgebraElement, label: str):
        nonlocal R, piv
        key = vec.key()
        if key in keys:
            return None
        lv = filtration.level(vec)
        for idx, w in enumerate(words):
            wl = filtration.level(w)
            if wl is None or wl != lv:
                continue
            dl = filtration.level(vec - w)
            if dl is not None and dl > lv:
                return {"kind": "congruent_words", "left": word_labels[idx],
                        "right": label, "level": lv, "congruent_mod": dl}
        if linalg.in_rowspace(field, R, piv, vec.coeffs):
            coords = linalg.solve_linear(field, np.vstack([w.coeffs for w in words]),
                                         vec.coeffs)
            combo = [{"label": word_labels[i], "coeff": field.coeffs(int(c))}
                     for i, c in enumerate(coords) if c]
            return {"kind": "dependent_word", "word": label, "combination": combo}
        if len(words) + 1 > n - 1:
            return {"kind": "too_many_words", "count": len(words) + 1}
        k = len(words)
        words.append(vec)
        word_labels.append(label)
        keys[key] = k
        R, piv = linalg.rref(field, np.vstack([R, vec.coeffs[None, :]]))
        for j in range(k):
            queue.append((k, j))
            queue.append((j, k))
        queue.append((k, k))
        return None

    for g, lab in zip(generators, labels):
        if g.is_zero():
            return None, {"kind": "zero_generator", "label": lab}
        w = add_word(g, lab)
        if w is not None:
            return None, w

    qi = 0
    while qi < len(queue):
        i, j = queue[qi]
        qi += 1
        prod = words[i] * words[j]
        if prod.is_zero():
            continue
        w = add_word(prod, f"{word_labels[i]}*{word_labels[j]}")
        if w is not None:
            return None, w

    if len(words) != n - 1:
        return None, {"kind": "stabilized_short", "count": len(words),
                      "expected": n - 1}
    candidate = BasisCandidate(algebra, [algebra.one()] + words,
                               ["1"] + word_labels)
    return candidate, None


# ---------------------------------------------------------------------------
# Constructors for the catalog bases
# ---------------------------------------------------------------------------

def _require_char(field: Field, p: int):
    if field.p != p:
        raise ValueError(f"construction requires characteristic {p}, "
                         f"got {field.p}")


def construct_abelian(spec: Abelian, field: Field) -> BasisCandidate:
    """The product-of-powers basis (a-1)^n1 (b-1)^n2 ... of an abelian
    p-group algebra, 0 <= n_i < q_i."""
    if not isinstance(spec, Abelian):
        raise ValueError(f"not an abelian spec: {spec!r}")
    group = build_group(spec)
    if group.prime is not None:
        _require_char(field, group.prime)
    algebra = GroupAlgebra(group, field)
    gens = [algebra.embed_aug(g) for g in group.generators]
    syms = [chr(ord("a") + i) for i in range(len(gens))]
    live_orders = [q for q in (spec.orders or ()) if q > 1]

    # powers of each (g-1), precomputed once
    powers = []
    for g, q in zip(gens, live_orders):
        row = [algebra.one()]
        for _ in range(1, q):
            row.append(row[-1] * g)
        powers.append(row)

    elements, labels = [], []
    for exps in itertools.product(*[range(q) for q in live_orders]):
        e = algebra.one()
        parts = []
        for i, x in enumerate(exps):
            if x:
                e = e * powers[i][x]
                parts.append(f"({syms[i]}-1)" if x == 1 else f"({syms[i]}-1)^{x}")
        elements.append(e)
        labels.append("*".join(parts) if parts else "1")
    return BasisCandidate(algebra, elements, labels)


def construct_dihedral(n: int, field: Field) -> BasisCandidate:
    """The dihedral-group basis {1, v, u^i, v u^i, u^j v, v u^j v} with
    u = a + b and v = 1 + b, for the group of order 2^(n+1)."""
    if n < 2:
        raise ValueError("dihedral construction needs n >= 2")
    _require_char(field, 2)
    group = build_group(Dihedral(n))
    algebra = GroupAlgebra(group, field)
    a = algebra.basis_element(group.gen_a)
    b = algebra.basis_element(group.gen_b)
    u = a + b
    v = algebra.one() + b
    half = 2 ** (n - 1)
    elements = [algebra.one(), v]
    labels = ["1", "v"]
    upow = {1: u}
    for i in range(2, half + 1):
        upow[i] = upow[i - 1] * u
    for i in range(1, half + 1):
        elements.append(upow[i])
        labels.append(f"u^{i}" if i > 1 else "u")
    for i in range(1, half + 1):
        elements.append(v * upow[i])
        labels.append(f"v*u^{i}" if i > 1 else "v*u")
    for j in range(1, half):
        elements.append(upow[j] * v)
        labels.append(f"u^{j}*v" if j > 1 else "u*v")
    for j in range(1, half):
        elements.append(v * upow[j] * v)
        labels.append(f"v*u^{j}*v" if j > 1 else "v*u*v")
    return BasisCandidate(algebra, elements, labels, {"alpha": 1, "beta": 1})


def construct_quaternion8(field: Field) -> BasisCandidate:
    """The quaternion-8 basis {1, u, v, uv, vu, uvu, vuv, uvuv} over a
    field of characteristic 2 containing a primitive cube root of unity w,
    with

        u = (1+a) + w(1+b) + w^2 (1+a)(1+b),
        v = (1+a) + w^2(1+b) + w (1+a)(1+b).

    The quadratic (1+a)(1+b) corrections are forced: for the leading terms
    alone, u^2, uvu and vuv would be three distinct members at exact
    radical level 3 while dim I^3/I^4 = 2 (exhaustive search confirms no
    correction-free pair closes)."""
    _require_char(field, 2)
    omega = field.primitive_cube_root()
    if omega is None:
        raise ValueError("field has no primitive cube root of unity "
                         "(required for the quaternion-8 basis)")
    group = build_group(Quaternion8())
    algebra = GroupAlgebra(group, field)
    one = algebra.one()
    pa = one + algebra.basis_element(group.gen_a)
    pb = one + algebra.basis_element(group.gen_b)
    omega2 = field.mul(omega, omega)
    pab = pa * pb
    u = pa + pb.scale(omega) + pab.scale(omega2)
    v = pa + pb.scale(omega2) + pab.scale(omega)
    words = [one, u, v, u * v, v * u, u * v * u, v * u * v, u * v * u * v]
    labels = ["1", "u", "v", "u*v", "v*u", "u*v*u", "v*u*v", "u*v*u*v"]
    return BasisCandidate(algebra, words, labels, {"omega": omega})


def construct_example16(field: Field, mu1: int, mu2: int) -> BasisCandidate:
    """The 16-element basis of the order-16 two-generator example, with
    u = a + b and v = mu1*a + mu2*b + (mu1+mu2), mu1 != mu2."""
    _require_char(field, 2)
    field._check(mu1), field._check(mu2)
    if mu1 == mu2:
        raise ValueError("example16 construction requires mu1 != mu2")
    group = build_group(Example16())
    algebra = GroupAlgebra(group, field)
    a = algebra.basis_element(group.gen_a)
    b = algebra.basis_element(group.gen_b)
    u = a + b
    v = a.scale(mu1) + b.scale(mu2) + algebra.scalar(field.add(mu1, mu2))
    word_specs = ["1", "u", "v", "u*v", "v*u", "v^2", "u*v*u", "u*v^2",
                  "v*u*v", "v^3", "u*v*u*v", "u*v^3", "v*u*v^2", "u*v*u*v^2",
                  "v*u*v^3", "u*v*u*v^3"]
    atom = {"u": u, "v": v}
    elements = []
    for spec_word in word_specs:
        if spec_word == "1":
            elements.append(algebra.one())
            continue
        e = algebra.one()
        for part in spec_word.split("*"):
            if "^" in part:
                sym, exp = part.split("^")
                e = e * (atom[sym] ** int(exp))
            else:
                e = e * atom[part]
        elements.append(e)
    return BasisCandidate(algebra, elements, word_specs,
                          {"mu1": mu1, "mu2": mu2})


def product_basis(b1: BasisCandidate, b2: BasisCandidate) -> BasisCandidate:
    """The basis B1 x B2 of K[G1 x G2] formed by all pairwise products."""
    if b1.algebra.field != b2.algebra.field:
        raise ValueError("product basis requires a common field")
    field = b1.algebra.field
    spec = DirectProduct(b1.algebra.group.spec, b2.algebra.group.spec)
    group = build_group(spec)
    algebra = GroupAlgebra(group, field)
    elements, labels = [], []
    for e1, l1 in zip(b1.elements, b1.labels):
        for e2, l2 in zip(b2.elements, b2.labels):
            coeffs = field.mul_arrays(e1.coeffs[:, None], e2.coeffs[None, :]).reshape(-1)
            elements.append(algebra.element(coeffs))
            labels.append(f"({l1})*({l2})")
    params = {f"left.{k}": v for k, v in b1.params.items()}
    params.update({f"right.{k}": v for k, v in b2.params.items()})
    return BasisCandidate(algebra, elements, labels, params)


def construct_for_spec(spec, field: Field, params: dict | None = None) -> BasisCandidate:
    """Dispatch to the constructor matching a group spec."""
    params = params or {}
    if isinstance(spec, Abelian):
        return construct_abelian(spec, field)
    if isinstance(spec, Dihedral):
        return construct_dihedral(spec.n, field)
    if isinstance(spec, Quaternion8):
        return construct_quaternion8(field)
    if isinstance(spec, Example16):
        mu1 = params.get("mu1", 0)
        mu2 = params.get("mu2", 1)
        return construct_example16(field, mu1, mu2)
    if isinstance(spec, DirectProduct):
        return product_basis(construct_for_spec(spec.left, field, params),
                             construct_for_spec(spec.right, field, params))
    raise ValueError(f"no catalog construction for {spec_literal(spec)}")


def leading_quotient(x: AlgebraElement, filtration: Filtration):
    """Exact level of a nonzero element and the coordinates of its class
    in I^k / I^(k+1) against the canonical quotient basis."""
    if x.is_zero():
        raise ValueError("the zero element has no leading quotient")
    k = filtration.level(x)
    coords = filtration.class_coordinates(x, k)
    return k, coords
