"""Finite p-groups as validated Cayley tables with designated generators.

Groups are built from symbolic presentation parameters.  Metacyclic
variants use the normal-form multiplication law implied by the
presentation; the order-16 two-generator example and any generic
presentation go through deterministic word-closure rewriting instead, so
no table is ever entered by hand.  Every built table is validated: Latin
square, full associativity scan, identity/inverse consistency, and
generator closure.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .fields import is_prime

DEFAULT_GROUP_ORDER_BOUND = 64


# ---------------------------------------------------------------------------
# Group specifications
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Metacyclic:
    """<a, b | a^(p^n) = 1, b^(p^m) = a^(p^t), b a b^-1 = a^r>."""
    p: int
    n: int
    m: int
    t: int
    r: int


@dataclass(frozen=True)
class Dihedral:
    """Order 2^(n+1): a^(2^n) = b^2 = 1, b a b^-1 = a^-1."""
    n: int


@dataclass(frozen=True)
class Semidihedral:
    """Order 2^(n+1), n >= 3: b^2 = 1, b a b^-1 = a^(-1 + 2^(n-1))."""
    n: int


@dataclass(frozen=True)
class GeneralizedQuaternion:
    """Order 2^(n+1): b^2 = a^(2^(n-1)), b a b^-1 = a^-1."""
    n: int


@dataclass(frozen=True)
class Quaternion8:
    pass


@dataclass(frozen=True)
class SemidihedralTwisted:
    """Order 2^(n+1): b^2 = a^(2^(n-1)), b a b^-1 = a^(-1 + 2^(n-1))."""
    n: int


@dataclass(frozen=True)
class Abelian:
    """Direct product of cyclic groups of prime-power orders of one prime."""
    orders: tuple[int, ...]

    def __init__(self, orders):
        object.__setattr__(self, "orders", tuple(int(q) for q in orders))


@dataclass(frozen=True)
class Example16:
    """<a, b | a^4 = b^4 = 1, bab^-1 = b^2 a^3, aba^-1 = a^2 b^3,
    [a^2, b] = [b^2, a] = 1>, order 16."""


@dataclass(frozen=True)
class DirectProduct:
    left: object
    right: object


GroupSpec = (Metacyclic | Dihedral | Semidihedral | GeneralizedQuaternion
             | Quaternion8 | SemidihedralTwisted | Abelian | Example16
             | DirectProduct)


def spec_literal(spec) -> str:
    if isinstance(spec, Metacyclic):
        return f"metacyclic({spec.p},{spec.n},{spec.m},{spec.t},{spec.r})"
    if isinstance(spec, Dihedral):
        return f"dihedral(n={spec.n})"
    if isinstance(spec, Semidihedral):
        return f"semidihedral(n={spec.n})"
    if isinstance(spec, GeneralizedQuaternion):
        return f"genquaternion(n={spec.n})"
    if isinstance(spec, Quaternion8):
        return "quaternion8"
    if isinstance(spec, SemidihedralTwisted):
        return f"sdtwisted(n={spec.n})"
    if isinstance(spec, Abelian):
        return f"abelian({','.join(str(q) for q in spec.orders)})"
    if isinstance(spec, Example16):
        return "example16"
    if isinstance(spec, DirectProduct):
        return f"product({spec_literal(spec.left)},{spec_literal(spec.right)})"
    raise TypeError(f"not a group spec: {spec!r}")


_N_ARG = re.compile(r"^\s*(?:n\s*=\s*)?(\d+)\s*$")


def _split_args(body: str) -> list[str]:
    """Split on top-level commas (product specs nest parentheses)."""
    parts, depth, cur = [], 0, []
    for ch in body:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


def parse_group_spec(text: str):
    """Parse a group spec literal such as "dihedral(n=3)" or
    "product(dihedral(n=2),abelian(2))"."""
    s = text.strip()
    low = s.lower()
    if low == "quaternion8":
        return Quaternion8()
    if low == "example16":
        return Example16()
    m = re.match(r"^([a-z]+)\((.*)\)$", low, re.DOTALL)
    if not m:
        raise ValueError(f"malformed group spec literal: {text!r}")
    name, body = m.group(1), m.group(2)
    if name in ("dihedral", "semidihedral", "genquaternion", "sdtwisted"):
        nm = _N_ARG.match(body)
        if not nm:
            raise ValueError(f"{name} takes a single n parameter: {text!r}")
        n = int(nm.group(1))
        cls = {"dihedral": Dihedral, "semidihedral": Semidihedral,
               "genquaternion": GeneralizedQuaternion,
               "sdtwisted": SemidihedralTwisted}[name]
        return cls(n)
    if name == "metacyclic":
        args = [a.strip() for a in _split_args(body)]
        if len(args) != 5:
            raise ValueError(f"metacyclic takes (p,n,m,t,r): {text!r}")
        return Metacyclic(*(int(a) for a in args))
    if name == "abelian":
        args = [a.strip() for a in _split_args(body)]
        return Abelian(tuple(int(a) for a in args))
    if name == "product":
        args = _split_args(body)
        if len(args) != 2:
            raise ValueError(f"product takes two specs: {text!r}")
        return DirectProduct(parse_group_spec(args[0]), parse_group_spec(args[1]))
    raise ValueError(f"unknown group spec: {text!r}")


def as_metacyclic(spec) -> Metacyclic | None:
    """The explicit metacyclic parameters of a shortcut spec, if any."""
    if isinstance(spec, Metacyclic):
        return spec
    if isinstance(spec, Dihedral):
        return Metacyclic(2, spec.n, 1, spec.n, 2**spec.n - 1)
    if isinstance(spec, Semidihedral):
        return Metacyclic(2, spec.n, 1, spec.n, 2 ** (spec.n - 1) - 1)
    if isinstance(spec, GeneralizedQuaternion):
        return Metacyclic(2, spec.n, 1, spec.n - 1, 2**spec.n - 1)
    if isinstance(spec, Quaternion8):
        return Metacyclic(2, 2, 1, 1, 3)
    if isinstance(spec, SemidihedralTwisted):
        return Metacyclic(2, spec.n, 1, spec.n - 1, 2 ** (spec.n - 1) - 1)
    return None


# ---------------------------------------------------------------------------
# The realized group
# ---------------------------------------------------------------------------

class Group:
    """An immutable finite group given by a validated Cayley table.

    Element 0 is the identity.  ``table[i, j]`` is the index of g_i * g_j.
    ``generators`` always generate the whole group; ``gen_a``/``gen_b`` are
    the designated presentation generators (gen_b is None for cyclic and
    trivial groups).
    """

    def __init__(self, spec, table, labels, generators, *, validate=True):
        self.spec = spec
        self.table = np.asarray(table, dtype=np.int16)
        self.table.flags.writeable = False
        self.order = len(self.table)
        self.labels = tuple(labels)
        self.generators = tuple(int(g) for g in generators)
        self.gen_a = self.generators[0] if self.generators else None
        self.gen_b = self.generators[1] if len(self.generators) > 1 else None
        self.identity = 0
        # inv(g) is the unique j with table[g, j] == 0; 0 is the row minimum.
        inverse = np.argmin(self.table, axis=1)
        self.inverse = tuple(int(x) for x in inverse)
        self._is_abelian = bool((self.table == self.table.T).all())
        if validate:
            self._validate()

    # -- basic operations ----------------------------------------------------

    def mul(self, g: int, h: int) -> int:
        return int(self.table[g, h])

    def inv(self, g: int) -> int:
        return self.inverse[g]

    def power(self, g: int, e: int) -> int:
        if e < 0:
            return self.power(self.inv(g), -e)
        out = self.identity
        base = g
        while e:
            if e & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            e >>= 1
        return out

    def element_order(self, g: int) -> int:
        k, x = 1, g
        while x != self.identity:
            x = self.mul(x, g)
            k += 1
        return k

    def commutator(self, g: int, h: int) -> int:
        """[g, h] = g h g^-1 h^-1."""
        return self.mul(self.mul(g, h), self.mul(self.inv(g), self.inv(h)))

    def conjugate(self, g: int, h: int) -> int:
        """g h g^-1."""
        return self.mul(self.mul(g, h), self.inv(g))

    @property
    def is_abelian(self) -> bool:
        return self._is_abelian

    @property
    def prime(self) -> int | None:
        """The prime p when the order is a power p^a > 1, else None."""
        n = self.order
        if n == 1:
            return None
        p = next(d for d in range(2, n + 1) if n % d == 0)
        return p if _is_power_of(n, p) else None

    def subgroup_closure(self, seed) -> list[int]:
        """Sorted element list of the subgroup generated by ``seed``."""
        members = {self.identity}
        frontier = [self.identity]
        seed = list(seed)
        while frontier:
            nxt = []
            for x in frontier:
                for s in seed:
                    for y in (self.mul(x, s), self.mul(x, self.inv(s))):
                        if y not in members:
                            members.add(y)
                            nxt.append(y)
            frontier = nxt
        return sorted(members)

    def derived_subgroup(self) -> list[int]:
        comms = {self.commutator(g, h)
                 for g in range(self.order) for h in range(self.order)}
        return self.subgroup_closure(comms)

    # -- validation ------------------------------------------------------------

    def _validate(self):
        n = self.order
        t = self.table
        if t.shape != (n, n):
            raise ValueError("table is not square")
        ref = np.arange(n)
        if not (np.sort(t, axis=1) == ref).all() or not (np.sort(t, axis=0) == ref[:, None]).all():
            raise ValueError("table is not a Latin square")
        if not (t[0] == ref).all() or not (t[:, 0] == ref).all():
            raise ValueError("element 0 is not an identity")
        left = t[t, :]                      # (i*j)*k
        right = t[:, t.reshape(-1)].reshape(n, n, n)  # i*(j*k)
        if not (left == right).all():
            raise ValueError("associativity fails; presentation is inconsistent")
        for g, gi in enumerate(self.inverse):
            if t[g, gi] != 0 or t[gi, g] != 0:
                raise ValueError("inverse table inconsistent")
        if self.generators:
            reached = set(self.subgroup_closure(self.generators))
            if len(reached) != n:
                raise ValueError("designated generators do not generate the group")
        if len(self.labels) != n or len(set(self.labels)) != n:
            raise ValueError("labels must be unique and match the order")

    # -- serialization ----------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "spec": spec_literal(self.spec),
            "order": self.order,
            "labels": list(self.labels),
            "table": self.table.tolist(),
            "gen_a": self.gen_a,
            "gen_b": self.gen_b,
        }

    @classmethod
    def from_json(cls, data) -> "Group":
        spec = parse_group_spec(data["spec"]) if "spec" in data else None
        gens = [g for g in (data.get("gen_a"), data.get("gen_b")) if g is not None]
        return cls(spec, data["table"], data["labels"], gens)

    def __eq__(self, other):
        return (isinstance(other, Group) and self.order == other.order
                and (self.table == other.table).all()
                and self.generators == other.generators)

    def __repr__(self):
        lit = spec_literal(self.spec) if self.spec is not None else "<table>"
        return f"Group({lit}, order={self.order})"


def _is_power_of(n, p):
    while n % p == 0:
        n //= p
    return n == 1


# ---------------------------------------------------------------------------
# Builders
# ---------------------------------------------------------------------------

def _power_label(sym, e):
    if e == 0:
        return ""
    if e == 1:
        return sym
    return f"{sym}^{e}"


def _normal_form_label(i, j):
    parts = [s for s in (_power_label("a", i), _power_label("b", j)) if s]
    return "*".join(parts) if parts else "1"


def _validate_metacyclic_params(mc: Metacyclic):
    p, n, m, t, r = mc.p, mc.n, mc.m, mc.t, mc.r
    if not is_prime(p):
        raise ValueError(f"metacyclic parameter p={p} is not prime")
    if n < 1 or m < 1 or t < 0:
        raise ValueError(f"metacyclic parameters out of range: n={n}, m={m}, t={t}")
    pn = p**n
    if pow(r % pn, p**m, pn) != 1 % pn:
        raise ValueError(
            f"metacyclic parameter congruence violated: r^(p^m) = {r}^{p**m} "
            f"is not 1 (mod p^n = {pn})")
    if (p**t * (r - 1)) % pn != 0:
        raise ValueError(
            f"metacyclic parameter congruence violated: p^t*(r-1) = "
            f"{p**t}*({r}-1) is not 0 (mod p^n = {pn})")


def _build_metacyclic(spec, mc: Metacyclic, order_bound):
    _validate_metacyclic_params(mc)
    p, n, m, t, r = mc.p, mc.n, mc.m, mc.t, mc.r
    N, M = p**n, p**m
    order = N * M
    if order > order_bound:
        raise ValueError(f"group order {order} exceeds bound {order_bound}")
    rpow = [1] * M
    for j in range(1, M):
        rpow[j] = (rpow[j - 1] * r) % N
    shift = p**t % N
    table = np.empty((order, order), dtype=np.int16)
    for j1 in range(M):
        for i1 in range(N):
            g = j1 * N + i1
            for j2 in range(M):
                for i2 in range(N):
                    j = j1 + j2
                    i = i1 + i2 * rpow[j1]
                    if j >= M:
                        j -= M
                        i += shift
                    table[g, j2 * N + i2] = j * N + (i % N)
    labels = [_normal_form_label(i, j) for j in range(M) for i in range(N)]
    generators = (1, N) if M > 1 else (1,)
    return Group(spec, table, labels, generators)


def _build_abelian(spec: Abelian, order_bound):
    orders = spec.orders
    if orders == ():
        orders = (1,)
    primes = set()
    for q in orders:
        if q == 1:
            continue
        p = next(d for d in range(2, q + 1) if q % d == 0)
        if not _is_power_of(q, p):
            raise ValueError(f"abelian factor {q} is not a prime power")
        primes.add(p)
    if len(primes) > 1:
        raise ValueError(f"abelian factors must share one prime, got {sorted(primes)}")
    order = 1
    for q in orders:
        order *= q
    if order > order_bound:
        raise ValueError(f"group order {order} exceeds bound {order_bound}")

    def decode(x):
        digits = []
        for q in reversed(orders):
            digits.append(x % q)
            x //= q
        return list(reversed(digits))

    def encode(digits):
        x = 0
        for d, q in zip(digits, orders):
            x = x * q + d
        return x

    table = np.empty((order, order), dtype=np.int16)
    for g in range(order):
        dg = decode(g)
        for h in range(order):
            dh = decode(h)
            table[g, h] = encode([(x + y) % q for x, y, q in zip(dg, dh, orders)])

    syms = [chr(ord("a") + i) for i in range(len(orders))]
    labels = []
    for x in range(order):
        digits = decode(x)
        parts = [_power_label(s, e) for s, e in zip(syms, digits) if e]
        labels.append("*".join(parts) if parts else "1")
    generators = tuple(encode([1 if i == j else 0 for j in range(len(orders))])
                       for i in range(len(orders)) if orders[i] > 1)
    return Group(spec, table, labels, generators)


# -- word-closure construction -------------------------------------------------

class _Rewriter:
    """Deterministic word rewriting toward normal forms a^i b^j.

    Rules are (lhs, rhs) word tuples applied leftmost-first in list order,
    repeatedly until no rule matches.  A step cap guards against
    non-terminating rule sets (an inconsistent presentation surfaces later
    as a validation failure)."""

    def __init__(self, rules, max_steps=100_000):
        self.rules = [(tuple(l), tuple(r)) for l, r in rules]
        self.max_steps = max_steps

    def reduce(self, word):
        word = tuple(word)
        for _ in range(self.max_steps):
            changed = False
            for pos in range(len(word)):
                for lhs, rhs in self.rules:
                    if word[pos:pos + len(lhs)] == lhs:
                        word = word[:pos] + rhs + word[pos + len(lhs):]
                        changed = True
                        break
                if changed:
                    break
            if not changed:
                return word
        raise ValueError("rewriting did not terminate; presentation unsupported")


def _closure_from_rewriter(spec, rewriter, max_i, max_j, order_bound):
    """Enumerate normal forms reachable from the generators and close the
    multiplication table.  Normal forms must come out as a^i b^j."""
    seen = {(): None}
    frontier = [()]
    while frontier:
        nxt = []
        for w in frontier:
            for g in ("a", "b"):
                red = rewriter.reduce(w + (g,))
                if red not in seen:
                    if len(seen) >= order_bound:
                        raise ValueError(
                            f"word closure exceeded order bound {order_bound}")
                    seen[red] = None
                    nxt.append(red)
        frontier = nxt

    def exponents(word):
        i = 0
        pos = 0
        while pos < len(word) and word[pos] == "a":
            i += 1
            pos += 1
        j = len(word) - pos
        if any(ch != "b" for ch in word[pos:]):
            raise ValueError(f"word closure produced non-normal form {word!r}")
        if i >= max_i or j >= max_j:
            raise ValueError(f"normal form exponents out of range: {word!r}")
        return (j, i)

    words = sorted(seen, key=exponents)
    index = {w: k for k, w in enumerate(words)}
    order = len(words)
    table = np.empty((order, order), dtype=np.int16)
    for g, wg in enumerate(words):
        for h, wh in enumerate(words):
            table[g, h] = index[rewriter.reduce(wg + wh)]
    labels = [_normal_form_label(e[1], e[0]) for e in map(exponents, words)]
    generators = tuple(x for x in (index.get(("a",)), index.get(("b",)))
                       if x is not None)
    return Group(spec, table, labels, generators)


def _build_example16(spec, order_bound):
    # Relations a^4 = b^4 = 1, [a^2,b] = [b^2,a] = 1 orient directly; the
    # conjugation relation bab^-1 = b^2 a^3 reduces (with b^2 central) to
    # the oriented rule ba -> a^3 b^3.
    rules = [
        (("a",) * 4, ()),
        (("b",) * 4, ()),
        (("b", "b", "a"), ("a", "b", "b")),
        (("b", "a", "a"), ("a", "a", "b")),
        (("b", "a"), ("a", "a", "a", "b", "b", "b")),
    ]
    g = _closure_from_rewriter(spec, _Rewriter(rules), 4, 4, order_bound)
    if g.order != 16:
        raise ValueError(f"example16 closure produced order {g.order}, expected 16")
    return g


def metacyclic_by_closure(mc: Metacyclic, order_bound=DEFAULT_GROUP_ORDER_BOUND):
    """Generic word-closure construction of a metacyclic presentation.

    Oracle counterpart of the normal-form builder; used to cross-check it.
    """
    _validate_metacyclic_params(mc)
    p, n, m, t, r = mc.p, mc.n, mc.m, mc.t, mc.r
    rules = [
        (("a",) * (p**n), ()),
        (("b",) * (p**m), ("a",) * (p**t % p**n)),
        (("b", "a"), ("a",) * (r % p**n) + ("b",)),
    ]
    return _closure_from_rewriter(mc, _Rewriter(rules), p**n, p**m, order_bound)


def _build_product(spec: DirectProduct, order_bound):
    left = build_group(spec.left, order_bound=order_bound)
    right = build_group(spec.right, order_bound=order_bound)
    order = left.order * right.order
    if order > order_bound:
        raise ValueError(f"group order {order} exceeds bound {order_bound}")
    nr = right.order
    lt = left.table.astype(np.int32)
    rt = right.table.astype(np.int32)
    # index = l * nr + r, componentwise multiplication
    table = (lt[:, None, :, None] * nr + rt[None, :, None, :]).reshape(order, order)
    labels = [f"({ll},{rl})" for ll in left.labels for rl in right.labels]
    generators = tuple(g * nr for g in left.generators) + tuple(right.generators)
    return Group(spec, table.astype(np.int16), labels, generators)


def build_group(spec, *, order_bound: int = DEFAULT_GROUP_ORDER_BOUND) -> Group:
    """Build and validate the group described by ``spec``."""
    if isinstance(spec, (Dihedral, Semidihedral, GeneralizedQuaternion,
                         Quaternion8, SemidihedralTwisted)):
        n = getattr(spec, "n", 2)
        if isinstance(spec, (Dihedral, GeneralizedQuaternion, SemidihedralTwisted)) and n < 2:
            raise ValueError(f"{type(spec).__name__} needs n >= 2")
        if isinstance(spec, Semidihedral) and n < 3:
            raise ValueError("semidihedral groups need n >= 3")
        return _build_metacyclic(spec, as_metacyclic(spec), order_bound)
    if isinstance(spec, Metacyclic):
        return _build_metacyclic(spec, spec, order_bound)
    if isinstance(spec, Abelian):
        return _build_abelian(spec, order_bound)
    if isinstance(spec, Example16):
        return _build_example16(spec, order_bound)
    if isinstance(spec, DirectProduct):
        return _build_product(spec, order_bound)
    raise TypeError(f"not a group spec: {spec!r}")
