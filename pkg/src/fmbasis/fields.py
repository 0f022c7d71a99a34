"""Exact arithmetic in small finite fields GF(p^k).

Field elements are integer codes in ``[0, p**k)``.  The element with
polynomial coordinates ``(c_{k-1}, ..., c_1, c_0)`` (degree-descending)
has code ``sum(c_i * p**i)``, so the natural integer order of codes is
the additive-coordinate lexicographic order used for every deterministic
enumeration in this package (modulus selection, searches, canonical
forms).  Serialized scalars are degree-descending coefficient lists,
e.g. the class of x in GF(4) is ``[1, 0]`` (code 2).
"""

from __future__ import annotations

import itertools
import re

import numpy as np

DEFAULT_ORDER_BOUND = 2**16
_TABLE_LIMIT = 256


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


# ---------------------------------------------------------------------------
# Dense polynomial helpers over Z_p.  Coefficients are tuples in
# degree-ascending order (index i holds the coefficient of x^i).
# ---------------------------------------------------------------------------

def _poly_trim(a):
    i = len(a)
    while i > 0 and a[i - 1] == 0:
        i -= 1
    return tuple(a[:i])


def _poly_mul(a, b, p):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _poly_trim(out)


def _poly_mod(a, m, p):
    """Remainder of a by the monic polynomial m over Z_p."""
    a = list(a)
    dm = len(m) - 1
    while len(a) > dm:
        lead = a[-1]
        if lead:
            shift = len(a) - 1 - dm
            for i, mi in enumerate(m):
                a[shift + i] = (a[shift + i] - lead * mi) % p
        a.pop()
    return _poly_trim(a)


def _is_irreducible(poly, p):
    """Trial division of a monic polynomial by every monic divisor of
    degree up to deg/2."""
    deg = len(poly) - 1
    if deg < 1:
        return False
    if poly[0] == 0:  # divisible by x
        return deg == 1
    for d in range(1, deg // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            divisor = tuple(reversed(tail)) + (1,)
            if not _poly_mod(poly, divisor, p):
                return False
    return True


def default_modulus(p: int, k: int) -> tuple[int, ...]:
    """Smallest monic irreducible of degree k over Z_p, in lexicographic
    order of the degree-descending coefficient list.

    Returned degree-descending, length k+1.
    """
    for tail in itertools.product(range(p), repeat=k):
        poly = tuple(reversed(tail)) + (1,)  # ascending
        if _is_irreducible(poly, p):
            return tuple(reversed(poly))
    raise AssertionError(f"no irreducible polynomial of degree {k} over Z_{p}")


class Field:
    """A finite field GF(p^k) with exact table-backed arithmetic.

    ``modulus`` is the degree-descending coefficient list of the defining
    monic irreducible (only for k > 1).  When omitted it defaults to the
    smallest monic irreducible in lexicographic coefficient order, so
    independent runs agree element-for-element.
    """

    def __init__(self, p: int, k: int = 1, modulus=None, *,
                 order_bound: int = DEFAULT_ORDER_BOUND):
        if not is_prime(p):
            raise ValueError(f"characteristic {p} is not prime")
        if k < 1:
            raise ValueError(f"extension degree must be >= 1, got {k}")
        order = p**k
        if order > order_bound:
            raise ValueError(f"field order {order} exceeds bound {order_bound}")
        self.p = p
        self.k = k
        self.order = order
        if k == 1:
            if modulus is not None:
                raise ValueError("prime fields take no modulus")
            self.modulus = None
            self._mod_asc = None
        else:
            if modulus is None:
                modulus = default_modulus(p, k)
            modulus = tuple(int(c) % p for c in modulus)
            if len(modulus) != k + 1 or modulus[0] != 1:
                raise ValueError(f"modulus must be monic of degree {k}")
            asc = tuple(reversed(modulus))
            if not _is_irreducible(asc, p):
                raise ValueError(f"modulus {list(modulus)} is reducible over Z_{p}")
            self.modulus = modulus
            self._mod_asc = asc
        self._default_modulus = self.modulus == (None if k == 1 else default_modulus(p, k))
        self._build_tables()

    # -- representation helpers --------------------------------------------

    def coeffs(self, x: int) -> list[int]:
        """Degree-descending coefficient list of length k."""
        self._check(x)
        digits = []
        for _ in range(self.k):
            digits.append(x % self.p)
            x //= self.p
        return list(reversed(digits))

    def element(self, coeffs) -> int:
        """Inverse of :meth:`coeffs`."""
        coeffs = list(coeffs)
        if len(coeffs) != self.k:
            raise ValueError(f"expected {self.k} coefficients, got {len(coeffs)}")
        x = 0
        for c in coeffs:
            x = x * self.p + int(c) % self.p
        return x

    def elements(self) -> range:
        return range(self.order)

    def _check(self, x: int) -> int:
        if not 0 <= x < self.order:
            raise ValueError(f"{x} is not an element code of {self!r}")
        return x

    # -- scalar arithmetic --------------------------------------------------

    def _raw_add(self, x, y):
        if self.k == 1:
            return (x + y) % self.p
        p = self.p
        out = 0
        mult = 1
        for _ in range(self.k):
            out += ((x % p + y % p) % p) * mult
            x //= p
            y //= p
            mult *= p
        return out

    def _raw_neg(self, x):
        if self.k == 1:
            return (-x) % self.p
        p = self.p
        out = 0
        mult = 1
        for _ in range(self.k):
            out += ((-x) % p) * mult
            x //= p
            mult *= p
        return out

    def _to_poly(self, x):
        digits = []
        while x:
            digits.append(x % self.p)
            x //= self.p
        return tuple(digits)

    def _from_poly(self, poly):
        out = 0
        for c in reversed(poly):
            out = out * self.p + c
        return out

    def _raw_mul(self, x, y):
        if self.k == 1:
            return (x * y) % self.p
        prod = _poly_mul(self._to_poly(x), self._to_poly(y), self.p)
        return self._from_poly(_poly_mod(prod, self._mod_asc, self.p))

    def _build_tables(self):
        if self.order > _TABLE_LIMIT:
            self.add_table = None
            self.mul_table = None
            self.neg_table = None
            self.inv_table = None
            return
        q = self.order
        add = np.empty((q, q), dtype=np.uint8)
        mul = np.empty((q, q), dtype=np.uint8)
        for x in range(q):
            for y in range(x, q):
                s = self._raw_add(x, y)
                m = self._raw_mul(x, y)
                add[x, y] = add[y, x] = s
                mul[x, y] = mul[y, x] = m
        neg = np.array([self._raw_neg(x) for x in range(q)], dtype=np.uint8)
        inv = np.zeros(q, dtype=np.uint8)
        for x in range(1, q):
            y = self._pow_raw(x, q - 2) if q > 2 else x
            inv[x] = y
        add.flags.writeable = False
        mul.flags.writeable = False
        neg.flags.writeable = False
        inv.flags.writeable = False
        self.add_table = add
        self.mul_table = mul
        self.neg_table = neg
        self.inv_table = inv

    def _pow_raw(self, x, e):
        out = 1
        base = x
        while e:
            if e & 1:
                out = self._raw_mul(out, base)
            base = self._raw_mul(base, base)
            e >>= 1
        return out

    def add(self, x: int, y: int) -> int:
        self._check(x), self._check(y)
        if self.add_table is not None:
            return int(self.add_table[x, y])
        return self._raw_add(x, y)

    def neg(self, x: int) -> int:
        self._check(x)
        if self.neg_table is not None:
            return int(self.neg_table[x])
        return self._raw_neg(x)

    def sub(self, x: int, y: int) -> int:
        return self.add(x, self.neg(y))

    def mul(self, x: int, y: int) -> int:
        self._check(x), self._check(y)
        if self.mul_table is not None:
            return int(self.mul_table[x, y])
        return self._raw_mul(x, y)

    def inv(self, x: int) -> int:
        self._check(x)
        if x == 0:
            raise ZeroDivisionError(f"inversion of zero in {self!r}")
        if self.inv_table is not None:
            return int(self.inv_table[x])
        return self._pow_raw(x, self.order - 2)

    def pow(self, x: int, e: int) -> int:
        self._check(x)
        if e < 0:
            raise ValueError("exponents must be non-negative")
        return self._pow_raw(x, e)

    # -- array arithmetic (requires tables, i.e. order <= 256) --------------

    @property
    def has_tables(self) -> bool:
        return self.add_table is not None

    def _need_tables(self):
        if self.add_table is None:
            raise ValueError(f"array arithmetic needs order <= {_TABLE_LIMIT}, "
                             f"got {self.order}")

    def add_arrays(self, a, b):
        self._need_tables()
        return self.add_table[a, b]

    def sub_arrays(self, a, b):
        self._need_tables()
        return self.add_table[a, self.neg_table[b]]

    def mul_arrays(self, a, b):
        self._need_tables()
        return self.mul_table[a, b]

    def scale_array(self, c, a):
        self._need_tables()
        return self.mul_table[c][a]

    def zeros(self, n):
        return np.zeros(n, dtype=np.uint8)

    # -- special elements ----------------------------------------------------

    def primitive_cube_root(self) -> int | None:
        """The first element w (in code order) with w**3 == 1 and w != 1,
        or None.  One exists iff 3 divides p^k - 1."""
        for x in range(2, self.order):
            if self._pow_raw(x, 3) == 1:
                return x
        return None

    # -- literals and serialization ------------------------------------------

    def to_literal(self) -> str:
        if self.k == 1 or self._default_modulus:
            return f"gf({self.order})"
        mod = ",".join(str(c) for c in self.modulus)
        return f"gf({self.p}^{self.k};modulus={mod})"

    def to_json(self) -> dict:
        out = {"p": self.p, "k": self.k, "literal": self.to_literal()}
        if self.modulus is not None:
            out["modulus"] = list(self.modulus)
        return out

    def __eq__(self, other):
        return (isinstance(other, Field) and self.p == other.p
                and self.k == other.k and self.modulus == other.modulus)

    def __hash__(self):
        return hash((self.p, self.k, self.modulus))

    def __repr__(self):
        return f"GF({self.order})"


_LITERAL_RE = re.compile(
    r"""^gf\(\s*(?P<base>\d+)\s*(\^\s*(?P<exp>\d+)\s*)?
        (;\s*modulus\s*=\s*(?P<mod>[\d,\s]+))?\s*\)$""",
    re.IGNORECASE | re.VERBOSE,
)


def _factor_prime_power(n: int) -> tuple[int, int]:
    if n < 2:
        raise ValueError(f"{n} is not a prime power")
    for p in range(2, n + 1):
        if n % p == 0:
            k = 0
            m = n
            while m % p == 0:
                m //= p
                k += 1
            if m != 1:
                raise ValueError(f"{n} is not a prime power")
            return p, k
    raise ValueError(f"{n} is not a prime power")


def parse_field_literal(text: str, *, order_bound: int = DEFAULT_ORDER_BOUND) -> Field:
    """Parse "gf(q)", "gf(p^k)" or "gf(p^k;modulus=c_k,...,c_0)"."""
    m = _LITERAL_RE.match(text.strip())
    if not m:
        raise ValueError(f"malformed field literal: {text!r}")
    base = int(m.group("base"))
    if m.group("exp") is not None:
        p, k = base, int(m.group("exp"))
    else:
        p, k = _factor_prime_power(base)
    modulus = None
    if m.group("mod") is not None:
        modulus = [int(c) for c in m.group("mod").split(",")]
        if k == 1:
            raise ValueError("prime fields take no modulus")
    return Field(p, k, modulus, order_bound=order_bound)


def make_field(p: int, k: int = 1, modulus=None, *,
               order_bound: int = DEFAULT_ORDER_BOUND) -> Field:
    """Construct GF(p^k) with the deterministic default modulus."""
    return Field(p, k, modulus, order_bound=order_bound)
