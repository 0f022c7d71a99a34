"""Exhaustive, prunable search for filtered multiplicative bases of KG.

Search-space reduction
----------------------

A filtered multiplicative basis B of KG contains exactly one element e
outside the radical I.  Closure forces e*e in B; e*e also lies outside I,
and e is the only member there, so e*e = e.  Writing e = c*1 + x with
c != 0 in K and x in I, comparing augmentations gives c*c = c, so c = 1,
and then x*x = -x, whence x = x^3 = x^5 = ... = 0 by nilpotency of I.
So e = 1 exactly.  (The scalar sweep below enumerates the roots of unity
c of the field and keeps those with c*c = c, which realizes this proof as
a one-line filter.)

The members of B inside I are exactly the nonzero products of words in
the d = dim I/I^2 generators of B outside I^2 (a counting argument over
the level-wise basis property), and modulo I^2 those generators form an
invertible d x d coordinate frame over the canonical I/I^2 basis.  The
structured strategy therefore enumerates (invertible frame, I^2-tail per
generator) and closes each tuple under multiplication; the brute_pairs
oracle enumerates raw pairs (u, v) in I x I with no structural assumption
beyond 1 being a member, and is used to validate the structured pruning.

Pruning rules (all provably sound: a pruned tuple admits no basis)
------------------------------------------------------------------

* pair rule -- two distinct nonzero words congruent modulo a radical
  power deeper than their common exact level (no basis may contain both);
* triple/quad class rules -- same-level words with linearly dependent
  leading classes (members at one exact level must project to a basis of
  that radical quotient);
* closure rules -- a word dependent on the collected words without
  equaling one, more than |G| - 1 words, or a stabilized closure that is
  too small.

Every surviving candidate is re-checked with the full verifier before it
is reported, so a report with ``exhausted = true`` and no findings is a
machine-checkable nonexistence certificate for the enumerated space.

Enumeration order (tag "enum-v1"): field codes ascending; frames row-major
lexicographic over code tuples, singular frames skipped; tails in
coordinate-lexicographic order against the canonical I^2 basis rows, first
generator outermost.  Shards partition the (frame, first-tail) blocks by
``block_id % shard_count``.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import linalg
from .algebra import Filtration, GroupAlgebra, compute_filtration
from .basis import BasisCandidate, verify
from .groups import spec_literal

SCHEMA_VERSION = 1
ENUMERATION_VERSION = "enum-v1"

DEFAULT_BUDGET = 10**9
STRUCTURED_SIZE_LIMIT = 16
BRUTE_SIZE_LIMIT = 8


@dataclass
class SearchConfig:
    strategy: str = "structured"
    shard: tuple = (0, 1)
    budget: int = DEFAULT_BUDGET
    budget_seconds: float | None = None
    record_all: bool = False
    size_limit: int = STRUCTURED_SIZE_LIMIT

    def __post_init__(self):
        idx, cnt = self.shard
        if not (0 <= idx < cnt):
            raise ValueError(f"invalid shard {self.shard}")
        if self.strategy not in ("structured", "brute_pairs"):
            raise ValueError(f"unknown strategy {self.strategy!r}")


@dataclass
class SearchReport:
    group: str
    field: str
    strategy: str
    shard: tuple
    space_size: int
    examined: int
    pruned: dict
    found: list
    exhausted: bool
    budget_hit: bool
    elapsed: float
    depth_hist: dict = dc_field(default_factory=dict)

    def core_json(self) -> dict:
        """The deterministic payload (timing excluded)."""
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": "search_report",
            "group": self.group,
            "field": self.field,
            "strategy": self.strategy,
            "shard": list(self.shard),
            "space_size": self.space_size,
            "examined": self.examined,
            "pruned": dict(sorted(self.pruned.items())),
            "closure_depth_hist": {str(k): v for k, v in sorted(self.depth_hist.items())},
            "found": [c.to_json() for c in self.found],
            "exhausted": self.exhausted,
            "budget_hit": self.budget_hit,
            "enumeration_version": ENUMERATION_VERSION,
        }

    def to_json(self) -> dict:
        out = self.core_json()
        out["elapsed_seconds"] = self.elapsed
        return out

    @property
    def is_nonexistence_certificate(self) -> bool:
        return self.exhausted and not self.found


# ---------------------------------------------------------------------------
# Bit-packed kernel for characteristic-2 fields (k = 1, 2), |G|*k <= 16
# ---------------------------------------------------------------------------

class PackedKernel:
    """Packs a KG coefficient vector over GF(2) or GF(4) into one integer.

    Position j of the group carries bit j (the 1-coordinate) and, for
    GF(4), bit n+j (the omega-coordinate).  Addition is XOR; left
    multiplication by a group element is a fixed bit permutation, tabled
    over the whole 2^(n*k) code space, which makes products, squares and
    exact radical levels O(1)-ish table lookups.
    """

    def __init__(self, algebra: GroupAlgebra, filtration: Filtration):
        group, fld = algebra.group, algebra.field
        if fld.p != 2 or fld.k > 2 or group.order * fld.k > 16:
            raise ValueError("packed kernel needs GF(2)/GF(4) and |G|*k <= 16")
        self.algebra = algebra
        self.filtration = filtration
        self.n = group.order
        self.k = fld.k
        self.nbits = self.n * self.k
        self.size = 1 << self.nbits
        self.mask = (1 << self.n) - 1
        self.depth = filtration.depth

        codes = np.arange(self.size, dtype=np.int64)
        perms = []
        for i in range(self.n):
            row = group.table[i]
            out = np.zeros(self.size, dtype=np.int64)
            for j in range(self.n):
                out |= ((codes >> j) & 1) << int(row[j])
                if self.k == 2:
                    out |= ((codes >> (self.n + j)) & 1) << (self.n + int(row[j]))
            out.flags.writeable = False
            perms.append(out)
        self.perm = perms

        level = np.zeros(self.size, dtype=np.int8)
        for lv in range(1, filtration.depth + 1):
            members = self._span(filtration.levels[lv] if lv < len(filtration.levels)
                                 else np.zeros((0, self.n), dtype=np.uint8))
            level[members] = lv
        level[0] = filtration.depth  # zero vector: deeper than any member
        level.flags.writeable = False
        self.level = level

        self.sq = self.mul_batch(codes, codes)
        self.sq.flags.writeable = False

    # -- packing -------------------------------------------------------------

    def pack(self, coeffs) -> int:
        v = 0
        for j, c in enumerate(coeffs):
            c = int(c)
            v |= (c & 1) << j
            if self.k == 2:
                v |= ((c >> 1) & 1) << (self.n + j)
        return v

    def unpack(self, v: int) -> np.ndarray:
        out = np.zeros(self.n, dtype=np.uint8)
        for j in range(self.n):
            c = (v >> j) & 1
            if self.k == 2:
                c |= ((v >> (self.n + j)) & 1) << 1
            out[j] = c
        return out

    def _span(self, rows) -> np.ndarray:
        """All packed elements of the row space, as an int64 array."""
        elems = np.zeros(1, dtype=np.int64)
        for row in rows:
            r = self.pack(row)
            mults = [0, r] if self.k == 1 else [0, r, self.omega_int(r),
                                                self.omega_int(self.omega_int(r))]
            elems = (elems[None, :] ^ np.array(mults, dtype=np.int64)[:, None]).reshape(-1)
        return elems

    # -- scalar action ---------------------------------------------------------

    def omega_int(self, z: int) -> int:
        """Multiply a packed GF(4) vector by omega: (lo, hi) -> (hi, lo^hi)."""
        lo = z & self.mask
        hi = z >> self.n
        return hi | ((lo ^ hi) << self.n)

    def omega_arr(self, z: np.ndarray) -> np.ndarray:
        lo = z & self.mask
        hi = z >> self.n
        return hi | ((lo ^ hi) << self.n)

    def scale_int(self, c: int, z: int) -> int:
        if c == 0:
            return 0
        if c == 1:
            return z
        if c == 2:
            return self.omega_int(z)
        return self.omega_int(self.omega_int(z))

    # -- multiplication ----------------------------------------------------------

    def mul_int(self, x: int, y: int) -> int:
        out = 0
        n = self.n
        lo = x & self.mask
        while lo:
            j = lo & -lo
            out ^= self.perm[j.bit_length() - 1][y]
            lo ^= j
        if self.k == 2:
            hi = x >> n
            while hi:
                j = hi & -hi
                out ^= self.omega_int(self.perm[j.bit_length() - 1][y])
                hi ^= j
        return int(out)

    def mul_scalar_batch(self, x: int, Y: np.ndarray) -> np.ndarray:
        """x * Y[t] for a fixed packed x and an array of packed vectors."""
        out = np.zeros(len(Y), dtype=np.int64)
        for j in range(self.n):
            if (x >> j) & 1:
                out ^= self.perm[j][Y]
            if self.k == 2 and (x >> (self.n + j)) & 1:
                out ^= self.omega_arr(self.perm[j][Y])
        return out

    def mul_batch_scalar(self, X: np.ndarray, y: int) -> np.ndarray:
        """X[t] * y: accumulate the per-bit rows of the right factor."""
        rows = []
        for j in range(self.n):
            rows.append(int(self.perm[j][y]))
        if self.k == 2:
            for j in range(self.n):
                rows.append(self.omega_int(int(self.perm[j][y])))
        out = np.zeros(len(X), dtype=np.int64)
        for t, row in enumerate(rows):
            if row:
                out[((X >> t) & 1) == 1] ^= row
        return out

    def mul_batch(self, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
        out = np.zeros(len(X), dtype=np.int64)
        for j in range(self.n):
            sel = ((X >> j) & 1) == 1
            if sel.any():
                out[sel] ^= self.perm[j][Y[sel]]
            if self.k == 2:
                sel = ((X >> (self.n + j)) & 1) == 1
                if sel.any():
                    out[sel] ^= self.omega_arr(self.perm[j][Y[sel]])
        return out

    def element(self, v: int):
        return self.algebra.element(self.unpack(v))


class _PackedEchelon:
    """Incremental echelon of packed vectors, GF(2) or GF(4)."""

    def __init__(self, kernel: PackedKernel):
        self.kernel = kernel
        self.rows = {}  # pivot position -> normalized packed row

    def _support(self, v: int) -> int:
        if self.kernel.k == 1:
            return v
        return (v | (v >> self.kernel.n)) & self.kernel.mask

    def _coeff(self, v: int, j: int) -> int:
        c = (v >> j) & 1
        if self.kernel.k == 2:
            c |= ((v >> (self.kernel.n + j)) & 1) << 1
        return c

    def reduce(self, v: int) -> int:
        ker = self.kernel
        while v:
            j = self._support(v).bit_length() - 1
            row = self.rows.get(j)
            if row is None:
                return v
            c = self._coeff(v, j)
            v ^= ker.scale_int(c, row)
        return 0

    def insert(self, v: int) -> bool:
        """Reduce and insert; False if v was already in the span."""
        ker = self.kernel
        v = self.reduce(v)
        if v == 0:
            return False
        j = self._support(v).bit_length() - 1
        c = self._coeff(v, j)
        if c == 2:
            v = ker.omega_int(v)          # omega^2 * v has coefficient 1
            v = ker.omega_int(v)
        elif c == 3:
            v = ker.omega_int(v)
        self.rows[j] = v
        return True


def _packed_closure(kernel: PackedKernel, gens, *, check_congruence=True):
    """Word closure of a packed generator tuple.

    Returns ``(words or None, prune_reason, depth)`` where depth is the
    number of words collected when pruned (for the depth histogram).
    """
    n1 = kernel.n - 1
    level = kernel.level
    words: list[int] = []
    keys = set()
    ech = _PackedEchelon(kernel)
    queue: list[tuple[int, int]] = []

    def add(v: int):
        if v in keys:
            return None
        lv = int(level[v])
        if check_congruence:
            for w in words:
                if level[w] == lv and level[w ^ v] > lv:
                    return "closure_congruent"
        if not ech.insert(v):
            return "closure_dependent"
        if len(words) + 1 > n1:
            return "closure_overflow"
        k = len(words)
        words.append(v)
        keys.add(v)
        for j in range(k):
            queue.append((k, j))
            queue.append((j, k))
        queue.append((k, k))
        return None

    for g in gens:
        if g == 0:
            return None, "closure_zero_generator", 0
        why = add(g)
        if why:
            return None, why, len(words)

    qi = 0
    while qi < len(queue):
        i, j = queue[qi]
        qi += 1
        prod = kernel.mul_int(words[i], words[j])
        if prod == 0:
            continue
        why = add(prod)
        if why:
            return None, why, len(words)

    if len(words) != n1:
        return None, "closure_short", len(words)
    return words, None, len(words)


# ---------------------------------------------------------------------------
# Vectorized prefilter (two generators, packed path)
# ---------------------------------------------------------------------------

def _apply_rules(level, words, alive, pruned, *, quads=True):
    """Sound bulk pruning over candidate arrays.

    ``words`` is a list of (name, array) with equal lengths; ``alive`` a
    boolean mask updated in place.  Returns the updated mask.
    """
    m = len(words)
    lv = [level[w] for _, w in words]
    nz = [w != 0 for _, w in words]
    # pair rule
    for i in range(m):
        for j in range(i + 1, m):
            if not alive.any():
                return alive
            d = words[i][1] ^ words[j][1]
            bad = alive & nz[i] & nz[j] & (d != 0) & (level[d] > lv[i]) & (level[d] > lv[j])
            cnt = int(bad.sum())
            if cnt:
                pruned["prefilter_pair"] = pruned.get("prefilter_pair", 0) + cnt
                alive &= ~bad
    # triple class rule (pairwise distinct values, common exact level,
    # dependent leading classes; pair-rule survivors have distinct classes)
    for i in range(m):
        for j in range(i + 1, m):
            dij = words[i][1] ^ words[j][1]
            for t in range(j + 1, m):
                if not alive.any():
                    return alive
                s = dij ^ words[t][1]
                distinct = (dij != 0) & ((words[i][1] ^ words[t][1]) != 0) & \
                           ((words[j][1] ^ words[t][1]) != 0)
                same = (lv[i] == lv[j]) & (lv[j] == lv[t])
                bad = alive & nz[i] & nz[j] & nz[t] & distinct & same & (level[s] > lv[i])
                cnt = int(bad.sum())
                if cnt:
                    pruned["prefilter_triple"] = pruned.get("prefilter_triple", 0) + cnt
                    alive &= ~bad
    if not quads:
        return alive
    import itertools as _it
    for combo in _it.combinations(range(m), 4):
        if not alive.any():
            return alive
        i, j, t, u = combo
        s = words[i][1] ^ words[j][1] ^ words[t][1] ^ words[u][1]
        distinct = np.ones_like(alive)
        for x, y in _it.combinations(combo, 2):
            distinct &= (words[x][1] ^ words[y][1]) != 0
        same = (lv[i] == lv[j]) & (lv[j] == lv[t]) & (lv[t] == lv[u])
        bad = alive & nz[i] & nz[j] & nz[t] & nz[u] & distinct & same & (level[s] > lv[i])
        cnt = int(bad.sum())
        if cnt:
            pruned["prefilter_quad"] = pruned.get("prefilter_quad", 0) + cnt
            alive &= ~bad
    return alive


# ---------------------------------------------------------------------------
# Structured enumeration
# ---------------------------------------------------------------------------

def _quotient_reps(filtration: Filtration):
    """Canonical lifts of the I/I^2 basis: rows of the I basis whose pivots
    are not pivots of I^2."""
    upper = set(filtration.pivots[2]) if filtration.depth >= 2 else set()
    rows = []
    for p, row in zip(filtration.pivots[1], filtration.levels[1]):
        if p not in upper:
            rows.append(row)
    return rows


def _gl_frames(field, d):
    """All invertible d x d code matrices, row-major lexicographic order of
    the flattened code tuple."""
    if d == 0:
        return [()]
    q = field.order
    frames = []
    for flat in np.ndindex(*([q] * (d * d))):
        M = np.array(flat, dtype=np.uint8).reshape(d, d)
        if linalg.rank(field, M) == d:
            frames.append(tuple(int(x) for x in flat))
    expected = 1
    for i in range(d):
        expected *= q**d - q**i
    if len(frames) != expected:
        raise AssertionError("GL enumeration does not match the order formula")
    return frames


def _scalar_member_codes(field):
    """Codes c with c*c == c among the roots of unity of the field; the
    module docstring's argument shows this is exactly {1}."""
    return [c for c in range(1, field.order) if field.mul(c, c) == c]


class _Budget:
    def __init__(self, cfg: SearchConfig):
        self.max_candidates = cfg.budget
        self.max_seconds = cfg.budget_seconds
        self.start = time.perf_counter()
        self.hit = False

    def allows(self, examined, upcoming):
        if examined + upcoming > self.max_candidates:
            self.hit = True
            return False
        if self.max_seconds is not None and time.perf_counter() - self.start > self.max_seconds:
            self.hit = True
            return False
        return True


def _tail_array(kernel: PackedKernel, rows):
    """Packed I^2 elements in coordinate-lexicographic order (first basis
    row outermost)."""
    tails = np.zeros(1, dtype=np.int64)
    q = kernel.algebra.field.order
    for row in rows:
        r = kernel.pack(row)
        mults = np.array([kernel.scale_int(c, r) for c in range(q)], dtype=np.int64)
        tails = (np.repeat(tails, q) ^ np.tile(mults, len(tails)))
    return tails


def _tail_vectors(field, rows, order):
    """Generic-path tails as uint8 rows, same order as _tail_array."""
    tails = np.zeros((1, order), dtype=np.uint8)
    for row in rows:
        stacked = []
        for t in tails:
            for c in range(field.order):
                stacked.append(field.add_arrays(t, field.scale_array(c, row)))
        tails = np.array(stacked, dtype=np.uint8)
    return tails


def _structured(algebra, filtration, cfg: SearchConfig):
    group, field = algebra.group, algebra.field
    n = group.order
    if n > cfg.size_limit:
        raise ValueError(
            f"unsupported size for structured full search: |G| = {n} exceeds "
            f"the limit {cfg.size_limit}")
    d = filtration.dims[1] - (filtration.dims[2] if filtration.depth >= 2 else 0)
    reps = _quotient_reps(filtration)
    assert len(reps) == d
    frames = _gl_frames(field, d)
    level2_rows = filtration.levels[2] if filtration.depth >= 2 else \
        np.zeros((0, n), dtype=np.uint8)
    tail_count = field.order ** len(level2_rows)
    space = len(frames) * tail_count**d if d else 1
    scalars = _scalar_member_codes(field)
    assert scalars == [1], "only the identity survives the scalar sweep"

    pruned: dict = {}
    hist: dict = {}
    found: dict = {}
    examined = 0
    exhausted = True
    budget = _Budget(cfg)
    shard_idx, shard_cnt = cfg.shard
    stop = False

    use_packed = field.p == 2 and field.k <= 2 and n * field.k <= 16
    kernel = PackedKernel(algebra, filtration) if use_packed else None

    def report_candidate(elements, labels):
        cand = BasisCandidate(algebra, elements, labels)
        rep = verify(cand, filtration=filtration)
        if not rep.verdict:
            pruned["verify_reject"] = pruned.get("verify_reject", 0) + 1
            return False
        canon = canonicalize(cand, filtration=filtration)
        found.setdefault(_canon_key(canon), canon)
        return True

    if d == 0:
        # the trivial group: B = {1}
        if shard_idx == 0:
            examined = 1
            report_candidate([algebra.one()], ["1"])
        return _make_report(algebra, cfg, space, examined, pruned, found,
                            exhausted, budget, hist)

    if use_packed:
        tails = _tail_array(kernel, level2_rows)
        rep_packed = [kernel.pack(r) for r in reps]
        base_rows = []
        for fr in frames:
            M = np.array(fr, dtype=np.uint8).reshape(d, d)
            packed_rows = []
            for i in range(d):
                acc = 0
                for j in range(d):
                    acc ^= kernel.scale_int(int(M[i, j]), rep_packed[j])
                packed_rows.append(acc)
            base_rows.append(packed_rows)
    else:
        tails = _tail_vectors(field, level2_rows, n)
        base_rows = []
        for fr in frames:
            M = np.array(fr, dtype=np.uint8).reshape(d, d)
            rows = []
            for i in range(d):
                acc = np.zeros(n, dtype=np.uint8)
                for j in range(d):
                    acc = field.add_arrays(acc, field.scale_array(int(M[i, j]), reps[j]))
                rows.append(acc)
            base_rows.append(rows)

    n_blocks = len(frames) * tail_count
    inner = tail_count ** (d - 1)

    for block in range(n_blocks):
        if block % shard_cnt != shard_idx:
            continue
        if stop:
            exhausted = False
            break
        if not budget.allows(examined, inner):
            exhausted = False
            break
        fi, t0 = divmod(block, tail_count)
        if use_packed and d == 2:
            u = base_rows[fi][0] ^ int(tails[t0])
            examined += inner
            stop = stop or _packed_pair_block(
                kernel, u, base_rows[fi][1], tails, pruned, hist,
                report_candidate, cfg.record_all)
        else:
            examined += inner
            stop = stop or _generic_block(
                algebra, filtration, kernel, base_rows[fi], t0, tails, d,
                pruned, hist, report_candidate, cfg.record_all)

    if stop:
        exhausted = False
    return _make_report(algebra, cfg, space, examined, pruned, found,
                        exhausted, budget, hist)


def _packed_pair_block(kernel, u, v_base, tails, pruned, hist,
                       report_candidate, record_all):
    """Vectorized prefilter over all second-generator tails for a fixed
    first generator, then exact closure on survivors."""
    level = kernel.level
    uu = kernel.mul_int(u, u)
    uuu = kernel.mul_int(uu, u)
    V = v_base ^ tails
    VV = kernel.sq[V]
    UV = kernel.mul_scalar_batch(u, V)
    VU = kernel.mul_batch_scalar(V, u)
    alive = np.ones(len(V), dtype=bool)
    cU = np.full(len(V), uu, dtype=np.int64)
    stage1 = [("uu", cU), ("uv", UV), ("vu", VU), ("vv", VV)]
    alive = _apply_rules(level, stage1, alive, pruned, quads=True)
    idx = np.flatnonzero(alive)
    if len(idx) == 0:
        return False
    # stage 2: length-3 words on the survivors
    Vs, UVs, VUs, VVs = V[idx], UV[idx], VU[idx], VV[idx]
    words = [
        ("uu", np.full(len(idx), uu, dtype=np.int64)),
        ("uv", UVs), ("vu", VUs), ("vv", VVs),
        ("uuu", np.full(len(idx), uuu, dtype=np.int64)),
        ("uuv", kernel.mul_scalar_batch(uu, Vs)),
        ("uvu", kernel.mul_batch_scalar(UVs, u)),
        ("uvv", kernel.mul_batch(UVs, Vs)),
        ("vuu", kernel.mul_batch_scalar(VUs, u)),
        ("vuv", kernel.mul_batch(VUs, Vs)),
        ("vvu", kernel.mul_batch_scalar(VVs, u)),
        ("vvv", kernel.mul_batch(VVs, Vs)),
    ]
    alive2 = np.ones(len(idx), dtype=bool)
    alive2 = _apply_rules(level, words, alive2, pruned, quads=True)
    survivors = idx[np.flatnonzero(alive2)]
    for t in survivors:
        v = int(V[t])
        ws, why, depth = _packed_closure(kernel, [u, v])
        if ws is None:
            pruned[why] = pruned.get(why, 0) + 1
            hist[depth] = hist.get(depth, 0) + 1
            continue
        elements = [kernel.algebra.one()] + [kernel.element(w) for w in ws]
        labels = ["1"] + [f"w{i}" for i in range(len(ws))]
        if report_candidate(elements, labels) and not record_all:
            return True
    return False


_WITNESS_RULE = {
    "congruent_words": "closure_congruent",
    "dependent_word": "closure_dependent",
    "too_many_words": "closure_overflow",
    "stabilized_short": "closure_short",
    "zero_generator": "closure_zero_generator",
}


def _generic_block(algebra, filtration, kernel, base, t0, tails, d,
                   pruned, hist, report_candidate, record_all):
    """Per-candidate closure over the remaining tail axes (any d, any
    field; packed closure when a kernel is available)."""
    import itertools as _it
    from .basis import closure_candidate
    field = algebra.field
    tail_range = range(len(tails))
    for rest in _it.product(tail_range, repeat=d - 1):
        tuple_tails = (t0,) + rest
        if kernel is not None:
            gens = [base[i] ^ int(tails[t]) for i, t in enumerate(tuple_tails)]
            ws, why, depth = _packed_closure(kernel, gens)
            if ws is None:
                pruned[why] = pruned.get(why, 0) + 1
                hist[depth] = hist.get(depth, 0) + 1
                continue
            elements = [algebra.one()] + [kernel.element(w) for w in ws]
        else:
            gens = [algebra.element(field.add_arrays(base[i], tails[t]))
                    for i, t in enumerate(tuple_tails)]
            cand, wit = closure_candidate(algebra, filtration, gens)
            if cand is None:
                why = _WITNESS_RULE.get(wit["kind"], wit["kind"])
                pruned[why] = pruned.get(why, 0) + 1
                continue
            elements = cand.elements
        labels = ["1"] + [f"w{i}" for i in range(len(elements) - 1)]
        if report_candidate(elements, labels) and not record_all:
            return True
    return False


# ---------------------------------------------------------------------------
# brute_pairs oracle
# ---------------------------------------------------------------------------

def _brute_pairs(algebra, filtration, cfg: SearchConfig):
    group, field = algebra.group, algebra.field
    n = group.order
    d = filtration.dims[1] - (filtration.dims[2] if filtration.depth >= 2 else 0)
    if field.order != 2 or n > BRUTE_SIZE_LIMIT or d > 2:
        raise ValueError("brute_pairs oracle needs GF(2), |G| <= 8 and "
                         "dim I/I^2 <= 2")
    kernel = PackedKernel(algebra, filtration)
    elems = _tail_array(kernel, filtration.levels[1])  # all of I, lex order
    space = len(elems) ** 2
    pruned: dict = {}
    hist: dict = {}
    found: dict = {}
    examined = 0
    exhausted = True
    budget = _Budget(cfg)
    shard_idx, shard_cnt = cfg.shard
    stop = False

    def report_candidate(elements, labels):
        cand = BasisCandidate(algebra, elements, labels)
        rep = verify(cand, filtration=filtration)
        if not rep.verdict:
            pruned["verify_reject"] = pruned.get("verify_reject", 0) + 1
            return False
        canon = canonicalize(cand, filtration=filtration)
        found.setdefault(_canon_key(canon), canon)
        return True

    for ui in range(len(elems)):
        if ui % shard_cnt != shard_idx:
            continue
        if stop or not budget.allows(examined, len(elems)):
            exhausted = False
            break
        examined += len(elems)
        u = int(elems[ui])
        for vi in range(len(elems)):
            v = int(elems[vi])
            ws, why, depth = _packed_closure(kernel, [u, v])
            if ws is None:
                pruned[why] = pruned.get(why, 0) + 1
                hist[depth] = hist.get(depth, 0) + 1
                continue
            elements = [algebra.one()] + [kernel.element(w) for w in ws]
            labels = ["1"] + [f"w{i}" for i in range(len(ws))]
            if report_candidate(elements, labels) and not cfg.record_all:
                stop = True
                break

    if stop:
        exhausted = False
    return _make_report(algebra, cfg, space, examined, pruned, found,
                        exhausted, budget, hist)


# ---------------------------------------------------------------------------
# Entry points
# ---------------------------------------------------------------------------

def _make_report(algebra, cfg, space, examined, pruned, found, exhausted,
                 budget, hist):
    ordered = [found[k] for k in sorted(found)]
    return SearchReport(
        group=spec_literal(algebra.group.spec),
        field=algebra.field.to_literal(),
        strategy=cfg.strategy,
        shard=tuple(cfg.shard),
        space_size=space,
        examined=examined,
        pruned=pruned,
        found=ordered,
        exhausted=exhausted and not budget.hit,
        budget_hit=budget.hit,
        elapsed=time.perf_counter() - budget.start,
        depth_hist=hist,
    )


def search_fmb(algebra: GroupAlgebra, cfg: SearchConfig,
               filtration: Filtration | None = None) -> SearchReport:
    """Run a basis search over KG and return its report."""
    if filtration is None:
        filtration = compute_filtration(algebra)
    if cfg.strategy == "structured":
        return _structured(algebra, filtration, cfg)
    return _brute_pairs(algebra, filtration, cfg)


def _canon_key(candidate: BasisCandidate) -> bytes:
    return b"".join(e.key() for e in candidate.elements)


def canonicalize(candidate: BasisCandidate, *,
                 filtration: Filtration | None = None) -> BasisCandidate:
    """Canonical form of a basis: members sorted by (radical level,
    coefficient lexicographic order), labels regenerated positionally.
    Idempotent; identical sets canonicalize to identical serializations."""
    if filtration is None:
        filtration = compute_filtration(candidate.algebra)
    keyed = []
    for e in candidate.elements:
        lv = filtration.level(e)
        lv = -1 if lv is None else lv
        keyed.append((lv, tuple(int(c) for c in e.coeffs), e))
    keyed.sort(key=lambda t: (t[0], t[1]))
    elements = [t[2] for t in keyed]
    labels = [f"b{i}" for i in range(len(elements))]
    return BasisCandidate(candidate.algebra, elements, labels)


def oracle_equivalence(algebra: GroupAlgebra,
                       filtration: Filtration | None = None):
    """Compare the canonical result sets of the structured and brute_pairs
    strategies.  Returns (equal, structured_report, brute_report)."""
    if filtration is None:
        filtration = compute_filtration(algebra)
    cfg_s = SearchConfig(strategy="structured", record_all=True)
    cfg_b = SearchConfig(strategy="brute_pairs", record_all=True)
    rs = search_fmb(algebra, cfg_s, filtration)
    rb = search_fmb(algebra, cfg_b, filtration)
    ks = {_canon_key(c) for c in rs.found}
    kb = {_canon_key(c) for c in rb.found}
    return ks == kb and rs.exhausted and rb.exhausted, rs, rb


def merge_reports(reports) -> SearchReport:
    """Deterministic fold of shard reports (sum counters, union findings)."""
    reports = list(reports)
    first = reports[0]
    pruned: dict = {}
    hist: dict = {}
    found: dict = {}
    examined = 0
    exhausted = True
    budget_hit = False
    elapsed = 0.0
    for r in reports:
        examined += r.examined
        exhausted = exhausted and r.exhausted
        budget_hit = budget_hit or r.budget_hit
        elapsed = max(elapsed, r.elapsed)
        for k, v in r.pruned.items():
            pruned[k] = pruned.get(k, 0) + v
        for k, v in r.depth_hist.items():
            hist[k] = hist.get(k, 0) + v
        for c in r.found:
            found.setdefault(_canon_key(c), c)
    ordered = [found[k] for k in sorted(found)]
    return SearchReport(
        group=first.group, field=first.field, strategy=first.strategy,
        shard=(0, 1), space_size=first.space_size, examined=examined,
        pruned=pruned, found=ordered, exhausted=exhausted,
        budget_hit=budget_hit, elapsed=elapsed, depth_hist=hist)
