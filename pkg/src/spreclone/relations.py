"""S-relations: one subset of A^m per monoid element, stored as int bitsets.

Rows are numbered from 0 throughout this module.
"""
import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import tuples
from .errors import ArityMismatch, BadPartition, BadRowIndex, DomainMismatch, InvalidFamily

MAX_CELLS = 1 << 20


@dataclass(frozen=True)
class Relation:
    k: int
    arity: int
    mask: int

    @property
    def size(self):
        return self.k ** self.arity

    def __contains__(self, tup):
        return bool(self.mask >> tuples.encode(tup, self.k) & 1)

    def __len__(self):
        return tuples.popcount(self.mask)

    def tuples(self):
        idx = tuples.mask_indices(self.mask, self.size)
        return [tuple(int(a) for a in row) for row in tuples.decode_many(idx, self.k, self.arity)]

    def issubset(self, other):
        return self.mask & ~other.mask == 0


def relation(k, tups, arity=None):
    tups = [tuple(t) for t in tups]
    if arity is None:
        if not tups:
            raise ArityMismatch("arity needed for an empty relation")
        arity = len(tups[0])
    mask = 0
    for t in tups:
        if len(t) != arity:
            raise ArityMismatch(f"tuple {t} does not have arity {arity}")
        if any(not 0 <= a < k for a in t):
            raise ValueError(f"tuple {t} leaves the domain")
        mask |= 1 << tuples.encode(t, k)
    return Relation(k, arity, mask)


def full_mask(k, m):
    return (1 << k ** m) - 1


@dataclass(frozen=True)
class SRelation:
    k: int
    arity: int
    parts: tuple

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(int(p) for p in self.parts))
        if self.arity < 1:
            raise ArityMismatch("relations have arity at least 1")
        if self.k ** self.arity > MAX_CELLS:
            raise ArityMismatch(f"k^m = {self.k ** self.arity} exceeds {MAX_CELLS}")

    @property
    def size(self):
        return self.k ** self.arity

    def part(self, s):
        return Relation(self.k, self.arity, self.parts[s])

    def issubset(self, other):
        return all(a & ~b == 0 for a, b in zip(self.parts, other.parts))

    def total(self):
        return sum(tuples.popcount(p) for p in self.parts)

    def listing(self):
        """Columns r_1..r_n and their signum, part by part in index order."""
        cols, signum = [], []
        for s, p in enumerate(self.parts):
            for t in self.part(s).tuples():
                cols.append(t)
                signum.append(s)
        return cols, tuple(signum)

    def __repr__(self):
        return f"SRelation(k={self.k}, arity={self.arity}, parts={[self.part(s).tuples() for s in range(len(self.parts))]})"


def s_relation(k, parts, arity=None):
    """Build from one iterable of tuples per monoid element."""
    parts = [list(p) for p in parts]
    if arity is None:
        first = next((p[0] for p in parts if p), None)
        if first is None:
            raise ArityMismatch("arity needed for an empty S-relation")
        arity = len(first)
    return SRelation(k, arity, tuple(relation(k, p, arity).mask for p in parts))


def uniform(sigma, n):
    """The S-relation (sigma)_s with n parts."""
    return SRelation(sigma.k, sigma.arity, (sigma.mask,) * n)


def empty(k, arity, n):
    return SRelation(k, arity, (0,) * n)


def full(k, arity, n):
    return SRelation(k, arity, (full_mask(k, arity),) * n)


@lru_cache(maxsize=4096)
def _row_map(k, m, rows):
    return tuples.encode_rows(tuples.all_tuples(k, m)[:, list(rows)], k)


def project_mask(mask, k, m, rows):
    if mask == 0:
        return 0
    src = tuples.mask_indices(mask, k ** m)
    target = _row_map(k, m, tuple(rows))[src]
    return tuples.indices_to_mask(target, k ** len(rows))


def pr_rows(rho, rows):
    rows = tuple(rows)
    if not rows:
        raise BadRowIndex("need at least one row")
    for z in rows:
        if not 0 <= z < rho.arity:
            raise BadRowIndex(f"row {z} out of range for arity {rho.arity}")
    return SRelation(rho.k, len(rows),
                     tuple(project_mask(p, rho.k, rho.arity, rows) for p in rho.parts))


def zeta(rho):
    m = rho.arity
    if m == 1:
        return rho
    return pr_rows(rho, (m - 1,) + tuple(range(m - 1)))


def tau(rho):
    m = rho.arity
    if m == 1:
        return rho
    return pr_rows(rho, (1, 0) + tuple(range(2, m)))


def pr(rho):
    if rho.arity == 1:
        return rho
    return pr_rows(rho, range(1, rho.arity))


def _product_mask(a, b, k, m1, m2):
    if a == 0 or b == 0:
        return 0
    ia = tuples.mask_indices(a, k ** m1)
    ib = tuples.mask_indices(b, k ** m2)
    idx = (ia[:, None] * k ** m2 + ib[None, :]).ravel()
    return tuples.indices_to_mask(idx, k ** (m1 + m2))


def product(rho, other):
    if rho.k != other.k:
        raise DomainMismatch(f"domain sizes {rho.k} and {other.k} differ")
    return SRelation(rho.k, rho.arity + other.arity,
                     tuple(_product_mask(a, b, rho.k, rho.arity, other.arity)
                           for a, b in zip(rho.parts, other.parts)))


def meet(rho, other):
    if rho.k != other.k:
        raise DomainMismatch(f"domain sizes {rho.k} and {other.k} differ")
    if rho.arity != other.arity:
        return empty(rho.k, rho.arity, len(rho.parts))
    return SRelation(rho.k, rho.arity, tuple(a & b for a, b in zip(rho.parts, other.parts)))


def mu(rho, v, monoid):
    return SRelation(rho.k, rho.arity,
                     tuple(rho.parts[monoid.mul(s, v)] for s in range(monoid.size)))


def m_self_intersect(rho, family, monoid):
    if not family.valid or not monoid.check_m_condition(family):
        raise InvalidFamily("family violates s'M_s within M_{s's}")
    top = full_mask(rho.k, rho.arity)
    parts = []
    for members in family.sets:
        acc = top
        for x in members:
            acc &= rho.parts[x]
        parts.append(acc)
    return SRelation(rho.k, rho.arity, tuple(parts))


def self_intersect(rho, v, monoid):
    return m_self_intersect(rho, monoid.m_family(v), monoid)


# diagonals

@dataclass(frozen=True)
class DiagonalSpec:
    """Per monoid element a partition of the rows, or None for an empty part."""
    arity: int
    partitions: tuple

    def __post_init__(self):
        parts = []
        for eps in self.partitions:
            parts.append(None if eps is None else normalize_partition(eps, self.arity))
        object.__setattr__(self, "partitions", tuple(parts))


def normalize_partition(eps, m):
    blocks = [tuple(sorted(b)) for b in eps]
    seen = sorted(x for b in blocks for x in b)
    if seen != list(range(m)) or any(not b for b in blocks):
        raise BadPartition(f"{eps} is not a partition of rows 0..{m - 1}")
    return tuple(sorted(blocks))


@lru_cache(maxsize=4096)
def diagonal_mask(k, m, eps):
    t = tuples.all_tuples(k, m)
    ok = np.ones(len(t), dtype=bool)
    for block in eps:
        for x in block[1:]:
            ok &= t[:, x] == t[:, block[0]]
    return tuples.bits_to_mask(ok)


def make_diagonal(spec, k):
    return SRelation(k, spec.arity, tuple(0 if eps is None else diagonal_mask(k, spec.arity, eps)
                                          for eps in spec.partitions))


def delta_S(k, monoid, m=2):
    """All parts equal to the m-ary equality relation (default the binary diagonal)."""
    eq = diagonal_mask(k, m, (tuple(range(m)),))
    return SRelation(k, m, (eq,) * monoid.size)


def set_partitions(m):
    """Partitions of range(m) as sorted tuples of blocks, restricted growth order."""
    def rec(i, blocks):
        if i == m:
            yield tuple(sorted(tuple(b) for b in blocks))
            return
        for b in blocks:
            b.append(i)
            yield from rec(i + 1, blocks)
            b.pop()
        blocks.append([i])
        yield from rec(i + 1, blocks)
        blocks.pop()
    yield from rec(0, [])


@lru_cache(maxsize=256)
def diagonal_table(k, m):
    """mask -> partition (None for the empty relation) for every diagonal relation."""
    table = {0: None}
    for eps in set_partitions(m):
        table.setdefault(diagonal_mask(k, m, eps), eps)
    return table


def is_diagonal(mask, k, m):
    return mask in diagonal_table(k, m)


def is_s_diagonal(rho, monoid):
    if not all(is_diagonal(p, rho.k, rho.arity) for p in rho.parts):
        return False
    ideals = [monoid.left_ideal(s) for s in range(monoid.size)]
    for s in range(monoid.size):
        for t in range(monoid.size):
            if ideals[s] <= ideals[t] and rho.parts[s] & ~rho.parts[t]:
                return False
    return True


# operations applied to columns

def apply_op(f, columns):
    if len(columns) != f.arity:
        raise ArityMismatch(f"{f.arity}-ary op given {len(columns)} columns")
    m = len(columns[0])
    if any(len(c) != m for c in columns):
        raise ArityMismatch("columns differ in length")
    return tuple(f.values[tuples.encode(row, f.k)] for row in zip(*columns))


def pi_dual(rho, pi):
    pi = tuple(pi)
    if sorted(pi) != list(range(rho.k)):
        raise ValueError(f"{pi} is not a permutation of the domain")
    image = tuples.encode_rows(np.array(pi)[tuples.all_tuples(rho.k, rho.arity)], rho.k)
    parts = []
    for p in rho.parts:
        parts.append(tuples.indices_to_mask(image[tuples.mask_indices(p, rho.size)], rho.size)
                     if p else 0)
    return SRelation(rho.k, rho.arity, tuple(parts))


def h_map(rho, h):
    parts = [0] * len(rho.parts)
    for s, p in enumerate(rho.parts):
        parts[h[s]] = p
    return SRelation(rho.k, rho.arity, tuple(parts))


def all_s_relations(k, m, n):
    """Every m-ary S-relation with n parts, first part most significant."""
    size = 1 << k ** m
    for parts in itertools.product(range(size), repeat=n):
        yield SRelation(k, m, parts)


def random_s_relation(rng, k, m, n, density=0.5):
    """Random S-relation with n parts from a random.Random."""
    size = k ** m
    return SRelation(k, m, tuple(sum(1 << i for i in range(size) if rng.random() < density)
                                 for _ in range(n)))


def describe(rho, monoid):
    parts = []
    for s in range(monoid.size):
        body = " ".join("".join(str(a) for a in t) for t in rho.part(s).tuples())
        parts.append(f"{monoid.name(s)}: {{{body}}}")
    return f"arity {rho.arity}  " + "  ".join(parts)
