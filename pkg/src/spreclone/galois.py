"""Preservation, the operators SPol and SInv on bounded fragments, chi, Gamma
and the membership test for generated preclones."""
import itertools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import tuples
from .errors import CapExceeded, DomainMismatch
from .finite_monoid import builtin
from .relations import Relation, SRelation, all_s_relations
from .signed_ops import SignedOp, compose, delta, is_minor, nabla, projection, tau, zeta

WORK = 1 << 21
TABLE_LIMIT = 1 << 20


def default_op_cap(k):
    n = 1
    while k ** (n + 1) <= 16:
        n += 1
    return n


def default_rel_cap(k):
    return k ** default_op_cap(k)


def threads():
    try:
        return max(1, int(os.environ.get("SPRECLONE_THREADS", "1")))
    except ValueError:
        return 1


class Fragment(tuple):
    """A bounded result: a tuple of members plus the caps it was computed at."""

    def __new__(cls, items, caps):
        obj = super().__new__(cls, items)
        obj.caps = dict(caps)
        return obj


# image computation

def _combo_chunks(idx_lists, k, m, n):
    """Yield (selectors, rows) for column choices, last argument fastest.

    rows[c, r] is the index into an n-ary table of the r-th row of the c-th
    choice of columns.
    """
    sizes = [len(ix) for ix in idx_lists]
    total = math.prod(sizes)
    if total == 0:
        return
    digits = [tuples.decode_many(ix, k, m) for ix in idx_lists]
    pw = tuples.powers(k, n)
    chunk = max(1, WORK // max(m * n, 1))
    for start in range(0, total, chunk):
        rem = np.arange(start, min(start + chunk, total), dtype=np.int64)
        rows = np.zeros((len(rem), m), dtype=np.int64)
        sel = [None] * n
        for i in range(n - 1, -1, -1):
            rem, sel[i] = np.divmod(rem, sizes[i])
            rows += digits[i][sel[i]] * pw[i]
        yield sel, rows


@lru_cache(maxsize=1 << 16)
def image(f, masks, m):
    """f(P_1, ..., P_n) as a bitset over A^m, for bitsets P_i."""
    if any(p == 0 for p in masks):
        return 0
    size = f.k ** m
    idx_lists = [tuples.mask_indices(p, size) for p in masks]
    out = np.zeros(size, dtype=bool)
    for _, rows in _combo_chunks(idx_lists, f.k, m, f.arity):
        out[tuples.encode_rows(f.arr[rows], f.k)] = True
    return tuples.bits_to_mask(out)


def _first_violation(f, masks, target, m):
    if any(p == 0 for p in masks):
        return None
    size = f.k ** m
    idx_lists = [tuples.mask_indices(p, size) for p in masks]
    allowed = tuples.mask_to_bits(target, size)
    for sel, rows in _combo_chunks(idx_lists, f.k, m, f.arity):
        res = f.arr[rows]
        bad = np.flatnonzero(~allowed[tuples.encode_rows(res, f.k)])
        if len(bad):
            c = bad[0]
            cols = [tuple(int(x) for x in tuples.decode(int(idx_lists[i][sel[i][c]]), f.k, m))
                    for i in range(f.arity)]
            return cols, tuple(int(x) for x in res[c])
    return None


@dataclass(frozen=True)
class Witness:
    s: int
    columns: tuple
    image: tuple


def _check_domains(f, k):
    if f.k != k:
        raise DomainMismatch(f"operation over {f.k} elements, relation over {k}")


def preserves(f, rho, monoid, witness=False):
    """Does f S-preserve rho?  With witness=True returns (bool, Witness or None)."""
    _check_domains(f, rho.k)
    for s in range(monoid.size):
        masks = tuple(rho.parts[monoid.mul(si, s)] for si in f.signum)
        if witness:
            bad = _first_violation(f, masks, rho.parts[s], rho.arity)
            if bad is not None:
                return False, Witness(s, tuple(bad[0]), bad[1])
        elif image(f, masks, rho.arity) & ~rho.parts[s]:
            return False
    return (True, None) if witness else True


def preserves_classical(f, sigma):
    _check_domains(f, sigma.k)
    return image(f, (sigma.mask,) * f.arity, sigma.arity) & ~sigma.mask == 0


@dataclass(frozen=True)
class RelationPair:
    source: Relation
    target: Relation

    def __post_init__(self):
        if self.source.arity != self.target.arity or self.source.k != self.target.k:
            raise DomainMismatch("pair components must share domain and arity")


def preserves_pair(f, pair):
    _check_domains(f, pair.source.k)
    return image(f, (pair.source.mask,) * f.arity, pair.source.arity) & ~pair.target.mask == 0


# chi and Gamma

@dataclass(frozen=True)
class ChiRelation:
    relation: SRelation
    columns: tuple
    signum: tuple


def chi(signum, k, monoid, rel_cap=None):
    signum = tuple(signum)
    n = len(signum)
    cap = default_rel_cap(k) if rel_cap is None else rel_cap
    if k ** n > cap:
        raise CapExceeded("relation arity of chi", k ** n, cap)
    cols = tuples.all_tuples(k, n).T
    parts = [0] * monoid.size
    columns = []
    for i, s in enumerate(signum):
        col = tuple(int(x) for x in cols[i])
        columns.append(col)
        parts[s] |= 1 << tuples.encode(col, k)
    return ChiRelation(SRelation(k, k ** n, tuple(parts)), tuple(columns), signum)


@dataclass
class ClosureReport:
    result: object
    iterations: int
    saturated: bool = True
    caps: dict = field(default_factory=dict)


def gamma_closure(F, rho, monoid, method="jacobi"):
    """Least S-relation above rho invariant under every op in F.

    Each round only looks at column choices that use at least one tuple added
    in the previous round.  With method="gauss-seidel" new tuples become
    visible within the same round.
    """
    F = list(F)
    for f in F:
        _check_domains(f, rho.k)
    if method not in ("jacobi", "gauss-seidel"):
        raise ValueError(f"unknown method {method!r}")
    seidel = method == "gauss-seidel"
    m, n_s = rho.arity, monoid.size
    mul = monoid.table
    parts = list(rho.parts)
    fresh = list(parts)
    rounds = 0
    while any(fresh):
        base = parts if seidel else list(parts)
        added = [0] * n_s
        for f in F:
            for s in range(n_s):
                src = [mul[si][s] for si in f.signum]
                for j, x in enumerate(src):
                    if not fresh[x]:
                        continue
                    masks = tuple(fresh[x] if i == j else base[src[i]] for i in range(len(src)))
                    new = image(f, masks, m) & ~base[s]
                    if new:
                        added[s] |= new
                        if seidel:
                            base[s] |= new
        if not any(added):
            break
        rounds += 1
        if not seidel:
            parts = [p | a for p, a in zip(parts, added)]
        fresh = added
    return ClosureReport(SRelation(rho.k, m, tuple(parts)), rounds)


def gamma(F, rho, monoid):
    return gamma_closure(F, rho, monoid).result


# membership

@dataclass(frozen=True)
class Certificate:
    violated_s: int
    columns: tuple
    image: tuple


def gamma_chi(F, signum, k, monoid, cache=None, rel_cap=None):
    signum = tuple(signum)
    if cache is not None and signum in cache:
        return cache[signum]
    rel = gamma_closure(F, chi(signum, k, monoid, rel_cap).relation, monoid).result
    if cache is not None:
        cache[signum] = rel
    return rel


def membership(g, F, monoid, certificate=False, cache=None, full_check=False, rel_cap=None):
    """Is g in the preclone generated by F?

    g(kappa_1..kappa_n), read as a column, is g's value table, so g preserves
    Gamma_F(chi) exactly when its table lies in the e-part.  full_check
    also runs the complete preservation test and insists both agree.
    """
    k = g.k
    for f in F:
        _check_domains(f, k)
    rel = gamma_chi(F, g.signum, k, monoid, cache, rel_cap)
    member = bool(rel.parts[monoid.unit] >> g.code & 1)
    if full_check and preserves(g, rel, monoid) != member:
        raise AssertionError("fast membership disagrees with preservation of Gamma(chi)")
    if not certificate:
        return member
    if member:
        return True, None
    cols = tuple(tuple(int(x) for x in c) for c in tuples.all_tuples(k, g.arity).T)
    return False, Certificate(monoid.unit, cols, tuple(g.values))


def underlying_clone_membership(f0, F, k=None):
    """Classical clone membership of f0 in the clone generated by the underlying ops of F."""
    k = f0.k if k is None else k
    triv = builtin("trivial")
    plain = [SignedOp(f.k, (0,) * f.arity, f.values) for f in F]
    g = SignedOp(k, (0,) * f0.arity, f0.values)
    return membership(g, plain, triv)


# SPol and SInv

def _spol_signum(Q, k, n, signum, monoid, tables):
    alive = np.arange(len(tables))
    for rho in Q:
        m = rho.arity
        for s in range(monoid.size):
            masks = [rho.parts[monoid.mul(si, s)] for si in signum]
            if any(p == 0 for p in masks):
                continue
            allowed = tuples.mask_to_bits(rho.parts[s], k ** m)
            idx_lists = [tuples.mask_indices(p, k ** m) for p in masks]
            for _, rows in _combo_chunks(idx_lists, k, m, n):
                step = max(1, WORK // max(len(alive) * m, 1))
                for c0 in range(0, len(rows), step):
                    sub = rows[c0:c0 + step]
                    vals = tables[alive][:, sub.ravel()].reshape(len(alive), len(sub), m)
                    ok = allowed[tuples.encode_rows(vals, k)].all(axis=1)
                    alive = alive[ok]
                    if len(alive) == 0:
                        return alive
    return alive


def spol(Q, op_cap, monoid, k):
    """All signed ops of arity <= op_cap preserving every member of Q.

    Ordered by arity, then signum, then table.
    """
    Q = list(Q)
    for rho in Q:
        if rho.k != k:
            raise DomainMismatch(f"relation over {rho.k} elements, expected {k}")
    out = []
    for n in range(1, op_cap + 1):
        if k ** (k ** n) > TABLE_LIMIT:
            raise CapExceeded("tables per signum in spol", k ** (k ** n), TABLE_LIMIT)
        tables = tuples.all_tuples(k, k ** n).astype(np.uint8)
        signa = list(itertools.product(range(monoid.size), repeat=n))
        work = lambda lam: _spol_signum(Q, k, n, lam, monoid, tables)
        if threads() > 1:
            with ThreadPoolExecutor(threads()) as pool:
                results = list(pool.map(work, signa))
        else:
            results = [work(lam) for lam in signa]
        for lam, alive in zip(signa, results):
            out.extend(SignedOp(k, lam, tables[i].tobytes()) for i in alive)
    return Fragment(out, {"op_arity": op_cap})


def _closed_sets(closure, n_cells):
    """Every closed set of a closure operator on range(n_cells), as int bitmasks
    (Ganter's NextClosure)."""
    full = (1 << n_cells) - 1
    a = closure(0)
    found = [a]
    while a != full:
        for i in range(n_cells - 1, -1, -1):
            bit = 1 << i
            if a & bit:
                continue
            low = a & (bit - 1)
            b = closure(low | bit)
            if b & (bit - 1) == low:
                a = b
                found.append(a)
                break
        else:
            break
    return found


def sinv(F, rel_cap, monoid, k, method="auto", limit=1 << 16):
    """All S-relations of arity <= rel_cap invariant under every op in F.

    method "filter" tests every candidate; "closure" enumerates the fixed
    points of Gamma_F directly, which is the same set.
    """
    F = list(F)
    for f in F:
        _check_domains(f, k)
    out = []
    n_s = monoid.size
    for m in range(1, rel_cap + 1):
        size = k ** m
        count = 2 ** (size * n_s)
        how = method
        if how == "auto":
            how = "filter" if count <= 4096 else "closure"
        if how == "filter":
            if count > TABLE_LIMIT:
                raise CapExceeded("candidate S-relations in sinv", count, TABLE_LIMIT)
            found = [rho for rho in all_s_relations(k, m, n_s)
                     if all(preserves(f, rho, monoid) for f in F)]
        elif how == "closure":
            if size * n_s > 4096:
                raise CapExceeded("cells per S-relation in sinv", size * n_s, 4096)
            part_mask = (1 << size) - 1

            def split(x):
                return SRelation(k, m, tuple((x >> (s * size)) & part_mask for s in range(n_s)))

            def closure(x):
                rel = gamma_closure(F, split(x), monoid).result
                return sum(p << (s * size) for s, p in enumerate(rel.parts))

            found = []
            for x in _closed_sets(closure, size * n_s):
                found.append(split(x))
                if len(found) > limit:
                    raise CapExceeded("invariant S-relations in sinv", len(found), limit)
            found.sort(key=lambda r: r.parts)
        else:
            raise ValueError(f"unknown method {method!r}")
        out.extend(found)
    return Fragment(out, {"rel_arity": rel_cap})


# parts of fragments

def s_part(F, s):
    return [f for f in F if set(f.signum) == {s}]


def minors(g, n):
    """All n-ary minors of g with signum (s, ..., s) where s is g's only signum entry."""
    t = tuples.all_tuples(g.k, n)
    s = g.signum[0]
    seen = set()
    for sigma in itertools.product(range(n), repeat=g.arity):
        vals = g.arr[tuples.encode_rows(t[:, list(sigma)], g.k)].astype(np.uint8).tobytes()
        if vals not in seen:
            seen.add(vals)
            yield SignedOp(g.k, (s,) * n, vals)


def is_minor_closed(ops, cap):
    """Within arity cap, is every minor of a member again a member?"""
    ops = list(ops)
    have = {(f.signum, f.values) for f in ops}
    for g in ops:
        for n in range(1, cap + 1):
            for h in minors(g, n):
                if (h.signum, h.values) not in have:
                    return False
    return True


def e_part_is_clone(F, cap, monoid):
    """Does the e-part, restricted to arity <= cap, contain the projections and
    stay closed under composition and identification within the cap?"""
    e = monoid.unit
    part = [f for f in s_part(F, e) if f.arity <= cap]
    k = next((f.k for f in F), None)
    if k is None:
        return False
    have = {(f.signum, f.values) for f in part}
    for n in range(1, cap + 1):
        for i in range(n):
            p = projection(k, (e,) * n, i, monoid)
            if (p.signum, p.values) not in have:
                return False
    for f in part:
        unary = [zeta(f), tau(f), delta(f)]
        if f.arity < cap:
            unary.append(nabla(e, f))
        if any((h.signum, h.values) not in have for h in unary):
            return False
        for g in part:
            if f.arity + g.arity - 1 <= cap:
                h = compose(f, g, monoid)
                if (h.signum, h.values) not in have:
                    return False
    return True


__all__ = [
    "ChiRelation", "Certificate", "ClosureReport", "Fragment", "RelationPair", "Witness",
    "chi", "default_op_cap", "default_rel_cap", "e_part_is_clone", "gamma", "gamma_chi",
    "gamma_closure", "image", "is_minor", "is_minor_closed", "membership", "minors",
    "preserves", "preserves_classical", "preserves_pair", "s_part", "sinv", "spol",
    "underlying_clone_membership",
]
