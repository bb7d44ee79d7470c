"""Signed operations and the preclone primitives zeta, tau, nabla, delta, compose.

An S-operation is stored as its value table in codec order together with a
signum, a tuple of monoid element indices, one per argument.
"""
import itertools
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import tuples
from .errors import ArityMismatch, BadSignum, CapExceeded, DomainMismatch

ARITY_CAP = 6


@dataclass(frozen=True)
class SignedOp:
    k: int
    signum: tuple
    values: bytes

    def __post_init__(self):
        signum = tuple(int(s) for s in self.signum)
        values = bytes(bytearray(self.values)) if not isinstance(self.values, bytes) else self.values
        if not signum:
            raise BadSignum("signum must have length at least 1")
        if self.k < 1:
            raise ValueError("domain size must be positive")
        if len(values) != self.k ** len(signum):
            raise ArityMismatch(f"table has {len(values)} entries, expected "
                                f"{self.k ** len(signum)}")
        if values and max(values) >= self.k:
            raise ValueError("table entry outside the domain")
        object.__setattr__(self, "signum", signum)
        object.__setattr__(self, "values", values)

    @property
    def arity(self):
        return len(self.signum)

    @property
    def domain_size(self):
        return self.k

    @cached_property
    def arr(self):
        a = np.frombuffer(self.values, dtype=np.uint8).astype(np.int64)
        a.setflags(write=False)
        return a

    @property
    def code(self):
        """The value table read as one base-k number."""
        return tuples.encode(self.values, self.k)

    def __call__(self, *args):
        return evaluate(self, args)

    def __repr__(self):
        return f"SignedOp(k={self.k}, signum={self.signum}, values={list(self.values)})"


def from_values(k, signum, values):
    return SignedOp(k, tuple(signum), bytes(int(v) for v in values))


def from_function(k, signum, fn):
    n = len(signum)
    if n > ARITY_CAP:
        raise CapExceeded("operation arity", n, ARITY_CAP)
    return from_values(k, signum, (fn(*t) for t in itertools.product(range(k), repeat=n)))


def from_code(k, signum, code):
    return SignedOp(k, tuple(signum), bytes(tuples.decode(code, k, k ** len(signum))))


def identity(k, s):
    return SignedOp(k, (s,), bytes(range(k)))


def constant(k, c, signum):
    return SignedOp(k, tuple(signum), bytes([c]) * k ** len(signum))


def sheffer(k, unit):
    """max(x, y) + 1 mod k, with signum (e, e); NOR when k = 2."""
    return from_function(k, (unit, unit), lambda x, y: (max(x, y) + 1) % k)


def projection(k, signum, i, monoid):
    """The projection onto argument i (0-based); requires signum[i] = e."""
    signum = tuple(signum)
    if not 0 <= i < len(signum):
        raise ArityMismatch(f"position {i} out of range")
    if signum[i] != monoid.unit:
        raise BadSignum("a trivial projection needs the unit at its essential position")
    return _from_array(k, signum, tuples.all_tuples(k, len(signum))[:, i])


def is_projection_table(f, i):
    return bool(np.array_equal(f.arr, tuples.all_tuples(f.k, f.arity)[:, i]))


def is_trivial_projection(f, monoid):
    return any(f.signum[i] == monoid.unit and is_projection_table(f, i)
               for i in range(f.arity))


def evaluate(f, args):
    if len(args) != f.arity:
        raise ArityMismatch(f"expected {f.arity} arguments, got {len(args)}")
    if any(not 0 <= a < f.k for a in args):
        raise ValueError("argument outside the domain")
    return f.values[tuples.encode(args, f.k)]


def _from_array(k, signum, arr):
    return SignedOp(k, tuple(signum), np.asarray(arr, dtype=np.uint8).tobytes())


def _rewire(f, new_arity, source, signum):
    """g(x_0..x_{N-1}) = f(x_source[0], ..., x_source[n-1])."""
    t = tuples.all_tuples(f.k, new_arity)
    idx = tuples.encode_rows(t[:, list(source)], f.k)
    return _from_array(f.k, signum, f.arr[idx])


def _check_cap(n):
    if n > ARITY_CAP:
        raise CapExceeded("operation arity", n, ARITY_CAP)


def zeta(f):
    n = f.arity
    if n == 1:
        return f
    s = f.signum
    return _rewire(f, n, list(range(1, n)) + [0], (s[-1],) + s[:-1])


def tau(f):
    n = f.arity
    if n == 1:
        return f
    s = f.signum
    return _rewire(f, n, [1, 0] + list(range(2, n)), (s[1], s[0]) + s[2:])


def nabla(s, f):
    _check_cap(f.arity + 1)
    return _rewire(f, f.arity + 1, range(1, f.arity + 1), (s,) + f.signum)


def delta(f):
    n = f.arity
    if n < 2 or f.signum[0] != f.signum[1]:
        return f
    return _rewire(f, n - 1, [0] + list(range(n - 1)), f.signum[1:])


def compose(f, g, monoid):
    """(f o g)(x_1..x_{m+n-1}) = f(g(x_1..x_m), x_{m+1}, ...)."""
    if f.k != g.k:
        raise DomainMismatch(f"domain sizes {f.k} and {g.k} differ")
    k, n, m = f.k, f.arity, g.arity
    total = m + n - 1
    _check_cap(total)
    s1 = f.signum[0]
    signum = tuple(monoid.mul(t, s1) for t in g.signum) + f.signum[1:]
    t = tuples.all_tuples(k, total)
    inner = g.arr[tuples.encode_rows(t[:, :m], k)]
    args = np.column_stack([inner, t[:, m:]])
    return _from_array(k, signum, f.arr[tuples.encode_rows(args, k)])


def zeta_power(f, r):
    for _ in range(r % f.arity if f.arity else 0):
        f = zeta(f)
    return f


def swap_adjacent(f, r):
    """Swap arguments r and r+1 (0-based), using only zeta and tau."""
    n = f.arity
    if not 0 <= r < n - 1:
        raise ArityMismatch(f"cannot swap positions {r}, {r + 1} of a {n}-ary op")
    return zeta_power(tau(zeta_power(f, n - r)), r)


def permute_args(f, order):
    """Rearrange arguments so that new argument i is old argument order[i].

    Built from adjacent swaps, hence from zeta and tau only.
    """
    order = list(order)
    if sorted(order) != list(range(f.arity)):
        raise ArityMismatch("order must be a permutation of the arguments")
    current = list(range(f.arity))
    for i in range(len(order)):
        j = current.index(order[i])
        while j > i:
            f = swap_adjacent(f, j - 1)
            current[j - 1], current[j] = current[j], current[j - 1]
            j -= 1
    return f


def compose_at(f, g, p, monoid):
    """Substitute g into argument p of f; the new arguments take g's place."""
    n = f.arity
    if not 0 <= p < n:
        raise ArityMismatch(f"position {p} out of range")
    h = compose(zeta_power(f, n - p), g, monoid)
    return zeta_power(h, p)


def general_compose(f, gs, monoid):
    """f(g_1(X_1), ..., g_n(X_n)) with disjoint variable blocks X_i."""
    if len(gs) != f.arity:
        raise ArityMismatch(f"need {f.arity} inner operations, got {len(gs)}")
    h, pos = f, 0
    for g in gs:
        h = compose_at(h, g, pos, monoid)
        pos += g.arity
    return h


def is_minor(f, g):
    """Is there a map sigma with f(a) = g(a_sigma(1), ..., a_sigma(m))?"""
    if f.k != g.k:
        return False
    n, m = f.arity, g.arity
    t = tuples.all_tuples(f.k, n)
    for sigma in itertools.product(range(n), repeat=m):
        if np.array_equal(g.arr[tuples.encode_rows(t[:, list(sigma)], f.k)], f.arr):
            return True
    return False


def _check_perm(p, k):
    if sorted(p) != list(range(k)):
        raise ValueError(f"{p} is not a permutation of the domain")


def pi_dual(f, pi):
    """x -> pi(f(pi^-1 x)), signum kept."""
    pi = tuple(pi)
    _check_perm(pi, f.k)
    inv = np.argsort(pi)
    pi_arr = np.array(pi)
    args = inv[tuples.all_tuples(f.k, f.arity)]
    return _from_array(f.k, f.signum, pi_arr[f.arr[tuples.encode_rows(args, f.k)]])


def h_map(f, h):
    return SignedOp(f.k, tuple(h[s] for s in f.signum), f.values)


def canonical_key(f):
    return bytes([f.k, f.arity]) + bytes(f.signum) + f.values


def from_key(key):
    k, n = key[0], key[1]
    return SignedOp(k, tuple(key[2:2 + n]), bytes(key[2 + n:]))


def sort_key(f):
    """Order by arity, then signum, then table."""
    return (f.arity, f.signum, f.values)


def all_ops(k, n, monoid):
    """Every n-ary signed op, in (signum, table) order."""
    for signum in itertools.product(range(monoid.size), repeat=n):
        for vals in itertools.product(range(k), repeat=k ** n):
            yield SignedOp(k, signum, bytes(vals))


def random_op(rng, k, monoid, n):
    """A uniformly random n-ary signed op drawn from a random.Random."""
    signum = tuple(rng.randrange(monoid.size) for _ in range(n))
    return SignedOp(k, signum, bytes(rng.randrange(k) for _ in range(k ** n)))


def describe(f, monoid):
    return f"[{monoid.format_signum(f.signum)}] " + "".join(str(v) for v in f.values)
