"""Generation of preclones and relational clones from generators, the
S-diagonals, and desk-scale checks of the two Galois closure theorems."""
import itertools
from collections import defaultdict, deque
from dataclasses import dataclass, field

import numpy as np

from . import relations as R
from . import signed_ops as so
from . import tuples
from .errors import CapExceeded, DomainMismatch, Unsaturated
from .galois import Fragment, _combo_chunks, gamma_chi, sinv, spol


def multiplicity(monoid):
    """max over p, t of #{u : u p = t}; 1 exactly when S is a group."""
    n = monoid.size
    return max(sum(1 for u in range(n) if monoid.mul(u, p) == t)
               for p in range(n) for t in range(n))


@dataclass
class PrecloneFragment:
    k: int
    monoid: object
    arity_cap: int
    slack: int
    members: dict                 # signum -> set of table codes
    saturated_arities: tuple
    method: str = "superposition"

    def __contains__(self, f):
        return f.k == self.k and f.code in self.members.get(f.signum, ())

    def ops(self, max_arity=None):
        top = self.arity_cap if max_arity is None else max_arity
        out = []
        for lam in sorted(self.members, key=lambda l: (len(l), l)):
            if len(lam) <= top:
                out.extend(so.from_code(self.k, lam, c) for c in sorted(self.members[lam]))
        return out

    def count(self, arity):
        return sum(len(v) for lam, v in self.members.items() if len(lam) == arity)

    @property
    def caps(self):
        return {"op_arity": self.arity_cap, "slack": self.slack}


def default_op_slack(monoid, k, arity_cap):
    """Extra frame variables used when none are requested.

    Groups need none.  Otherwise add up to two, but never push the frame past
    the largest arity whose tables have at most 8 rows, since the lifted
    member sets grow like k**(k**frame).
    """
    if monoid.is_group:
        return 0
    frame = 1
    while k ** (frame + 1) <= 8:
        frame += 1
    return max(0, min(2, frame - arity_cap))


def _code_limit(k, n):
    # codes are base-k numbers with k**n digits; keep them inside int64
    return k ** n * np.log2(k) <= 62


def _projection_codes(k, a, i):
    return int(tuples.encode_rows(tuples.all_tuples(k, a)[:, i], k))


def preclone_generate(F, arity_cap, monoid, k, slack=None, method="superposition",
                      max_members=1 << 20):
    """Bounded fragment of the preclone generated by F.

    method "superposition" builds members f(g_1 o phi_1, ..., g_n o phi_n)
    where the phi_i map the variables of earlier members into a frame of at
    most arity_cap + slack variables, with signa matching as composition
    requires.  Arity a is complete once a * multiplicity(S) fits in the frame;
    for groups that holds with slack 0.

    method "primitive" applies zeta, tau, nabla, delta and compose literally
    to F and the identity, discarding anything above the frame.
    """
    F = list(F)
    for f in F:
        if f.k != k:
            raise DomainMismatch(f"operation over {f.k} elements, expected {k}")
    if slack is None:
        slack = default_op_slack(monoid, k, arity_cap)
    top = arity_cap + slack
    if not _code_limit(k, top):
        raise CapExceeded("frame arity for preclone generation", top,
                          max(n for n in range(1, top + 1) if _code_limit(k, n)))
    if method == "superposition":
        members = _superpose(F, top, monoid, k, max_members)
        mult = multiplicity(monoid)
        saturated = [a for a in range(1, arity_cap + 1) if a * mult <= top]
    elif method == "primitive":
        members = _primitive(F, top, monoid, k, max_members)
        saturated = []
    else:
        raise ValueError(f"unknown method {method!r}")
    # a level holding every op is complete whatever the engine
    for a in range(1, arity_cap + 1):
        if a not in saturated and all(len(members.get(lam, ())) == k ** (k ** a)
                                      for lam in itertools.product(range(monoid.size), repeat=a)):
            saturated.append(a)
    members = {lam: frozenset(v) for lam, v in members.items() if len(lam) <= arity_cap and v}
    return PrecloneFragment(k, monoid, arity_cap, slack, members, tuple(sorted(saturated)), method)


def _superpose(F, top, monoid, k, max_members):
    n_s = monoid.size
    outer = sorted({s for f in F for s in f.signum})
    grids = {a: tuples.all_tuples(k, a) for a in range(1, top + 1)}
    members = defaultdict(set)
    lifted = defaultdict(set)
    fresh = defaultdict(set)
    for a in range(1, top + 1):
        for lam in itertools.product(range(n_s), repeat=a):
            for i in range(a):
                if lam[i] == monoid.unit:
                    fresh[lam].add(_projection_codes(k, a, i))
    total = 0
    while fresh:
        for lam, codes in fresh.items():
            members[lam] |= codes
            total += len(codes)
        if total > max_members:
            raise CapExceeded("members in preclone generation", total, max_members)
        new_lifted = _lift(fresh, outer, top, grids, monoid, k)
        for key, codes in new_lifted.items():
            codes -= lifted[key]
        new_lifted = {key: v for key, v in new_lifted.items() if v}
        for key, codes in new_lifted.items():
            lifted[key] |= codes
        produced = defaultdict(set)
        for f in F:
            for a in range(1, top + 1):
                for lam in itertools.product(range(n_s), repeat=a):
                    keys = [(a, s, lam) for s in f.signum]
                    if not any(key in new_lifted for key in keys):
                        continue
                    if not all(lifted.get(key) for key in keys):
                        continue
                    every = [np.fromiter(lifted[key], dtype=np.int64) for key in keys]
                    for j, key in enumerate(keys):
                        if key not in new_lifted:
                            continue
                        lists = list(every)
                        lists[j] = np.fromiter(new_lifted[key], dtype=np.int64)
                        for _, rows in _combo_chunks(lists, k, k ** a, f.arity):
                            codes = np.unique(tuples.encode_rows(f.arr[rows], k))
                            produced[lam].update(codes.tolist())
        fresh = {}
        for lam, codes in produced.items():
            codes -= members[lam]
            if codes:
                fresh[lam] = codes
    return members


def _lift(fresh, outer, top, grids, monoid, k):
    """Lifted copies g o phi of new members, keyed by (frame, outer signum, frame signum)."""
    n_s = monoid.size
    out = defaultdict(set)
    for mu_sig, codes in fresh.items():
        b = len(mu_sig)
        codes = np.fromiter(codes, dtype=np.int64)
        digits = tuples.decode_many(codes, k, k ** b)
        for a in range(1, top + 1):
            grid = grids[a]
            for phi in itertools.product(range(a), repeat=b):
                idx = tuples.encode_rows(grid[:, list(phi)], k)
                lifted_codes = None
                for t in outer:
                    want = [None] * a
                    ok = True
                    for p, x in enumerate(phi):
                        val = monoid.mul(mu_sig[p], t)
                        if want[x] is None:
                            want[x] = val
                        elif want[x] != val:
                            ok = False
                            break
                    if not ok:
                        continue
                    if lifted_codes is None:
                        lifted_codes = set(tuples.encode_rows(digits[:, idx], k).tolist())
                    free = [x for x in range(a) if want[x] is None]
                    for fill in itertools.product(range(n_s), repeat=len(free)):
                        lam = list(want)
                        for x, v in zip(free, fill):
                            lam[x] = v
                        out[(a, t, tuple(lam))] |= lifted_codes
    return out


def _primitive(F, top, monoid, k, max_members):
    seen = {}
    queue = deque()

    def add(f):
        if f.arity <= top and (f.signum, f.values) not in seen:
            seen[(f.signum, f.values)] = f
            queue.append(f)
            if len(seen) > max_members:
                raise CapExceeded("members in preclone generation", len(seen), max_members)

    add(so.identity(k, monoid.unit))
    for f in F:
        add(f)
    while queue:
        f = queue.popleft()
        add(so.zeta(f))
        add(so.tau(f))
        add(so.delta(f))
        if f.arity < top:
            for s in range(monoid.size):
                add(so.nabla(s, f))
        for g in list(seen.values()):
            if f.arity + g.arity - 1 <= top:
                add(so.compose(f, g, monoid))
                add(so.compose(g, f, monoid))
    members = defaultdict(set)
    for f in seen.values():
        members[f.signum].add(f.code)
    return members


# relational side

@dataclass
class RelCloneFragment:
    k: int
    monoid: object
    arity_cap: int
    slack: int
    members: tuple
    saturated: bool

    def __contains__(self, rho):
        return rho in self._set

    @property
    def _set(self):
        if not hasattr(self, "_cached"):
            self._cached = frozenset(self.members)
        return self._cached

    def at_arity(self, m):
        return [r for r in self.members if r.arity == m]

    @property
    def caps(self):
        return {"rel_arity": self.arity_cap, "slack": self.slack}


def relclone_generate(Q, arity_cap, monoid, k, slack=None, max_members=1 << 18):
    """Bounded fragment of the S-relational clone generated by Q.

    Closes delta^S and Q under zeta, tau, pr, meet, mu_v, the v-self-
    intersections and products, keeping relations up to arity_cap + slack.
    """
    Q = list(Q)
    for rho in Q:
        if rho.k != k:
            raise DomainMismatch(f"relation over {rho.k} elements, expected {k}")
    if slack is None:
        slack = arity_cap
    top = arity_cap + slack
    n_s = monoid.size
    families = [monoid.m_family(v) for v in range(n_s)]
    known = defaultdict(dict)   # arity -> parts -> None, insertion ordered
    queue = deque()

    def add(m, parts):
        if m <= top and parts not in known[m]:
            known[m][parts] = None
            queue.append((m, parts))
            if sum(len(v) for v in known.values()) > max_members:
                raise CapExceeded("members in relational clone generation",
                                  sum(len(v) for v in known.values()), max_members)

    for rho in [R.delta_S(k, monoid)] + Q:
        add(rho.arity, rho.parts)
    empties = set()
    while queue:
        m, parts = queue.popleft()
        rho = R.SRelation(k, m, parts)
        for op in (R.zeta, R.tau, R.pr):
            r = op(rho)
            add(r.arity, r.parts)
        for v in range(n_s):
            add(m, tuple(parts[monoid.mul(s, v)] for s in range(n_s)))
            add(m, R.m_self_intersect(rho, families[v], monoid).parts)
        for other in list(known[m]):
            add(m, tuple(a & b for a, b in zip(parts, other)))
        for m2 in list(known):
            if m2 != m and known[m2]:
                for x in (m, m2):
                    if x not in empties:
                        empties.add(x)
                        add(x, (0,) * n_s)
            if m + m2 <= top:
                for other in list(known[m2]):
                    o = R.SRelation(k, m2, other)
                    add(m + m2, R.product(rho, o).parts)
                    add(m + m2, R.product(o, rho).parts)
    members = sorted((R.SRelation(k, m, p) for m, ps in known.items() if m <= arity_cap
                      for p in ps), key=lambda r: (r.arity, r.parts))
    return RelCloneFragment(k, monoid, arity_cap, slack, tuple(members), True)


def s_diagonals_all(m, monoid, k):
    """Every S-diagonal of arity m, ordered by parts."""
    n_s = monoid.size
    ideals = [monoid.left_ideal(s) for s in range(n_s)]
    options = [0] + [R.diagonal_mask(k, m, eps) for eps in R.set_partitions(m)]
    options = sorted(set(options))
    found = set()

    def rec(s, chosen):
        if s == n_s:
            found.add(tuple(chosen))
            return
        for mask in options:
            ok = True
            for t in range(s):
                if ideals[s] <= ideals[t] and mask & ~chosen[t]:
                    ok = False
                elif ideals[t] <= ideals[s] and chosen[t] & ~mask:
                    ok = False
                if not ok:
                    break
            if ok:
                chosen.append(mask)
                rec(s + 1, chosen)
                chosen.pop()

    rec(0, [])
    return [R.SRelation(k, m, p) for p in sorted(found)]


def gamma_Q(Q, rho, monoid, k, arity_cap=None, slack=None, fragment=None):
    """Smallest member of the generated relational clone containing rho."""
    if fragment is None:
        cap = rho.arity if arity_cap is None else arity_cap
        fragment = relclone_generate(Q, cap, monoid, k, slack)
    if not fragment.saturated:
        raise Unsaturated("relational clone fragment did not reach a fixed point")
    if rho.arity > fragment.arity_cap:
        raise CapExceeded("relation arity for gamma_Q", rho.arity, fragment.arity_cap)
    acc = None
    for sigma in fragment.at_arity(rho.arity):
        if rho.issubset(sigma):
            acc = sigma if acc is None else R.meet(acc, sigma)
    return acc


# theorem checks

@dataclass
class TheoremIReport:
    ok: bool
    caps: dict
    saturated_arities: tuple
    per_arity: dict = field(default_factory=dict)
    oracle_not_gamma: list = field(default_factory=list)
    gamma_not_oracle: list = field(default_factory=list)
    unconfirmed: int = 0


def verify_theorem_I(F, op_cap, monoid, k, slack=None, fragment=None):
    """Compare the term fragment of <F> with the Gamma(chi) membership test on
    every signed op up to op_cap."""
    F = list(F)
    if fragment is None:
        fragment = preclone_generate(F, op_cap, monoid, k, slack)
    cache = {}
    report = TheoremIReport(True, {"op_arity": op_cap, "slack": fragment.slack},
                            fragment.saturated_arities)
    for n in range(1, op_cap + 1):
        n_oracle = n_gamma = 0
        for lam in itertools.product(range(monoid.size), repeat=n):
            gam = gamma_chi(F, lam, k, monoid, cache)
            by_gamma = set(tuples.mask_indices(gam.parts[monoid.unit], k ** (k ** n)).tolist())
            by_oracle = set(fragment.members.get(lam, ()))
            n_oracle += len(by_oracle)
            n_gamma += len(by_gamma)
            for c in sorted(by_oracle - by_gamma):
                report.oracle_not_gamma.append(so.from_code(k, lam, c))
            extra = by_gamma - by_oracle
            if n in fragment.saturated_arities:
                report.gamma_not_oracle.extend(so.from_code(k, lam, c) for c in sorted(extra))
            else:
                report.unconfirmed += len(extra)
        report.per_arity[n] = {"candidates": monoid.size ** n * k ** (k ** n),
                               "oracle": n_oracle, "gamma": n_gamma}
    report.ok = not report.oracle_not_gamma and not report.gamma_not_oracle
    return report


@dataclass
class TheoremIIReport:
    ok: bool
    caps: dict
    r1: tuple
    r2: dict              # op cap -> tuple of relations
    r1_in_r2: dict        # op cap -> bool
    difference: dict      # op cap -> tuple of relations in R2 but not R1
    shrinking: bool


def verify_theorem_II(Q, monoid, k, rel_cap, op_caps=(1, 2, 3), slack=None):
    Q = list(Q)
    frag = relclone_generate(Q, rel_cap, monoid, k, slack)
    r1 = frag.members
    r1_set = set(r1)
    r2, inside, diff = {}, {}, {}
    for c in op_caps:
        ops = spol(Q, c, monoid, k)
        found = tuple(sinv(ops, rel_cap, monoid, k))
        r2[c] = found
        inside[c] = r1_set <= set(found)
        diff[c] = tuple(r for r in found if r not in r1_set)
    sizes = [len(diff[c]) for c in op_caps]
    shrinking = all(a >= b for a, b in zip(sizes, sizes[1:]))
    ok = all(inside.values()) and shrinking and not diff[op_caps[-1]] and frag.saturated
    return TheoremIIReport(ok, {"rel_arity": rel_cap, "op_arity": list(op_caps),
                                "slack": frag.slack}, r1, r2, inside, diff, shrinking)


__all__ = [
    "Fragment", "PrecloneFragment", "RelCloneFragment", "TheoremIReport", "TheoremIIReport",
    "gamma_Q", "multiplicity", "preclone_generate", "relclone_generate", "s_diagonals_all",
    "verify_theorem_I", "verify_theorem_II",
]
