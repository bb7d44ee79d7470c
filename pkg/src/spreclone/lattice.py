"""Bounded exploration of the lattice of S-preclones.

A preclone is handled through a generating set; equality and inclusion of
preclones are always meant on fragments up to a stated operation arity.
"""
import itertools
import random

from . import relations as R
from . import signed_ops as so
from . import tuples
from .errors import UnsupportedDomain
from .finite_monoid import builtin
from .galois import gamma_chi, membership, spol


class PrecloneHandle:
    """The preclone generated by a list of signed ops."""

    def __init__(self, generators, monoid, k, rel_cap=None):
        gens = {so.canonical_key(f): f for f in generators}
        for f in gens.values():
            if f.k != k:
                raise ValueError(f"generator over {f.k} elements, expected {k}")
        self.generators = tuple(gens[key] for key in sorted(gens))
        self.monoid = monoid
        self.k = k
        self.rel_cap = rel_cap
        self._gamma = {}

    def __contains__(self, g):
        return membership(g, self.generators, self.monoid, cache=self._gamma,
                          rel_cap=self.rel_cap)

    def contains(self, g, certificate=False):
        return membership(g, self.generators, self.monoid, certificate=certificate,
                          cache=self._gamma, rel_cap=self.rel_cap)

    def gamma(self, signum):
        return gamma_chi(self.generators, signum, self.k, self.monoid, self._gamma, self.rel_cap)

    def codes(self, signum):
        n = len(signum)
        rel = self.gamma(signum)
        return tuples.mask_indices(rel.parts[self.monoid.unit], self.k ** (self.k ** n))

    def fragment(self, cap):
        """frozenset of (signum, table code) for all members of arity <= cap."""
        out = set()
        for n in range(1, cap + 1):
            for lam in itertools.product(range(self.monoid.size), repeat=n):
                out.update((lam, int(c)) for c in self.codes(lam))
        return frozenset(out)

    def ops(self, cap):
        return [so.from_code(self.k, lam, c) for lam, c in sorted(self.fragment(cap),
                                                                 key=lambda x: (len(x[0]), x))]

    @property
    def key(self):
        return so.canonical_key(self.generators[0]) if self.generators else b""

    def __repr__(self):
        return f"PrecloneHandle({list(self.generators)!r})"


def _stamp(report, **caps):
    report["caps"] = caps
    return report


def sheffer_generation_check(k, monoid, op_cap=2, random_ops=0, random_arity=3, seed=0):
    """Check that max(x,y)+1 with signum (e,e) and the id^s generate every op."""
    gens = [so.sheffer(k, monoid.unit)] + [so.identity(k, s) for s in range(monoid.size)]
    handle = PrecloneHandle(gens, monoid, k)
    failures = []
    checked = 0
    for n in range(1, op_cap + 1):
        for lam in itertools.product(range(monoid.size), repeat=n):
            members = set(handle.codes(lam).tolist())
            total = k ** (k ** n)
            checked += total
            failures.extend(so.from_code(k, lam, c) for c in range(total) if c not in members)
    rng = random.Random(seed)
    for _ in range(random_ops):
        lam = tuple(rng.randrange(monoid.size) for _ in range(random_arity))
        vals = [rng.randrange(k) for _ in range(k ** random_arity)]
        g = so.from_values(k, lam, vals)
        checked += 1
        if g not in handle:
            failures.append(g)
    return _stamp({"ok": not failures, "checked": checked, "failures": failures},
                  op_arity=op_cap, random_arity=random_arity, random_ops=random_ops, seed=seed)


def generator_relations(k, monoid):
    """(Delta, full, ..., full), (<=, ..., <=) and (!=, ..., !=)."""
    n = monoid.size
    t = tuples.all_tuples(k, 2)
    eq = tuples.bits_to_mask(t[:, 0] == t[:, 1])
    le = tuples.bits_to_mask(t[:, 0] <= t[:, 1])
    ne = tuples.bits_to_mask(t[:, 0] != t[:, 1])
    top = R.full_mask(k, 2)
    first = tuple(eq if s == monoid.unit else top for s in range(n))
    return [R.SRelation(k, 2, first), R.SRelation(k, 2, (le,) * n), R.SRelation(k, 2, (ne,) * n)]


def relational_generation_check(k, monoid, op_cap=2):
    if k < 3:
        raise UnsupportedDomain("the three generating relations need at least 3 elements")
    found = spol(generator_relations(k, monoid), op_cap, monoid, k)
    extras = [f for f in found if not so.is_trivial_projection(f, monoid)]
    return _stamp({"ok": not extras, "found": len(found), "extras": extras}, op_arity=op_cap)


def _nontrivial_ops(k, monoid, cap):
    for n in range(1, cap + 1):
        for f in so.all_ops(k, n, monoid):
            if not so.is_trivial_projection(f, monoid):
                yield f


def minimal_search(monoid, k, op_cap=2):
    """Candidate atoms among preclones generated by one op of arity <= op_cap.

    Ops are grouped by mutual membership (equal fragments).  A class is
    kept when every nontrivial member of its fragment generates the same
    fragment again.
    """
    bound = min(op_cap, k * k * monoid.size)
    frags = {}
    ops = list(_nontrivial_ops(k, monoid, bound))
    for g in ops:
        frags[so.canonical_key(g)] = PrecloneHandle([g], monoid, k).fragment(bound)
    classes = {}
    for g in ops:
        classes.setdefault(frags[so.canonical_key(g)], []).append(g)
    minimal = []
    for frag, members in classes.items():
        ok = True
        for lam, code in frag:
            h = so.from_code(k, lam, code)
            if so.is_trivial_projection(h, monoid):
                continue
            if frags[so.canonical_key(h)] != frag:
                ok = False
                break
        if ok:
            minimal.append(sorted(members, key=so.canonical_key))
    minimal.sort(key=lambda ms: so.canonical_key(ms[0]))
    handles = [PrecloneHandle([ms[0]], monoid, k) for ms in minimal]
    return _stamp({"handles": handles, "classes": minimal, "candidates": len(ops),
                   "fragments": [frags[so.canonical_key(ms[0])] for ms in minimal]},
                  op_arity=bound)


# Boolean maximal clones: the standard witness relations of the five maximal
# clones of Post's lattice (background data, not derived here).
def boolean_witnesses():
    t2 = tuples.all_tuples(2, 2)
    t4 = tuples.all_tuples(2, 4)
    return {
        1: {"{0}": R.relation(2, [(0,)]).mask, "{1}": R.relation(2, [(1,)]).mask},
        2: {"<=": tuples.bits_to_mask(t2[:, 0] <= t2[:, 1]),
            ">=": tuples.bits_to_mask(t2[:, 0] >= t2[:, 1]),
            "!=": tuples.bits_to_mask(t2[:, 0] != t2[:, 1])},
        4: {"affine": tuples.bits_to_mask(t4.sum(axis=1) % 2 == 0)},
    }


def _diagonal_options(m):
    table = R.diagonal_table(2, m)
    return {("empty" if eps is None else "diag" + "|".join("".join(str(x) for x in b) for b in eps)):
            mask for mask, eps in sorted(table.items())}


def maximal_candidates(monoid, k=2, op_cap=3):
    """Candidate maximal S-preclones SPol rho over {0,1}.

    Each part of rho is a diagonal or a witness relation of a maximal clone,
    all of one arity, with at least one witness part.  Candidates are grouped
    by equal spol fragments at op_cap; the report lists the inclusion matrix
    and which distinct fragments are maximal among proper ones.
    """
    if k != 2:
        raise UnsupportedDomain("maximal clone witnesses are only built in for k = 2")
    n = monoid.size
    candidates = []
    for m, witnesses in boolean_witnesses().items():
        options = list(_diagonal_options(m).items()) + list(witnesses.items())
        for choice in itertools.product(options, repeat=n):
            if all(name in _diagonal_options(m) for name, _ in choice):
                continue
            rho = R.SRelation(2, m, tuple(mask for _, mask in choice))
            candidates.append((tuple(name for name, _ in choice), rho))
    total = sum(monoid.size ** a * 2 ** (2 ** a) for a in range(1, op_cap + 1))
    groups = {}
    for names, rho in candidates:
        frag = frozenset((f.signum, f.values) for f in spol([rho], op_cap, monoid, 2))
        groups.setdefault(frag, []).append((names, rho))
    distinct = sorted(groups, key=lambda fr: (-len(fr), sorted(groups[fr][0][0])))
    proper = [fr for fr in distinct if len(fr) < total]
    matrix = [[int(a <= b) for b in distinct] for a in distinct]
    maximal = [i for i, fr in enumerate(distinct)
               if len(fr) < total and not any(fr < other for other in proper)]
    entries = []
    for fr in distinct:
        names, rho = groups[fr][0]
        entries.append({"relation": rho, "parts": names, "fragment_size": len(fr),
                        "equivalent": [nm for nm, _ in groups[fr]]})
    return _stamp({"candidates": len(candidates), "distinct": entries, "inclusion": matrix,
                   "maximal": maximal, "maximal_count": len(maximal), "stated_count": 9,
                   "all_ops": total}, op_arity=op_cap, rel_arity=4)


# embeddings of the clone lattice

def _unsigned(f):
    return so.SignedOp(f.k, (0,) * f.arity, f.values)


def psi_embed(generators, monoid, k):
    return PrecloneHandle([so.SignedOp(f.k, (monoid.unit,) * f.arity, f.values)
                           for f in generators], monoid, k)


def phi_embed(generators, monoid, k, op_cap=2):
    """The preclone of all signum decorations of the clone generated.

    For a group the decorations are generated by the e-signed generators and
    all id^s; otherwise the classical fragment up to op_cap is decorated.
    """
    generators = list(generators)
    if monoid.is_group:
        gens = [so.SignedOp(f.k, (monoid.unit,) * f.arity, f.values) for f in generators]
        gens += [so.identity(k, s) for s in range(monoid.size)]
        return PrecloneHandle(gens, monoid, k)
    clone = PrecloneHandle([_unsigned(f) for f in generators], builtin("trivial"), k)
    gens = [so.identity(k, s) for s in range(monoid.size)]
    for n in range(1, op_cap + 1):
        for code in clone.codes((0,) * n):
            for lam in itertools.product(range(monoid.size), repeat=n):
                gens.append(so.from_code(k, lam, int(code)))
    return PrecloneHandle(gens, monoid, k)


def phi_inverse(handle):
    """Underlying tables of the generators, as ops over the trivial monoid."""
    seen = {}
    for f in handle.generators:
        g = _unsigned(f)
        seen.setdefault(so.canonical_key(g), g)
    return [seen[key] for key in sorted(seen)]


def symmetry_orbit(handle, pis, hs, cap=2):
    """Distinct images of a handle under pi-duals and monoid automorphisms."""
    images = {}
    for pi in pis:
        for h in hs:
            gens = [so.h_map(so.pi_dual(f, pi), h) for f in handle.generators]
            img = PrecloneHandle(gens, handle.monoid, handle.k, handle.rel_cap)
            images.setdefault(img.fragment(cap), img)
    return sorted(images.values(), key=lambda x: x.key)
