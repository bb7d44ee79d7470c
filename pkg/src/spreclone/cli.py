"""Command line front end.

Exit codes: 0 success, 1 the checked property fails, 2 usage or input error.
"""
import argparse
import random
import sys

from . import closures as C
from . import galois as G
from . import lattice as L
from . import relations as R
from . import signed_ops as so
from .errors import CapExceeded, SPrecloneError
from .finite_monoid import load as load_monoid
from .formats import dumps, fragment_dump, load_op, load_rel, op_to_json, rel_to_json, to_jsonable

HARD_LIMIT = 1 << 20


class UsageError(Exception):
    pass


def _common(p):
    p.add_argument("--monoid", default="z2", help="builtin name or JSON file (default z2)")
    p.add_argument("--k", "--domain-size", dest="k", type=int, default=None,
                   help="size of A (default: from input files, else 2)")
    p.add_argument("--op-cap", type=int, default=None)
    p.add_argument("--rel-cap", type=int, default=None)
    p.add_argument("--slack", type=int, default=None)
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--seed", type=int, default=0)


def build_parser():
    parser = argparse.ArgumentParser(prog="spreclone",
                                     description="S-preclones and S-relational clones on finite sets")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        p = sub.add_parser(name, help=help_text)
        _common(p)
        return p

    p = add("check", "does an op S-preserve a relation")
    p.add_argument("--op", required=True)
    p.add_argument("--rel", required=True)

    p = add("gamma", "least invariant S-relation above a relation")
    p.add_argument("--gen", action="append", default=[])
    p.add_argument("--rel", required=True)

    p = add("chi", "emit the generic relation chi for a signum")
    p.add_argument("--signum", required=True)

    p = add("member", "membership of an op in a generated preclone")
    p.add_argument("--gen", action="append", default=[])
    p.add_argument("--op", required=True)

    p = add("spol", "bounded S-polymorphisms of relations")
    p.add_argument("--rel", action="append", default=[])

    p = add("sinv", "bounded invariant S-relations of ops")
    p.add_argument("--gen", action="append", default=[])

    p = add("gen-preclone", "bounded fragment of a generated preclone")
    p.add_argument("--gen", action="append", default=[])
    p.add_argument("--method", choices=("superposition", "primitive"), default="superposition")

    p = add("gen-relclone", "bounded fragment of a generated relational clone")
    p.add_argument("--rel", action="append", default=[])

    p = add("diagonals", "all S-diagonals of an arity")
    p.add_argument("--arity", type=int, required=True)

    p = add("verify-thm1", "compare generated preclones with the Gamma membership test")
    p.add_argument("--gen", action="append", default=[])
    p.add_argument("--random", type=int, default=0, help="also test this many random generator sets")

    p = add("verify-thm2", "compare generated relational clones with sinv(spol(Q))")
    p.add_argument("--rel", action="append", default=[])
    p.add_argument("--op-caps", default="1,2,3")

    p = add("sheffer", "check that max(x,y)+1 and the id^s generate everything")
    p.add_argument("--random", type=int, default=0)

    add("relgen", "check the three generating relations (k >= 3)")

    add("minimal", "candidate minimal preclones")

    add("maximal", "candidate maximal preclones over {0,1}")

    p = add("embed", "embed a clone given by generators")
    p.add_argument("kind", choices=("psi", "phi"))
    p.add_argument("--gen", action="append", default=[])

    p = add("orbit", "images of a preclone under dualities")
    p.add_argument("--gen", action="append", default=[])
    p.add_argument("--pi", action="append", default=[], help="permutation of A, e.g. 1,0")
    p.add_argument("--h", action="append", default=[],
                   help="automorphism as images of the elements in order, e.g. e,g2,g")

    p = add("dual", "apply a permutation of A and/or a monoid automorphism")
    p.add_argument("--op")
    p.add_argument("--rel")
    p.add_argument("--pi")
    p.add_argument("--h")
    return parser


def _ints(text):
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"expected comma separated integers, got {text!r}") from None


class Context:
    def __init__(self, args):
        self.args = args
        try:
            self.monoid = load_monoid(args.monoid)
        except (OSError, ValueError) as exc:
            raise UsageError(str(exc)) from None
        self._k = args.k

    def op(self, path):
        return load_op(path, self.monoid)

    def rel(self, path):
        return load_rel(path, self.monoid)

    def k(self, *objs):
        ks = {x.k for x in objs}
        if self._k is not None:
            ks.add(self._k)
        if len(ks) > 1:
            raise UsageError(f"inputs disagree on the domain size: {sorted(ks)}")
        return ks.pop() if ks else 2

    def op_cap(self, k, default=None):
        cap = self.args.op_cap
        if cap is None:
            cap = G.default_op_cap(k) if default is None else default
        if cap < 1:
            raise UsageError("caps must be positive")
        return cap

    def rel_cap(self, k, default=None):
        cap = self.args.rel_cap
        if cap is None:
            cap = G.default_rel_cap(k) if default is None else default
        if cap < 1:
            raise UsageError("caps must be positive")
        if k ** cap > HARD_LIMIT:
            raise CapExceeded("k^rel_cap", k ** cap, HARD_LIMIT)
        return cap

    def emit(self, obj, text):
        if self.args.format == "json":
            print(dumps(obj))
        else:
            print(text() if callable(text) else text)


def _ops_text(ops, monoid):
    return "\n".join(so.describe(f, monoid) for f in ops)


def _rels_text(rels, monoid):
    return "\n".join(R.describe(r, monoid) for r in rels)


def cmd_check(ctx):
    f, rho = ctx.op(ctx.args.op), ctx.rel(ctx.args.rel)
    ok, wit = G.preserves(f, rho, ctx.monoid, witness=True)
    out = {"preserved": ok}
    if wit is not None:
        out["witness"] = to_jsonable(wit, ctx.monoid)
    ctx.emit(out, "preserved" if ok else
             f"not preserved: s={ctx.monoid.name(wit.s)} columns={list(wit.columns)} image={wit.image}")
    return 0 if ok else 1


def cmd_gamma(ctx):
    rho = ctx.rel(ctx.args.rel)
    F = [ctx.op(p) for p in ctx.args.gen]
    ctx.k(rho, *F)
    res = G.gamma_closure(F, rho, ctx.monoid).result
    ctx.emit(rel_to_json(res, ctx.monoid), lambda: R.describe(res, ctx.monoid))
    return 0


def cmd_chi(ctx):
    k = ctx.k()
    signum = ctx.monoid.parse_signum(ctx.args.signum)
    c = G.chi(signum, k, ctx.monoid, ctx.rel_cap(k, max(G.default_rel_cap(k), k ** len(signum))))
    ctx.emit(rel_to_json(c.relation, ctx.monoid), lambda: R.describe(c.relation, ctx.monoid))
    return 0


def cmd_member(ctx):
    g = ctx.op(ctx.args.op)
    F = [ctx.op(p) for p in ctx.args.gen]
    k = ctx.k(g, *F)
    ok, cert = G.membership(g, F, ctx.monoid, certificate=True,
                            rel_cap=ctx.rel_cap(k, max(G.default_rel_cap(k), k ** g.arity)))
    out = {"member": ok}
    if cert is not None:
        out["certificate"] = to_jsonable(cert, ctx.monoid)
    ctx.emit(out, "member" if ok else
             f"not a member: image {list(cert.image)} missing from the "
             f"{ctx.monoid.name(cert.violated_s)} part")
    return 0 if ok else 1


def cmd_spol(ctx):
    Q = [ctx.rel(p) for p in ctx.args.rel]
    k = ctx.k(*Q)
    res = G.spol(Q, ctx.op_cap(k, 2), ctx.monoid, k)
    ctx.emit(fragment_dump(res, ctx.monoid, res.caps), lambda: _ops_text(res, ctx.monoid))
    return 0


def cmd_sinv(ctx):
    F = [ctx.op(p) for p in ctx.args.gen]
    k = ctx.k(*F)
    res = G.sinv(F, ctx.rel_cap(k, 2), ctx.monoid, k)
    ctx.emit(fragment_dump(res, ctx.monoid, res.caps), lambda: _rels_text(res, ctx.monoid))
    return 0


def cmd_gen_preclone(ctx):
    F = [ctx.op(p) for p in ctx.args.gen]
    k = ctx.k(*F)
    frag = C.preclone_generate(F, ctx.op_cap(k, 2), ctx.monoid, k, ctx.args.slack,
                               method=ctx.args.method)
    ops = frag.ops()
    ctx.emit(fragment_dump(ops, ctx.monoid, frag.caps, frag.saturated_arities),
             lambda: _ops_text(ops, ctx.monoid))
    return 0


def cmd_gen_relclone(ctx):
    Q = [ctx.rel(p) for p in ctx.args.rel]
    k = ctx.k(*Q)
    frag = C.relclone_generate(Q, ctx.rel_cap(k, 2), ctx.monoid, k, ctx.args.slack)
    sat = list(range(1, frag.arity_cap + 1)) if frag.saturated else []
    ctx.emit(fragment_dump(frag.members, ctx.monoid, frag.caps, sat),
             lambda: _rels_text(frag.members, ctx.monoid))
    return 0


def cmd_diagonals(ctx):
    k = ctx.k()
    res = C.s_diagonals_all(ctx.args.arity, ctx.monoid, k)
    ctx.emit(fragment_dump(res, ctx.monoid, {"rel_arity": ctx.args.arity}),
             lambda: _rels_text(res, ctx.monoid))
    return 0


def cmd_verify_thm1(ctx):
    F = [ctx.op(p) for p in ctx.args.gen]
    k = ctx.k(*F)
    cap = ctx.op_cap(k, 2)
    sets = [F] if ctx.args.gen or not ctx.args.random else []
    rng = random.Random(ctx.args.seed)
    for _ in range(ctx.args.random):
        sets.append([so.random_op(rng, k, ctx.monoid, rng.randint(1, 2))
                     for _ in range(rng.randint(1, 3))])
    reports = [C.verify_theorem_I(gens, cap, ctx.monoid, k, ctx.args.slack) for gens in sets]
    ok = all(r.ok for r in reports)
    out = {"ok": ok, "runs": [dict(to_jsonable(r, ctx.monoid), generators=to_jsonable(g, ctx.monoid))
                              for r, g in zip(reports, sets)]}
    ctx.emit(out, lambda: "\n".join(
        f"run {i}: {'ok' if r.ok else 'FAILED'} per arity {r.per_arity} "
        f"saturated {list(r.saturated_arities)}" for i, r in enumerate(reports)))
    return 0 if ok else 1


def cmd_verify_thm2(ctx):
    Q = [ctx.rel(p) for p in ctx.args.rel]
    k = ctx.k(*Q)
    caps = _ints(ctx.args.op_caps)
    rep = C.verify_theorem_II(Q, ctx.monoid, k, ctx.rel_cap(k, 2), caps, ctx.args.slack)
    out = to_jsonable(rep, ctx.monoid)
    ctx.emit(out, lambda: (f"{'ok' if rep.ok else 'FAILED'}: |R1| = {len(rep.r1)}; "
                           + "; ".join(f"op cap {c}: |R2| = {len(rep.r2[c])}, "
                                       f"R1 in R2 {rep.r1_in_r2[c]}, |R2 - R1| = {len(rep.difference[c])}"
                                       for c in caps)))
    return 0 if rep.ok else 1


def cmd_sheffer(ctx):
    k = ctx.k()
    rep = L.sheffer_generation_check(k, ctx.monoid, ctx.op_cap(k, 2), ctx.args.random,
                                     seed=ctx.args.seed)
    ctx.emit(to_jsonable(rep, ctx.monoid),
             lambda: f"{'ok' if rep['ok'] else 'FAILED'}: {rep['checked']} ops checked, "
                     f"{len(rep['failures'])} failures")
    return 0 if rep["ok"] else 1


def cmd_relgen(ctx):
    k = ctx.k() if ctx.args.k is not None else 3
    rep = L.relational_generation_check(k, ctx.monoid, ctx.op_cap(k, 2))
    ctx.emit(to_jsonable(rep, ctx.monoid),
             lambda: f"{'ok' if rep['ok'] else 'FAILED'}: {rep['found']} polymorphisms, "
                     f"{len(rep['extras'])} nontrivial")
    return 0 if rep["ok"] else 1


def cmd_minimal(ctx):
    k = ctx.k()
    rep = L.minimal_search(ctx.monoid, k, ctx.op_cap(k, 2))
    out = {"caps": rep["caps"], "candidates": rep["candidates"],
           "classes": to_jsonable(rep["classes"], ctx.monoid),
           "fragment_sizes": [len(fr) for fr in rep["fragments"]]}
    ctx.emit(out, lambda: "\n".join(
        f"{so.describe(ms[0], ctx.monoid)}  class size {len(ms)}  fragment size {len(fr)}"
        for ms, fr in zip(rep["classes"], rep["fragments"])))
    return 0


def cmd_maximal(ctx):
    k = ctx.k()
    rep = L.maximal_candidates(ctx.monoid, k, ctx.op_cap(k, 3))
    out = to_jsonable(rep, ctx.monoid)
    ctx.emit(out, lambda: "\n".join(
        [f"{rep['candidates']} candidates, {len(rep['distinct'])} distinct fragments, "
         f"{rep['maximal_count']} maximal at caps {rep['caps']} (stated count {rep['stated_count']})"]
        + [f"  {rep['distinct'][i]['parts']} size {rep['distinct'][i]['fragment_size']}"
           for i in rep["maximal"]]))
    return 0


def cmd_embed(ctx):
    gens = [ctx.op(p) for p in ctx.args.gen]
    k = ctx.k(*gens)
    cap = ctx.op_cap(k, 2)
    if ctx.args.kind == "psi":
        handle = L.psi_embed(gens, ctx.monoid, k)
    else:
        handle = L.phi_embed(gens, ctx.monoid, k, cap)
    size = len(handle.fragment(cap))
    out = {"caps": {"op_arity": cap}, "generators": to_jsonable(list(handle.generators), ctx.monoid),
           "fragment_size": size}
    ctx.emit(out, lambda: _ops_text(handle.generators, ctx.monoid) + f"\nfragment size {size}")
    return 0


def _automorphism(ctx, text):
    names = [t.strip() for t in text.split(",")]
    h = tuple(ctx.monoid.index(x) for x in names)
    if h not in ctx.monoid.automorphisms():
        raise UsageError(f"{text!r} is not an automorphism of the monoid")
    return h


def cmd_orbit(ctx):
    gens = [ctx.op(p) for p in ctx.args.gen]
    k = ctx.k(*gens)
    cap = ctx.op_cap(k, 2)
    pis = [_ints(x) for x in ctx.args.pi] or [tuple(range(k))]
    hs = [_automorphism(ctx, x) for x in ctx.args.h] or ctx.monoid.automorphisms()
    handle = L.PrecloneHandle(gens, ctx.monoid, k)
    orbit = L.symmetry_orbit(handle, pis, hs, cap)
    out = {"caps": {"op_arity": cap}, "orbit": [to_jsonable(list(h.generators), ctx.monoid) for h in orbit]}
    ctx.emit(out, lambda: "\n\n".join(_ops_text(h.generators, ctx.monoid) for h in orbit))
    return 0


def cmd_dual(ctx):
    a = ctx.args
    if bool(a.op) == bool(a.rel):
        raise UsageError("give exactly one of --op and --rel")
    obj = ctx.op(a.op) if a.op else ctx.rel(a.rel)
    pi = _ints(a.pi) if a.pi else tuple(range(obj.k))
    h = _automorphism(ctx, a.h) if a.h else tuple(range(ctx.monoid.size))
    if a.op:
        res = so.h_map(so.pi_dual(obj, pi), h)
        ctx.emit(op_to_json(res, ctx.monoid), lambda: so.describe(res, ctx.monoid))
    else:
        res = R.h_map(R.pi_dual(obj, pi), h)
        ctx.emit(rel_to_json(res, ctx.monoid), lambda: R.describe(res, ctx.monoid))
    return 0


COMMANDS = {
    "check": cmd_check, "gamma": cmd_gamma, "chi": cmd_chi, "member": cmd_member,
    "spol": cmd_spol, "sinv": cmd_sinv, "gen-preclone": cmd_gen_preclone,
    "gen-relclone": cmd_gen_relclone, "diagonals": cmd_diagonals,
    "verify-thm1": cmd_verify_thm1, "verify-thm2": cmd_verify_thm2, "sheffer": cmd_sheffer,
    "relgen": cmd_relgen, "minimal": cmd_minimal, "maximal": cmd_maximal, "embed": cmd_embed,
    "orbit": cmd_orbit, "dual": cmd_dual,
}


def run(argv=None):
    args = build_parser().parse_args(argv)
    try:
        ctx = Context(args)
        return COMMANDS[args.command](ctx)
    except CapExceeded as exc:
        print(f"spreclone: cap exceeded: {exc.what} requires {exc.required}, "
              f"configured {exc.configured}", file=sys.stderr)
        return 2
    except (UsageError, SPrecloneError, ValueError) as exc:
        print(f"spreclone: {exc}", file=sys.stderr)
        return 2


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
