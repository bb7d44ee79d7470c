"""JSON forms of operations, relations, certificates and reports.

Monoid elements appear by name; everything else is plain integers.
"""
import dataclasses
import json

from . import relations as R
from . import signed_ops as so
from .errors import ArityMismatch, SPrecloneError
from .galois import Certificate, Witness


class FormatError(SPrecloneError, ValueError):
    pass


def op_to_json(f, monoid):
    return {"domain_size": f.k, "arity": f.arity,
            "signum": [monoid.name(s) for s in f.signum], "values": list(f.values)}


def op_from_json(obj, monoid):
    try:
        k, n = int(obj["domain_size"]), int(obj["arity"])
        signum = tuple(monoid.index(x) for x in obj["signum"])
        values = [int(v) for v in obj["values"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"bad operation record: {exc}") from None
    if len(signum) != n:
        raise ArityMismatch(f"signum has length {len(signum)}, arity is {n}")
    return so.from_values(k, signum, values)


def rel_to_json(rho, monoid):
    parts = {}
    for s in range(monoid.size):
        tups = rho.part(s).tuples()
        if tups:
            parts[monoid.name(s)] = [list(t) for t in tups]
    return {"domain_size": rho.k, "arity": rho.arity, "parts": parts}


def rel_from_json(obj, monoid):
    try:
        k, m = int(obj["domain_size"]), int(obj["arity"])
        given = obj.get("parts", {})
        parts = [[]] * monoid.size
        for name, tups in given.items():
            parts[monoid.index(name)] = [tuple(int(a) for a in t) for t in tups]
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise FormatError(f"bad relation record: {exc}") from None
    return R.s_relation(k, parts, m)


def certificate_to_json(cert, monoid):
    s = getattr(cert, "violated_s", getattr(cert, "s", None))
    return {"violated_s": monoid.name(s), "columns": [list(c) for c in cert.columns],
            "image": list(cert.image)}


def to_jsonable(obj, monoid):
    """Recursively convert results into JSON-ready values."""
    if isinstance(obj, so.SignedOp):
        return op_to_json(obj, monoid)
    if isinstance(obj, R.SRelation):
        return rel_to_json(obj, monoid)
    if hasattr(obj, "generators") and hasattr(obj, "fragment"):
        return {"generators": [op_to_json(f, monoid) for f in obj.generators]}
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        if isinstance(obj, (Certificate, Witness)):
            return certificate_to_json(obj, monoid)
        return {f.name: to_jsonable(getattr(obj, f.name), monoid)
                for f in dataclasses.fields(obj) if f.name not in ("monoid",)}
    if isinstance(obj, dict):
        return {str(key): to_jsonable(v, monoid) for key, v in obj.items()}
    if isinstance(obj, (frozenset, set)):
        return sorted((to_jsonable(x, monoid) for x in obj), key=json.dumps)
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(x, monoid) for x in obj]
    if isinstance(obj, bytes):
        return list(obj)
    if hasattr(obj, "item"):
        return obj.item()
    return obj


def fragment_dump(items, monoid, caps, saturated_arities=None):
    header = {"caps": dict(caps)}
    if saturated_arities is not None:
        header["saturated_arities"] = list(saturated_arities)
    return {"header": header, "members": [to_jsonable(x, monoid) for x in items]}


def load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise FormatError(f"cannot read {path}: {exc}") from None


def load_op(path, monoid):
    return op_from_json(load_json(path), monoid)


def load_rel(path, monoid):
    return rel_from_json(load_json(path), monoid)


def dumps(obj):
    return json.dumps(obj, indent=2, sort_keys=False)
