"""Finite monoids of signa.

Elements are referred to by index; names are only used for input and output.
"""
import itertools
import json
from dataclasses import dataclass
from functools import cached_property

from .errors import BadSignum, BadUnit, InvalidMonoid, MalformedTable, NonAssociative

SIZE_CAP = 16


@dataclass(frozen=True)
class MFamily:
    """A family (M_s) of subsets of S, stored as tuples of element indices."""
    sets: tuple
    valid: bool


@dataclass(frozen=True)
class Monoid:
    elements: tuple
    unit: int
    table: tuple

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))
        object.__setattr__(self, "table", tuple(tuple(row) for row in self.table))
        _check(self)

    @property
    def size(self):
        return len(self.elements)

    def mul(self, a, b):
        return self.table[a][b]

    def index(self, name):
        try:
            return self.elements.index(name)
        except ValueError:
            raise BadSignum(f"unknown monoid element {name!r}") from None

    def name(self, i):
        return self.elements[i]

    def parse_signum(self, text):
        """'+,-,+' -> tuple of indices."""
        if isinstance(text, str):
            text = [t.strip() for t in text.split(",") if t.strip()]
        if not text:
            raise BadSignum("empty signum")
        return tuple(self.index(t) for t in text)

    def format_signum(self, signum):
        return ",".join(self.elements[s] for s in signum)

    @cached_property
    def is_group(self):
        return len(self.invertibles()) == self.size

    def inverse(self, v):
        for t in range(self.size):
            if self.table[t][v] == self.unit and self.table[v][t] == self.unit:
                return t
        raise ValueError(f"{self.elements[v]} is not invertible")

    def left_ideal(self, t):
        return frozenset(self.table[s][t] for s in range(self.size))

    def invertibles(self):
        e = self.unit
        return frozenset(s for s in range(self.size)
                         if any(self.table[t][s] == e for t in range(self.size)))

    def m_family(self, v):
        sets = tuple(tuple(x for x in range(self.size) if self.table[x][v] == s)
                     for s in range(self.size))
        return MFamily(sets, True)

    def translation_family(self, v):
        """The family ({s*v})_s; its self-intersection is index translation."""
        return MFamily(tuple((self.table[s][v],) for s in range(self.size)), True)

    def family(self, sets):
        sets = tuple(tuple(sorted(set(m))) for m in sets)
        if len(sets) != self.size:
            raise ValueError("family must give one set per monoid element")
        return MFamily(sets, self.check_m_condition(sets))

    def check_m_condition(self, family):
        sets = family.sets if isinstance(family, MFamily) else family
        for s in range(self.size):
            for s2 in range(self.size):
                target = set(sets[self.table[s2][s]])
                if any(self.table[s2][x] not in target for x in sets[s]):
                    return False
        return True

    def automorphisms(self):
        """All automorphisms as tuples h with h[a] the image of a."""
        n, e = self.size, self.unit
        rest = [x for x in range(n) if x != e]
        found = []
        for perm in itertools.permutations(rest):
            h = [0] * n
            h[e] = e
            for x, y in zip(rest, perm):
                h[x] = y
            if all(h[self.table[a][b]] == self.table[h[a]][h[b]]
                   for a in range(n) for b in range(n)):
                found.append(tuple(h))
        return found

    def to_json(self):
        names = self.elements
        return {"elements": list(names), "unit": names[self.unit],
                "table": [[names[x] for x in row] for row in self.table]}


def _check(mon):
    n = len(mon.elements)
    if n == 0:
        raise MalformedTable("monoid has no elements")
    if len(set(mon.elements)) != n:
        raise MalformedTable("element names are not distinct")
    if n > SIZE_CAP:
        raise MalformedTable(f"monoid has {n} elements, cap is {SIZE_CAP}")
    if len(mon.table) != n or any(len(row) != n for row in mon.table):
        raise MalformedTable(f"table must be {n}x{n}")
    bad = [(a, b) for a in range(n) for b in range(n)
           if not (isinstance(mon.table[a][b], int) and 0 <= mon.table[a][b] < n)]
    if bad:
        raise MalformedTable(f"table entries out of range at {bad}", bad)
    if not (isinstance(mon.unit, int) and 0 <= mon.unit < n):
        raise MalformedTable("unit is not an element")
    t, e = mon.table, mon.unit
    violations = []
    for a, b, c in itertools.product(range(n), repeat=3):
        if t[t[a][b]][c] != t[a][t[b][c]]:
            violations.append(("assoc", a, b, c))
    assoc = bool(violations)
    for x in range(n):
        if t[e][x] != x or t[x][e] != x:
            violations.append(("unit", x))
    if not violations:
        return
    names = mon.elements
    lines = []
    for v in violations:
        if v[0] == "assoc":
            a, b, c = (names[i] for i in v[1:])
            lines.append(f"({a}*{b})*{c} != {a}*({b}*{c})")
        else:
            lines.append(f"unit law fails at {names[v[1]]}")
    msg = "; ".join(lines)
    unit_bad = len(violations) > sum(1 for v in violations if v[0] == "assoc")
    if assoc and unit_bad:
        raise InvalidMonoid(msg, violations)
    if assoc:
        raise NonAssociative(msg, violations)
    raise BadUnit(msg, violations)


def _named(elements, unit, rows):
    idx = {x: i for i, x in enumerate(elements)}
    return Monoid(tuple(elements), idx[unit],
                  tuple(tuple(idx[x] for x in row) for row in rows))


BUILTINS = {
    "trivial": lambda: _named(["e"], "e", [["e"]]),
    "z2": lambda: _named(["+", "-"], "+", [["+", "-"], ["-", "+"]]),
    "z3": lambda: _named(["e", "g", "g2"], "e",
                         [["e", "g", "g2"], ["g", "g2", "e"], ["g2", "e", "g"]]),
    "sprime": lambda: _named(["+", "o"], "+", [["+", "o"], ["o", "o"]]),
    "shat": lambda: _named(["+", "-", "o"], "+",
                           [["+", "-", "o"], ["-", "+", "o"], ["o", "o", "o"]]),
}


def builtin(name):
    try:
        return BUILTINS[name]()
    except KeyError:
        raise ValueError(f"unknown builtin monoid {name!r}") from None


def validate(raw):
    """Build a Monoid from a dict like the JSON monoid file format."""
    if isinstance(raw, Monoid):
        return raw
    try:
        elements = list(raw["elements"])
        unit = raw["unit"]
        rows = raw["table"]
    except (KeyError, TypeError) as exc:
        raise MalformedTable(f"missing field: {exc}") from None
    if len(set(elements)) != len(elements):
        raise MalformedTable("element names are not distinct")
    idx = {x: i for i, x in enumerate(elements)}
    if unit not in idx:
        raise MalformedTable(f"unit {unit!r} is not an element")
    if len(rows) != len(elements) or any(len(r) != len(elements) for r in rows):
        raise MalformedTable(f"table must be {len(elements)}x{len(elements)}")
    try:
        table = tuple(tuple(idx[x] for x in row) for row in rows)
    except KeyError as exc:
        raise MalformedTable(f"table entry {exc} is not an element") from None
    return Monoid(tuple(elements), idx[unit], table)


def load(source):
    """Builtin name or path to a JSON monoid file."""
    if source in BUILTINS:
        return builtin(source)
    with open(source) as fh:
        return validate(json.load(fh))
