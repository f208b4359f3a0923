"""Guards over counter values, ultimately periodic sets, and binary relations.

A guard is a boolean combination of arithmetic progressions ``ap(c, d)``
denoting ``{c + d*i : i >= 0}`` (a singleton when ``d == 0``).  A relation
(``GuardRel``) is the same kind of formula over the atoms ``x``, ``x'``,
``diff = x' - x`` and ``ndiff = x - x'``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import lru_cache, reduce
from typing import Callable, Iterable

from .errors import CapacityError, ParseError

MAX_PERIOD = 10**6
TERMS = ("x", "x'", "diff", "ndiff")


class Formula:
    """Common base for guard and relation expression trees."""

    def __and__(self, other):
        return conj(self, other)

    def __or__(self, other):
        return disj(self, other)

    def __invert__(self):
        return Not(self)

    def __repr__(self):
        return f"{type(self).__name__}<{self}>"


@dataclass(frozen=True, repr=False)
class AP(Formula):
    c: int
    d: int

    def __post_init__(self):
        if self.c < 0 or self.d < 0:
            raise ValueError("ap(c,d) needs naturals")

    def __str__(self):
        return f"ap({self.c},{self.d})"


@dataclass(frozen=True, repr=False)
class Rel(Formula):
    term: str
    c: int
    d: int

    def __post_init__(self):
        if self.term not in TERMS:
            raise ValueError(f"unknown term {self.term!r}")
        if self.c < 0 or self.d < 0:
            raise ValueError("ap(c,d) needs naturals")

    def __str__(self):
        return f"{self.term} in ap({self.c},{self.d})"


@dataclass(frozen=True, repr=False)
class Not(Formula):
    arg: Formula

    def __str__(self):
        a = self.arg
        if isinstance(a, AP) or isinstance(a, Not):
            return f"!{a}"
        return f"!({a})"


@dataclass(frozen=True, repr=False)
class And(Formula):
    args: tuple

    def __str__(self):
        return " & ".join(_wrap(a) for a in self.args)


@dataclass(frozen=True, repr=False)
class Or(Formula):
    args: tuple

    def __str__(self):
        return " | ".join(_wrap(a) for a in self.args)


def _wrap(f: Formula) -> str:
    return f"({f})" if isinstance(f, (And, Or)) else str(f)


TRUE = AP(0, 1)
FALSE = Not(TRUE)
TRUE_REL = Rel("x", 0, 1)
FALSE_REL = Not(TRUE_REL)


def conj(*fs: Formula) -> Formula:
    flat = []
    for f in fs:
        flat.extend(f.args if isinstance(f, And) else (f,))
    if not flat:
        return TRUE
    return flat[0] if len(flat) == 1 else And(tuple(flat))


def disj(*fs: Formula) -> Formula:
    flat = []
    for f in fs:
        flat.extend(f.args if isinstance(f, Or) else (f,))
    if not flat:
        return FALSE
    return flat[0] if len(flat) == 1 else Or(tuple(flat))


def in_ap(v, c: int, d: int) -> bool:
    if v is None:
        return False
    if d == 0:
        return v == c
    return v >= c and (v - c) % d == 0


def _evaluate(f: Formula, atom: Callable) -> bool:
    if isinstance(f, Not):
        return not _evaluate(f.arg, atom)
    if isinstance(f, And):
        return all(_evaluate(a, atom) for a in f.args)
    if isinstance(f, Or):
        return any(_evaluate(a, atom) for a in f.args)
    return atom(f)


def guard_eval(g: Formula, x: int) -> bool:
    def atom(a):
        if not isinstance(a, AP):
            raise TypeError(f"not a guard atom: {a!r}")
        return in_ap(x, a.c, a.d)
    return _evaluate(g, atom)


def rel_terms(x: int, x2: int) -> dict:
    return {"x": x, "x'": x2,
            "diff": x2 - x if x2 >= x else None,
            "ndiff": x - x2 if x >= x2 else None}


def rel_eval_terms(r: Formula, terms: dict) -> bool:
    """Evaluate a relation given the value of each term (``None`` = undefined)."""
    def atom(a):
        if not isinstance(a, Rel):
            raise TypeError(f"not a relation atom: {a!r}")
        return in_ap(terms[a.term], a.c, a.d)
    return _evaluate(r, atom)


def rel_eval(r: Formula, x: int, x2: int) -> bool:
    return rel_eval_terms(r, rel_terms(x, x2))


def atoms(f: Formula) -> set:
    if isinstance(f, Not):
        return atoms(f.arg)
    if isinstance(f, (And, Or)):
        return set().union(*(atoms(a) for a in f.args))
    return {f}


# -- ultimately periodic sets ---------------------------------------------

def _lcm(values: Iterable[int]) -> int:
    out = reduce(math.lcm, values, 1)
    if out > MAX_PERIOD:
        raise CapacityError(f"period {out} exceeds {MAX_PERIOD}")
    return out


@dataclass(frozen=True)
class UpSet:
    """Ultimately periodic subset of N.

    ``x`` is a member iff ``bits[x]`` for ``x < threshold``, otherwise
    ``bits[threshold + (x - threshold) % period]``.  Instances built through
    :meth:`make` are canonical (smallest period, then smallest threshold), so
    ``==`` is set equality.
    """

    threshold: int
    period: int
    bits: tuple

    def __post_init__(self):
        if self.period < 1 or self.threshold < 0:
            raise ValueError("need threshold >= 0 and period >= 1")
        if len(self.bits) != self.threshold + self.period:
            raise ValueError("bitmap length must be threshold + period")

    @classmethod
    def make(cls, threshold: int, period: int, bits) -> "UpSet":
        bits = tuple(bool(b) for b in bits)
        if period > MAX_PERIOD:
            raise CapacityError(f"period {period} exceeds {MAX_PERIOD}")
        t, d = threshold, period
        cyc = bits[t:t + d]
        for p in range(1, d + 1):
            if d % p == 0 and all(cyc[i] == cyc[i % p] for i in range(d)):
                d = p
                break
        bits = bits[:t + d]
        while t > 0 and bits[t - 1] == bits[t - 1 + d]:
            t -= 1
            bits = bits[:t + d]
        return cls(t, d, bits)

    @classmethod
    def from_predicate(cls, pred: Callable[[int], bool], threshold: int,
                       period: int) -> "UpSet":
        """Build from a predicate known to be ``period``-periodic past ``threshold``."""
        return cls.make(threshold, period,
                        [pred(x) for x in range(threshold + period)])

    @classmethod
    def of(cls, members: Iterable[int] = (), cofinite_from: int | None = None) -> "UpSet":
        members = set(members)
        t = max(members, default=-1) + 1
        if cofinite_from is not None:
            t = max(t, cofinite_from)
        return cls.from_predicate(
            lambda x: x in members or (cofinite_from is not None and x >= cofinite_from),
            t, 1)

    @classmethod
    def empty(cls) -> "UpSet":
        return cls(0, 1, (False,))

    @classmethod
    def full(cls) -> "UpSet":
        return cls(0, 1, (True,))

    def __contains__(self, x: int) -> bool:
        t = self.threshold
        if x < t:
            return self.bits[x]
        return self.bits[t + (x - t) % self.period]

    def is_empty(self) -> bool:
        return not any(self.bits)

    def is_full(self) -> bool:
        return all(self.bits)

    def members(self, limit: int) -> list:
        return [x for x in range(limit + 1) if x in self]

    def min(self):
        for x in range(len(self.bits)):
            if self.bits[x]:
                return x
        return None

    def __and__(self, other):
        return upset_bool("intersect", self, other)

    def __or__(self, other):
        return upset_bool("union", self, other)

    def __invert__(self):
        return upset_bool("complement", self)

    def __str__(self):
        pre = "".join("1" if b else "0" for b in self.bits[:self.threshold])
        cyc = "".join("1" if b else "0" for b in self.bits[self.threshold:])
        return f"{pre}({cyc})*"


def upset_bool(op: str, u1: UpSet, u2: UpSet | None = None) -> UpSet:
    if op == "complement":
        return UpSet.make(u1.threshold, u1.period, [not b for b in u1.bits])
    if u2 is None:
        raise ValueError(f"{op} needs two operands")
    t = max(u1.threshold, u2.threshold)
    d = _lcm([u1.period, u2.period])
    if op == "union":
        return UpSet.from_predicate(lambda x: x in u1 or x in u2, t, d)
    if op == "intersect":
        return UpSet.from_predicate(lambda x: x in u1 and x in u2, t, d)
    raise ValueError(f"unknown operation {op!r}")


@lru_cache(maxsize=None)
def guard_to_upset(g: Formula) -> UpSet:
    ats = atoms(g)
    t = max(a.c for a in ats) + 1
    d = _lcm(a.d or 1 for a in ats)
    return UpSet.from_predicate(lambda x: guard_eval(g, x), t, d)


def upset_to_guard(u: UpSet) -> Formula:
    parts = [AP(v, 0) for v in range(u.threshold) if u.bits[v]]
    parts += [AP(u.threshold + r, u.period)
              for r in range(u.period) if u.bits[u.threshold + r]]
    return disj(*parts) if parts else FALSE


def upset_to_rel(u: UpSet, term: str) -> Formula:
    """The same set as :func:`upset_to_guard`, stated about one relation term."""
    parts = [Rel(term, v, 0) for v in range(u.threshold) if u.bits[v]]
    parts += [Rel(term, u.threshold + r, u.period)
              for r in range(u.period) if u.bits[u.threshold + r]]
    return disj(*parts) if parts else FALSE_REL


def threshold_guard(k: int, m: int) -> Formula:
    """The guard for ``min(x, m) == k``."""
    return AP(m, 1) if k == m else AP(k, 0)


# -- concrete syntax ------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*'?)|(>=|[=+\-!&|(),]))")


def _tokenize(text: str) -> list:
    toks = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", col=pos + 1)
        col = m.start(m.lastindex) + 1
        num, word, sym = m.groups()
        if num is not None:
            toks.append(("int", int(num), col))
        elif word is not None:
            toks.append(("word", word, col))
        else:
            toks.append(("sym", sym, col))
        pos = m.end()
    toks.append(("end", None, len(text) + 1))
    return toks


class _Parser:
    def __init__(self, text: str, rel: bool):
        self.toks = _tokenize(text)
        self.i = 0
        self.rel = rel

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None, value=None):
        tok = self.toks[self.i]
        if (kind and tok[0] != kind) or (value is not None and tok[1] != value):
            want = value if value is not None else kind
            got = tok[1] if tok[0] != "end" else "end of input"
            raise ParseError(f"expected {want!r}, got {got!r}", col=tok[2])
        self.i += 1
        return tok

    def parse(self):
        f = self.disj()
        self.take("end")
        return f

    def disj(self):
        parts = [self.conj()]
        while self.peek()[:2] == ("sym", "|"):
            self.take()
            parts.append(self.conj())
        return parts[0] if len(parts) == 1 else Or(tuple(parts))

    def conj(self):
        parts = [self.unary()]
        while self.peek()[:2] == ("sym", "&"):
            self.take()
            parts.append(self.unary())
        return parts[0] if len(parts) == 1 else And(tuple(parts))

    def unary(self):
        if self.peek()[:2] == ("sym", "!"):
            self.take()
            return Not(self.unary())
        if self.peek()[:2] == ("sym", "("):
            self.take()
            f = self.disj()
            self.take("sym", ")")
            return f
        return self.atom()

    def ap(self):
        self.take("word", "ap")
        self.take("sym", "(")
        c = self.take("int")[1]
        self.take("sym", ",")
        d = self.take("int")[1]
        self.take("sym", ")")
        return c, d

    def atom(self):
        kind, val, col = self.peek()
        if kind == "word" and val in ("true", "false"):
            self.take()
            base = TRUE_REL if self.rel else TRUE
            return base if val == "true" else Not(base)
        if not self.rel:
            return AP(*self.ap())
        if kind != "word" or val not in TERMS:
            raise ParseError(f"expected a term (x, x', diff, ndiff), got {val!r}", col=col)
        term = self.take()[1]
        kind, op, col = self.peek()
        if (kind, op) == ("word", "in"):
            self.take()
            return Rel(term, *self.ap())
        if (kind, op) == ("sym", ">="):
            self.take()
            return Rel(term, self.take("int")[1], 1)
        if (kind, op) == ("sym", "="):
            self.take()
            if term == "x'" and self.peek()[:2] == ("word", "x"):
                self.take()
                kind, sign, col = self.peek()
                if (kind, sign) not in (("sym", "+"), ("sym", "-")):
                    return Rel("diff", 0, 0)
                self.take()
                c = self.take("int")[1]
                return Rel("diff" if sign == "+" else "ndiff", c, 0)
            return Rel(term, self.take("int")[1], 0)
        raise ParseError(f"expected 'in', '=' or '>=' after {term!r}", col=col)


def parse_guard(text: str) -> Formula:
    return _Parser(text, rel=False).parse()


def parse_rel(text: str) -> Formula:
    return _Parser(text, rel=True).parse()
