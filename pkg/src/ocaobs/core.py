"""Automaton data model, configurations, the one-step relation and word simulation.

A trace symbol is either ``"inc"``, ``"dec"`` or a pair ``(letter, value)``
recording the counter value at which the letter was read.
"""

from __future__ import annotations

from collections import deque
from typing import Callable, Hashable, Iterable, NamedTuple, Sequence

from .errors import StructuralError

INC = "inc"
DEC = "dec"
OPS = (INC, DEC)


class Config(NamedTuple):
    state: Hashable
    counter: int


def canon(s) -> tuple:
    """Sort key that orders heterogeneous state ids independently of hashing."""
    if s is None:
        return (0,)
    if isinstance(s, bool):
        return (1, int(s))
    if isinstance(s, int):
        return (2, s)
    if isinstance(s, str):
        return (3, s)
    if isinstance(s, tuple):
        return (4, tuple(canon(e) for e in s))
    if isinstance(s, frozenset):
        return (5, tuple(sorted(canon(e) for e in s)))
    return (9, repr(s))


def csorted(items: Iterable) -> list:
    return sorted(items, key=canon)


class Oca:
    """One-counter automaton with threshold tests.

    ``transitions`` is a set of ``(source, k, action, target)`` where the
    transition is enabled at counter ``x`` iff ``k == min(x, threshold)``.
    """

    _frozen = False

    def __init__(self, states, alphabet, initial, finals, threshold: int,
                 transitions: Iterable = (), meta: dict | None = None):
        self.states = frozenset(states)
        self.alphabet = frozenset(alphabet)
        self.initial = initial
        self.finals = frozenset(finals)
        self.threshold = int(threshold)
        self.meta = dict(meta or {})
        self._fn = None
        self._transitions = frozenset(tuple(t) for t in transitions)
        self._check_header()
        self._check_transitions(self._transitions)
        self._index()
        self._frozen = True

    def __setattr__(self, name, value):
        if self._frozen:
            raise AttributeError("automata are immutable")
        object.__setattr__(self, name, value)

    def _check_header(self):
        if not self.alphabet:
            raise StructuralError("alphabet must be nonempty")
        if INC in self.alphabet or DEC in self.alphabet:
            raise StructuralError("'inc'/'dec' cannot be letters")
        if self.initial not in self.states:
            raise StructuralError(f"initial state {self.initial!r} not among states")
        if not self.finals <= self.states:
            raise StructuralError("finals must be a subset of states")
        if self.threshold < 0:
            raise StructuralError("threshold must be a natural number")

    def _check_transitions(self, trans):
        for t in trans:
            if len(t) != 4:
                raise StructuralError(f"malformed transition {t!r}")
            p, k, act, q = t
            if p not in self.states or q not in self.states:
                raise StructuralError(f"transition {t!r} has an unknown endpoint")
            if not isinstance(k, int) or not 0 <= k <= self.threshold:
                raise StructuralError(f"test {k} exceeds threshold {self.threshold}")
            if act not in self.alphabet and act not in OPS:
                raise StructuralError(f"unknown action {act!r}")

    def _index(self):
        succ: dict = {}
        for p, k, act, q in self._transitions:
            succ.setdefault((p, k, act), []).append(q)
        self._succ = {key: tuple(csorted(v)) for key, v in succ.items()}

    # -- accessors -------------------------------------------------------
    @property
    def transitions(self) -> frozenset:
        return self._transitions

    @property
    def actions(self) -> tuple:
        return tuple(sorted(self.alphabet)) + OPS

    def test(self, x: int) -> int:
        return x if x < self.threshold else self.threshold

    def targets(self, q, k: int, act) -> tuple:
        return self._succ.get((q, k, act), ())

    def is_deterministic(self) -> bool:
        if isinstance(self, DOca):
            return True
        for q in self.states:
            for k in range(self.threshold + 1):
                for act in self.actions:
                    if len(self.targets(q, k, act)) != 1:
                        return False
        return True

    def _key(self):
        return (self.states, self.alphabet, self.initial, self.finals,
                self.threshold, self.transitions)

    def __eq__(self, other):
        return isinstance(other, Oca) and self._key() == other._key()

    def __hash__(self):
        try:
            return self._hash
        except AttributeError:
            h = hash(self._key())
            object.__setattr__(self, "_hash", h)
            return h

    def __repr__(self):
        kind = type(self).__name__
        return (f"{kind}(|Q|={len(self.states)}, m={self.threshold}, "
                f"alphabet={sorted(self.alphabet)})")


class DOca(Oca):
    """Deterministic OCA: the transition relation is a total function.

    Instances either carry an explicit transition set (checked for
    totality) or wrap a Python function ``fn(q, k, act) -> q'`` whose table
    is only materialized when ``transitions`` is read.
    """

    def __init__(self, states, alphabet, initial, finals, threshold: int,
                 transitions: Iterable = (), meta: dict | None = None):
        super().__init__(states, alphabet, initial, finals, threshold,
                         transitions, meta)
        object.__setattr__(self, "_frozen", False)
        for q in self.states:
            for k in range(self.threshold + 1):
                for act in self.actions:
                    n = len(self._succ.get((q, k, act), ()))
                    if n != 1:
                        raise StructuralError(
                            f"not deterministic: {n} targets for ({q!r}, {k}, {act!r})")
        self._delta = {key: v[0] for key, v in self._succ.items()}
        self._frozen = True

    @classmethod
    def from_function(cls, states, alphabet, initial, finals, threshold: int,
                      fn: Callable, meta: dict | None = None) -> "DOca":
        self = cls.__new__(cls)
        object.__setattr__(self, "states", frozenset(states))
        object.__setattr__(self, "alphabet", frozenset(alphabet))
        object.__setattr__(self, "initial", initial)
        object.__setattr__(self, "finals", frozenset(finals))
        object.__setattr__(self, "threshold", int(threshold))
        object.__setattr__(self, "meta", dict(meta or {}))
        object.__setattr__(self, "_fn", fn)
        object.__setattr__(self, "_transitions", None)
        object.__setattr__(self, "_delta", None)
        self._check_header()
        object.__setattr__(self, "_frozen", True)
        return self

    @property
    def transitions(self) -> frozenset:
        if self._transitions is None:
            trans = frozenset(
                (q, k, act, self._fn(q, k, act))
                for q in self.states
                for k in range(self.threshold + 1)
                for act in self.actions)
            self._check_transitions(trans)
            object.__setattr__(self, "_transitions", trans)
        return self._transitions

    def delta(self, q, k: int, act):
        if self._fn is not None:
            if q not in self.states:
                raise StructuralError(f"unknown state {q!r}")
            return self._fn(q, k, act)
        try:
            return self._delta[(q, k, act)]
        except KeyError:
            raise StructuralError(f"no transition for ({q!r}, {k}, {act!r})") from None

    def targets(self, q, k: int, act) -> tuple:
        if self._fn is not None:
            return (self._fn(q, k, act),)
        return super().targets(q, k, act)


# -- semantics --------------------------------------------------------------

def step(a: Oca, c: Config) -> set:
    """All ``(trace symbol, successor config)`` pairs of one global step."""
    q, x = c
    if q not in a.states:
        raise StructuralError(f"unknown state {q!r}")
    k = a.test(x)
    out = set()
    for act in a.actions:
        for q2 in a.targets(q, k, act):
            if act == INC:
                out.add((INC, Config(q2, x + 1)))
            elif act == DEC:
                if x >= 1:
                    out.add((DEC, Config(q2, x - 1)))
            else:
                out.add(((act, x), Config(q2, x)))
    return out


def project(trace: Sequence, which: str) -> tuple:
    """Project a trace to its ``oca``, ``vis`` or ``obs`` word."""
    out = []
    for sym in trace:
        is_op = sym in OPS
        if which == "obs":
            if not is_op:
                out.append(tuple(sym))
        elif which == "vis":
            out.append(sym if is_op else sym[0])
        elif which == "oca":
            if not is_op:
                out.append(sym[0])
        else:
            raise ValueError(f"unknown projection {which!r}")
    return tuple(out)


def is_well_formed(w: Sequence) -> bool:
    level = 0
    for sym in w:
        if sym == INC:
            level += 1
        elif sym == DEC:
            level -= 1
            if level < 0:
                return False
    return True


def vis_step(a: Oca, configs: Iterable[Config], sym) -> frozenset:
    out = set()
    for q, x in configs:
        k = a.test(x)
        if sym == INC:
            out.update(Config(q2, x + 1) for q2 in a.targets(q, k, INC))
        elif sym == DEC:
            if x >= 1:
                out.update(Config(q2, x - 1) for q2 in a.targets(q, k, DEC))
        else:
            out.update(Config(q2, x) for q2 in a.targets(q, k, sym))
    return frozenset(out)


def run_vis(a: Oca, w: Sequence) -> frozenset:
    """Configurations reachable from ``(initial, 0)`` along the visibly word ``w``."""
    current = frozenset([Config(a.initial, 0)])
    for sym in w:
        if sym not in OPS and sym not in a.alphabet:
            raise StructuralError(f"symbol {sym!r} not in alphabet")
        current = vis_step(a, current, sym)
        if not current:
            break
    return current


def accepts_vis(a: Oca, w: Sequence) -> bool:
    return any(c.state in a.finals for c in run_vis(a, w))


# -- small structural helpers -------------------------------------------------

def reachable_states(a: Oca) -> list:
    """States reachable in the transition graph (tests ignored), in BFS order."""
    seen = {a.initial}
    order = [a.initial]
    queue = deque(order)
    while queue:
        q = queue.popleft()
        for k in range(a.threshold + 1):
            for act in a.actions:
                for q2 in a.targets(q, k, act):
                    if q2 not in seen:
                        seen.add(q2)
                        order.append(q2)
                        queue.append(q2)
    return order


def relabel(a: Oca, prefix: str = "s") -> Oca:
    """Rename states to ``s0, s1, ...`` in a canonical BFS order."""
    order = reachable_states(a)
    rest = csorted(a.states - set(order))
    names = {q: f"{prefix}{i}" for i, q in enumerate(order + rest)}
    trans = [(names[p], k, act, names[q]) for p, k, act, q in a.transitions]
    cls = DOca if isinstance(a, DOca) else Oca
    return cls(names.values(), a.alphabet, names[a.initial],
               [names[q] for q in a.finals], a.threshold, trans, meta=a.meta)


def with_finals(a: Oca, finals) -> Oca:
    finals = frozenset(finals)
    if isinstance(a, DOca) and a._fn is not None:
        return DOca.from_function(a.states, a.alphabet, a.initial, finals,
                                  a.threshold, a._fn, meta=a.meta)
    cls = DOca if isinstance(a, DOca) else Oca
    return cls(a.states, a.alphabet, a.initial, finals, a.threshold,
               a.transitions, meta=a.meta)
