"""Automaton-to-automaton constructions.

The determinization pipeline for the observability semantics is

    Oca --build_eoca--> EOca --eoca_to_doca--> DOca --product(., B_enc)--> DOca

where ``build_eoca`` folds counter-only detours into guards,
``eoca_to_doca`` is a powerset construction that reads guard truth values
off a modulo-counting automaton, and the final product with the encoding
checker restricts visibly runs to encodings of observability words.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Hashable, Iterable, Sequence

from .core import DEC, INC, OPS, DOca, Oca, csorted, with_finals
from .errors import (AlphabetMismatch, CapacityError, NotAnEncoding,
                     StructuralError)
from .oscillation import oscillation_sets
from .semilinear import (FALSE, TRUE, Formula, UpSet, _evaluate, atoms,
                         guard_to_upset, threshold_guard, upset_to_guard)

MAX_STATES = 10**6


# -- encodings ----------------------------------------------------------------

def encode(w: Sequence) -> tuple:
    """Visibly encoding of an observability word: move the counter, then read."""
    out = []
    x = 0
    for a, v in w:
        if v < 0:
            raise ValueError("counter values are natural numbers")
        out.extend([INC] * (v - x) if v >= x else [DEC] * (x - v))
        out.append(a)
        x = v
    return tuple(out)


def decode(v: Sequence) -> tuple:
    out = []
    x = 0
    direction = None
    block_start = 1
    for pos, sym in enumerate(v, start=1):
        if sym in OPS:
            if direction is None:
                direction = sym
                block_start = pos
            elif sym != direction:
                raise NotAnEncoding(pos, "direction change inside a block")
            x += 1 if sym == INC else -1
            if x < 0:
                raise NotAnEncoding(pos, "counter would drop below zero")
        else:
            out.append((sym, x))
            direction = None
    if direction is not None:
        raise NotAnEncoding(block_start, "trailing counter operations")
    return tuple(out)


def is_encoding(v: Sequence) -> bool:
    try:
        decode(v)
    except NotAnEncoding:
        return False
    return True


# -- the encoding checker ----------------------------------------------------

UP, LEVEL, DOWN, BOT = "up", "level", "down", "bot"


def build_benc(alphabet: Iterable) -> DOca:
    """Four-state, threshold-0 dOCA accepting exactly the valid encodings."""
    alphabet = frozenset(alphabet)
    trans = []
    for q in (UP, LEVEL, DOWN, BOT):
        trans.append((q, 0, INC, UP if q in (UP, LEVEL) else BOT))
        trans.append((q, 0, DEC, DOWN if q in (DOWN, LEVEL) else BOT))
        for a in alphabet:
            trans.append((q, 0, a, LEVEL if q != BOT else BOT))
    return DOca((UP, LEVEL, DOWN, BOT), alphabet, LEVEL, (LEVEL,), 0, trans)


# -- product ---------------------------------------------------------------

def product(a1: Oca, a2: Oca) -> Oca:
    """Synchronous product; only pairs reachable in the transition graph are kept."""
    if a1.alphabet != a2.alphabet:
        raise AlphabetMismatch("product needs equal alphabets")
    m1, m2 = a1.threshold, a2.threshold
    m = max(m1, m2)
    acts = a1.actions
    start = (a1.initial, a2.initial)
    seen = {start}
    queue = deque([start])
    trans = []
    while queue:
        q1, q2 = queue.popleft()
        for k in range(m + 1):
            k1, k2 = min(k, m1), min(k, m2)
            for act in acts:
                for t1 in a1.targets(q1, k1, act):
                    for t2 in a2.targets(q2, k2, act):
                        tgt = (t1, t2)
                        trans.append(((q1, q2), k, act, tgt))
                        if tgt not in seen:
                            seen.add(tgt)
                            queue.append(tgt)
        if len(seen) > MAX_STATES:
            raise CapacityError("product exceeds the state capacity")
    finals = [s for s in seen if s[0] in a1.finals and s[1] in a2.finals]
    cls = DOca if isinstance(a1, DOca) and isinstance(a2, DOca) else Oca
    meta = {}
    if a1.meta.get("normalized") or a2.meta.get("normalized"):
        meta["normalized"] = True
    return cls(seen, a1.alphabet, start, finals, m, trans, meta=meta)


def complement_vis(d: DOca) -> DOca:
    if not isinstance(d, DOca):
        raise StructuralError("complement_vis needs a deterministic automaton")
    return with_finals(d, d.states - d.finals)


# -- extended OCA --------------------------------------------------------------

class EOca:
    """OCA whose transitions and acceptance are guarded by counter-value guards.

    ``accept`` maps a state to the guard under which a run may stop there
    (missing states never accept).  Transitions are
    ``(source, guard, action, target)``.
    """

    def __init__(self, states, alphabet, initials, accept: dict, transitions):
        self.states = frozenset(states)
        self.alphabet = frozenset(alphabet)
        self.initials = frozenset(initials)
        self.accept = {q: g for q, g in accept.items()}
        self.transitions = frozenset(tuple(t) for t in transitions)
        if not self.alphabet or INC in self.alphabet or DEC in self.alphabet:
            raise StructuralError("bad alphabet")
        if not self.initials or not self.initials <= self.states:
            raise StructuralError("initials must be a nonempty subset of states")
        if not set(self.accept) <= self.states:
            raise StructuralError("acceptance given for unknown states")
        out: dict = {}
        for p, g, act, q in self.transitions:
            if p not in self.states or q not in self.states:
                raise StructuralError(f"transition {(p, act, q)!r} has an unknown endpoint")
            if act not in self.alphabet and act not in OPS:
                raise StructuralError(f"unknown action {act!r}")
            if not isinstance(g, Formula):
                raise StructuralError(f"guard {g!r} is not a formula")
            out.setdefault(p, []).append((guard_to_upset(g), g, act, q))
        self._out = out
        self._accept_sets = {q: guard_to_upset(g) for q, g in self.accept.items()}

    def acceptance(self, q) -> Formula:
        return self.accept.get(q, FALSE)

    def moves(self, q, x: int) -> list:
        """Enabled ``(action, target)`` pairs at counter value ``x``."""
        return [(act, t) for u, _, act, t in self._out.get(q, ())
                if x in u and not (act == DEC and x == 0)]

    def accepts_at(self, q, x: int) -> bool:
        u = self._accept_sets.get(q)
        return u is not None and x in u

    def out(self, q) -> list:
        return [(g, act, t) for _, g, act, t in self._out.get(q, ())]

    def guards(self) -> set:
        gs = {g for _, g, _, _ in self.transitions}
        gs.update(self.acceptance(q) for q in self.states)
        return gs

    def explicit(self) -> "EOca":
        return self

    def _key(self):
        return (self.states, self.alphabet, self.initials,
                frozenset((q, g) for q, g in self.accept.items() if g != FALSE),
                self.transitions)

    def __eq__(self, other):
        return isinstance(other, EOca) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"EOca(|Q|={len(self.states)}, |Δ|={len(self.transitions)})"


@lru_cache(maxsize=256)
def build_eoca(a: Oca) -> EOca:
    """Shortcut automaton: a transition may be preceded by any counter-only detour.

    From ``p`` the automaton may fire ``(q, k, σ, q')`` whenever the current
    value lets ``p`` return to the same value in ``q`` by counter operations
    alone; acceptance at ``p`` holds when some final state is reachable by
    counter operations alone.
    """
    table = oscillation_sets(a)
    m = a.threshold
    trans = set()
    for p in a.states:
        for q, k, act, q2 in a.transitions:
            u = table.X(p, q) & guard_to_upset(threshold_guard(k, m))
            if not u.is_empty():
                trans.add((p, upset_to_guard(u), act, q2))
    accept = {}
    for p in a.states:
        u = UpSet.empty()
        for f in a.finals:
            u = u | table.Y(p, f)
        accept[p] = upset_to_guard(u)
    return EOca(a.states, a.alphabet, [a.initial], accept, trans)


# -- modulo counter -----------------------------------------------------------

SINK = "sink"


def _component_step(c: int, d: int, comp: tuple, k: int, act) -> tuple:
    u, y = comp
    if act not in OPS:
        return comp
    if d == 0:
        if (act == INC and k == c - 1) or (act == DEC and k == c + 1):
            return (c, 0)
        return (c, 1)
    if act == INC:
        return (u, (y + 1) % d) if k >= c else (u + 1, 0)
    # Decrementing from c+1 lands on c, which must read as (c, 0); hence the
    # residue branch is taken only strictly above c.
    return (u, (y - 1) % d) if k > c else (max(0, u - 1), 0)


@dataclass(frozen=True)
class BOmega:
    automaton: DOca
    labels: dict
    atoms: tuple
    consistent: dict

    def __iter__(self):
        return iter((self.automaton, self.labels))


def build_bomega(guards: Iterable[Formula], alphabet: Iterable = ("#",)) -> BOmega:
    """Modulo-counting dOCA whose state reports which guards the counter satisfies.

    One component per atom ``ap(c, d)``; the component equals ``(c, 0)``
    exactly when the counter lies in the progression.  Only states reached
    by actual runs are materialized.  Pairs ``(state, test)`` that no run
    can produce (including a decrement at zero) lead to an extra sink whose
    label is empty.
    """
    guards = frozenset(guards)
    if not guards:
        raise ValueError("need at least one guard")
    ats = tuple(sorted(set().union(*(atoms(g) for g in guards)),
                       key=lambda a: (a.c, a.d)))
    m = max(a.c for a in ats) + 2
    # A singleton component away from its value always reads (c, 1); starting
    # it at (0, 0) would give value 0 two names.
    init = tuple((a.c, 1) if a.d == 0 and a.c > 0 else (0, 0) for a in ats)

    def step(q, k, act):
        return tuple(_component_step(a.c, a.d, comp, k, act)
                     for a, comp in zip(ats, q))

    seq = [init]
    high: dict = {}
    x = 0
    while True:
        q = seq[x]
        if x >= m:
            if q in high:
                break
            high[q] = x
        if x > MAX_STATES:
            raise CapacityError("modulo counter exceeds the state capacity")
        seq.append(step(q, min(x, m), INC))
        x += 1
    seq = seq[:x]
    consistent: dict = {}
    for v, q in enumerate(seq):
        consistent.setdefault(q, set()).add(min(v, m))
    states = set(seq) | {SINK}
    for q, ks in consistent.items():
        for k in ks:
            for act in OPS:
                if not (act == DEC and k == 0) and step(q, k, act) not in consistent:
                    raise AssertionError(f"modulo counter not closed at {q!r}, {k}, {act}")
    if len(states) > MAX_STATES:
        raise CapacityError("modulo counter exceeds the state capacity")

    def delta(q, k, act):
        if q == SINK or k not in consistent[q]:
            return SINK
        if act == DEC and k == 0:
            return SINK
        return step(q, k, act)

    dfa = DOca.from_function(states, alphabet, init, states, m, delta,
                             meta={"m_omega": m})
    labels = {SINK: frozenset()}
    for q in seq:
        holds = {a: comp == (a.c, 0) for a, comp in zip(ats, q)}
        labels[q] = frozenset(g for g in guards if _evaluate(g, holds.__getitem__))
    return BOmega(dfa, labels, ats, {q: frozenset(v) for q, v in consistent.items()})


# -- powerset construction ------------------------------------------------------

class PowersetView:
    """Lazy powerset step over an eOCA paired with its modulo counter.

    Macro-states are ``(P, q)`` with ``P`` a set of eOCA states and ``q`` a
    state of the modulo counter; a guard is taken to hold exactly when the
    counter's label contains it.
    """

    def __init__(self, e):
        e = e.explicit()
        self.eoca = e
        guards = e.guards() | {TRUE}
        bo = build_bomega(guards, e.alphabet)
        self.bomega = bo
        self.threshold = bo.automaton.threshold
        gid = {g: i for i, g in enumerate(sorted(guards, key=str))}
        self._lam = {q: frozenset(gid[g] for g in gs) for q, gs in bo.labels.items()}
        out: dict = {}
        for p, g, act, q in e.transitions:
            out.setdefault((p, act), []).append((gid[g], q))
        self._out = out
        self._acc = {p: gid[e.acceptance(p)] for p in e.states}
        self.actions = tuple(sorted(e.alphabet)) + OPS
        self.initial = (frozenset(e.initials), bo.automaton.initial)
        self.dead = (frozenset(), SINK)
        self._cache: dict = {}

    def step(self, s, k: int, act):
        P, q = s
        if k not in self.bomega.consistent.get(q, ()):
            return self.dead
        q2 = self.bomega.automaton.delta(q, k, act)
        if q2 == SINK:
            return self.dead
        key = (P, q, act)
        P2 = self._cache.get(key)
        if P2 is None:
            live = self._lam[q]
            P2 = frozenset(t for p in P for g, t in self._out.get((p, act), ())
                           if g in live)
            self._cache[key] = P2
        return (P2, q2)

    def accepting(self, s) -> bool:
        P, q = s
        live = self._lam[q]
        return any(self._acc[p] in live for p in P)


def eoca_to_doca(e) -> DOca:
    """Deterministic OCA equivalent to ``e`` under all three semantics.

    Only macro-states reachable from the initial one are built.
    """
    view = PowersetView(e)
    m = view.threshold
    seen = {view.initial, view.dead}
    queue = deque([view.initial, view.dead])
    trans = []
    while queue:
        s = queue.popleft()
        for act in view.actions:
            for k in range(m + 1):
                tgt = view.step(s, k, act)
                trans.append((s, k, act, tgt))
                if tgt not in seen:
                    seen.add(tgt)
                    queue.append(tgt)
                    if len(seen) > MAX_STATES:
                        raise CapacityError("powerset construction exceeds the state capacity")
    finals = [s for s in seen if view.accepting(s)]
    return DOca(seen, view.eoca.alphabet, view.initial, finals, m, trans,
                meta={"m_omega": m, "macro_states": len(seen)})


def determinize_obs(a: Oca) -> DOca:
    """Deterministic automaton with the same observability language whose
    visibly language consists of encodings only."""
    core = eoca_to_doca(build_eoca(a))
    d = product(core, build_benc(a.alphabet))
    d.meta.update(normalized=True, threshold=d.threshold)
    return d


def complement_obs(a: Oca) -> DOca:
    core = eoca_to_doca(build_eoca(a))
    d = product(complement_vis(core), build_benc(a.alphabet))
    d.meta.update(normalized=True, threshold=d.threshold)
    return d


# -- hardness reduction ----------------------------------------------------------

@dataclass(frozen=True)
class Nfa:
    states: frozenset
    letters: tuple
    initial: Hashable
    finals: frozenset
    transitions: frozenset

    def __post_init__(self):
        object.__setattr__(self, "states", frozenset(self.states))
        object.__setattr__(self, "letters", tuple(self.letters))
        object.__setattr__(self, "finals", frozenset(self.finals))
        object.__setattr__(self, "transitions", frozenset(tuple(t) for t in self.transitions))
        if not self.letters or len(set(self.letters)) != len(self.letters):
            raise StructuralError("letters must be nonempty and distinct")
        if self.initial not in self.states or not self.finals <= self.states:
            raise StructuralError("bad initial or final states")
        for p, a, q in self.transitions:
            if p not in self.states or q not in self.states or a not in self.letters:
                raise StructuralError(f"bad transition {(p, a, q)!r}")


def reduce_nfa_universality(nfa: Nfa, letter: str = "a") -> Oca:
    """OCA over one letter that is obs-universal iff ``nfa`` is universal.

    Letter number ``i`` is represented by reading at counter value ``i``;
    values ``>= n`` stand for any letter.  Each NFA transition becomes a
    gadget that first drains the counter and climbs to ``i``, or wanders
    freely and reads at a value ``>= n``.
    """
    n = len(nfa.letters)
    m = n
    index = {a: i for i, a in enumerate(nfa.letters)}
    states = {("q", p) for p in nfa.states}
    trans = set()
    for t, (p, a, q) in enumerate(csorted(nfa.transitions)):
        i = index[a]
        src, dst = ("q", p), ("q", q)
        down, free = ("down", t), ("free", t)
        states.update([down, free])
        for k in range(1, m + 1):
            trans.add((src, k, DEC, down))
            trans.add((down, k, DEC, down))
            trans.add((src, k, DEC, free))
            trans.add((free, k, DEC, free))
        for k in range(m + 1):
            trans.add((src, k, INC, free))
            trans.add((free, k, INC, free))
        trans.add((src, m, letter, dst))
        trans.add((free, m, letter, dst))
        for zero in (src, down):
            if i == 0:
                trans.add((zero, 0, letter, dst))
            else:
                trans.add((zero, 0, INC, ("up", t, 1)))
        for j in range(1, i + 1):
            up = ("up", t, j)
            states.add(up)
            if j < i:
                trans.add((up, j, INC, ("up", t, j + 1)))
            else:
                trans.add((up, j, letter, dst))
    return Oca(states, [letter], ("q", nfa.initial),
               [("q", f) for f in nfa.finals], m, trans)


def nfa_universal(nfa: Nfa) -> tuple:
    """Subset construction; returns ``(universal, shortest missing word)``."""
    start = frozenset([nfa.initial])
    prev = {start: None}
    queue = deque([start])
    while queue:
        S = queue.popleft()
        if not S & nfa.finals:
            word = []
            while prev[S] is not None:
                S, a = prev[S]
                word.append(a)
            return False, tuple(reversed(word))
        for a in nfa.letters:
            T = frozenset(q for p, b, q in nfa.transitions if b == a and p in S)
            if T not in prev:
                prev[T] = (S, a)
                queue.append(T)
    return True, None
