"""Brute-force enumeration of bounded languages, used as ground truth in tests.

Within a :class:`Window` the enumeration is exhaustive: every word with at
most ``max_letters`` letters whose witnessing run keeps the counter within
the bounds is listed, in length-lexicographic order.

* ``vis`` words show every step, so runs are bounded by ``max_steps``
  symbols and counter ``<= max_counter``.
* ``obs`` and ``oca`` words hide counter operations.  Letters are read at
  values ``<= max_counter``; between letters the counter may climb up to
  ``headroom`` above that bound.  Reachability under hidden operations is
  computed as a closure, so no step bound is needed.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .constructions import EOca
from .core import DEC, INC, OPS, Oca, canon
from .decision import Verdict
from .errors import CapacityError, StructuralError
from .semilinear import guard_to_upset, rel_eval
from .strong import StrongAutomaton

MAX_EXPLORED = 10**7


@dataclass(frozen=True)
class Window:
    max_letters: int
    max_counter: int
    max_steps: int | None = None
    headroom: int | None = None

    def __post_init__(self):
        for v in (self.max_letters, self.max_counter, self.max_steps, self.headroom):
            if v is not None and v < 0:
                raise ValueError("window bounds must be natural numbers")

    @property
    def steps(self) -> int:
        if self.max_steps is not None:
            return self.max_steps
        return 4 * (self.max_counter + 1) * (self.max_letters + 1)


class _Machine:
    """Uniform view: initial states, enabled moves and acceptance at a value."""

    def __init__(self, a, headroom):
        if isinstance(a, Oca):
            self.initials = (a.initial,)
            self.letters = sorted(a.alphabet)
            self._oca = a
            if headroom is None:
                # Accepting runs of a normalized automaton spell encodings, so
                # they never climb above the values they read.
                headroom = (0 if a.meta.get("normalized")
                            else (len(a.states) + 1) ** 2 + a.threshold)
            self.headroom = headroom
        elif hasattr(a, "moves") and hasattr(a, "accepts_at"):
            self.initials = tuple(a.initials)
            self.letters = sorted(a.alphabet)
            self._oca = None
            self._e = a
            if headroom is None:
                states = getattr(a, "states", None)
                headroom = ((len(states) + 1) ** 2 if states is not None
                            else getattr(a, "threshold", 0) + 2)
            self.headroom = headroom
        else:
            raise StructuralError(f"cannot enumerate {type(a).__name__}")
        self.live = self._live(a)

    @staticmethod
    def _live(a):
        """States that reach an accepting state when tests are ignored, or
        ``None`` when the transition table is not available."""
        if isinstance(a, Oca):
            seeds = set(a.finals)
        elif isinstance(a, EOca):
            seeds = {q for q in a.states if not guard_to_upset(a.acceptance(q)).is_empty()}
        else:
            return None
        pred: dict = {}
        for t in a.transitions:
            pred.setdefault(t[3], set()).add(t[0])
        live = set(seeds)
        stack = list(seeds)
        while stack:
            for p in pred.get(stack.pop(), ()):
                if p not in live:
                    live.add(p)
                    stack.append(p)
        return live

    def moves(self, q, x):
        a = self._oca
        if a is None:
            return self._e.moves(q, x)
        k = a.test(x)
        out = []
        for act in a.actions:
            if act == DEC and x == 0:
                continue
            out.extend((act, t) for t in a.targets(q, k, act))
        return out

    def accepts(self, q, x) -> bool:
        if self._oca is not None:
            return q in self._oca.finals
        return self._e.accepts_at(q, x)


def _order(words) -> tuple:
    def key(w):
        return (len(w), tuple(canon(s) for s in w))
    return tuple(sorted(set(words), key=key))


class _Budget:
    def __init__(self):
        self.used = 0

    def spend(self, n=1):
        self.used += n
        if self.used > MAX_EXPLORED:
            raise CapacityError(f"enumeration explored more than {MAX_EXPLORED} configurations")


def _vis(mach: _Machine, w: Window, budget: _Budget) -> set:
    out = set()
    frontier = {(): (frozenset((q, 0) for q in mach.initials), 0)}
    for length in range(w.steps + 1):
        nxt = {}
        for word, (configs, nletters) in frontier.items():
            if any(mach.accepts(q, x) for q, x in configs):
                out.add(word)
            if length == w.steps:
                continue
            succ: dict = {}
            for q, x in configs:
                budget.spend()
                for act, t in mach.moves(q, x):
                    x2 = x + 1 if act == INC else x - 1 if act == DEC else x
                    if x2 > w.max_counter or (mach.live is not None and t not in mach.live):
                        continue
                    if act not in OPS and nletters >= w.max_letters:
                        continue
                    succ.setdefault(act, set()).add((t, x2))
            for act, cs in succ.items():
                nxt[word + (act,)] = (frozenset(cs), nletters + (act not in OPS))
        frontier = nxt
        if not frontier:
            break
    return out


def _closure(mach: _Machine, states, v: int, cap: int, budget: _Budget) -> set:
    seen = {(q, v) for q in states}
    queue = deque(seen)
    while queue:
        q, x = queue.popleft()
        budget.spend()
        for act, t in mach.moves(q, x):
            if act == INC and x < cap:
                c = (t, x + 1)
            elif act == DEC:
                c = (t, x - 1)
            else:
                continue
            if c not in seen:
                seen.add(c)
                queue.append(c)
    return seen


def _obs(mach: _Machine, w: Window, budget: _Budget) -> set:
    cap = w.max_counter + mach.headroom
    out = set()
    memo: dict = {}
    frontier = {(): (frozenset(mach.initials), 0)}
    for depth in range(w.max_letters + 1):
        nxt = {}
        for word, macro in frontier.items():
            if macro not in memo:
                closure = _closure(mach, macro[0], macro[1], cap, budget)
                acc = any(mach.accepts(q, x) for q, x in closure)
                succ: dict = {}
                for q, x in closure:
                    if x > w.max_counter:
                        continue
                    for act, t in mach.moves(q, x):
                        if act not in OPS:
                            succ.setdefault((act, x), set()).add(t)
                memo[macro] = (acc, {s: frozenset(ts) for s, ts in succ.items()})
            acc, succ = memo[macro]
            if acc:
                out.add(word)
            if depth == w.max_letters:
                continue
            for (a, x), ts in succ.items():
                nxt[word + ((a, x),)] = (ts, x)
        frontier = nxt
    return out


def _strong(s: StrongAutomaton, w: Window, budget: _Budget) -> set:
    out = set()
    frontier = {(): (frozenset([s.initial]), 0)}
    letters = sorted(s.alphabet)
    for depth in range(w.max_letters + 1):
        nxt = {}
        for word, (states, x) in frontier.items():
            if states & s.finals:
                out.add(word)
            if depth == w.max_letters:
                continue
            for a in letters:
                for y in range(w.max_counter + 1):
                    budget.spend()
                    ts = frozenset(q for p, r, b, q in s.transitions
                                   if p in states and b == a and rel_eval(r, x, y))
                    if ts:
                        nxt[word + ((a, y),)] = (ts, y)
        frontier = nxt
    return out


def enumerate_words(a, sem: str, window: Window) -> tuple:
    """All accepted ``sem``-words inside ``window``, length-lexicographically."""
    if sem not in ("oca", "vis", "obs"):
        raise ValueError(f"unknown semantics {sem!r}")
    budget = _Budget()
    if isinstance(a, StrongAutomaton):
        if sem != "obs":
            raise ValueError("strong automata only have the obs semantics")
        return _order(_strong(a, window, budget))
    mach = _Machine(a, window.headroom)
    if sem == "vis":
        return _order(_vis(mach, window, budget))
    words = _obs(mach, window, budget)
    if sem == "oca":
        words = {tuple(l for l, _ in wd) for wd in words}
    return _order(words)


def window_equal(a1, a2, sem: str, window: Window) -> Verdict:
    """Compare two bounded languages; the witness is the first differing word."""
    if a1.alphabet != a2.alphabet:
        from .errors import AlphabetMismatch
        raise AlphabetMismatch("window comparison needs equal alphabets")
    l1 = set(enumerate_words(a1, sem, window))
    l2 = set(enumerate_words(a2, sem, window))
    diff = _order(l1 ^ l2)
    stats = {"first": len(l1), "second": len(l2)}
    if not diff:
        return Verdict(True, None, stats)
    wit = diff[0]
    stats["member_of"] = "first" if wit in l1 else "second"
    return Verdict(False, wit, stats)
