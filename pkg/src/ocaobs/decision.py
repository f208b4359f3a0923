"""Decision procedures for the observability semantics.

Universality and inclusion come in two modes:

* ``pipeline`` materializes the determinized / complemented automata and
  asks :func:`nonempty`;
* ``on_the_fly`` explores macro-configurations ``(macro-state, counter)``
  lazily, with a counter cap that grows with the number of macro-states seen
  and is re-checked at twice its final value.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .constructions import (LEVEL, PowersetView, build_benc, build_eoca,
                            complement_obs, determinize_obs, encode,
                            eoca_to_doca, is_encoding, product)
from .core import DEC, INC, OPS, Config, DOca, Oca, csorted, project
from .errors import (AlphabetMismatch, Cancelled, CapInstability,
                     NotNormalized, StructuralError)


@dataclass
class Verdict:
    answer: bool
    witness: tuple | None = None
    stats: dict = field(default_factory=dict)

    def __bool__(self):
        return self.answer


def _check_cancel(cancel) -> None:
    if cancel is None:
        return
    flag = cancel.is_set() if hasattr(cancel, "is_set") else cancel()
    if flag:
        raise Cancelled("search cancelled")


def _trace_back(parents: dict, c) -> tuple:
    trace = []
    while parents[c] is not None:
        c, sym = parents[c]
        trace.append(sym)
    return tuple(reversed(trace))


# -- nonemptiness -------------------------------------------------------------

def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _exact_nonempty(a: Oca) -> bool:
    """Decide whether some final state is reachable from ``(initial, 0)``.

    Above the threshold every test reads ``m``, so the relation "from
    ``(p, b)`` to ``(q, b)`` without dropping below ``b``" does not depend on
    ``b >= m``.  It is computed as a least fixed point, together with the
    states reachable from ``(p, b)`` at any level ``>= b``; the finitely many
    configurations below the threshold are then searched directly.
    """
    order = csorted(a.states)
    idx = {q: i for i, q in enumerate(order)}
    n = len(order)
    m = a.threshold
    letters = sorted(a.alphabet)
    high_letter = [0] * n
    high_inc = [[] for _ in range(n)]
    high_dec = [0] * n
    for i, q in enumerate(order):
        for act in letters:
            for t in a.targets(q, m, act):
                high_letter[i] |= 1 << idx[t]
        high_inc[i] = [idx[t] for t in a.targets(q, m, INC)]
        for t in a.targets(q, m, DEC):
            high_dec[i] |= 1 << idx[t]

    same = [(1 << i) | high_letter[i] for i in range(n)]
    changed = True
    while changed:
        changed = False
        for i in range(n):
            new = same[i]
            for j in _bits(same[i]):
                new |= same[j]
                for p1 in high_inc[j]:
                    for p2 in _bits(same[p1]):
                        new |= high_dec[p2]
            if new != same[i]:
                same[i] = new
                changed = True
    above = list(same)
    changed = True
    while changed:
        changed = False
        for i in range(n):
            new = above[i]
            for j in _bits(same[i]):
                for p1 in high_inc[j]:
                    new |= above[p1]
            if new != above[i]:
                above[i] = new
                changed = True

    final_mask = 0
    for q in a.finals:
        final_mask |= 1 << idx[q]
    start = (idx[a.initial], 0)
    seen = {start}
    queue = deque([start])
    while queue:
        i, v = queue.popleft()
        if (final_mask >> i) & 1:
            return True
        q = order[i]
        nxt = []
        if v < m:
            nxt += [(idx[t], v) for act in letters for t in a.targets(q, v, act)]
            nxt += [(idx[t], v + 1) for t in a.targets(q, v, INC)]
            if v >= 1:
                nxt += [(idx[t], v - 1) for t in a.targets(q, v, DEC)]
        else:
            if above[i] & final_mask:
                return True
            nxt += [(j, v) for j in _bits(same[i])]
            if v >= 1:
                nxt += [(idx[t], v - 1) for t in a.targets(q, v, DEC)]
        for c in nxt:
            if c not in seen:
                seen.add(c)
                queue.append(c)
    return False


def _bfs(a: Oca, cap: int, cancel=None):
    """Shortest accepting path with counters ``<= cap``; returns ``(config, parents, explored)``."""
    start = Config(a.initial, 0)
    parents = {start: None}
    queue = deque([start])
    letters = sorted(a.alphabet)
    explored = 0
    while queue:
        c = queue.popleft()
        explored += 1
        if explored % 4096 == 1:
            _check_cancel(cancel)
        q, x = c
        if q in a.finals:
            return c, parents, explored
        k = a.test(x)
        nxt = [((act, x), Config(t, x)) for act in letters for t in a.targets(q, k, act)]
        if x < cap:
            nxt += [(INC, Config(t, x + 1)) for t in a.targets(q, k, INC)]
        if x >= 1:
            nxt += [(DEC, Config(t, x - 1)) for t in a.targets(q, k, DEC)]
        for sym, c2 in nxt:
            if c2 not in parents:
                parents[c2] = (c, sym)
                queue.append(c2)
    return None, parents, explored


def nonempty(a, cancel=None) -> Verdict:
    """Is some observability word accepted?  The witness is the shortest-path word."""
    if not isinstance(a, Oca):
        a = eoca_to_doca(a)
    _check_cancel(cancel)
    if not _exact_nonempty(a):
        return Verdict(False, None, {"states": len(a.states)})
    n = len(a.states)
    bound = a.threshold + n * n + 1
    cap = min(bound, a.threshold + n + 1)
    while True:
        found, parents, explored = _bfs(a, cap, cancel)
        if found is not None:
            trace = _trace_back(parents, found)
            return Verdict(True, project(trace, "obs"),
                           {"states": n, "explored": explored, "cap": cap,
                            "max_counter": max(c.counter for c in parents)})
        if cap > 4 * bound:
            raise RuntimeError("no witness found although the language is nonempty")
        cap *= 2


# -- membership ---------------------------------------------------------------

def _as_eoca(a):
    if isinstance(a, Oca):
        return build_eoca(a)
    return a


def member_obs(a, w: Sequence) -> Verdict:
    """Membership via the shortcut automaton, following the encoding of ``w``."""
    e = _as_eoca(a)
    w = tuple((x, int(v)) for x, v in w)
    current = set(e.initials)
    x = 0
    for sym in encode(w):
        if sym not in OPS and sym not in e.alphabet:
            return Verdict(False, None)
        current = {t for q in current for act, t in e.moves(q, x) if act == sym}
        x += 1 if sym == INC else -1 if sym == DEC else 0
        if not current:
            break
    ok = any(e.accepts_at(q, x) for q in current)
    return Verdict(ok, w if ok else None)


def unique_run(d: DOca, w: Sequence, check: bool = True):
    """Replay ``encode(w)`` deterministically; returns ``(configs, accepting)``."""
    if not isinstance(d, DOca):
        raise NotNormalized("unique runs need a deterministic automaton")
    if check and not d.meta.get("normalized"):
        _check_normalized(d)
    q, x = d.initial, 0
    run = [Config(q, x)]
    for sym in encode(w):
        if sym not in OPS and sym not in d.alphabet:
            raise StructuralError(f"letter {sym!r} not in alphabet")
        q = d.delta(q, d.test(x), sym)
        x += 1 if sym == INC else -1 if sym == DEC else 0
        run.append(Config(q, x))
    return tuple(run), q in d.finals


def _check_normalized(d: DOca, length: int = 6) -> None:
    from .oracle import Window, enumerate_words
    words = enumerate_words(d, "vis", Window(length, length, length))
    for v in words:
        if not is_encoding(v):
            raise NotNormalized(f"accepts the non-encoding {' '.join(v)}")


# -- capped macro search ----------------------------------------------------------

def _macro_search(start, m: int, alphabet, succ: Callable, is_final: Callable,
                  fixed_cap: int | None = None, cancel=None):
    """BFS over ``(macro-state, counter)``.

    Without ``fixed_cap`` the counter cap is ``m + (macro-states seen + 1)**2``
    and configurations held back by the cap are released whenever it grows.
    """
    letters = sorted(alphabet)
    step_memo: dict = {}
    final_memo: dict = {}

    def step(s, k, act):
        key = (s, k, act)
        t = step_memo.get(key)
        if t is None:
            t = step_memo[key] = succ(s, k, act)
        return t

    c0 = (start, 0)
    parents = {c0: None}
    queue = deque([c0])
    held: list = []
    observed = set()
    explored = 0
    cap = fixed_cap
    while True:
        while queue:
            c = queue.popleft()
            explored += 1
            if explored % 4096 == 1:
                _check_cancel(cancel)
            s, x = c
            if s not in observed:
                observed.add(s)
                final_memo[s] = is_final(s)
                if fixed_cap is None:
                    cap = m + (len(observed) + 1) ** 2
            if final_memo[s]:
                return c, parents, {"explored": explored, "cap": cap,
                                    "macro_states": len(observed),
                                    "max_counter": max(x for _, x in parents)}
            k = min(x, m)
            nxt = [((a, x), (step(s, k, a), x)) for a in letters]
            nxt.append((INC, (step(s, k, INC), x + 1)))
            if x >= 1:
                nxt.append((DEC, (step(s, k, DEC), x - 1)))
            for sym, c2 in nxt:
                if c2 in parents:
                    continue
                if c2[1] > cap:
                    held.append((c2, c, sym))
                    continue
                parents[c2] = (c, sym)
                queue.append(c2)
        if fixed_cap is not None:
            break
        keep = []
        for c2, c, sym in held:
            if c2 in parents:
                continue
            if c2[1] <= cap:
                parents[c2] = (c, sym)
                queue.append(c2)
            else:
                keep.append((c2, c, sym))
        held = keep
        if not queue:
            break
    return None, parents, {"explored": explored, "cap": cap,
                           "macro_states": len(observed),
                           "max_counter": max(x for _, x in parents)}


def _search_with_doubling(start, m, alphabet, succ, is_final, cancel):
    found, parents, stats = _macro_search(start, m, alphabet, succ, is_final, cancel=cancel)
    if found is not None:
        return _trace_back(parents, found), stats
    again, _, stats2 = _macro_search(start, m, alphabet, succ, is_final,
                                     fixed_cap=2 * stats["cap"], cancel=cancel)
    if again is not None:
        raise CapInstability(f"doubling the counter cap {stats['cap']} changed the verdict")
    stats["checked_cap"] = 2 * stats["cap"]
    return None, stats


def _benc_step(r, act):
    b = _BENC.delta(r, 0, act if act in OPS else "#")
    return b


_BENC = build_benc(["#"])


# -- universality, inclusion, equivalence -------------------------------------------

def _mode(mode: str) -> str:
    if mode not in ("pipeline", "on_the_fly"):
        raise ValueError(f"unknown mode {mode!r}")
    return mode


def universal_obs(a, mode: str = "pipeline", cancel=None) -> Verdict:
    """Is every observability word accepted?  Witness: a missing word."""
    _mode(mode)
    if mode == "pipeline":
        if isinstance(a, Oca):
            comp = complement_obs(a)
        else:
            from .constructions import complement_vis
            comp = product(complement_vis(eoca_to_doca(a)), build_benc(a.alphabet))
        v = nonempty(comp, cancel)
        return Verdict(not v.answer, v.witness, dict(v.stats, mode=mode))
    view = PowersetView(_as_eoca(a))

    def succ(s, k, act):
        p, r = s
        return (view.step(p, k, act), _benc_step(r, act))

    def is_final(s):
        p, r = s
        return r == LEVEL and not view.accepting(p)

    trace, stats = _search_with_doubling((view.initial, LEVEL), view.threshold,
                                         view.eoca.alphabet, succ, is_final, cancel)
    if trace is None:
        return Verdict(True, None, dict(stats, mode=mode))
    return Verdict(False, project(trace, "obs"), dict(stats, mode=mode))


def _det(a) -> DOca:
    if isinstance(a, DOca) and a.meta.get("normalized"):
        return a
    if isinstance(a, Oca):
        return determinize_obs(a)
    return product(eoca_to_doca(a), build_benc(a.alphabet))


def _comp(a) -> DOca:
    from .constructions import complement_vis
    if isinstance(a, Oca):
        return complement_obs(a)
    return product(complement_vis(eoca_to_doca(a)), build_benc(a.alphabet))


def includes_obs(a1, a2, mode: str = "pipeline", cancel=None) -> Verdict:
    """Is ``L_obs(a1)`` a subset of ``L_obs(a2)``?  Witness: a word of ``a1`` missing from ``a2``."""
    _mode(mode)
    if a1.alphabet != a2.alphabet:
        raise AlphabetMismatch("inclusion needs equal alphabets")
    if mode == "pipeline":
        v = nonempty(product(_det(a1), _comp(a2)), cancel)
        return Verdict(not v.answer, v.witness, dict(v.stats, mode=mode))
    v1 = PowersetView(_as_eoca(a1))
    v2 = PowersetView(_as_eoca(a2))
    m1, m2 = v1.threshold, v2.threshold

    def succ(s, k, act):
        p1, p2, r = s
        return (v1.step(p1, min(k, m1), act), v2.step(p2, min(k, m2), act),
                _benc_step(r, act))

    def is_final(s):
        p1, p2, r = s
        return r == LEVEL and v1.accepting(p1) and not v2.accepting(p2)

    trace, stats = _search_with_doubling((v1.initial, v2.initial, LEVEL), max(m1, m2),
                                         a1.alphabet, succ, is_final, cancel)
    if trace is None:
        return Verdict(True, None, dict(stats, mode=mode))
    return Verdict(False, project(trace, "obs"), dict(stats, mode=mode))


def equiv_obs(a1, a2, mode: str = "pipeline", cancel=None) -> Verdict:
    """Language equality; the witness belongs to exactly one side."""
    v = includes_obs(a1, a2, mode, cancel)
    if not v.answer:
        return Verdict(False, v.witness, dict(v.stats, missing_from="second"))
    v = includes_obs(a2, a1, mode, cancel)
    if not v.answer:
        return Verdict(False, v.witness, dict(v.stats, missing_from="first"))
    return Verdict(True, None, v.stats)
