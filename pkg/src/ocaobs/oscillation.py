"""Counter-only reachability sets as ultimately periodic sets.

For states ``p, q`` of an OCA:

* ``X[p, q]`` holds the values ``x`` such that ``(p, x)`` reaches ``(q, x)``
  using counter operations only (the counter returns to where it started);
* ``Y[p, q]`` holds the values ``x`` such that ``(p, x)`` reaches ``q`` at
  any counter value, again with counter operations only.

Two methods compute them.  The default works level by level with relation
summaries (paths above a level, paths below it) and reads the period off the
first repeated summary, so it is exact and needs no counter cap.  The
``sample`` method evaluates a window of start values on a capped
configuration graph, guesses a (preperiod, period) pair and certifies it on
a window twice as long.  :func:`counter_only_reach` is a plain BFS used to
cross-check both.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .core import DEC, INC, DOca, Oca, csorted
from .errors import CertificationError, StructuralError
from .semilinear import UpSet


def default_headroom(a: Oca) -> int:
    return (len(a.states) + 1) ** 2 + a.threshold


def counter_only_reach(a: Oca, p, q, x: int, mode: str = "same_value",
                       headroom: int | None = None) -> bool:
    """Plain BFS over inc/dec edges from ``(p, x)`` with the counter capped at ``x + headroom``."""
    if p not in a.states or q not in a.states:
        raise StructuralError("unknown state")
    if mode not in ("same_value", "any_value"):
        raise ValueError(f"unknown mode {mode!r}")
    cap = x + (default_headroom(a) if headroom is None else headroom)
    start = (p, x)
    seen = {start}
    queue = deque([start])
    while queue:
        s, v = queue.popleft()
        if s == q and (mode == "any_value" or v == x):
            return True
        k = a.test(v)
        nxt = []
        if v + 1 <= cap:
            nxt += [(t, v + 1) for t in a.targets(s, k, INC)]
        if v >= 1:
            nxt += [(t, v - 1) for t in a.targets(s, k, DEC)]
        for c in nxt:
            if c not in seen:
                seen.add(c)
                queue.append(c)
    return False


def _sccs(n: int, succ: list) -> list:
    """Tarjan's algorithm; components come out in reverse topological order."""
    index = [0] * n
    low = [0] * n
    on = [False] * n
    seen = [False] * n
    stack: list = []
    out = []
    counter = 1
    for root in range(n):
        if seen[root]:
            continue
        work = [(root, 0)]
        while work:
            v, i = work.pop()
            if i == 0:
                seen[v] = True
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on[v] = True
            recurse = False
            edges = succ[v]
            while i < len(edges):
                w = edges[i]
                i += 1
                if not seen[w]:
                    work.append((v, i))
                    work.append((w, 0))
                    recurse = True
                    break
                if on[w]:
                    low[v] = min(low[v], index[w])
            if recurse:
                continue
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on[w] = False
                    comp.append(w)
                    if w == v:
                        break
                out.append(comp)
            if work:
                u = work[-1][0]
                low[u] = min(low[u], low[v])
    return out


def _reach_table(a: Oca, order: list, cap: int) -> list:
    """Bitmask of reachable nodes for every node ``v * n + i`` with ``v <= cap``."""
    n = len(order)
    pos = {q: i for i, q in enumerate(order)}
    total = n * (cap + 1)
    succ: list = [[] for _ in range(total)]
    for v in range(cap + 1):
        k = a.test(v)
        for i, s in enumerate(order):
            node = v * n + i
            if v < cap:
                succ[node].extend((v + 1) * n + pos[t] for t in a.targets(s, k, INC))
            if v >= 1:
                succ[node].extend((v - 1) * n + pos[t] for t in a.targets(s, k, DEC))
    reach = [0] * total
    comp_of = [0] * total
    for ci, comp in enumerate(_sccs(total, succ)):
        mask = 0
        for v in comp:
            mask |= 1 << v
            comp_of[v] = ci
        for v in comp:
            for w in succ[v]:
                if comp_of[w] != ci or not (mask >> w) & 1:
                    mask |= reach[w]
        for v in comp:
            reach[v] = mask
    return reach


def _samples(a: Oca, order: list, length: int, headroom: int):
    """Per pair: lists of X / Y membership for start values ``0 .. length-1``."""
    n = len(order)
    reach = _reach_table(a, order, length + headroom)
    qmask = []
    for j in range(n):
        m = 0
        for v in range(length + headroom + 1):
            m |= 1 << (v * n + j)
        qmask.append(m)
    xs = {}
    ys = {}
    for i, p in enumerate(order):
        for j, q in enumerate(order):
            xs[p, q] = [bool((reach[v * n + i] >> (v * n + j)) & 1) for v in range(length)]
            ys[p, q] = [bool(reach[v * n + i] & qmask[j]) for v in range(length)]
    return xs, ys


def find_period(sample: list, tmax: int, dmax: int):
    """Least ``(d, t)`` with ``sample[i] == sample[i+d]`` for all ``i >= t``."""
    n = len(sample)
    for d in range(1, dmax + 1):
        last = -1
        for i in range(n - d):
            if sample[i] != sample[i + d]:
                last = i
        t = last + 1
        if t <= tmax and n - t >= 2 * d:
            return t, d
    return None


def _holds(sample: list, t: int, d: int) -> bool:
    return all(sample[i] == sample[i + d] for i in range(t, len(sample) - d))


@dataclass(frozen=True)
class OscillationTable:
    automaton: Oca
    same: dict = field(repr=False)
    drift: dict = field(repr=False)
    window: int = 0
    tmax: int = 0
    dmax: int = 0

    def X(self, p, q) -> UpSet:
        return self.same[p, q]

    def Y(self, p, q) -> UpSet:
        return self.drift[p, q]


# -- exact computation by level summaries ------------------------------------

def _compose(r: list, s: list) -> list:
    out = []
    for row in r:
        acc = 0
        while row:
            low = row & -row
            acc |= s[low.bit_length() - 1]
            row ^= low
        out.append(acc)
    return out


def _star(r: list) -> list:
    n = len(r)
    out = [row | (1 << i) for i, row in enumerate(r)]
    for k in range(n):
        bit = 1 << k
        rk = out[k]
        for i in range(n):
            if out[i] & bit:
                out[i] |= rk
    return out


def _union(r: list, s: list) -> list:
    return [x | y for x, y in zip(r, s)]


def _expand(rel: list, reach: list) -> list:
    """``p -> {p'} ∪ reach(p')`` summed over ``p'`` in ``rel(p)``."""
    return [row | acc for row, acc in zip(rel, _compose(rel, reach))]


def _exact_sets(a: Oca):
    """Per-level relations, returned as ``(X rows, Y rows, start, period)``.

    For a level ``v`` the counter-only paths from ``v`` back to ``v`` split
    at their visits to ``v`` into excursions above (summarised by the
    same-level relation of ``v+1``, which no longer depends on the level
    once ``v+1 >= m``) and excursions below (summarised bottom-up from level
    0).  Above the threshold the below-summaries follow a fixed map, so the
    first repeated summary closes the period exactly.
    """
    order = csorted(a.states)
    n = len(order)
    pos = {q: i for i, q in enumerate(order)}
    m = a.threshold

    def rel(k, act):
        rows = []
        for q in order:
            mask = 0
            for t in a.targets(q, k, act):
                mask |= 1 << pos[t]
            rows.append(mask)
        return rows

    inc = [rel(k, INC) for k in range(m + 1)]
    dec = [rel(k, DEC) for k in range(m + 1)]
    ident = [1 << i for i in range(n)]

    # excursions above, level-independent from m on
    same_high = ident
    while True:
        nxt = _star(_compose(_compose(inc[m], same_high), dec[m]))
        if nxt == same_high:
            break
        same_high = nxt
    up_high = same_high
    while True:
        nxt = _expand(same_high, _compose(inc[m], up_high))
        if nxt == up_high:
            break
        up_high = nxt
    same = {m: same_high}
    up = {m: up_high}
    for v in range(m - 1, -1, -1):
        above = same[v + 1]
        same[v] = _star(_compose(_compose(inc[v], above), dec[v + 1]))
        up[v] = _expand(same[v], _compose(inc[v], up[v + 1]))

    def high(table, v):
        return table[min(v, m)]

    below = [ident]            # paths at or below level v, from v to v
    down = [ident]             # states reachable staying at or below v
    xs, ys = [], []
    seen: dict = {}
    v = 0
    stop = None
    while stop is None or v <= stop:
        if v >= 1:
            b = _star(_compose(_compose(dec[min(v, m)], below[v - 1]), inc[min(v - 1, m)]))
            below.append(b)
            down.append(_expand(b, _compose(dec[min(v, m)], down[v - 1])))
        k = min(v, m)
        segs = _compose(_compose(inc[k], high(same, v + 1)), dec[min(v + 1, m)])
        if v >= 1:
            segs = _union(segs, _compose(_compose(dec[k], below[v - 1]), inc[min(v - 1, m)]))
        back = _star(segs)
        xs.append(back)
        ys.append(_compose(back, _union(high(up, v), down[v])))
        if stop is None and v >= m:
            key = (tuple(below[v]), tuple(down[v]))
            if key in seen:
                start = seen[key]
                stop = v + 1
                result = (start + 1, v - start)
            else:
                seen[key] = v
        v += 1
    return order, xs, ys, result


def oscillation_sets(a: Oca, headroom: int | None = None,
                     method: str = "exact") -> OscillationTable:
    """X/Y sets for every state pair.

    ``method="exact"`` (default) derives them from level summaries and
    detects the period exactly; ``method="sample"`` samples a window of
    start values over a bounded configuration graph and certifies the
    guessed period on a doubled window.
    """
    if method == "exact":
        order, xs, ys, (t, d) = _exact_sets(a)
        same, drift = {}, {}
        for i, p in enumerate(order):
            for j, q in enumerate(order):
                same[p, q] = UpSet.make(t, d, [(xs[v][i] >> j) & 1 for v in range(t + d)])
                drift[p, q] = UpSet.make(t, d, [(ys[v][i] >> j) & 1 for v in range(t + d)])
        return OscillationTable(a, same, drift, t + d, t, d)
    if method != "sample":
        raise ValueError(f"unknown method {method!r}")
    order = csorted(a.states)
    nq = len(order)
    h = default_headroom(a) if headroom is None else headroom
    tmax = a.threshold + nq * nq
    dmax = nq * (a.threshold + 2)
    window = tmax + 3 * dmax
    for _ in range(2):
        xs, ys = _samples(a, order, 2 * window, h)
        result = {}
        ok = True
        for table, key in ((xs, "X"), (ys, "Y")):
            for pair, sample in table.items():
                found = find_period(sample[:window], tmax, dmax)
                if found is None or not _holds(sample, *found):
                    ok = False
                    break
                t, d = found
                result[key, pair] = UpSet.make(t, d, sample[:t + d])
            if not ok:
                break
        if ok:
            same = {pair: result["X", pair] for pair in xs}
            drift = {pair: result["Y", pair] for pair in ys}
            return OscillationTable(a, same, drift, window, tmax, dmax)
        window *= 2
    raise CertificationError("period not certified")


# -- straight increment runs of a deterministic automaton ---------------------

def inc_run(d: DOca):
    """The state sequence of ``inc^x`` from the initial configuration.

    Returns ``(prefix, start, period)``: the state after ``inc^x`` is
    ``prefix[x]`` when ``x < len(prefix)`` and otherwise
    ``prefix[start + (x - start) % period]``.
    """
    seq = [d.initial]
    seen: dict = {}
    x = 0
    while True:
        q = seq[x]
        if x >= d.threshold:
            if q in seen:
                start = seen[q]
                return seq[:x], start, x - start
            seen[q] = x
        seq.append(d.delta(q, d.test(x), INC))
        x += 1


def state_after_incs(run, x: int):
    prefix, start, period = run
    if x < len(prefix):
        return prefix[x]
    return prefix[start + (x - start) % period]


def straight_run_set(d: DOca, r) -> UpSet:
    """``{x : inc^x from (initial, 0) ends in r}``."""
    run = inc_run(d)
    _, start, period = run
    return UpSet.from_predicate(lambda x: state_after_incs(run, x) == r, start, period)
