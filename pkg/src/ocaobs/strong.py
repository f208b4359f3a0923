"""Strong automata: letters carry values, transitions relate consecutive values.

A transition ``(p, phi, a, q)`` reads ``(a, y)`` from a configuration
``(p, x)`` when ``(x, y)`` satisfies the relation ``phi``; the next
configuration is ``(q, y)``.  Runs start at value 0.

Two translations connect strong automata with OCAs:

* :func:`sa_to_eoca` simulates, between two letters, a small deterministic
  counter automaton (:func:`build_cphi`) that checks the relation on the
  old and new counter values;
* :func:`oca_to_sa` computes, for the shortcut automaton of an OCA, the
  exact relation between the value at one letter and the value at the next.
"""

from __future__ import annotations

from collections import deque
from typing import Sequence

from .constructions import MAX_STATES, EOca, build_eoca
from .core import DEC, INC, OPS, DOca, Oca, csorted
from .errors import CapacityError, StructuralError
from .oscillation import inc_run, state_after_incs
from .semilinear import (FALSE_REL, TRUE, Formula, Rel, UpSet, _lcm, atoms, conj,
                         disj, guard_to_upset, rel_eval, rel_eval_terms,
                         threshold_guard, upset_to_guard, upset_to_rel)

D1, D2 = "$1", "$2"


class StrongAutomaton:
    def __init__(self, states, alphabet, initial, finals, transitions):
        self.states = frozenset(states)
        self.alphabet = frozenset(alphabet)
        self.initial = initial
        self.finals = frozenset(finals)
        self.transitions = frozenset(tuple(t) for t in transitions)
        if not self.alphabet:
            raise StructuralError("alphabet must be nonempty")
        if self.initial not in self.states or not self.finals <= self.states:
            raise StructuralError("bad initial or final states")
        for t in self.transitions:
            if len(t) != 4:
                raise StructuralError(f"malformed transition {t!r}")
            p, r, a, q = t
            if p not in self.states or q not in self.states:
                raise StructuralError(f"transition {(p, a, q)!r} has an unknown endpoint")
            if a not in self.alphabet:
                raise StructuralError(f"unknown letter {a!r}")
            if not isinstance(r, Formula) or any(not isinstance(x, Rel) for x in atoms(r)):
                raise StructuralError(f"label {r!r} is not a relation")

    def relations(self) -> list:
        return sorted({r for _, r, _, _ in self.transitions}, key=str)

    def _key(self):
        return (self.states, self.alphabet, self.initial, self.finals, self.transitions)

    def __eq__(self, other):
        return isinstance(other, StrongAutomaton) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"StrongAutomaton(|Q|={len(self.states)}, |Δ|={len(self.transitions)})"


def sa_member(s: StrongAutomaton, w: Sequence) -> bool:
    current = {s.initial}
    x = 0
    for a, y in w:
        current = {q for p, r, b, q in s.transitions
                   if p in current and b == a and rel_eval(r, x, y)}
        x = y
        if not current:
            return False
    return bool(current & s.finals)


def job_strong() -> StrongAutomaton:
    """Requests ``n >= 1`` items, then produces them one by one down to 0."""
    down = Rel("ndiff", 1, 0)
    return StrongAutomaton(
        ["q0", "q1", "q2"], ["req", "prod"], "q0", ["q2"],
        [("q0", Rel("x'", 1, 1), "req", "q1"),
         ("q1", down, "prod", "q1"),
         ("q1", conj(down, Rel("x'", 0, 0)), "prod", "q2")])


# -- the two-value checker ----------------------------------------------------

def _fold_params(phi: Formula) -> tuple:
    ats = atoms(phi)
    return max(a.c for a in ats) + 1, _lcm(a.d or 1 for a in ats)


def build_cphi(phi: Formula) -> DOca:
    """Deterministic OCA over ``{$1, $2}`` accepting exactly

    * ``inc^x $1 inc^y $2`` with ``(x, x+y)`` satisfying ``phi``, and
    * ``inc^(x+y) $1 dec^y $2`` with ``(x+y, x)`` satisfying ``phi``.

    Values are tracked folded: ``v`` itself below ``T`` and ``T + (v-T) % D``
    above, which is all an atom with constant ``< T`` and period dividing
    ``D`` can distinguish.  The fold of the final value of a downward phase
    comes from the counter test (exact below ``T``) and the residues.
    """
    T, D = _fold_params(phi)
    size = T + D
    if 3 * size * size + size + 2 > MAX_STATES:
        raise CapacityError("relation checker exceeds the state capacity")

    def fold(v):
        return v if v < T else T + (v - T) % D

    def fn(q, k, act):
        if q in ("acc", "rej"):
            return "rej"
        if q[0] == "pre":
            fx = q[1]
            if act == INC:
                return ("pre", fold(fx + 1))
            if act == D1:
                return ("post", fx, "none", 0)
            return "rej"
        _, fx, direction, fy = q
        if act == INC:
            return "rej" if direction == "down" else ("post", fx, "up", fold(fy + 1))
        if act == DEC:
            return "rej" if direction == "up" else ("post", fx, "down", fold(fy + 1))
        if act == D1:
            return "rej"
        if direction == "down":
            x2 = k if k < T else T + (fx - fy - T) % D
            terms = {"x": fx, "x'": x2, "diff": None, "ndiff": fy}
        else:
            terms = {"x": fx, "x'": fold(fx + fy), "diff": fy,
                     "ndiff": 0 if fy == 0 else None}
        return "acc" if rel_eval_terms(phi, terms) else "rej"

    states = [("pre", v) for v in range(size)]
    states += [("post", a, d, b) for a in range(size) for d in ("none", "up", "down")
               for b in range(size)]
    states += ["acc", "rej"]
    return DOca.from_function(states, (D1, D2), ("pre", 0), ["acc"], T, fn,
                              meta={"fold": (T, D)})


def raise_threshold(d: DOca, m: int) -> DOca:
    """The same automaton read with a larger threshold ``m``."""
    if m < d.threshold:
        raise ValueError("can only raise the threshold")
    t = d.threshold
    return DOca.from_function(d.states, d.alphabet, d.initial, d.finals, m,
                              lambda q, k, act: d.delta(q, min(k, t), act),
                              meta=d.meta)


# -- strong automaton -> eOCA -------------------------------------------------

class StrongEOca:
    """eOCA equivalent to a strong automaton, with moves computed on demand.

    States are ``(p, i, c)``: ``p`` a state of the strong automaton, ``i``
    the index of the relation guessed for the next transition and ``c`` a
    state of that relation's checker.  Only relations labelling a transition
    leaving ``p`` (and the false relation, which announces the end of the
    word) are ever guessed.
    """

    def __init__(self, s: StrongAutomaton):
        self.sa = s
        rels = s.relations()
        if FALSE_REL not in rels:
            rels.append(FALSE_REL)
        self.relations = rels
        self.false_index = rels.index(FALSE_REL)
        raw = [build_cphi(r) for r in rels]
        self.threshold = max(c.threshold for c in raw)
        self.checkers = [raise_threshold(c, self.threshold) for c in raw]
        self.runs = [inc_run(c) for c in self.checkers]
        index = {r: i for i, r in enumerate(rels)}
        self.guesses = {p: {self.false_index} for p in s.states}
        self.letters: dict = {}
        for p, r, a, q in s.transitions:
            self.guesses[p].add(index[r])
            self.letters.setdefault((p, index[r]), []).append((a, q))
        for key in self.letters:
            self.letters[key].sort(key=lambda t: (t[0], str(t[1])))
        self.guesses = {p: sorted(v) for p, v in self.guesses.items()}
        self.alphabet = s.alphabet
        self._explicit = None
        self.initials = frozenset(
            (s.initial, i, self.checkers[i].delta(self.checkers[i].initial, 0, D1))
            for i in self.guesses[s.initial])

    def _enter(self, p2, x: int, k: int) -> list:
        out = []
        for j in self.guesses[p2]:
            c = self.checkers[j]
            r = state_after_incs(self.runs[j], x)
            out.append((p2, j, c.delta(r, k, D1)))
        return out

    def moves(self, q, x: int) -> list:
        p, i, c = q
        if i == self.false_index:
            return []
        chk = self.checkers[i]
        k = min(x, self.threshold)
        res = [(INC, (p, i, chk.delta(c, k, INC)))]
        if x >= 1:
            res.append((DEC, (p, i, chk.delta(c, k, DEC))))
        if chk.delta(c, k, D2) in chk.finals:
            for a, p2 in self.letters.get((p, i), ()):
                res.extend((a, t) for t in self._enter(p2, x, k))
        return res

    def accepts_at(self, q, x: int) -> bool:
        return q[1] == self.false_index and q[0] in self.sa.finals

    def _entry_sets(self, j: int) -> dict:
        run = self.runs[j]
        prefix, start, period = run
        return {r: UpSet.from_predicate(lambda x, r=r: state_after_incs(run, x) == r,
                                        start, period)
                for r in set(prefix)}

    def explicit(self) -> EOca:
        """Materialize the states reachable from the initial ones."""
        if self._explicit is not None:
            return self._explicit
        m = self.threshold
        entries = [self._entry_sets(j) for j in range(len(self.checkers))]
        kset = [guard_to_upset(threshold_guard(k, m)) for k in range(m + 1)]
        seen = set(self.initials)
        queue = deque(csorted(self.initials))
        trans = set()
        while queue:
            q = queue.popleft()
            p, i, c = q
            if i == self.false_index:
                continue
            chk = self.checkers[i]
            targets = []
            for k in range(m + 1):
                g = threshold_guard(k, m)
                for op in OPS:
                    targets.append((g, op, (p, i, chk.delta(c, k, op))))
                if chk.delta(c, k, D2) not in chk.finals:
                    continue
                for a, p2 in self.letters.get((p, i), ()):
                    for j in self.guesses[p2]:
                        cj = self.checkers[j]
                        for r, mu in entries[j].items():
                            u = mu & kset[k]
                            if not u.is_empty():
                                targets.append((upset_to_guard(u), a,
                                                (p2, j, cj.delta(r, k, D1))))
            for g, act, t in targets:
                trans.add((q, g, act, t))
                if t not in seen:
                    seen.add(t)
                    queue.append(t)
                    if len(seen) > MAX_STATES:
                        raise CapacityError("translation exceeds the state capacity")
        accept = {q: TRUE for q in seen if self.accepts_at(q, 0)}
        self._explicit = EOca(seen, self.alphabet, self.initials, accept, trans)
        return self._explicit

    def guards(self) -> set:
        return self.explicit().guards()

    def __repr__(self):
        return f"StrongEOca({self.sa!r})"


def sa_to_eoca(s: StrongAutomaton) -> StrongEOca:
    return StrongEOca(s)


# -- OCA -> strong automaton ---------------------------------------------------

def _index_set(init, advance, holds, phase) -> UpSet:
    """``{j : holds(s_j, j)}`` for ``s_{j+1} = advance(s_j, j)``.

    ``phase(j)`` is ``None`` while the step function may still depend on
    ``j`` itself and a residue once it only depends on ``j`` modulo a period;
    the first repeated ``(state, phase)`` pair closes the cycle.
    """
    seen: dict = {}
    bits = []
    s, j = init, 0
    while True:
        ph = phase(j)
        if ph is not None:
            key = (s, ph)
            if key in seen:
                start = seen[key]
                return UpSet.make(start, j - start, bits)
            seen[key] = j
        bits.append(holds(s, j))
        s = advance(s, j)
        j += 1


def _eoca_params(e: EOca) -> tuple:
    sets = [guard_to_upset(g) for g in e.guards()]
    return max(u.threshold for u in sets), _lcm(u.period for u in sets)


def _relation(e: EOca, p, land: dict, T: int, D: int) -> Formula:
    """Pairs ``(x, x')`` such that a monotone counter path leads from
    ``(p, x)`` to some ``(r, x')`` with ``x'`` in ``land[r]``."""

    def phase_from(base):
        return lambda j: None if base + j < T else (base + j - T) % D

    def landing(S, v):
        return any(r in land and v in land[r] for r in S)

    cells = []
    starts = [(Rel("x", v, 0), v) for v in range(T)]
    starts += [(Rel("x", T + r, D), T + r) for r in range(D)]
    for atom, x in starts:
        def advance(S, j, x=x):
            return frozenset(t for s in S for act, t in e.moves(s, x + j) if act == INC)
        u = _index_set(frozenset([p]), advance,
                       lambda S, j, x=x: landing(S, x + j), phase_from(x))
        if not u.is_empty():
            cells.append(conj(atom, upset_to_rel(u, "diff")))
    ends = [(Rel("x'", v, 0), v) for v in range(T)]
    ends += [(Rel("x'", T + r, D), T + r) for r in range(D)]
    for atom, x2 in ends:
        init = frozenset(r for r in land if x2 in land[r])

        def back(B, j, x2=x2):
            return frozenset(s for s in e.states
                             for act, t in e.moves(s, x2 + j + 1)
                             if act == DEC and t in B)
        u = _index_set(init, back, lambda B, j: p in B, phase_from(x2))
        if not u.is_empty():
            cells.append(conj(atom, upset_to_rel(u, "ndiff")))
    return disj(*cells) if cells else FALSE_REL


def oca_to_sa(a: Oca) -> StrongAutomaton:
    """Strong automaton with ``L(result) = L_obs(a)``.

    Works on the shortcut automaton, whose accepted words all have runs that
    move the counter monotonically between letters.  States are ``(p, b)``
    where ``b`` records whether the acceptance guard of ``p`` holds at the
    value just read; the relation of a letter transition is the exact
    description of those monotone moves, split into finitely many cells by
    the exact start (or end) value below the guards' threshold and by its
    residue above.
    """
    e = build_eoca(a)
    T, D = _eoca_params(e)
    states = [(p, b) for p in csorted(e.states) for b in (False, True)]
    accept = {p: guard_to_upset(e.acceptance(p)) for p in e.states}
    (init,) = e.initials
    trans = set()
    for p2 in e.states:
        for letter in sorted(e.alphabet):
            reads = {}
            for r in e.states:
                u = UpSet.empty()
                for g, act, t in e.out(r):
                    if act == letter and t == p2:
                        u = u | guard_to_upset(g)
                reads[r] = u
            for b in (False, True):
                acc = accept[p2] if b else ~accept[p2]
                land = {r: u & acc for r, u in reads.items() if not (u & acc).is_empty()}
                if not land:
                    continue
                for p in e.states:
                    rel = _relation(e, p, land, T, D)
                    if rel == FALSE_REL:
                        continue
                    for b0 in (False, True):
                        trans.add(((p, b0), rel, letter, (p2, b)))
    return StrongAutomaton(states, e.alphabet, (init, 0 in accept[init]),
                           [s for s in states if s[1]], trans)
