"""Random automata, formulas and words for property-based and differential tests."""

from __future__ import annotations

import random

from .constructions import Nfa
from .core import DEC, INC, OPS, DOca, Oca
from .semilinear import AP, TERMS, And, Formula, Not, Or, Rel
from .strong import StrongAutomaton


def _rng(seed) -> random.Random:
    return seed if isinstance(seed, random.Random) else random.Random(seed)


def random_oca(seed, n_states: int = 3, threshold: int = 1, letters=("a", "b"),
               density: float = 0.3) -> Oca:
    rng = _rng(seed)
    states = [f"s{i}" for i in range(n_states)]
    acts = list(letters) + list(OPS)
    trans = [(p, k, act, q) for p in states for k in range(threshold + 1)
             for act in acts for q in states if rng.random() < density / n_states * 2]
    finals = [q for q in states if rng.random() < 0.4]
    return Oca(states, letters, states[0], finals, threshold, trans)


def random_doca(seed, n_states: int = 3, threshold: int = 1, letters=("a",)) -> DOca:
    rng = _rng(seed)
    states = [f"s{i}" for i in range(n_states)]
    acts = list(letters) + list(OPS)
    trans = [(p, k, act, rng.choice(states)) for p in states
             for k in range(threshold + 1) for act in acts]
    finals = [q for q in states if rng.random() < 0.5]
    return DOca(states, letters, states[0], finals, threshold, trans)


def random_guard(seed, depth: int = 2, max_c: int = 4, max_d: int = 3) -> Formula:
    rng = _rng(seed)
    if depth == 0 or rng.random() < 0.35:
        return AP(rng.randint(0, max_c), rng.randint(0, max_d))
    r = rng.random()
    if r < 0.2:
        return Not(random_guard(rng, depth - 1, max_c, max_d))
    parts = tuple(random_guard(rng, depth - 1, max_c, max_d) for _ in range(2))
    return And(parts) if r < 0.6 else Or(parts)


def random_rel(seed, depth: int = 2, max_c: int = 3, max_d: int = 2) -> Formula:
    rng = _rng(seed)
    if depth == 0 or rng.random() < 0.35:
        return Rel(rng.choice(TERMS), rng.randint(0, max_c), rng.randint(0, max_d))
    r = rng.random()
    if r < 0.2:
        return Not(random_rel(rng, depth - 1, max_c, max_d))
    parts = tuple(random_rel(rng, depth - 1, max_c, max_d) for _ in range(2))
    return And(parts) if r < 0.6 else Or(parts)


def random_sa(seed, n_states: int = 2, letters=("a",), n_trans: int = 3,
              rel_depth: int = 1) -> StrongAutomaton:
    rng = _rng(seed)
    states = [f"p{i}" for i in range(n_states)]
    trans = [(rng.choice(states), random_rel(rng, rel_depth, 2, 2), rng.choice(letters),
              rng.choice(states)) for _ in range(n_trans)]
    finals = [q for q in states if rng.random() < 0.5]
    return StrongAutomaton(states, letters, states[0], finals, trans)


def random_nfa(seed, n_states: int = 3, n_letters: int = 2, density: float = 0.35) -> Nfa:
    rng = _rng(seed)
    states = list(range(n_states))
    letters = [f"g{i}" for i in range(n_letters)]
    trans = [(p, a, q) for p in states for a in letters for q in states
             if rng.random() < density]
    finals = [q for q in states if rng.random() < 0.6]
    return Nfa(states, letters, 0, finals, trans)


def random_obs_word(seed, letters=("a", "b"), max_len: int = 6, max_value: int = 30) -> tuple:
    rng = _rng(seed)
    return tuple((rng.choice(letters), rng.randint(0, max_value))
                 for _ in range(rng.randint(0, max_len)))


def random_vis_word(seed, letters=("a",), max_len: int = 10) -> tuple:
    rng = _rng(seed)
    syms = list(letters) + [INC, DEC]
    return tuple(rng.choice(syms) for _ in range(rng.randint(0, max_len)))
