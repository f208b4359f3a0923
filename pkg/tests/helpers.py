"""Shared corpora and small independent checkers for the test suite."""

import itertools
import random
import re

from ocaobs.core import DEC, INC, OPS
from ocaobs.generators import random_oca
from ocaobs.semilinear import guard_eval

_BLOCKS = re.compile(r"(?:i*a|d*a)*\Z")


def is_encoding_ref(v) -> bool:
    """Block shape plus well-formedness, checked on a string image of ``v``."""
    text = "".join("i" if s == INC else "d" if s == DEC else "a" for s in v)
    if not _BLOCKS.match(text):
        return False
    level = 0
    for s in v:
        level += 1 if s == INC else -1 if s == DEC else 0
        if level < 0:
            return False
    return True


def encode_ref(w):
    out, x = [], 0
    for a, v in w:
        out += [INC] * (v - x) if v >= x else [DEC] * (x - v)
        out.append(a)
        x = v
    return tuple(out)


def vis_words(letters, max_len):
    syms = list(letters) + list(OPS)
    for n in range(max_len + 1):
        yield from itertools.product(syms, repeat=n)


def wf_words(letters, max_len, max_counter=None):
    for v in vis_words(letters, max_len):
        level, ok = 0, True
        for s in v:
            level += 1 if s == INC else -1 if s == DEC else 0
            if level < 0 or (max_counter is not None and level > max_counter):
                ok = False
                break
        if ok:
            yield v


def eoca_accepts_vis(e, v) -> bool:
    """Direct subset simulation of an eOCA on a visibly word."""
    configs = {(q, 0) for q in e.initials}
    for s in v:
        nxt = set()
        for q, x in configs:
            for p, g, act, t in e.transitions:
                if p != q or act != s or not guard_eval(g, x):
                    continue
                if act == DEC and x == 0:
                    continue
                nxt.add((t, x + (act == INC) - (act == DEC)))
        configs = nxt
    return any(q in e.accept and guard_eval(e.accept[q], x) for q, x in configs)


def oca_corpus(n=200, seed=1, max_states=4, max_threshold=2, letters=("a", "b")):
    rng = random.Random(seed)
    return [random_oca(rng, rng.randint(1, max_states), rng.randint(0, max_threshold), letters)
            for _ in range(n)]


def small_corpus(n=200, seed=3):
    """Pairs of OCAs with at most 3 states, threshold at most 1 and at most 2 letters."""
    rng = random.Random(seed)
    out = []
    for _ in range(n):
        letters = ("a", "b")[:rng.randint(1, 2)]
        a = random_oca(rng, rng.randint(1, 3), rng.randint(0, 1), letters)
        b = random_oca(rng, rng.randint(1, 3), rng.randint(0, 1), letters)
        out.append((a, b))
    return out
