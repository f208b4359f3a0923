"""Acceptance criteria A1-A11.

Each test records a one-line PASS/FAIL summary that the conftest prints at
the end of the run; running this file directly prints the same lines.
"""

import itertools
import random
import time

import pytest

from helpers import (encode_ref, eoca_accepts_vis, is_encoding_ref, oca_corpus,
                     small_corpus, vis_words, wf_words)
from ocaobs import (Window, accepts_vis, build_benc, build_bomega, build_cphi, build_eoca,
                    complement_obs, complement_vis, decode, determinize_obs, encode,
                    enumerate_words, guard_eval, includes_obs, member_obs,
                    nfa_universal, oca_to_sa, oscillation_sets, product,
                    reduce_nfa_universality, rel_eval, sa_to_eoca, unique_run,
                    universal_obs, window_equal)
from ocaobs.core import DEC, INC
from ocaobs.generators import (random_doca, random_guard, random_nfa, random_obs_word,
                               random_rel)
from ocaobs.oscillation import counter_only_reach, default_headroom
from ocaobs.samples import job, job_strong
from ocaobs.semilinear import atoms

from conftest import ACCEPTANCE

LIMITS = {"A1": 5, "A2": 10, "A3": 5, "A4": 120, "A5": 120, "A6": 30, "A7": 120,
          "A8": 120, "A9": 180, "A10": 180, "A11": 60}


def run_criterion(name, body):
    """Run ``body`` (returning a list of failure descriptions) under the time limit."""
    t0 = time.perf_counter()
    failures = body()
    dt = time.perf_counter() - t0
    ok = not failures and dt < LIMITS[name]
    detail = f"{len(failures)} failures" if failures else "all checks hold"
    line = f"{name}: {'PASS' if ok else 'FAIL'} ({dt:.1f}s, limit {LIMITS[name]}s) {detail}"
    ACCEPTANCE[name] = line
    print(line)
    assert not failures, failures[:5]
    assert dt < LIMITS[name], f"{name} took {dt:.1f}s"


@pytest.fixture(scope="module")
def corpus():
    return oca_corpus(200, seed=1)


@pytest.fixture(scope="module")
def pairs():
    return small_corpus(200, seed=3)


def all_obs_words(letters, max_len, max_value):
    syms = [(a, v) for a in sorted(letters) for v in range(max_value + 1)]
    for n in range(max_len + 1):
        yield from itertools.product(syms, repeat=n)


def test_a1_job_languages():
    def body():
        a = job()
        w = Window(4, 4, 20)
        want_obs = {tuple([("req", n)] + [("prod", v) for v in range(n - 1, -1, -1)])
                    for n in (1, 2, 3)}
        want_vis = {tuple([INC] * n + ["req"] + [DEC, "prod"] * n) for n in (1, 2, 3)}
        want_oca = {tuple(["req"] + ["prod"] * n) for n in (1, 2, 3)}
        fails = []
        for sem, want in (("obs", want_obs), ("vis", want_vis), ("oca", want_oca)):
            got = set(enumerate_words(a, sem, w))
            if got != want:
                fails.append((sem, got ^ want))
        return fails
    run_criterion("A1", body)


def test_a2_benc():
    def body():
        b = build_benc(["a"])
        fails = []
        if len(b.states) != 4 or b.threshold != 0:
            fails.append(("shape", len(b.states), b.threshold))
        for v in vis_words(["a"], 8):
            if accepts_vis(b, v) != is_encoding_ref(v):
                fails.append(v)
        return fails
    run_criterion("A2", body)


def test_a3_encoding_bijection():
    def body():
        rng = random.Random(7)
        fails = []
        for _ in range(10_000):
            w = random_obs_word(rng, ("a", "b", "c"), 6, 30)
            if decode(encode(w)) != w:
                fails.append(w)
        lit = tuple([INC] * 5 + ["a"] + [DEC] * 3 + ["b"] + [INC] * 2 + ["c"])
        if encode((("a", 5), ("b", 2), ("c", 4))) != lit:
            fails.append("literal")
        return fails
    run_criterion("A3", body)


def test_a4_oscillation_sets(corpus):
    def body():
        fails = []
        for i, a in enumerate(corpus):
            table = oscillation_sets(a)
            h2 = 2 * default_headroom(a)
            for p in a.states:
                for q in a.states:
                    for x in range(51):
                        same = counter_only_reach(a, p, q, x, "same_value")
                        drift = counter_only_reach(a, p, q, x, "any_value")
                        if (x in table.X(p, q)) != same or (x in table.Y(p, q)) != drift:
                            fails.append((i, p, q, x))
                        if (same != counter_only_reach(a, p, q, x, "same_value", h2) or
                                drift != counter_only_reach(a, p, q, x, "any_value", h2)):
                            fails.append((i, p, q, x, "cap"))
        return fails
    run_criterion("A4", body)


def test_a5_shortcut_automaton(corpus):
    def body():
        w = Window(3, 5)
        fails = []
        for i, a in enumerate(corpus):
            e = build_eoca(a)
            v = window_equal(a, e, "obs", w)
            if not v.answer:
                fails.append((i, v.witness))
            for word in enumerate_words(a, "obs", w):
                if not eoca_accepts_vis(e, encode_ref(word)):
                    fails.append((i, word, "enc"))
        return fails
    run_criterion("A5", body)


def test_a6_modulo_counter():
    def body():
        rng = random.Random(11)
        fails = []
        for i in range(50):
            omega = {random_guard(rng) for _ in range(rng.randint(1, 3))}
            b, labels = build_bomega(omega)
            if b.threshold != max(at.c for g in omega for at in atoms(g)) + 2:
                fails.append((i, "m"))
            for _ in range(1000):
                q, x = b.initial, 0
                for _ in range(rng.randint(0, 100)):
                    act = INC if x == 0 or rng.random() < 0.55 else DEC
                    q = b.delta(q, min(x, b.threshold), act)
                    x += 1 if act == INC else -1
                if labels[q] != {g for g in omega if guard_eval(g, x)}:
                    fails.append((i, x))
        return fails
    run_criterion("A6", body)


def test_a7_determinization(corpus):
    def body():
        w = Window(3, 4)
        fails = []
        for i, a in enumerate(corpus):
            d = determinize_obs(a)
            for q in d.states:
                for k in range(d.threshold + 1):
                    for act in d.actions:
                        if len(d.targets(q, k, act)) != 1:
                            fails.append((i, "total"))
            for v in enumerate_words(d, "vis", Window(3, 4, 12)):
                if not is_encoding_ref(v):
                    fails.append((i, v))
            if not window_equal(a, d, "obs", w).answer:
                fails.append((i, "obs"))
            words = set(all_obs_words(a.alphabet, 2, 4))
            words |= set(enumerate_words(a, "obs", w))
            for word in words:
                _, acc = unique_run(d, word)
                if acc != member_obs(a, word).answer:
                    fails.append((i, word))
        return fails
    run_criterion("A7", body)


def test_a8_complements(corpus):
    def body():
        w = Window(3, 4)
        fails = []
        for i, a in enumerate(corpus):
            c = complement_obs(a)
            la = set(enumerate_words(a, "obs", w))
            lc = set(enumerate_words(c, "obs", w))
            if la & lc or (la | lc) != set(all_obs_words(a.alphabet, 3, 4)):
                fails.append(i)
        rng = random.Random(5)
        for i in range(50):
            d = random_doca(rng, rng.randint(1, 4), rng.randint(0, 2), ("a",))
            c = complement_vis(d)
            for v in wf_words(["a"], 6):
                if accepts_vis(d, v) == accepts_vis(c, v):
                    fails.append((i, v))
        return fails
    run_criterion("A8", body)


def test_a9_universality_inclusion(pairs):
    def body():
        fails = []
        for i, (a, b) in enumerate(pairs):
            u1, u2 = universal_obs(a), universal_obs(a, "on_the_fly")
            if u1.answer != u2.answer:
                fails.append((i, "universal"))
            for u in (u1, u2):
                if not u.answer and member_obs(a, u.witness).answer:
                    fails.append((i, "universal witness"))
            n1, n2 = includes_obs(a, b), includes_obs(a, b, "on_the_fly")
            if n1.answer != n2.answer:
                fails.append((i, "includes"))
            for n in (n1, n2):
                if not n.answer and not (member_obs(a, n.witness).answer and
                                         not member_obs(b, n.witness).answer):
                    fails.append((i, "inclusion witness"))
        rng = random.Random(13)
        for i in range(100):
            nfa = random_nfa(rng, rng.randint(1, 4), rng.randint(1, 3))
            if universal_obs(reduce_nfa_universality(nfa)).answer != nfa_universal(nfa)[0]:
                fails.append((i, "nfa"))
        return fails
    run_criterion("A9", body)


def cphi_reference(phi, max_len):
    """Set-builder definition of the checker language, up to ``max_len`` symbols."""
    out = set()
    for x in range(max_len):
        for y in range(max_len):
            if x + y + 2 <= max_len and rel_eval(phi, x, x + y):
                out.add(tuple([INC] * x + ["$1"] + [INC] * y + ["$2"]))
            if x + 2 * y + 2 <= max_len and rel_eval(phi, x + y, x):
                out.add(tuple([INC] * (x + y) + ["$1"] + [DEC] * y + ["$2"]))
    return out


def test_a10_strong_automata(corpus):
    def body():
        rng = random.Random(17)
        fails = []
        for i in range(50):
            phi = random_rel(rng)
            got = set(enumerate_words(build_cphi(phi), "vis", Window(10, 10, 10)))
            if got != cphi_reference(phi, 10):
                fails.append((i, str(phi)))
        w = Window(3, 4)
        if not window_equal(sa_to_eoca(job_strong()), job(), "obs", w).answer:
            fails.append("job_strong")
        for i, a in enumerate(corpus[:100]):
            v = window_equal(sa_to_eoca(oca_to_sa(a)), a, "obs", w)
            if not v.answer:
                fails.append((i, v.witness))
        return fails
    run_criterion("A10", body)


def test_a11_product_of_normalized(pairs):
    def body():
        w = Window(3, 4)
        fails = []
        for i, (a, b) in enumerate(pairs[:100]):
            d1, d2 = determinize_obs(a), determinize_obs(b)
            p = product(d1, d2)
            l1 = set(enumerate_words(d1, "obs", w))
            l2 = set(enumerate_words(d2, "obs", w))
            if set(enumerate_words(p, "obs", w)) != l1 & l2:
                fails.append(i)
        return fails
    run_criterion("A11", body)


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
