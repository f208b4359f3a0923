import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import encode_ref, is_encoding_ref, vis_words, wf_words
from ocaobs import (DOca, EOca, Nfa, NotAnEncoding, Window, accepts_vis, build_benc,
                    build_bomega, build_eoca, complement_obs, complement_vis, decode,
                    determinize_obs, encode, enumerate_words, eoca_to_doca, guard_eval,
                    is_encoding, member_obs, nfa_universal, product,
                    reduce_nfa_universality, universal_obs, window_equal)
from ocaobs.core import DEC, INC
from ocaobs.errors import AlphabetMismatch
from ocaobs.generators import random_doca, random_guard, random_nfa, random_obs_word, random_oca
from ocaobs.samples import job, univ
from ocaobs.semilinear import AP, TRUE

W = Window(3, 5)


# -- encodings -------------------------------------------------------------------

def test_encode_literal():
    assert encode((("a", 5), ("b", 2), ("c", 4))) == (
        (INC,) * 5 + ("a",) + (DEC,) * 3 + ("b",) + (INC,) * 2 + ("c",))
    assert encode(()) == ()


def test_decode_reversal():
    with pytest.raises(NotAnEncoding) as err:
        decode([INC, DEC, "a"])
    assert err.value.position == 2


def test_decode_rejects_trailing_and_ill_formed():
    with pytest.raises(NotAnEncoding) as err:
        decode(["a", INC, INC])
    assert err.value.position == 2
    with pytest.raises(NotAnEncoding):
        decode([DEC, "a"])


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 10**6))
def test_encode_decode_bijection(seed):
    w = random_obs_word(seed, ("a", "b"), 6, 30)
    v = encode(w)
    assert v == encode_ref(w)
    assert decode(v) == w
    assert accepts_vis(build_benc(["a", "b"]), v)


def test_is_encoding_matches_reference():
    for v in vis_words(["a"], 7):
        assert is_encoding(v) == is_encoding_ref(v)


# -- B_enc -------------------------------------------------------------------------

def test_benc_shape():
    b = build_benc(["a"])
    assert len(b.states) == 4 and b.threshold == 0
    assert accepts_vis(b, [INC, "a"])
    assert not accepts_vis(b, [INC, DEC, "a"])


# -- product -------------------------------------------------------------------------

def test_product_idempotent_on_job():
    a = job()
    p = product(a, a)
    w = Window(6, 6, 6)
    assert set(enumerate_words(p, "vis", w)) == set(enumerate_words(a, "vis", w))


def test_product_with_benc():
    p = product(job(), build_benc(["req", "prod"]))
    assert accepts_vis(p, [INC, "req", DEC, "prod"])
    assert p.threshold == 1


def test_product_of_docas_is_deterministic():
    rng = random.Random(8)
    for _ in range(20):
        d1 = random_doca(rng, rng.randint(1, 3), rng.randint(0, 2))
        d2 = random_doca(rng, rng.randint(1, 3), rng.randint(0, 2))
        p = product(d1, d2)
        assert isinstance(p, DOca) and p.is_deterministic()
        assert p.threshold == max(d1.threshold, d2.threshold)


def test_product_alphabet_mismatch():
    with pytest.raises(AlphabetMismatch):
        product(job(), univ(("a",)))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_product_vis_intersection(seed):
    rng = random.Random(seed)
    a1 = random_oca(rng, rng.randint(1, 3), rng.randint(0, 2), ("a",))
    a2 = random_oca(rng, rng.randint(1, 3), rng.randint(0, 2), ("a",))
    p = product(a1, a2)
    for v in wf_words(["a"], 6):
        assert accepts_vis(p, v) == (accepts_vis(a1, v) and accepts_vis(a2, v))


# -- shortcut automaton ------------------------------------------------------------

def test_eoca_of_job():
    e = build_eoca(job())
    assert member_obs(e, [("req", 1), ("prod", 0)]).answer
    assert e.accepts_at("q3", 0)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_eoca_obs_window(seed):
    rng = random.Random(seed)
    a = random_oca(rng, rng.randint(1, 4), rng.randint(0, 2))
    assert window_equal(a, build_eoca(a), "obs", W).answer


# -- modulo counter ----------------------------------------------------------------

def walk_label(bo, ops):
    b, labels = bo
    q, x = b.initial, 0
    for act in ops:
        q = b.delta(q, min(x, b.threshold), act)
        x += 1 if act == INC else -1
    return labels[q], x


def test_bomega_parity():
    bo = build_bomega({AP(0, 2)})
    assert bo.automaton.threshold == 2
    assert AP(0, 2) not in walk_label(bo, [INC] * 3)[0]
    assert AP(0, 2) in walk_label(bo, [INC] * 4)[0]


def test_bomega_singleton():
    bo = build_bomega({AP(2, 0)})
    for ops in ([INC, INC], [INC, INC, INC, DEC], [INC] * 5 + [DEC] * 3):
        assert AP(2, 0) in walk_label(bo, ops)[0]
    for ops in ([], [INC], [INC] * 3, [INC, INC, DEC]):
        assert AP(2, 0) not in walk_label(bo, ops)[0]


def test_bomega_needs_guards():
    with pytest.raises(ValueError):
        build_bomega(set())


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6))
def test_bomega_labels(seed):
    rng = random.Random(seed)
    omega = {random_guard(rng) for _ in range(rng.randint(1, 3))}
    bo = build_bomega(omega)
    ops, x = [], 0
    for _ in range(rng.randint(0, 100)):
        act = INC if x == 0 or rng.random() < 0.5 else DEC
        ops.append(act)
        x += 1 if act == INC else -1
    label, x = walk_label(bo, ops)
    assert label == {g for g in omega if guard_eval(g, x)}


# -- powerset and determinization ------------------------------------------------

def test_powerset_is_total():
    d = eoca_to_doca(build_eoca(job()))
    assert d.is_deterministic()
    assert window_equal(d, job(), "obs", W).answer


def test_powerset_keeps_all_initials():
    e = EOca(["i1", "i2", "f"], ["a"], ["i1", "i2"], {"f": TRUE},
             [("i2", AP(0, 0), "a", "f")])
    d = eoca_to_doca(e)
    assert accepts_vis(d, ["a"])
    assert member_obs(e, [("a", 0)]).answer


def test_determinize_job():
    d = determinize_obs(job())
    for v in enumerate_words(d, "vis", Window(8, 8, 8)):
        assert is_encoding_ref(v)
    assert window_equal(d, job(), "obs", W).answer
    assert window_equal(determinize_obs(d), d, "obs", W).answer


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_determinized_vis_is_encoding_image(seed):
    rng = random.Random(seed)
    a = random_oca(rng, rng.randint(1, 3), rng.randint(0, 2), ("a",))
    d = determinize_obs(a)
    w = Window(3, 3, 12)
    obs = enumerate_words(d, "obs", w)
    vis = set(enumerate_words(d, "vis", w))
    assert {encode(x) for x in obs if len(encode(x)) <= 12} == vis


# -- complements ------------------------------------------------------------------

def test_complement_obs_of_job():
    c = complement_obs(job())
    assert member_obs(c, [("req", 0)]).answer
    assert member_obs(c, []).answer
    assert not member_obs(c, [("req", 1), ("prod", 0)]).answer
    assert window_equal(complement_obs(c), job(), "obs", W).answer


def test_complement_vis_of_all_final():
    d = DOca(["s"], ["a"], "s", ["s"], 0, [("s", 0, act, "s") for act in ("a", INC, DEC)])
    c = complement_vis(d)
    assert not any(accepts_vis(c, v) for v in wf_words(["a"], 6))
    cc = complement_vis(with_no_finals(d))
    assert all(accepts_vis(cc, v) for v in wf_words(["a"], 6))


def with_no_finals(d):
    return DOca(d.states, d.alphabet, d.initial, [], d.threshold, d.transitions)


def test_complement_vis_needs_doca():
    with pytest.raises(Exception):
        complement_vis(job())


# -- NFA reduction -------------------------------------------------------------------

def nfa_universal_ref(nfa, max_len=6):
    """Word-by-word check; enough for NFAs whose subset automaton is tiny."""
    for n in range(max_len + 1):
        for word in itertools.product(nfa.letters, repeat=n):
            current = {nfa.initial}
            for a in word:
                current = {q for p, b, q in nfa.transitions if b == a and p in current}
            if not current & nfa.finals:
                return False
    return True


def test_reduction_of_universal_nfa():
    nfa = Nfa([0], ["g0", "g1"], 0, [0], [(0, "g0", 0), (0, "g1", 0)])
    assert universal_obs(reduce_nfa_universality(nfa)).answer


def test_reduction_without_finals():
    nfa = Nfa([0], ["g0"], 0, [], [(0, "g0", 0)])
    v = universal_obs(reduce_nfa_universality(nfa))
    assert not v.answer and v.witness == ()


def test_reduction_letter_values():
    # only the second letter is accepted once: words (a,1) and (a, >=2)
    nfa = Nfa([0, 1], ["g0", "g1"], 0, [1], [(0, "g1", 1)])
    o = reduce_nfa_universality(nfa)
    assert member_obs(o, [("a", 1)]).answer
    assert member_obs(o, [("a", 7)]).answer
    assert not member_obs(o, [("a", 0)]).answer


def test_nfa_universal_matches_word_check():
    rng = random.Random(21)
    for _ in range(100):
        nfa = random_nfa(rng, rng.randint(1, 3), rng.randint(1, 2))
        assert nfa_universal(nfa)[0] == nfa_universal_ref(nfa)


def test_reduction_agrees_on_random_nfas():
    rng = random.Random(23)
    for _ in range(30):
        nfa = random_nfa(rng, rng.randint(1, 4), rng.randint(1, 3))
        assert universal_obs(reduce_nfa_universality(nfa)).answer == nfa_universal(nfa)[0]
